#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "helmwave/harness.hpp"

namespace {

using helmwave::ProblemKind;
using helmwave::RunConfig;

// Shared experiment flags for the solve/spectrum/sweep subcommands.
void add_run_flags(CLI::App* cmd, RunConfig* cfg, std::string* problem, bool with_method) {
  cmd->add_option("--problem", *problem, "Medium: free or layered")
      ->check(CLI::IsMember({"free", "layered"}))
      ->capture_default_str();
  cmd->add_option("--n", cfg->n, "Elements per leaf subdomain per direction")
      ->capture_default_str();
  cmd->add_option("--overlap", cfg->overlap_elems, "Overlap width in elements per side")
      ->capture_default_str();
  cmd->add_option("--k", cfg->wavenumber,
                  "Wavenumber (omega for layered media); default m*n keeps k*h = 1");
  cmd->add_option("--c0", cfg->c0, "Slow/fast speed contrast of the layered medium")
      ->capture_default_str();
  cmd->add_option("--nlayers", cfg->nlayers, "Layer count of the layered medium")
      ->capture_default_str();
  cmd->add_flag("--first-layer-fast", cfg->first_layer_fast,
                "Give the bottom layer speed c0 instead of 1");
  if (with_method) {
    cmd->add_option("--nc", cfg->n_c,
                    "Coarse modes per subdomain: one value (doubling rule) or one per level")
        ->delimiter(',');
    cmd->add_option("--ni", cfg->n_i, "Schwarz steps per level (default 1)")->delimiter(',');
    cmd->add_option("--tol", cfg->tolerance, "GMRES relative-residual tolerance")
        ->capture_default_str();
    cmd->add_option("--max-iter", cfg->max_iterations, "GMRES iteration cap")
        ->capture_default_str();
    cmd->add_option("--oversampling", cfg->oversampling, "Extra rsvd samples beyond nc")
        ->capture_default_str();
  }
}

ProblemKind parse_kind(const std::string& s) {
  return s == "layered" ? ProblemKind::Layered : ProblemKind::Free;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical Schwarz solver for the Helmholtz equation on the unit square"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read key = value defaults from a file");

  RunConfig solve_cfg;
  std::string solve_problem = "free", solve_out = "results.csv";
  CLI::App* solve = app.add_subcommand("solve", "Run one configuration and append a CSV row");
  solve->add_option("--levels", solve_cfg.levels, "Decomposition per level, e.g. 2x2,2x2")
      ->capture_default_str();
  add_run_flags(solve, &solve_cfg, &solve_problem, /*with_method=*/true);
  solve->add_option("--seed", solve_cfg.seed, "Random stream seed")->capture_default_str();
  solve->add_option("--out", solve_out, "Results CSV (appended)")->capture_default_str();

  RunConfig spec_cfg;
  std::string spec_problem = "free", spec_out = "spectrum.csv";
  CLI::App* spectrum =
      app.add_subcommand("spectrum", "Dump interface-map singular values of a flat decomposition");
  spectrum->add_option("--levels", spec_cfg.levels, "Single-level decomposition, e.g. 2x2")
      ->capture_default_str();
  add_run_flags(spectrum, &spec_cfg, &spec_problem, /*with_method=*/false);
  spectrum->add_option("--out", spec_out, "Spectrum CSV")->capture_default_str();

  helmwave::OnedConfig oned_cfg;
  std::string oned_out = "oned_basis.csv";
  CLI::App* oned =
      app.add_subcommand("oned", "1D two-subdomain validation: basis dump and one-step error");
  oned->add_option("--n", oned_cfg.n, "Element count on (0,1)")->capture_default_str();
  oned->add_option("--k", oned_cfg.k, "Wavenumber (default n/4)");
  oned->add_option("--levels", oned_cfg.levels, "Bisection depth of the basis dump")
      ->capture_default_str();
  oned->add_option("--overlap", oned_cfg.overlap_elems, "Overlap width in elements per side")
      ->capture_default_str();
  oned->add_option("--seed", oned_cfg.seed, "Random load seed")->capture_default_str();
  oned->add_option("--out", oned_out, "Basis CSV")->capture_default_str();

  helmwave::SweepConfig sweep_cfg;
  std::string sweep_problem = "free", sweep_out = "sweep.csv", grid_path;
  std::vector<std::string> levels_list;
  std::vector<int> n_list, nc_list;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a grid of configurations, median over seeds");
  add_run_flags(sweep, &sweep_cfg.base, &sweep_problem, /*with_method=*/true);
  sweep->add_option("--grid", grid_path, "Cell file with lines: LEVELS N NC,NC,...");
  sweep->add_option("--levels-list", levels_list, "Decomposition specs to cross with --n-list")
      ->delimiter(',');
  sweep->add_option("--n-list", n_list, "Leaf sizes to cross with --levels-list")
      ->delimiter(',');
  sweep->add_option("--nc-list", nc_list, "Finest-level coarse counts per cell")
      ->delimiter(',');
  sweep->add_option("--seeds", sweep_cfg.seeds, "Seeds for the median (default 1,2,3)")
      ->delimiter(',');
  sweep->add_option("--out", sweep_out, "Sweep CSV (overwritten)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*solve) {
    solve_cfg.problem = parse_kind(solve_problem);
    return helmwave::cmd_solve(solve_cfg, solve_out);
  }
  if (*spectrum) {
    spec_cfg.problem = parse_kind(spec_problem);
    return helmwave::cmd_spectrum(spec_cfg, spec_out);
  }
  if (*oned) {
    return helmwave::cmd_oned(oned_cfg, oned_out);
  }
  if (*sweep) {
    sweep_cfg.base.problem = parse_kind(sweep_problem);
    const bool lists = !levels_list.empty() || !n_list.empty() || !nc_list.empty();
    if (!grid_path.empty() && lists) {
      std::cerr << "error: use either --grid or the list flags, not both\n";
      return 1;
    }
    if (!grid_path.empty()) {
      std::ifstream in(grid_path);
      if (!in) {
        std::cerr << "error: cannot open grid file '" << grid_path << "'\n";
        return 1;
      }
      try {
        sweep_cfg.cells = helmwave::parse_sweep_grid(in);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
      }
    } else if (lists) {
      if (levels_list.empty() || n_list.empty() || nc_list.empty()) {
        std::cerr << "error: --levels-list, --n-list and --nc-list are needed together\n";
        return 1;
      }
      for (const std::string& lv : levels_list)
        for (int n : n_list) sweep_cfg.cells.push_back({lv, n, nc_list});
    } else {
      std::cerr << "error: sweep needs --grid or --levels-list/--n-list/--nc-list\n";
      return 1;
    }
    return helmwave::cmd_sweep(sweep_cfg, sweep_out);
  }
  return 1;
}
