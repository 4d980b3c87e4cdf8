#include "helmwave/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "helmwave/interface_map.hpp"
#include "helmwave/rng.hpp"

namespace helmwave {

namespace {

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string join_counts(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += '/';
    s += std::to_string(v[i]);
  }
  return s;
}

std::ofstream open_csv(const std::string& path, const std::string& header, bool append) {
  const bool exists = append && std::filesystem::exists(path);
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
  if (!exists) out << header << '\n';
  return out;
}

}  // namespace

std::vector<int> expand_mode_counts(const std::vector<int>& given, int levels) {
  if (given.empty()) return std::vector<int>(levels, 0);
  for (int v : given)
    if (v < 0) throw std::invalid_argument("coarse mode counts must be >= 0");
  if (given.size() == 1) return MethodParams::doubled_counts(given[0], levels);
  if (static_cast<int>(given.size()) == levels) return given;
  throw std::invalid_argument("need one coarse count or one per level (" +
                              std::to_string(levels) + ")");
}

std::vector<int> expand_step_counts(const std::vector<int>& given, int levels) {
  if (given.empty()) return std::vector<int>(levels, 1);
  for (int v : given)
    if (v < 1) throw std::invalid_argument("iteration counts must be >= 1");
  if (given.size() == 1) return std::vector<int>(levels, given[0]);
  if (static_cast<int>(given.size()) == levels) return given;
  throw std::invalid_argument("need one iteration count or one per level (" +
                              std::to_string(levels) + ")");
}

std::string ResultRow::header() {
  return "problem,k,c0,nlayers,levels,n,nc,ni,coarse_dim,iterations,final_relres,"
         "setup_seconds,solve_seconds,seed,converged";
}

std::string ResultRow::csv() const {
  std::string s;
  s += problem;
  s += ',' + fmt(k);
  s += ',' + fmt(c0);
  s += ',' + std::to_string(nlayers);
  s += ',' + levels;
  s += ',' + std::to_string(n);
  s += ',' + nc;
  s += ',' + ni;
  s += ',' + std::to_string(coarse_dim);
  s += ',' + std::to_string(iterations);
  s += ',' + fmt(final_relres, "%.6e");
  s += ',' + fmt(setup_seconds, "%.4f");
  s += ',' + fmt(solve_seconds, "%.4f");
  s += ',' + std::to_string(seed);
  s += converged ? ",1" : ",0";
  return s;
}

RunOutcome run_single(const RunConfig& cfg) {
  const LevelSpec spec = LevelSpec::parse(cfg.levels, cfg.overlap_elems);
  if (cfg.n < 1) throw std::invalid_argument("n must be >= 1");
  const int nx = spec.total_mx() * cfg.n;
  const int ny = spec.total_my() * cfg.n;
  const RectMesh mesh(nx, ny);
  const double k = cfg.wavenumber.value_or(static_cast<double>(nx));
  const bool layered = cfg.problem == ProblemKind::Layered;
  const WavenumberField field =
      layered ? WavenumberField::layered(k, cfg.c0, cfg.nlayers, cfg.first_layer_fast)
              : WavenumberField::constant(k);

  const Hierarchy h = build_hierarchy(mesh, field, spec);
  const Problem p = random_solution_problem(mesh, field, cfg.seed);

  MethodParams mp;
  mp.n_c = expand_mode_counts(cfg.n_c, spec.levels());
  mp.n_i = expand_step_counts(cfg.n_i, spec.levels());
  mp.tolerance = cfg.tolerance;
  mp.max_iterations = cfg.max_iterations;
  mp.seed = cfg.seed;
  mp.oversampling = cfg.oversampling;

  RunOutcome out;
  out.report = solve(p, h, mp);
  out.row.problem = layered ? "layered" : "free";
  out.row.k = k;
  out.row.c0 = layered ? cfg.c0 : 1.0;
  out.row.nlayers = layered ? cfg.nlayers : 1;
  out.row.levels = spec.to_string();
  out.row.n = cfg.n;
  out.row.nc = join_counts(mp.n_c);
  out.row.ni = join_counts(mp.n_i);
  out.row.coarse_dim = out.report.coarse_dim_total;
  out.row.iterations = out.report.iterations;
  out.row.final_relres = out.report.final_relres;
  out.row.setup_seconds = out.report.setup_seconds;
  out.row.solve_seconds = out.report.solve_seconds;
  out.row.seed = cfg.seed;
  out.row.converged = out.report.converged;
  return out;
}

int cmd_solve(const RunConfig& cfg, const std::string& out_path) {
  try {
    const RunOutcome out = run_single(cfg);
    auto file = open_csv(out_path, ResultRow::header(), /*append=*/true);
    file << out.row.csv() << '\n';
    std::cout << ResultRow::header() << '\n' << out.row.csv() << '\n';
    return out.row.converged ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_spectrum(const RunConfig& cfg, const std::string& out_path) {
  try {
    const LevelSpec spec = LevelSpec::parse(cfg.levels, cfg.overlap_elems);
    if (spec.levels() != 1)
      throw std::invalid_argument("spectrum needs a single-level decomposition");
    const int nx = spec.total_mx() * cfg.n, ny = spec.total_my() * cfg.n;
    const RectMesh mesh(nx, ny);
    const double k = cfg.wavenumber.value_or(static_cast<double>(nx));
    const bool layered = cfg.problem == ProblemKind::Layered;
    const WavenumberField field =
        layered ? WavenumberField::layered(k, cfg.c0, cfg.nlayers, cfg.first_layer_fast)
                : WavenumberField::constant(k);
    const Hierarchy h = build_hierarchy(mesh, field, spec);

    auto file = open_csv(out_path, "subdomain_id,index,sigma", /*append=*/false);
    for (int uid : h.level_uids[1]) {
      const HierarchyNode& node = h.node(uid);
      if (node.boundary_dim() == 0) continue;
      const ExactSolver solver(node.local_matrix);
      const InterfaceOperator op(h, uid, solver);
      if (op.rows() == 0) continue;
      const Svd svd = small_svd(op.materialize());
      for (Index i = 0; i < svd.sigma.size(); ++i)
        file << uid << ',' << i << ',' << fmt(svd.sigma[i], "%.12g") << '\n';
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_oned(const OnedConfig& cfg, const std::string& out_path) {
  try {
    const Mesh1D mesh(cfg.n);
    const double k = cfg.k.value_or(cfg.n / 4.0);
    if (k <= 0) throw std::invalid_argument("k must be positive");
    const Decomposition1D dec = Decomposition1D::bisect(mesh, cfg.overlap_elems);
    const Vector f = GaussianStream(cfg.seed, stream_key::kOnedLoad).vector(mesh.nodes());
    const OneStepResult res = one_step_solve(mesh, k, dec, f);

    const auto basis = hierarchical_basis_1d(mesh, k, cfg.levels, cfg.overlap_elems);
    auto file = open_csv(out_path, "node_x,re,im,basis_id,level", /*append=*/false);
    for (const BasisColumn& col : basis)
      for (int p = 0; p < mesh.nodes(); ++p)
        file << fmt(mesh.x(p)) << ',' << fmt(col.values[p].real(), "%.12g") << ','
             << fmt(col.values[p].imag(), "%.12g") << ',' << col.basis_id << ','
             << col.level << '\n';

    std::cout << "one_step_relative_error=" << fmt(res.relative_error, "%.3e") << '\n'
              << "basis_columns=" << basis.size() << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

std::vector<SweepCell> parse_sweep_grid(std::istream& in) {
  std::vector<SweepCell> cells;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    SweepCell cell;
    std::string ncs;
    if (!(ls >> cell.levels)) continue;  // blank line
    if (!(ls >> cell.n >> ncs))
      throw std::invalid_argument("grid line " + std::to_string(lineno) +
                                  ": expected LEVELS N NC,NC,...");
    std::stringstream ncss(ncs);
    std::string tok;
    while (std::getline(ncss, tok, ',')) {
      try {
        cell.nc_values.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw std::invalid_argument("grid line " + std::to_string(lineno) +
                                    ": bad coarse count '" + tok + "'");
      }
    }
    if (cell.nc_values.empty())
      throw std::invalid_argument("grid line " + std::to_string(lineno) + ": no coarse counts");
    cells.push_back(std::move(cell));
  }
  return cells;
}

int cmd_sweep(const SweepConfig& cfg, const std::string& out_path) {
  try {
    if (cfg.seeds.empty()) throw std::invalid_argument("sweep needs at least one seed");
    auto file = open_csv(out_path, ResultRow::header(), /*append=*/false);
    for (const SweepCell& cell : cfg.cells) {
      for (int nc : cell.nc_values) {
        std::vector<RunOutcome> runs;
        bool failed = false;
        for (std::uint64_t seed : cfg.seeds) {
          RunConfig rc = cfg.base;
          rc.levels = cell.levels;
          rc.n = cell.n;
          rc.n_c = {nc};
          rc.seed = seed;
          try {
            runs.push_back(run_single(rc));
          } catch (const std::exception& e) {
            std::cerr << "sweep cell " << cell.levels << " n=" << cell.n << " nc=" << nc
                      << " seed=" << seed << " failed: " << e.what() << '\n';
            failed = true;
            break;
          }
        }
        if (failed || runs.empty()) continue;
        std::vector<int> counts;
        for (const RunOutcome& r : runs) counts.push_back(r.row.iterations);
        std::sort(counts.begin(), counts.end());
        const int median = counts[(counts.size() - 1) / 2];
        const RunOutcome* pick = nullptr;
        for (const RunOutcome& r : runs)
          if (r.row.iterations == median && (!pick || r.row.seed < pick->row.seed)) pick = &r;
        file << pick->row.csv() << '\n';
        std::cout << pick->row.csv() << '\n';
      }
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace helmwave
