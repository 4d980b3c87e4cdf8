#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "helmwave/oned.hpp"
#include "helmwave/schwarz.hpp"

namespace helmwave {

enum class ProblemKind { Free, Layered };

/// One experiment. The mesh is (m_total*n)^2 elements; the default wavenumber
/// (or omega for layered media) equals the element count per direction, which
/// keeps k*h = 1 as in the experiment protocol.
struct RunConfig {
  ProblemKind problem = ProblemKind::Free;
  std::string levels = "2x2";
  int n = 4;  // elements per leaf subdomain per direction
  std::vector<int> n_c;  // see expand_mode_counts
  std::vector<int> n_i;  // empty -> 1 per level; one value broadcasts
  int overlap_elems = 2;
  double c0 = 5.0;
  int nlayers = 8;
  bool first_layer_fast = false;
  std::optional<double> wavenumber;
  double tolerance = 1e-5;
  int max_iterations = 200;
  std::uint64_t seed = 1;
  int oversampling = 5;
};

/// Empty -> zeros. One value -> that count at the finest level, doubled per
/// coarser level. Full-length list -> used as given. Anything else throws.
std::vector<int> expand_mode_counts(const std::vector<int>& given, int levels);
/// Empty -> ones. One value broadcasts; full-length list used as given.
std::vector<int> expand_step_counts(const std::vector<int>& given, int levels);

struct ResultRow {
  std::string problem;
  double k = 0.0;
  double c0 = 1.0;
  int nlayers = 1;
  std::string levels;
  int n = 0;
  std::string nc;  // per-level counts joined by '/'
  std::string ni;
  Index coarse_dim = 0;
  int iterations = 0;
  double final_relres = 0.0;
  double setup_seconds = 0.0;
  double solve_seconds = 0.0;
  std::uint64_t seed = 0;
  bool converged = false;

  static std::string header();
  std::string csv() const;
};

struct RunOutcome {
  ResultRow row;
  SolveReport report;
};

/// Builds the mesh, hierarchy, and coarse spaces, then solves; throws
/// std::invalid_argument on configuration errors.
RunOutcome run_single(const RunConfig& cfg);

/// Appends one row, creating the file with a header if needed.
/// Exit codes: 0 converged, 1 configuration error, 2 non-convergence (the row
/// is still written).
int cmd_solve(const RunConfig& cfg, const std::string& out_path);

/// Interface-map spectra of a single-level decomposition by full SVD of the
/// materialized operators. CSV columns: subdomain_id,index,sigma (descending
/// per subdomain). Exit 1 on configuration errors.
int cmd_spectrum(const RunConfig& cfg, const std::string& out_path);

struct OnedConfig {
  int n = 64;
  std::optional<double> k;  // default n/4
  int levels = 2;           // bisection depth of the basis dump
  int overlap_elems = 2;
  std::uint64_t seed = 1;
};

/// Writes the hierarchical 1D basis (node_x,re,im,basis_id,level) and prints
/// the one-step relative error against the direct solve.
int cmd_oned(const OnedConfig& cfg, const std::string& out_path);

struct SweepCell {
  std::string levels;
  int n = 4;
  std::vector<int> nc_values;  // finest-level counts; one run per value
};

struct SweepConfig {
  RunConfig base;  // shared knobs; levels/n/n_c/seed are taken per cell
  std::vector<SweepCell> cells;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
};

/// Grid file: one cell per line, "LEVELS N NC,NC,...". '#' starts a comment.
std::vector<SweepCell> parse_sweep_grid(std::istream& in);

/// One row per (cell, nc value): the run achieving the median iteration count
/// over the seeds, lowest seed on ties. Failed cells are reported on stderr
/// and skipped; the sweep continues.
int cmd_sweep(const SweepConfig& cfg, const std::string& out_path);

}  // namespace helmwave
