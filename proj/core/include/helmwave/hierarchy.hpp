#pragma once

#include <string>
#include <vector>

#include "helmwave/mesh.hpp"
#include "helmwave/types.hpp"

namespace helmwave {

/// Per-level subdomain tiling, e.g. parse("2x2,2x2") for two levels of 2-by-2
/// splits. Overlap is counted in elements per side; the overlap width between
/// adjacent extended subdomains is 2*overlap_elems*h (4h at the default).
struct LevelSpec {
  struct Tile {
    int mx = 1;
    int my = 1;
  };
  std::vector<Tile> tiles;
  int overlap_elems = 2;

  static LevelSpec parse(const std::string& text, int overlap_elems = 2);

  int levels() const { return static_cast<int>(tiles.size()); }
  int total_mx() const;
  int total_my() const;
  std::string to_string() const;
};

/// One subdomain of the tree. All index maps live in the numbering of the
/// parent's extended box; for the root that is the global mesh itself.
struct HierarchyNode {
  int uid = -1;
  int level = 0;
  int parent = -1;
  int cx = 0, cy = 0;  // tile position within the parent
  std::vector<int> children;
  std::vector<int> neighbors;  // siblings with touching closed extended boxes

  ElementBox owned_box;     // non-overlapping part; children tile this
  ElementBox extended_box;  // owned + overlap, clipped to parent's extended box

  // Ownership closure in node coordinates: the owned box widened to the
  // parent's extended box for first/last children, so the overlap ring around
  // the parent's owned region has owners too.
  int own_i0 = 0, own_i1 = 0, own_j0 = 0, own_j1 = 0;

  std::vector<int> extended_nodes;   // parent-local index per extended node (R_i)
  std::vector<char> owned_mask;      // 1 where this node owns the extended node (P_i)
  std::vector<int> artificial_nodes; // local indices on the artificial boundary (B_i)

  SparseMatrix local_matrix;  // impedance assembly over extended_box

  Index extended_dim() const { return static_cast<Index>(extended_nodes.size()); }
  Index boundary_dim() const { return static_cast<Index>(artificial_nodes.size()); }
  bool owns_node(int gi, int gj) const;
};

struct Hierarchy {
  RectMesh mesh;
  WavenumberField field;
  LevelSpec spec;
  std::vector<HierarchyNode> nodes;              // indexed by uid, breadth-first
  std::vector<std::vector<int>> level_uids;      // uids per level, root at [0]

  const HierarchyNode& node(int uid) const { return nodes[uid]; }
  bool is_leaf(int uid) const { return nodes[uid].children.empty(); }
  int levels() const { return spec.levels(); }
};

/// Builds the complete tree with local matrices assembled at every node.
/// Throws std::invalid_argument naming the level if a tiling does not divide
/// the element counts.
Hierarchy build_hierarchy(const RectMesh& mesh, const WavenumberField& field,
                          const LevelSpec& spec);

/// R_i: gather the parent-space vector onto the extended nodes.
Vector restrict_to(const HierarchyNode& n, const Vector& parent);
/// parent += P_i local: scatter owned entries, zero elsewhere.
void prolong_add(const HierarchyNode& n, const Vector& local, Vector& parent);
/// R_i^T: scatter-add the local vector into parent space.
void restrict_transpose_add(const HierarchyNode& n, const Vector& local, Vector& parent);
/// P_i^T: gather parent values at owned nodes, zero at unowned ones.
Vector prolong_transpose(const HierarchyNode& n, const Vector& parent);
/// B_i: local vector -> values at artificial-boundary nodes.
Vector boundary_restrict(const HierarchyNode& n, const Vector& local);
/// B_i^T: boundary values -> local vector supported on the artificial boundary.
Vector boundary_prolong(const HierarchyNode& n, const Vector& g);

/// Trace map recipe i -> j: u_i on Omega_i is extended by P_i, gathered by
/// R_j, multiplied by the local matrix of j, and read at the kept rows. Kept
/// rows are the artificial-boundary nodes of j inside the ownership closure
/// of i; pairs with no kept rows are dropped by the caller.
struct NeighborTraceMap {
  int source = -1;  // i
  int target = -1;  // j
  std::vector<int> kept_local;  // indices into j's extended numbering
};

NeighborTraceMap build_neighbor_trace(const Hierarchy& h, int i, int j);

/// Every artificial-boundary node should be a kept row of at least one
/// neighbor map. cross_stencil counts kept rows whose 9-point row in the
/// target's matrix reads values across an ownership cut (reported, accepted).
struct CoverageReport {
  struct Level {
    int level = 0;
    int artificial_nodes = 0;
    int covered = 0;
    int max_multiplicity = 0;
    int cross_stencil = 0;
  };
  std::vector<Level> levels;
  bool fully_covered() const;
};

CoverageReport coverage_report(const Hierarchy& h);

}  // namespace helmwave
