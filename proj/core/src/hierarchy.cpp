#include "helmwave/hierarchy.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

#include "helmwave/assemble.hpp"

namespace helmwave {

LevelSpec LevelSpec::parse(const std::string& text, int overlap_elems) {
  if (overlap_elems < 1) throw std::invalid_argument("LevelSpec: overlap_elems must be >= 1");
  LevelSpec spec;
  spec.overlap_elems = overlap_elems;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto xpos = part.find('x');
    if (xpos == std::string::npos || xpos == 0 || xpos + 1 == part.size())
      throw std::invalid_argument("LevelSpec: expected MXxMY, got '" + part + "'");
    Tile t;
    try {
      t.mx = std::stoi(part.substr(0, xpos));
      t.my = std::stoi(part.substr(xpos + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("LevelSpec: expected MXxMY, got '" + part + "'");
    }
    if (t.mx < 1 || t.my < 1)
      throw std::invalid_argument("LevelSpec: tile counts must be >= 1 in '" + part + "'");
    spec.tiles.push_back(t);
  }
  if (spec.tiles.empty()) throw std::invalid_argument("LevelSpec: empty spec string");
  return spec;
}

int LevelSpec::total_mx() const {
  int m = 1;
  for (const Tile& t : tiles) m *= t.mx;
  return m;
}

int LevelSpec::total_my() const {
  int m = 1;
  for (const Tile& t : tiles) m *= t.my;
  return m;
}

std::string LevelSpec::to_string() const {
  std::string s;
  for (std::size_t l = 0; l < tiles.size(); ++l) {
    if (l) s += ',';
    s += std::to_string(tiles[l].mx) + "x" + std::to_string(tiles[l].my);
  }
  return s;
}

bool HierarchyNode::owns_node(int gi, int gj) const {
  // Strict ownership: the shared cut node belongs to the lower-index child,
  // so interior children start one node inside their owned box.
  return gi >= own_i0 + (cx > 0 ? 1 : 0) && gi <= own_i1 && gj >= own_j0 + (cy > 0 ? 1 : 0) &&
         gj <= own_j1;
}

namespace {

void fill_maps(HierarchyNode& c, const ElementBox& parent_ext) {
  const ElementBox& e = c.extended_box;
  c.extended_nodes.reserve(e.node_count());
  c.owned_mask.reserve(e.node_count());
  for (int gj = e.j0; gj <= e.j1; ++gj)
    for (int gi = e.i0; gi <= e.i1; ++gi) {
      c.extended_nodes.push_back(parent_ext.local_node(gi, gj));
      c.owned_mask.push_back(c.owns_node(gi, gj) ? 1 : 0);
      const bool on_ext = gi == e.i0 || gi == e.i1 || gj == e.j0 || gj == e.j1;
      const bool on_parent = gi == parent_ext.i0 || gi == parent_ext.i1 ||
                             gj == parent_ext.j0 || gj == parent_ext.j1;
      if (on_ext && !on_parent)
        c.artificial_nodes.push_back(e.local_node(gi, gj));
    }
}

}  // namespace

Hierarchy build_hierarchy(const RectMesh& mesh, const WavenumberField& field,
                          const LevelSpec& spec) {
  Hierarchy h;
  h.mesh = mesh;
  h.field = field;
  h.spec = spec;

  HierarchyNode root;
  root.uid = 0;
  root.owned_box = ElementBox{0, mesh.nx, 0, mesh.ny};
  root.extended_box = root.owned_box;
  root.own_i0 = 0;
  root.own_i1 = mesh.nx;
  root.own_j0 = 0;
  root.own_j1 = mesh.ny;
  root.extended_nodes.resize(mesh.node_count());
  std::iota(root.extended_nodes.begin(), root.extended_nodes.end(), 0);
  root.owned_mask.assign(mesh.node_count(), 1);
  root.local_matrix = assemble_global(mesh, field);
  h.nodes.push_back(std::move(root));
  h.level_uids.push_back({0});

  for (int l = 0; l < spec.levels(); ++l) {
    const LevelSpec::Tile tile = spec.tiles[l];
    std::vector<int> next;
    for (int puid : h.level_uids[l]) {
      const ElementBox po = h.nodes[puid].owned_box;
      const ElementBox pe = h.nodes[puid].extended_box;
      if (po.ex() % tile.mx != 0 || po.ey() % tile.my != 0)
        throw std::invalid_argument(
            "decomposition level " + std::to_string(l + 1) + ": owned region of " +
            std::to_string(po.ex()) + "x" + std::to_string(po.ey()) +
            " elements is not divisible by " + std::to_string(tile.mx) + "x" +
            std::to_string(tile.my));
      const int sx = po.ex() / tile.mx, sy = po.ey() / tile.my;
      const int first = static_cast<int>(h.nodes.size());
      for (int cy = 0; cy < tile.my; ++cy)
        for (int cx = 0; cx < tile.mx; ++cx) {
          HierarchyNode c;
          c.uid = static_cast<int>(h.nodes.size());
          c.level = l + 1;
          c.parent = puid;
          c.cx = cx;
          c.cy = cy;
          c.owned_box = ElementBox{po.i0 + cx * sx, po.i0 + (cx + 1) * sx, po.j0 + cy * sy,
                                   po.j0 + (cy + 1) * sy};
          c.extended_box = c.owned_box.expanded(spec.overlap_elems).clipped_to(pe);
          c.own_i0 = (cx == 0) ? pe.i0 : c.owned_box.i0;
          c.own_i1 = (cx == tile.mx - 1) ? pe.i1 : c.owned_box.i1;
          c.own_j0 = (cy == 0) ? pe.j0 : c.owned_box.j0;
          c.own_j1 = (cy == tile.my - 1) ? pe.j1 : c.owned_box.j1;
          fill_maps(c, pe);
          c.local_matrix = assemble_box(mesh, c.extended_box, field);
          h.nodes[puid].children.push_back(c.uid);
          next.push_back(c.uid);
          h.nodes.push_back(std::move(c));
        }
      // Sibling neighbors: touching closed extended boxes, diagonals included.
      const int count = tile.mx * tile.my;
      for (int a = 0; a < count; ++a)
        for (int b = 0; b < count; ++b)
          if (a != b &&
              h.nodes[first + a].extended_box.touches(h.nodes[first + b].extended_box))
            h.nodes[first + a].neighbors.push_back(first + b);
    }
    h.level_uids.push_back(std::move(next));
  }
  return h;
}

Vector restrict_to(const HierarchyNode& n, const Vector& parent) {
  Vector local(n.extended_dim());
  for (std::size_t p = 0; p < n.extended_nodes.size(); ++p)
    local[static_cast<Index>(p)] = parent[n.extended_nodes[p]];
  return local;
}

void prolong_add(const HierarchyNode& n, const Vector& local, Vector& parent) {
  for (std::size_t p = 0; p < n.extended_nodes.size(); ++p)
    if (n.owned_mask[p]) parent[n.extended_nodes[p]] += local[static_cast<Index>(p)];
}

void restrict_transpose_add(const HierarchyNode& n, const Vector& local, Vector& parent) {
  for (std::size_t p = 0; p < n.extended_nodes.size(); ++p)
    parent[n.extended_nodes[p]] += local[static_cast<Index>(p)];
}

Vector prolong_transpose(const HierarchyNode& n, const Vector& parent) {
  Vector local = Vector::Zero(n.extended_dim());
  for (std::size_t p = 0; p < n.extended_nodes.size(); ++p)
    if (n.owned_mask[p]) local[static_cast<Index>(p)] = parent[n.extended_nodes[p]];
  return local;
}

Vector boundary_restrict(const HierarchyNode& n, const Vector& local) {
  Vector g(n.boundary_dim());
  for (std::size_t p = 0; p < n.artificial_nodes.size(); ++p)
    g[static_cast<Index>(p)] = local[n.artificial_nodes[p]];
  return g;
}

Vector boundary_prolong(const HierarchyNode& n, const Vector& g) {
  Vector local = Vector::Zero(n.extended_dim());
  for (std::size_t p = 0; p < n.artificial_nodes.size(); ++p)
    local[n.artificial_nodes[p]] = g[static_cast<Index>(p)];
  return local;
}

NeighborTraceMap build_neighbor_trace(const Hierarchy& h, int i, int j) {
  const HierarchyNode& src = h.node(i);
  const HierarchyNode& tgt = h.node(j);
  if (src.parent != tgt.parent || i == j)
    throw std::invalid_argument("build_neighbor_trace: need distinct siblings");
  NeighborTraceMap map;
  map.source = i;
  map.target = j;
  const int nnx = tgt.extended_box.node_nx();
  for (int local : tgt.artificial_nodes) {
    const int gi = tgt.extended_box.i0 + local % nnx;
    const int gj = tgt.extended_box.j0 + local / nnx;
    if (gi >= src.own_i0 && gi <= src.own_i1 && gj >= src.own_j0 && gj <= src.own_j1)
      map.kept_local.push_back(local);
  }
  return map;
}

bool CoverageReport::fully_covered() const {
  for (const Level& l : levels)
    if (l.covered < l.artificial_nodes) return false;
  return true;
}

CoverageReport coverage_report(const Hierarchy& h) {
  CoverageReport report;
  for (int l = 1; l <= h.levels(); ++l) {
    CoverageReport::Level lev;
    lev.level = l;
    for (int juid : h.level_uids[l]) {
      const HierarchyNode& tgt = h.node(juid);
      std::vector<int> mult(tgt.artificial_nodes.size(), 0);
      lev.artificial_nodes += static_cast<int>(tgt.artificial_nodes.size());
      for (int iuid : tgt.neighbors) {
        const NeighborTraceMap map = build_neighbor_trace(h, iuid, juid);
        const HierarchyNode& src = h.node(iuid);
        const int nnx = tgt.extended_box.node_nx();
        for (int kept : map.kept_local) {
          for (std::size_t p = 0; p < tgt.artificial_nodes.size(); ++p)
            if (tgt.artificial_nodes[p] == kept) ++mult[p];
          // Stencil straddle: the matrix row at a kept node may read values
          // from outside the source's ownership closure; counted, accepted.
          const int gi = tgt.extended_box.i0 + kept % nnx;
          const int gj = tgt.extended_box.j0 + kept / nnx;
          bool straddle = false;
          for (int dj = -1; dj <= 1 && !straddle; ++dj)
            for (int di = -1; di <= 1 && !straddle; ++di) {
              const int qi = gi + di, qj = gj + dj;
              if (!tgt.extended_box.contains_node(qi, qj)) continue;
              if (qi < src.own_i0 || qi > src.own_i1 || qj < src.own_j0 || qj > src.own_j1)
                straddle = true;
            }
          if (straddle) ++lev.cross_stencil;
        }
      }
      for (int m : mult) {
        if (m > 0) ++lev.covered;
        lev.max_multiplicity = std::max(lev.max_multiplicity, m);
      }
    }
    report.levels.push_back(lev);
  }
  return report;
}

}  // namespace helmwave
