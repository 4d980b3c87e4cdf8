#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>

#include "helmwave/types.hpp"

namespace helmwave {

/// Uniform rectangular mesh of the unit square, bilinear (Q1) nodes numbered
/// lexicographically with x fastest.
struct RectMesh {
  int nx = 0;  // elements in x
  int ny = 0;  // elements in y

  RectMesh() = default;
  RectMesh(int nx_, int ny_) : nx(nx_), ny(ny_) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("RectMesh: need at least one element");
  }

  double hx() const { return 1.0 / nx; }
  double hy() const { return 1.0 / ny; }
  int node_count() const { return (nx + 1) * (ny + 1); }
  int node_index(int i, int j) const { return j * (nx + 1) + i; }
  double node_x(int i) const { return i * hx(); }
  double node_y(int j) const { return j * hy(); }
};

/// Wavenumber field k(x, y): constant, or omega / c(y) with c piecewise
/// constant on equal layers in y, alternating between 1 and c0.
class WavenumberField {
 public:
  static WavenumberField constant(double k) {
    if (k <= 0) throw std::invalid_argument("WavenumberField: k must be positive");
    WavenumberField f;
    f.omega_ = k;
    f.layered_ = false;
    return f;
  }

  /// first_layer_fast selects which speed the layer at y = 0 takes.
  static WavenumberField layered(double omega, double c0, int nlayers, bool first_layer_fast = false) {
    if (omega <= 0) throw std::invalid_argument("WavenumberField: omega must be positive");
    if (c0 < 1.0) throw std::invalid_argument("WavenumberField: c0 must be >= 1");
    if (nlayers < 1) throw std::invalid_argument("WavenumberField: need at least one layer");
    WavenumberField f;
    f.omega_ = omega;
    f.layered_ = true;
    f.c0_ = c0;
    f.nlayers_ = nlayers;
    f.first_fast_ = first_layer_fast;
    return f;
  }

  double at(double /*x*/, double y) const {
    if (!layered_) return omega_;
    int layer = static_cast<int>(y * nlayers_);
    layer = std::clamp(layer, 0, nlayers_ - 1);
    const bool fast = ((layer % 2 == 0) == first_fast_);
    return omega_ / (fast ? c0_ : 1.0);
  }

  /// k_max = omega / min c. The experiment protocol keeps k_max * h = 1.
  double k_max() const { return omega_; }
  bool layered() const { return layered_; }
  double omega() const { return omega_; }
  double c0() const { return c0_; }
  int nlayers() const { return nlayers_; }

 private:
  double omega_ = 0.0;
  bool layered_ = false;
  double c0_ = 1.0;
  int nlayers_ = 1;
  bool first_fast_ = false;
};

/// Half-open element index ranges [i0, i1) x [j0, j1). The nodes of a box are
/// the closed grid [i0, i1] x [j0, j1].
struct ElementBox {
  int i0 = 0, i1 = 0, j0 = 0, j1 = 0;

  int ex() const { return i1 - i0; }
  int ey() const { return j1 - j0; }
  int node_nx() const { return ex() + 1; }
  int node_ny() const { return ey() + 1; }
  int node_count() const { return node_nx() * node_ny(); }

  /// Local node index within the box, x fastest.
  int local_node(int gi, int gj) const { return (gj - j0) * node_nx() + (gi - i0); }
  bool contains_node(int gi, int gj) const {
    return gi >= i0 && gi <= i1 && gj >= j0 && gj <= j1;
  }
  bool contains_box(const ElementBox& b) const {
    return b.i0 >= i0 && b.i1 <= i1 && b.j0 >= j0 && b.j1 <= j1;
  }
  /// Closed boxes intersect (touching counts).
  bool touches(const ElementBox& b) const {
    return i0 <= b.i1 && b.i0 <= i1 && j0 <= b.j1 && b.j0 <= j1;
  }
  ElementBox expanded(int w) const { return {i0 - w, i1 + w, j0 - w, j1 + w}; }
  ElementBox clipped_to(const ElementBox& outer) const {
    return {std::max(i0, outer.i0), std::min(i1, outer.i1), std::max(j0, outer.j0),
            std::min(j1, outer.j1)};
  }
  bool operator==(const ElementBox&) const = default;
};

}  // namespace helmwave
