#pragma once

#include "sdns/disk_grid.hpp"

#include <stdexcept>

namespace sdns {

/// Scalar samples on a DiskGrid (vorticity, streamfunction).
struct ScalarField {
  Array2 v;

  static ScalarField zeros(const DiskGrid& g) { return {g.zeros()}; }
  bool finite() const { return v.allFinite(); }
};

/// Cartesian components (u1, u2) sampled on a DiskGrid.
struct VectorField {
  Array2 u1;
  Array2 u2;

  static VectorField zeros(const DiskGrid& g) { return {g.zeros(), g.zeros()}; }
  bool finite() const { return u1.allFinite() && u2.allFinite(); }

  VectorField& operator+=(const VectorField& o) {
    u1 += o.u1;
    u2 += o.u2;
    return *this;
  }
  VectorField& operator-=(const VectorField& o) {
    u1 -= o.u1;
    u2 -= o.u2;
    return *this;
  }
  VectorField& operator*=(double s) {
    u1 *= s;
    u2 *= s;
    return *this;
  }
};

inline VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
inline VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
inline VectorField operator*(double s, VectorField a) { return a *= s; }

/// Trace on r = 1 at the grid angles. For vector fields `normal` = f.n and
/// `tangent` = f.iota (counterclockwise); scalars use `normal` only.
struct BoundaryTrace {
  Eigen::VectorXd normal;
  Eigen::VectorXd tangent;
};

inline void require_on_grid(const DiskGrid& g, const Array2& f, const char* what) {
  if (!g.matches(f)) throw std::invalid_argument(std::string(what) + ": field does not match grid");
}

inline void require_on_grid(const DiskGrid& g, const VectorField& f, const char* what) {
  require_on_grid(g, f.u1, what);
  require_on_grid(g, f.u2, what);
}

}  // namespace sdns
