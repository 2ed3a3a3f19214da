#pragma once

#include <array>
#include <cmath>

namespace hipsim {

//! Symmetric second-order 3x3 tensor stored as six independent components.
//! Component order: xx, yy, zz, xy, yz, xz. Units are context dependent
//! (MPa for stress, dimensionless for strain).
struct SymTensor3 {
  double xx = 0.0, yy = 0.0, zz = 0.0;
  double xy = 0.0, yz = 0.0, xz = 0.0;

  static SymTensor3 zero() { return {}; }
  static SymTensor3 identity() { return {1.0, 1.0, 1.0, 0.0, 0.0, 0.0}; }
  //! Diagonal tensor diag(a, b, c).
  static SymTensor3 diag(double a, double b, double c) {
    return {a, b, c, 0.0, 0.0, 0.0};
  }
  //! Isotropic tensor s * I.
  static SymTensor3 iso(double s) { return {s, s, s, 0.0, 0.0, 0.0}; }

  double trace() const { return xx + yy + zz; }

  SymTensor3 deviator() const {
    const double m = trace() / 3.0;
    return {xx - m, yy - m, zz - m, xy, yz, xz};
  }

  //! Double contraction a : b (off-diagonals counted twice).
  double ddot(const SymTensor3& o) const {
    return xx * o.xx + yy * o.yy + zz * o.zz +
           2.0 * (xy * o.xy + yz * o.yz + xz * o.xz);
  }

  double norm() const { return std::sqrt(ddot(*this)); }

  SymTensor3 operator+(const SymTensor3& o) const {
    return {xx + o.xx, yy + o.yy, zz + o.zz, xy + o.xy, yz + o.yz, xz + o.xz};
  }
  SymTensor3 operator-(const SymTensor3& o) const {
    return {xx - o.xx, yy - o.yy, zz - o.zz, xy - o.xy, yz - o.yz, xz - o.xz};
  }
  SymTensor3 operator*(double s) const {
    return {xx * s, yy * s, zz * s, xy * s, yz * s, xz * s};
  }
  SymTensor3 operator-() const { return *this * -1.0; }
  SymTensor3& operator+=(const SymTensor3& o) { return *this = *this + o; }
  SymTensor3& operator-=(const SymTensor3& o) { return *this = *this - o; }

  std::array<double, 6> components() const { return {xx, yy, zz, xy, yz, xz}; }
};

inline SymTensor3 operator*(double s, const SymTensor3& t) { return t * s; }

//! Scalar invariants of a stress tensor.
//! I1 = tr(sigma), J2 = 1/2 s:s, p = -I1/3, q = sqrt(3 J2).
struct StressInvariants {
  double I1 = 0.0;  //!< MPa
  double J2 = 0.0;  //!< MPa^2
  double p = 0.0;   //!< hydrostatic pressure, MPa
  double q = 0.0;   //!< von Mises stress, MPa
};

inline StressInvariants invariants(const SymTensor3& stress) {
  StressInvariants inv;
  inv.I1 = stress.trace();
  const SymTensor3 s = stress.deviator();
  inv.J2 = 0.5 * s.ddot(s);
  if (inv.J2 < 0.0) inv.J2 = 0.0;  // guard round-off
  inv.p = -inv.I1 / 3.0;
  inv.q = std::sqrt(3.0 * inv.J2);
  return inv;
}

}  // namespace hipsim
