#pragma once

// Minkowski space-time with signature (+,-,-,-): Poincare group elements and
// double cones with their causal predicates.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>
#include <boost/rational.hpp>

namespace loopnet {

/// Default absolute tolerance for scalar comparisons.
inline constexpr double kTolerance = 1e-12;

using Rational = boost::rational<std::int64_t>;

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Contravariant components x^0..x^3.
template <class T>
struct BasicFourVector {
  std::array<T, 4> x{};

  constexpr BasicFourVector() = default;
  constexpr BasicFourVector(T x0, T x1, T x2, T x3) : x{x0, x1, x2, x3} {}

  constexpr T& operator[](std::size_t mu) { return x[mu]; }
  constexpr const T& operator[](std::size_t mu) const { return x[mu]; }

  friend constexpr BasicFourVector operator+(BasicFourVector a, const BasicFourVector& b) {
    for (std::size_t mu = 0; mu < 4; ++mu) a.x[mu] += b.x[mu];
    return a;
  }
  friend constexpr BasicFourVector operator-(BasicFourVector a, const BasicFourVector& b) {
    for (std::size_t mu = 0; mu < 4; ++mu) a.x[mu] -= b.x[mu];
    return a;
  }
  friend constexpr BasicFourVector operator-(BasicFourVector a) {
    for (auto& c : a.x) c = -c;
    return a;
  }
  friend constexpr BasicFourVector operator*(const T& s, BasicFourVector a) {
    for (auto& c : a.x) c *= s;
    return a;
  }
  friend constexpr bool operator==(const BasicFourVector&, const BasicFourVector&) = default;
  friend constexpr bool operator<(const BasicFourVector& a, const BasicFourVector& b) { return a.x < b.x; }

  /// Covariant components x_mu = g_{mu nu} x^nu.
  constexpr BasicFourVector lowered() const { return {x[0], -x[1], -x[2], -x[3]}; }
};

using FourVector = BasicFourVector<double>;
using ExactFourVector = BasicFourVector<Rational>;

template <class T>
std::ostream& operator<<(std::ostream& os, const BasicFourVector<T>& v) {
  return os << '(' << v[0] << ", " << v[1] << ", " << v[2] << ", " << v[3] << ')';
}

inline FourVector to_double(const ExactFourVector& v) {
  FourVector out;
  for (std::size_t mu = 0; mu < 4; ++mu) out[mu] = boost::rational_cast<double>(v[mu]);
  return out;
}
inline const FourVector& to_double(const FourVector& v) { return v; }

/// Minkowski product x^mu g_{mu nu} y^nu.
template <class T>
constexpr T inner(const BasicFourVector<T>& x, const BasicFourVector<T>& y) {
  return x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3];
}

inline double euclidean_norm(const FourVector& x) {
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
}
inline double spatial_norm(const FourVector& x) { return std::sqrt(x[1] * x[1] + x[2] * x[2] + x[3] * x[3]); }

inline Eigen::Vector4d as_eigen(const FourVector& v) { return {v[0], v[1], v[2], v[3]}; }
inline FourVector from_eigen(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }

inline const Eigen::Matrix4d& metric() {
  static const Eigen::Matrix4d g = Eigen::Vector4d(1.0, -1.0, -1.0, -1.0).asDiagonal();
  return g;
}

/// True iff (x-y)^2 < -tol.
inline bool spacelike_separated(const FourVector& x, const FourVector& y, double tol = kTolerance) {
  const FourVector d = x - y;
  return inner(d, d) < -tol;
}

/// Element of the restricted Lorentz group: L^T g L = g, det L > 0, L^0_0 >= 1.
class LorentzMatrix {
 public:
  LorentzMatrix() : m_(Eigen::Matrix4d::Identity()) {}

  /// Validates restricted-group membership.
  static LorentzMatrix from_matrix(const Eigen::Matrix4d& m, double tol = kTolerance) {
    LorentzMatrix out(m, Unchecked{});
    if (!out.is_restricted(tol)) throw GeometryError("matrix is not in the restricted Lorentz group");
    return out;
  }

  static LorentzMatrix identity() { return {}; }

  const Eigen::Matrix4d& matrix() const { return m_; }
  double operator()(std::size_t mu, std::size_t nu) const { return m_(mu, nu); }

  FourVector apply(const FourVector& y) const { return from_eigen(m_ * as_eigen(y)); }

  /// L^{-1} = g L^T g.
  LorentzMatrix inverse() const { return LorentzMatrix(metric() * m_.transpose() * metric(), Unchecked{}); }

  friend LorentzMatrix operator*(const LorentzMatrix& a, const LorentzMatrix& b) {
    return LorentzMatrix(a.m_ * b.m_, Unchecked{});
  }
  friend bool operator==(const LorentzMatrix& a, const LorentzMatrix& b) { return a.m_ == b.m_; }

  bool is_identity() const { return m_ == Eigen::Matrix4d::Identity(); }

  /// Maximal entrywise deviation of L^T g L from g.
  double metric_defect() const { return (m_.transpose() * metric() * m_ - metric()).cwiseAbs().maxCoeff(); }

  bool is_restricted(double tol = kTolerance) const {
    return metric_defect() <= tol && m_.determinant() > 0.0 && m_(0, 0) >= 1.0 - tol;
  }

  /// Largest singular value; equals that of the inverse for Lorentz matrices.
  double spectral_norm() const {
    Eigen::JacobiSVD<Eigen::Matrix4d> svd(m_);
    return svd.singularValues()(0);
  }

  bool approx_equal(const LorentzMatrix& other, double tol = kTolerance) const {
    return (m_ - other.m_).cwiseAbs().maxCoeff() <= tol;
  }

 private:
  struct Unchecked {};
  LorentzMatrix(Eigen::Matrix4d m, Unchecked) : m_(std::move(m)) {}

  Eigen::Matrix4d m_;
};

/// Hyperbolic boost along spatial axis 1..3.
inline LorentzMatrix boost(int spatial_axis, double rapidity) {
  if (spatial_axis < 1 || spatial_axis > 3) throw GeometryError("boost axis must be 1, 2 or 3");
  if (!std::isfinite(rapidity)) throw GeometryError("boost rapidity must be finite");
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  const double ch = std::cosh(rapidity);
  const double sh = std::sinh(rapidity);
  m(0, 0) = ch;
  m(spatial_axis, spatial_axis) = ch;
  m(0, spatial_axis) = sh;
  m(spatial_axis, 0) = sh;
  return LorentzMatrix::from_matrix(m, 1e-9);
}

/// Rotation by `angle` in the spatial plane orthogonal to axis 1..3.
inline LorentzMatrix rotation(int spatial_axis, double angle) {
  if (spatial_axis < 1 || spatial_axis > 3) throw GeometryError("rotation axis must be 1, 2 or 3");
  const int i = spatial_axis % 3 + 1;
  const int j = i % 3 + 1;
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(i, i) = std::cos(angle);
  m(j, j) = std::cos(angle);
  m(i, j) = -std::sin(angle);
  m(j, i) = std::sin(angle);
  return LorentzMatrix::from_matrix(m);
}

/// (translation, L) acting as y -> translation + L y.
struct PoincareElement {
  FourVector translation{};
  LorentzMatrix lorentz{};

  static PoincareElement identity() { return {}; }
  static PoincareElement translation_by(const FourVector& a) { return {a, LorentzMatrix::identity()}; }

  FourVector apply(const FourVector& y) const { return translation + lorentz.apply(y); }

  /// (x,L)(x',L') = (x + L x', L L').
  friend PoincareElement operator*(const PoincareElement& p, const PoincareElement& q) {
    return {p.translation + p.lorentz.apply(q.translation), p.lorentz * q.lorentz};
  }

  PoincareElement inverse() const {
    const LorentzMatrix inv = lorentz.inverse();
    return {-inv.apply(translation), inv};
  }

  bool approx_equal(const PoincareElement& other, double tol = kTolerance) const {
    return lorentz.approx_equal(other.lorentz, tol) &&
           euclidean_norm(translation - other.translation) <= tol;
  }
};

/// Standard time-axis-aligned double cone {|x^0-c^0| + |x-c| < r} carried to
/// its place by `frame`.
struct DoubleCone {
  FourVector center{};
  double radius = 1.0;
  PoincareElement frame{};

  DoubleCone() = default;
  DoubleCone(FourVector c, double r, PoincareElement f = {}) : center(c), radius(r), frame(std::move(f)) {
    if (!(radius > 0.0)) throw GeometryError("double cone radius must be positive");
  }

  /// Coordinates of a world point in the standard frame.
  FourVector to_standard(const FourVector& x) const { return frame.inverse().apply(x); }

  /// Norm |x^0-c^0| + |x-c| in the standard frame; < radius means inside.
  double cone_norm(const FourVector& x) const {
    const FourVector d = to_standard(x) - center;
    return std::abs(d[0]) + spatial_norm(d);
  }

  bool contains(const FourVector& x) const { return cone_norm(x) < radius; }

  /// Past and future tips in world coordinates.
  std::pair<FourVector, FourVector> apexes() const {
    const FourVector e0{radius, 0.0, 0.0, 0.0};
    return {frame.apply(center - e0), frame.apply(center + e0)};
  }

  FourVector world_center() const { return frame.apply(center); }

  DoubleCone transformed(const PoincareElement& p) const { return {center, radius, p * frame}; }

  /// Half-widths of the world-coordinate bounding box around world_center().
  std::array<double, 4> half_widths() const {
    const Eigen::Matrix4d& l = frame.lorentz.matrix();
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i) {
      const Eigen::Vector4d row = l.row(i).transpose();
      const double time_part = std::abs(row(0));
      const double space_part = row.tail<3>().norm();
      out[i] = radius * std::max(time_part, space_part);
    }
    return out;
  }
};

/// True iff every point of `o1` is spacelike to every point of `o2`.
///
/// A double cone is the open diamond I+(p-) ∩ I-(p+) between its tips, so two
/// cones are causally disjoint iff neither future tip lies in the open future of
/// the other cone's past tip. The axis-aligned special case reduces to
/// |Δc| > |Δc^0| + r1 + r2; the strict form is kept for that case.
inline bool cones_causally_disjoint(const DoubleCone& o1, const DoubleCone& o2, double tol = kTolerance) {
  const auto [p_minus, p_plus] = o1.apexes();
  const auto [q_minus, q_plus] = o2.apexes();
  // v is in the closed future cone or lightlike-near it; treated as not disjoint.
  auto reaches_future = [tol](const FourVector& v) { return v[0] > 0.0 && inner(v, v) >= -tol; };
  return !reaches_future(q_plus - p_minus) && !reaches_future(p_plus - q_minus);
}

/// True guarantees the set center + shape(B_eps(0)) lies inside `o`.
/// Uses |x^0-c^0| + |x-c| <= sqrt(2) |x-c|_E after undoing the frame; the
/// frame and the shape enter only through ||frame^{-1} shape||, so the test is
/// invariant under moving both by one Poincare element.
inline bool ellipsoid_in_cone(const FourVector& center, double eps, const LorentzMatrix& shape, const DoubleCone& o) {
  if (eps < 0.0) throw GeometryError("ball radius must be non-negative");
  const LorentzMatrix pulled = o.frame.lorentz.inverse() * shape;
  const double stretch = pulled.is_identity() ? 1.0 : pulled.spectral_norm();
  const double d = o.cone_norm(center);
  if (!(d < o.radius)) return false;
  return d + std::sqrt(2.0) * stretch * eps <= o.radius;
}

/// True guarantees the Euclidean ball B_eps(center) lies inside `o`.
inline bool ball_in_cone(const FourVector& center, double eps, const DoubleCone& o) {
  return ellipsoid_in_cone(center, eps, LorentzMatrix::identity(), o);
}

/// Three-valued answer for conservative predicates.
enum class Tristate { False, True, Unknown };

inline const char* to_string(Tristate t) {
  switch (t) {
    case Tristate::True: return "true";
    case Tristate::False: return "false";
    default: return "unknown";
  }
}

}  // namespace loopnet
