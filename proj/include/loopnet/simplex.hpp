#pragma once

// Affine smearing simplices (s_0, ..., s_n; f) and their integer chains, with
// the cone construction and support estimates.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "loopnet/geometry.hpp"
#include "loopnet/quadrature.hpp"

namespace loopnet {

class SimplexError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class TestFunctionKind { Bump, Gaussian };

/// Gaussian tags are treated as supported within this many widths.
inline constexpr double kGaussianCutoff = 6.0;

namespace detail {

/// Integral of exp(-1/(1-|x|^2)) over the unit ball of R^4.
inline double unit_bump_mass() {
  static const double mass = [] {
    const LineRule rule(96);
    const double radial = rule.integrate([](double r) {
      const double s = 1.0 - r * r;
      return s > 0.0 ? r * r * r * std::exp(-1.0 / s) : 0.0;
    });
    return 2.0 * std::numbers::pi * std::numbers::pi * radial;
  }();
  return mass;
}

}  // namespace detail

/// One node of a discrete smearing measure: sum_i weight_i h(x_i) ~ ∫ h f.
struct SmearingNode {
  FourVector x;
  double weight;
};

/// Test function f with its Lorentz rotation f_L(x) = f(L^{-1} x).
/// Translations never touch the tag.
struct TestFunctionTag {
  TestFunctionKind kind = TestFunctionKind::Bump;
  double eps = 0.1;
  double normalization = 1.0;
  std::string id = "f";
  LorentzMatrix lorentz{};

  void validate() const {
    if (!(eps > 0.0)) throw SimplexError("test function width must be positive");
    if (!std::isfinite(normalization)) throw SimplexError("test function normalization must be finite");
  }

  double base_radius() const { return kind == TestFunctionKind::Bump ? eps : kGaussianCutoff * eps; }

  /// Radius of a Euclidean ball around the origin containing supp(f_L).
  double effective_radius() const {
    return lorentz.is_identity() ? base_radius() : base_radius() * lorentz.spectral_norm();
  }

  TestFunctionTag rotated(const LorentzMatrix& l) const {
    TestFunctionTag out = *this;
    out.lorentz = l * lorentz;
    return out;
  }

  /// Value of the unrotated profile.
  double base_value(const FourVector& xi) const {
    const double r2 = (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2] + xi[3] * xi[3]) / (eps * eps);
    if (kind == TestFunctionKind::Bump) {
      if (r2 >= 1.0) return 0.0;
      const double scale = normalization / (detail::unit_bump_mass() * eps * eps * eps * eps);
      return scale * std::exp(-1.0 / (1.0 - r2));
    }
    const double two_pi_eps2 = 2.0 * std::numbers::pi * eps * eps;
    return normalization / (two_pi_eps2 * two_pi_eps2) * std::exp(-0.5 * r2);
  }

  double value(const FourVector& x) const {
    return lorentz.is_identity() ? base_value(x) : base_value(lorentz.inverse().apply(x));
  }

  /// Covariance of the normalized Gaussian profile after rotation: eps^2 L L^T.
  Eigen::Matrix4d covariance() const {
    if (kind != TestFunctionKind::Gaussian) throw SimplexError("covariance is defined for Gaussian tags only");
    return eps * eps * lorentz.matrix() * lorentz.matrix().transpose();
  }

  /// Discrete measure approximating f_L with total weight exactly `normalization`.
  std::vector<SmearingNode> smearing_nodes(int per_axis) const {
    std::vector<double> xs, ws;
    if (kind == TestFunctionKind::Gaussian) {
      const HermiteRule rule(per_axis);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        xs.push_back(std::sqrt(2.0) * eps * rule.nodes[i]);
        ws.push_back(rule.weights[i]);
      }
    } else {
      const LineRule rule(per_axis);
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        xs.push_back(eps * (2.0 * rule.nodes[i] - 1.0));
        ws.push_back(rule.weights[i]);
      }
    }
    std::vector<SmearingNode> out;
    double total = 0.0;
    const std::size_t n = xs.size();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          for (std::size_t d = 0; d < n; ++d) {
            const FourVector xi{xs[a], xs[b], xs[c], xs[d]};
            double w = ws[a] * ws[b] * ws[c] * ws[d];
            if (kind == TestFunctionKind::Bump) w *= base_value(xi);
            if (w == 0.0) continue;
            out.push_back({lorentz.apply(xi), w});
            total += w;
          }
    for (auto& node : out) node.weight *= normalization / total;
    return out;
  }

  auto key() const {
    const auto& m = lorentz.matrix();
    return std::make_tuple(static_cast<int>(kind), eps, normalization, std::cref(id),
                           std::vector<double>(m.data(), m.data() + 16));
  }
  friend bool operator==(const TestFunctionTag& a, const TestFunctionTag& b) {
    return a.kind == b.kind && a.eps == b.eps && a.normalization == b.normalization && a.id == b.id &&
           a.lorentz == b.lorentz;
  }
  friend bool operator<(const TestFunctionTag& a, const TestFunctionTag& b) { return a.key() < b.key(); }
};

/// Affine simplex phi(t) = s_0 + sum_i t_i (s_i - s_0) with its smearing tag.
template <class T>
struct AffineSimplex {
  using Vertex = BasicFourVector<T>;

  std::vector<Vertex> vertices;
  TestFunctionTag tag;

  AffineSimplex() = default;
  AffineSimplex(std::vector<Vertex> v, TestFunctionTag f) : vertices(std::move(v)), tag(std::move(f)) {
    if (vertices.empty()) throw SimplexError("a simplex needs at least one vertex");
  }

  int dim() const { return static_cast<int>(vertices.size()) - 1; }
  const Vertex& operator[](std::size_t i) const { return vertices[i]; }

  bool degenerate() const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
      for (std::size_t j = i + 1; j < vertices.size(); ++j)
        if (vertices[i] == vertices[j]) return true;
    return false;
  }

  friend bool operator==(const AffineSimplex& a, const AffineSimplex& b) {
    return a.vertices == b.vertices && a.tag == b.tag;
  }
  friend bool operator<(const AffineSimplex& a, const AffineSimplex& b) {
    if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
    if (a.vertices != b.vertices) return a.vertices < b.vertices;
    return a.tag < b.tag;
  }
};

using Simplex = AffineSimplex<double>;
using ExactSimplex = AffineSimplex<Rational>;

inline Simplex to_double(const ExactSimplex& s) {
  Simplex out;
  out.tag = s.tag;
  for (const auto& v : s.vertices) out.vertices.push_back(to_double(v));
  return out;
}

template <class T>
AffineSimplex<T> make_point(const BasicFourVector<T>& a, const TestFunctionTag& f) {
  return AffineSimplex<T>({a}, f);
}
template <class T>
AffineSimplex<T> make_segment(const BasicFourVector<T>& b0, const BasicFourVector<T>& b1, const TestFunctionTag& f) {
  return AffineSimplex<T>({b0, b1}, f);
}
template <class T>
AffineSimplex<T> make_triangle(const BasicFourVector<T>& c0, const BasicFourVector<T>& c1,
                               const BasicFourVector<T>& c2, const TestFunctionTag& f) {
  return AffineSimplex<T>({c0, c1, c2}, f);
}

/// Finite integer combination of simplices of one dimension, kept canonical:
/// equal simplices merged, zero coefficients dropped.
template <class T>
class Chain {
 public:
  using SimplexType = AffineSimplex<T>;
  using Terms = std::map<SimplexType, std::int64_t>;

  Chain() = default;
  explicit Chain(const SimplexType& s, std::int64_t coef = 1) { add(s, coef); }

  void add(const SimplexType& s, std::int64_t coef = 1) {
    if (coef == 0) return;
    if (dim_ && *dim_ != s.dim()) throw SimplexError("chain terms must share one dimension");
    dim_ = s.dim();
    auto [it, inserted] = terms_.try_emplace(s, coef);
    if (!inserted) {
      it->second += coef;
      if (it->second == 0) terms_.erase(it);
    }
  }

  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  /// Dimension of the terms ever added; empty chains may still carry one.
  std::optional<int> dim() const { return dim_; }

  Chain& operator+=(const Chain& other) {
    for (const auto& [s, c] : other.terms_) add(s, c);
    return *this;
  }
  Chain& operator-=(const Chain& other) {
    for (const auto& [s, c] : other.terms_) add(s, -c);
    return *this;
  }
  friend Chain operator+(Chain a, const Chain& b) { return a += b; }
  friend Chain operator-(Chain a, const Chain& b) { return a -= b; }
  friend Chain operator*(std::int64_t k, const Chain& a) {
    Chain out;
    for (const auto& [s, c] : a.terms_) out.add(s, k * c);
    return out;
  }

  /// Equality of canonical forms; dimensions of empty chains are ignored.
  friend bool operator==(const Chain& a, const Chain& b) { return a.terms_ == b.terms_; }

 private:
  Terms terms_;
  std::optional<int> dim_;
};

/// i-th face: drops vertex i, keeps the tag.
template <class T>
AffineSimplex<T> face(const AffineSimplex<T>& s, int i) {
  if (s.dim() < 1) throw SimplexError("faces need dimension >= 1");
  if (i < 0 || i > s.dim()) throw SimplexError("face index out of range");
  AffineSimplex<T> out = s;
  out.vertices.erase(out.vertices.begin() + i);
  return out;
}

/// sum_i (-1)^i face(s, i).
template <class T>
Chain<T> boundary(const AffineSimplex<T>& s) {
  if (s.dim() < 1) throw SimplexError("boundary needs dimension >= 1");
  Chain<T> out;
  for (int i = 0; i <= s.dim(); ++i) out.add(face(s, i), i % 2 == 0 ? 1 : -1);
  return out;
}

template <class T>
Chain<T> boundary(const Chain<T>& chain) {
  Chain<T> out;
  for (const auto& [s, c] : chain.terms()) out += c * boundary(s);
  return out;
}

/// Segments swap vertices; triangles become (c0, c2, c1).
template <class T>
AffineSimplex<T> opposite(const AffineSimplex<T>& s) {
  AffineSimplex<T> out = s;
  if (s.dim() == 1) {
    std::swap(out.vertices[0], out.vertices[1]);
  } else if (s.dim() == 2) {
    std::swap(out.vertices[1], out.vertices[2]);
  } else {
    throw SimplexError("opposite is defined for dimensions 1 and 2");
  }
  return out;
}

/// Cone construction h^z: the simplex (z, s_0, ..., s_n) with the tag of s.
template <class T>
AffineSimplex<T> cone(const BasicFourVector<T>& z, const AffineSimplex<T>& s) {
  AffineSimplex<T> out = s;
  out.vertices.insert(out.vertices.begin(), z);
  return out;
}

template <class T>
Chain<T> cone(const BasicFourVector<T>& z, const Chain<T>& chain) {
  Chain<T> out;
  for (const auto& [s, c] : chain.terms()) out.add(cone(z, s), c);
  return out;
}

/// Checks ∂ h^z φ + h^z ∂ φ = φ exactly.
template <class T>
bool homotopy_identity_check(const BasicFourVector<T>& z, const Chain<T>& phi) {
  if (phi.empty()) throw SimplexError("homotopy identity needs a nonempty chain");
  if (phi.dim().value_or(0) < 1) throw SimplexError("homotopy identity needs dimension >= 1");
  return boundary(cone(z, phi)) + cone(z, boundary(phi)) == phi;
}

/// Constant Jacobian of an affine 1-simplex: s1 - s0.
inline FourVector tangent(const Simplex& s) {
  if (s.dim() != 1) throw SimplexError("tangent needs a 1-simplex");
  return s[1] - s[0];
}

/// Constant surface element of an affine 2-simplex:
/// σ^{μν} = d1^μ d2^ν - d1^ν d2^μ with d_i = s_i - s_0.
inline Eigen::Matrix4d bivector(const Simplex& s) {
  if (s.dim() != 2) throw SimplexError("bivector needs a 2-simplex");
  const FourVector d1 = s[1] - s[0];
  const FourVector d2 = s[2] - s[0];
  Eigen::Matrix4d out;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) out(mu, nu) = d1[mu] * d2[nu] - d1[nu] * d2[mu];
  return out;
}

/// Parametric point s_0 + sum_i t_i (s_i - s_0).
inline FourVector point_at(const Simplex& s, std::span<const double> t) {
  FourVector out = s[0];
  for (std::size_t i = 0; i < t.size(); ++i) out = out + t[i] * (s[i + 1] - s[0]);
  return out;
}

/// The n-form χ[f]^{α1..αn}(x) = ∫_{Δn} f(x - χ(t)) χ^{α1..αn} d^n t.
struct SimplexForm {
  int n = 0;
  std::function<double(const FourVector&, std::span<const int>)> evaluate;
  double support_radius = 0.0;

  double operator()(const FourVector& x, std::span<const int> indices = {}) const { return evaluate(x, indices); }
};

inline SimplexForm simplex_form(const Simplex& s, int quad_order) {
  if (quad_order < 1) throw SimplexError("quadrature order must be >= 1");
  const int n = s.dim();
  if (n < 0 || n > 2) throw SimplexError("simplex_form supports dimensions 0, 1 and 2");
  SimplexForm form;
  form.n = n;
  form.support_radius = s.tag.effective_radius();
  if (n == 0) {
    form.evaluate = [s](const FourVector& x, std::span<const int>) { return s.tag.value(x - s[0]); };
  } else if (n == 1) {
    const FourVector d = tangent(s);
    const LineRule rule(quad_order);
    form.evaluate = [s, d, rule](const FourVector& x, std::span<const int> idx) {
      if (idx.size() != 1) throw SimplexError("1-form takes one index");
      const double jac = d[static_cast<std::size_t>(idx[0])];
      if (jac == 0.0) return 0.0;
      return jac * rule.integrate([&](double t) { return s.tag.value(x - (s[0] + t * d)); });
    };
  } else {
    const Eigen::Matrix4d sigma = bivector(s);
    const TriangleRule rule(quad_order);
    form.evaluate = [s, sigma, rule](const FourVector& x, std::span<const int> idx) {
      if (idx.size() != 2) throw SimplexError("2-form takes two indices");
      const double jac = sigma(idx[0], idx[1]);
      if (jac == 0.0) return 0.0;
      double sum = 0.0;
      for (const auto& node : rule.nodes) {
        const double t[2] = {node.t1, node.t2};
        sum += node.weight * s.tag.value(x - point_at(s, t));
      }
      return jac * sum;
    };
  }
  return form;
}

/// Support estimate: the eps-inflated convex hull of the vertices.
struct SupportBall {
  std::vector<FourVector> hull;
  double eps = 0.0;

  /// Euclidean distance from x to the hull is < eps (tested on segments exactly,
  /// on higher hulls through vertex and edge distances, which is conservative
  /// only in the "not contained" direction).
  bool contains(const FourVector& x) const {
    if (hull.size() == 1) return euclidean_norm(x - hull[0]) < eps;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull.size(); ++i)
      for (std::size_t j = i + 1; j < hull.size(); ++j) {
        const FourVector d = hull[j] - hull[i];
        const double len2 = inner_e(d, d);
        double t = len2 > 0.0 ? inner_e(x - hull[i], d) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        best = std::min(best, euclidean_norm(x - (hull[i] + t * d)));
      }
    return best < eps;
  }

 private:
  static double inner_e(const FourVector& a, const FourVector& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
  }
};

template <class T>
SupportBall support_ball(const AffineSimplex<T>& s) {
  SupportBall out;
  for (const auto& v : s.vertices) out.hull.push_back(to_double(v));
  out.eps = s.tag.effective_radius();
  return out;
}

/// P(χ, f) = (Pχ, f_L).
inline Simplex poincare_act(const PoincareElement& p, const Simplex& s) {
  Simplex out;
  out.vertices.reserve(s.vertices.size());
  for (const auto& v : s.vertices) out.vertices.push_back(p.apply(v));
  out.tag = p.lorentz.is_identity() ? s.tag : s.tag.rotated(p.lorentz);
  return out;
}

inline Chain<double> poincare_act(const PoincareElement& p, const Chain<double>& chain) {
  Chain<double> out;
  for (const auto& [s, c] : chain.terms()) out.add(poincare_act(p, s), c);
  return out;
}

/// Exact translation of rational simplices.
inline ExactSimplex translate(const ExactFourVector& a, const ExactSimplex& s) {
  ExactSimplex out = s;
  for (auto& v : out.vertices) v = v + a;
  return out;
}

/// Sign of the permutation that sorts the vertices, together with the sorted
/// simplex; used to evaluate orientation-odd quantities on a canonical order.
template <class T>
std::pair<int, AffineSimplex<T>> canonical_order(const AffineSimplex<T>& s) {
  AffineSimplex<T> sorted = s;
  int sign = 1;
  auto& v = sorted.vertices;
  for (std::size_t i = 1; i < v.size(); ++i)
    for (std::size_t j = i; j > 0 && v[j] < v[j - 1]; --j) {
      std::swap(v[j], v[j - 1]);
      sign = -sign;
    }
  return {sign, sorted};
}

/// Image of a chain in the oriented chain group, where an odd vertex
/// permutation of a simplex is its negative: every term is rewritten on its
/// sorted vertices, and simplices with a repeated vertex drop out.
template <class T>
Chain<T> oriented(const Chain<T>& chain) {
  Chain<T> out;
  for (const auto& [s, coef] : chain.terms()) {
    auto [sign, sorted] = canonical_order(s);
    const auto& v = sorted.vertices;
    if (std::adjacent_find(v.begin(), v.end()) != v.end()) continue;
    out.add(sorted, sign * coef);
  }
  return out;
}

}  // namespace loopnet
