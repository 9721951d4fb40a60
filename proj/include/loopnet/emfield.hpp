#pragma once

// Classical closed 2-forms with analytic smearing, and the integrals, potentials
// and phase-valued cochain and connection built on them.
//
// Index conventions: F_{μν} and A_μ are covariant; points and tangents are
// contravariant; k·y = k^μ g_{μν} y^ν.

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "loopnet/geometry.hpp"
#include "loopnet/holonomy.hpp"
#include "loopnet/loopgroup.hpp"
#include "loopnet/quadrature.hpp"
#include "loopnet/simplex.hpp"

namespace loopnet {

class FieldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class FieldKind { Constant, Linear, PlaneWave, Superposition };

inline const char* to_string(FieldKind k) {
  switch (k) {
    case FieldKind::Constant: return "constant";
    case FieldKind::Linear: return "linear";
    case FieldKind::PlaneWave: return "plane_wave";
    default: return "superposition";
  }
}

/// F_{μν}(y) for one of: C; C + D_{μν,ρ} y^ρ; d of ε_μ cos(k·y + φ); a sum.
struct FieldModel {
  FieldKind kind = FieldKind::Constant;
  Eigen::Matrix4d constant = Eigen::Matrix4d::Zero();
  std::array<Eigen::Matrix4d, 4> slope{Eigen::Matrix4d::Zero(), Eigen::Matrix4d::Zero(), Eigen::Matrix4d::Zero(),
                                       Eigen::Matrix4d::Zero()};
  Eigen::Vector4d amplitude = Eigen::Vector4d::Zero();
  FourVector wave_vector{};
  double phase = 0.0;
  std::vector<FieldModel> parts;

  static FieldModel constant_field(const Eigen::Matrix4d& c) {
    FieldModel m;
    m.constant = c;
    m.validate();
    return m;
  }
  static FieldModel linear_field(const Eigen::Matrix4d& c, const std::array<Eigen::Matrix4d, 4>& d) {
    FieldModel m;
    m.kind = FieldKind::Linear;
    m.constant = c;
    m.slope = d;
    m.validate();
    return m;
  }
  static FieldModel plane_wave(const Eigen::Vector4d& amplitude, const FourVector& k, double phase = 0.0) {
    FieldModel m;
    m.kind = FieldKind::PlaneWave;
    m.amplitude = amplitude;
    m.wave_vector = k;
    m.phase = phase;
    return m;
  }
  static FieldModel superposition(std::vector<FieldModel> parts) {
    FieldModel m;
    m.kind = FieldKind::Superposition;
    m.parts = std::move(parts);
    m.validate();
    return m;
  }

  /// Antisymmetry of C and D, and D_{μνσ} + D_{νσμ} + D_{σμν} = 0.
  void validate(double tol = 1e-12) const {
    if (kind == FieldKind::Superposition) {
      for (const auto& p : parts) p.validate(tol);
      return;
    }
    if (!constant.allFinite() || (constant + constant.transpose()).cwiseAbs().maxCoeff() > tol)
      throw FieldError("field tensor must be antisymmetric");
    if (kind != FieldKind::Linear) return;
    for (const auto& d : slope)
      if ((d + d.transpose()).cwiseAbs().maxCoeff() > tol) throw FieldError("field slope must be antisymmetric");
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        for (int s = 0; s < 4; ++s)
          if (std::abs(slope[s](mu, nu) + slope[mu](nu, s) + slope[nu](s, mu)) > tol)
            throw FieldError("linear field is not closed");
  }

  Eigen::Matrix4d at(const FourVector& y) const {
    switch (kind) {
      case FieldKind::Constant: return constant;
      case FieldKind::Linear: {
        Eigen::Matrix4d out = constant;
        for (int r = 0; r < 4; ++r) out += slope[r] * y[r];
        return out;
      }
      case FieldKind::PlaneWave: return plane_wave_tensor() * -std::sin(inner(wave_vector, y) + phase);
      default: {
        Eigen::Matrix4d out = Eigen::Matrix4d::Zero();
        for (const auto& p : parts) out += p.at(y);
        return out;
      }
    }
  }

  /// k_μ ε_ν - k_ν ε_μ.
  Eigen::Matrix4d plane_wave_tensor() const {
    const Eigen::Vector4d k = as_eigen(wave_vector.lowered());
    return k * amplitude.transpose() - amplitude * k.transpose();
  }
};

/// Image of `m` under P = (a, L): F′(P y) = L^{-T} F(y) L^{-1}.
inline FieldModel pushforward(const FieldModel& m, const PoincareElement& p) {
  const Eigen::Matrix4d inv = p.lorentz.inverse().matrix();
  const Eigen::Matrix4d inv_t = inv.transpose();
  FieldModel out = m;
  switch (m.kind) {
    case FieldKind::Constant: out.constant = inv_t * m.constant * inv; break;
    case FieldKind::Linear: {
      // F(P^{-1} y′) = C + D·(L^{-1}(y′ - a)).
      const Eigen::Vector4d back = -inv * as_eigen(p.translation);
      Eigen::Matrix4d c = m.constant;
      for (int r = 0; r < 4; ++r) c += m.slope[r] * back(r);
      out.constant = inv_t * c * inv;
      for (int r2 = 0; r2 < 4; ++r2) {
        Eigen::Matrix4d d = Eigen::Matrix4d::Zero();
        for (int r = 0; r < 4; ++r) d += m.slope[r] * inv(r, r2);
        out.slope[r2] = inv_t * d * inv;
      }
      break;
    }
    case FieldKind::PlaneWave:
      out.wave_vector = p.lorentz.apply(m.wave_vector);
      out.amplitude = inv_t * m.amplitude;
      out.phase = m.phase - inner(out.wave_vector, p.translation);
      break;
    default:
      for (auto& part : out.parts) part = pushforward(part, p);
  }
  return out;
}

/// y ↦ F̃_{μν}(y) = ∫ f_L(x) F_{μν}(y + x) dx, in closed form per model/tag.
class SmearedField {
 public:
  SmearedField(const FieldModel& model, const TestFunctionTag& tag) {
    tag.validate();
    add(model, tag);
  }

  Eigen::Matrix4d operator()(const FourVector& y) const {
    Eigen::Matrix4d out = constant_;
    for (int r = 0; r < 4; ++r)
      if (has_slope_) out += slope_[r] * y[r];
    for (const auto& w : waves_) out += w.tensor * -std::sin(inner(w.k, y) + w.phase);
    return out;
  }

 private:
  struct Wave {
    Eigen::Matrix4d tensor;
    FourVector k;
    double phase;
  };

  void add(const FieldModel& m, const TestFunctionTag& tag) {
    const double n = tag.normalization;
    switch (m.kind) {
      case FieldKind::Constant: constant_ += n * m.constant; break;
      case FieldKind::Linear:
        // Even profiles have no first moment.
        constant_ += n * m.constant;
        for (int r = 0; r < 4; ++r) slope_[r] += n * m.slope[r];
        has_slope_ = true;
        break;
      case FieldKind::PlaneWave: {
        if (tag.kind != TestFunctionKind::Gaussian)
          throw FieldError("plane-wave smearing is available for Gaussian test functions only");
        const Eigen::Vector4d k = as_eigen(m.wave_vector.lowered());
        const double damping = std::exp(-0.5 * k.dot(tag.covariance() * k));
        waves_.push_back({n * damping * m.plane_wave_tensor(), m.wave_vector, m.phase});
        break;
      }
      default:
        for (const auto& p : m.parts) add(p, tag);
    }
  }

  Eigen::Matrix4d constant_ = Eigen::Matrix4d::Zero();
  std::array<Eigen::Matrix4d, 4> slope_{Eigen::Matrix4d::Zero(), Eigen::Matrix4d::Zero(), Eigen::Matrix4d::Zero(),
                                        Eigen::Matrix4d::Zero()};
  bool has_slope_ = false;
  std::vector<Wave> waves_;
};

inline Eigen::Matrix4d smeared_field(const FieldModel& model, const TestFunctionTag& tag, const FourVector& y) {
  return SmearedField(model, tag)(y);
}

/// F⟨σ,f⟩ = ½ ∫_{Δ2} F̃_{μν}(σ(t)) σ^{μν} d²t, evaluated on sorted vertices.
inline double surface_integral(const FieldModel& model, const Simplex& c, const QuadratureConfig& cfg) {
  if (c.dim() != 2) throw FieldError("surface integrals need a 2-simplex");
  const auto [sign, s] = canonical_order(c);
  const Eigen::Matrix4d sigma = bivector(s);
  if (sigma.isZero(0.0)) return 0.0;
  const SmearedField field(model, s.tag);
  const auto& rule = cached_rule<TriangleRule>(cfg.order);
  const FourVector d1 = s[1] - s[0];
  const FourVector d2 = s[2] - s[0];
  double sum = 0.0;
  for (const auto& node : rule.nodes)
    sum += node.weight * field(s[0] + node.t1 * d1 + node.t2 * d2).cwiseProduct(sigma).sum();
  return sign * 0.5 * sum;
}

inline double surface_integral(const FieldModel& model, const Chain<double>& chain, const QuadratureConfig& cfg) {
  double sum = 0.0;
  for (const auto& [s, coef] : chain.terms()) sum += static_cast<double>(coef) * surface_integral(model, s, cfg);
  return sum;
}

/// |F⟨φ1⟩ - F⟨φ2⟩| for 2-chains with equal boundaries.
inline double boundary_independence_check(const FieldModel& model, const Chain<double>& c1, const Chain<double>& c2,
                                          const QuadratureConfig& cfg) {
  if (!(boundary(c1) == boundary(c2))) throw FieldError("chains have different boundaries");
  return std::abs(surface_integral(model, c1, cfg) - surface_integral(model, c2, cfg));
}

/// A^z_ν(y) = ∫₀¹ t (y-z)^μ F̃_{μν}(z + t(y-z)) dt, so that ∂_μA_ν - ∂_νA_μ = F̃_{μν}.
inline Eigen::Vector4d potential(const SmearedField& field, const FourVector& z, const FourVector& y, int order) {
  const FourVector d = y - z;
  const Eigen::Vector4d dv = as_eigen(d);
  Eigen::Vector4d out = Eigen::Vector4d::Zero();
  if (dv.isZero(0.0)) return out;
  const auto& rule = cached_rule<LineRule>(order);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double t = rule.nodes[i];
    out += rule.weights[i] * t * (field(z + t * d).transpose() * dv);
  }
  return out;
}

inline Eigen::Vector4d potential(const FieldModel& model, const TestFunctionTag& tag, const FourVector& z,
                                 const FourVector& y, const QuadratureConfig& cfg) {
  return potential(SmearedField(model, tag), z, y, cfg.order);
}

namespace detail {

/// ∫₀¹ A^z_ν(b0 + s(b1-b0)) (b1-b0)^ν ds.
inline double segment_line_integral(const SmearedField& field, const FourVector& z, const FourVector& b0,
                                    const FourVector& b1, int order) {
  const FourVector d = b1 - b0;
  const Eigen::Vector4d dv = as_eigen(d);
  if (dv.isZero(0.0)) return 0.0;
  const auto& rule = cached_rule<LineRule>(order);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * potential(field, z, b0 + rule.nodes[i] * d, order).dot(dv);
  return sum;
}

}  // namespace detail

/// Piecewise-affine curve through `points`; closed when first = last.
struct Curve {
  std::vector<FourVector> points;

  bool closed() const { return points.size() >= 2 && points.front() == points.back(); }
  Curve reversed() const { return {{points.rbegin(), points.rend()}}; }
};

/// A^z⟨γ,f⟩ = ∫ A^z_ν(γ(s)) γ̇^ν(s) ds summed over segments.
inline double line_integral(const FieldModel& model, const TestFunctionTag& tag, const FourVector& z,
                            const Curve& curve, const QuadratureConfig& cfg) {
  if (curve.points.size() < 2) throw FieldError("a curve needs at least one segment");
  const SmearedField field(model, tag);
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i)
    sum += detail::segment_line_integral(field, z, curve.points[i], curve.points[i + 1], cfg.order);
  return sum;
}

/// Line integral over the segment b with its own tag, on sorted vertices.
inline double line_integral(const FieldModel& model, const FourVector& z, const Simplex& b, const QuadratureConfig& cfg) {
  if (b.dim() != 1) throw FieldError("segment integrals need a 1-simplex");
  const auto [sign, s] = canonical_order(b);
  if (s[0] == s[1]) return 0.0;
  return sign * detail::segment_line_integral(SmearedField(model, s.tag), z, s[0], s[1], cfg.order);
}

/// Line integral over a 1-chain with homological signs.
inline double line_integral(const FieldModel& model, const FourVector& z, const Chain<double>& chain,
                            const QuadratureConfig& cfg) {
  double sum = 0.0;
  for (const auto& [s, coef] : chain.terms()) sum += static_cast<double>(coef) * line_integral(model, z, s, cfg);
  return sum;
}

/// |A^z⟨∂σ,f⟩ - F⟨σ,f⟩|.
inline double stokes_check(const FieldModel& model, const FourVector& z, const Simplex& sigma,
                           const QuadratureConfig& cfg) {
  return std::abs(line_integral(model, z, boundary(sigma), cfg) - surface_integral(model, sigma, cfg));
}

/// |A^z⟨γ,f⟩ - F⟨h^z γ,f⟩|.
inline double cone_check(const FieldModel& model, const FourVector& z, const Simplex& gamma,
                         const QuadratureConfig& cfg) {
  return std::abs(line_integral(model, z, gamma, cfg) - surface_integral(model, cone(z, gamma), cfg));
}

/// Max component of A^z(y,f) - L^T A′^{Pz}(Py, f_L) with A′ built from the
/// pushed-forward model.
inline double covariance_check(const FieldModel& model, const TestFunctionTag& tag, const FourVector& z,
                               const FourVector& y, const PoincareElement& p, const QuadratureConfig& cfg) {
  const Eigen::Vector4d original = potential(model, tag, z, y, cfg);
  const Eigen::Vector4d moved =
      potential(pushforward(model, p), tag.rotated(p.lorentz), p.apply(z), p.apply(y), cfg);
  return (original - p.lorentz.matrix().transpose() * moved).cwiseAbs().maxCoeff();
}

/// Central finite-difference ∂_μA_ν - ∂_νA_μ - F̃_{μν}, max entry.
inline double primitivity_defect(const FieldModel& model, const TestFunctionTag& tag, const FourVector& z,
                                 const FourVector& y, const QuadratureConfig& cfg, double step = 1e-4) {
  const SmearedField field(model, tag);
  std::array<Eigen::Vector4d, 4> grad{};  // grad[μ] = ∂_μ A
  for (int mu = 0; mu < 4; ++mu) {
    FourVector e{};
    e[mu] = step;
    grad[mu] = (potential(field, z, y + e, cfg.order) - potential(field, z, y - e, cfg.order)) / (2.0 * step);
  }
  const Eigen::Matrix4d f = field(y);
  double worst = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) worst = std::max(worst, std::abs(grad[mu](nu) - grad[nu](mu) - f(mu, nu)));
  return worst;
}

/// Central finite-difference ∂_σF̃_{μν} + ∂_μF̃_{νσ} + ∂_νF̃_{σμ}, max entry.
inline double closedness_defect(const FieldModel& model, const TestFunctionTag& tag, const FourVector& y,
                                double step = 1e-4) {
  const SmearedField field(model, tag);
  std::array<Eigen::Matrix4d, 4> d{};
  for (int s = 0; s < 4; ++s) {
    FourVector e{};
    e[s] = step;
    d[s] = (field(y + e) - field(y - e)) / (2.0 * step);
  }
  double worst = 0.0;
  for (int s = 0; s < 4; ++s)
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        worst = std::max(worst, std::abs(d[s](mu, nu) + d[mu](nu, s) + d[nu](s, mu)));
  return worst;
}

/// g^z(y) = g((y-z)^2) for a scalar C² function g with derivative `dg`.
struct GaugeFunctionFamily {
  std::string name = "zero";
  std::function<double(double)> g = [](double) { return 0.0; };
  std::function<double(double)> dg = [](double) { return 0.0; };
  int nodes_per_axis = 6;

  static GaugeFunctionFamily zero() { return {}; }
  /// g(s) = Σ c_k s^k.
  static GaugeFunctionFamily polynomial(std::vector<double> coeffs, std::string name = "polynomial") {
    GaugeFunctionFamily out;
    out.name = std::move(name);
    out.g = [coeffs](double s) {
      double v = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * s + *it;
      return v;
    };
    out.dg = [coeffs](double s) {
      double v = 0.0;
      for (std::size_t k = coeffs.size(); k-- > 1;) v = v * s + static_cast<double>(k) * coeffs[k];
      return v;
    };
    return out;
  }
  static GaugeFunctionFamily sine(double freq) {
    GaugeFunctionFamily out;
    out.name = "sine";
    out.g = [freq](double s) { return std::sin(freq * s); };
    out.dg = [freq](double s) { return freq * std::cos(freq * s); };
    return out;
  }
};

/// g^z(·, f) against the discrete smearing measure of a fixed tag.
class SmearedGauge {
 public:
  SmearedGauge(const GaugeFunctionFamily& family, const TestFunctionTag& tag)
      : family_(family), nodes_(tag.smearing_nodes(family.nodes_per_axis)) {}

  double value(const FourVector& z, const FourVector& y) const {
    double sum = 0.0;
    for (const auto& n : nodes_) {
      const FourVector d = y + n.x - z;
      sum += n.weight * family_.g(inner(d, d));
    }
    return sum;
  }

  /// Covariant gradient ∂_μ g^z(y, f).
  Eigen::Vector4d gradient(const FourVector& z, const FourVector& y) const {
    Eigen::Vector4d out = Eigen::Vector4d::Zero();
    for (const auto& n : nodes_) {
      const FourVector d = y + n.x - z;
      out += n.weight * family_.dg(inner(d, d)) * 2.0 * as_eigen(d.lowered());
    }
    return out;
  }

 private:
  GaugeFunctionFamily family_;
  std::vector<SmearingNode> nodes_;
};

struct GaugeShift {
  double shifted = 0.0;
  double unshifted = 0.0;
  double boundary_term = 0.0;
};

/// Line integrals of A^z and A^z + ∂g^z along γ, and g^z(γ(1)) - g^z(γ(0)).
inline GaugeShift gauge_shift(const FieldModel& model, const TestFunctionTag& tag, const GaugeFunctionFamily& g,
                              const FourVector& z, const Curve& curve, const QuadratureConfig& cfg) {
  if (curve.points.size() < 2) throw FieldError("a curve needs at least one segment");
  const SmearedGauge gauge(g, tag);
  const auto& rule = cached_rule<LineRule>(cfg.order);
  GaugeShift out;
  out.unshifted = line_integral(model, tag, z, curve, cfg);
  double extra = 0.0;
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
    const FourVector d = curve.points[i + 1] - curve.points[i];
    for (std::size_t k = 0; k < rule.size(); ++k)
      extra += rule.weights[k] * gauge.gradient(z, curve.points[i] + rule.nodes[k] * d).dot(as_eigen(d));
  }
  out.shifted = out.unshifted + extra;
  out.boundary_term = gauge.value(z, curve.points.back()) - gauge.value(z, curve.points.front());
  return out;
}

/// w^em(c) = exp(i F⟨σ_c, f⟩) with f the tag of c; covariant under the full
/// group, the field moving with P.
inline Cochain em_cochain(const FieldModel& model, const QuadratureConfig& cfg) {
  Cochain w;
  w.value_dim = 1;
  w.evaluate = [model, cfg](const Simplex& c) {
    if (c.degenerate()) return UnitaryValue::identity();
    return UnitaryValue::phase(surface_integral(model, c, cfg));
  };
  w.covariance.group = "full";
  w.covariance.contains = [](const PoincareElement&) { return true; };
  w.covariance.predicted = [model, cfg](const PoincareElement& p, const Simplex& c) {
    return UnitaryValue::phase(surface_integral(pushforward(model, p.inverse()), c, cfg));
  };
  return w;
}

/// u^pot_a(b) = exp(i A^{a_0}⟨r_b, f⟩).
inline Connection pot_connection(const FieldModel& model, const QuadratureConfig& cfg) {
  return {[model, cfg](const Simplex& pole, const Simplex& b) {
            if (b[0] == b[1]) return UnitaryValue::identity();
            return UnitaryValue::phase(line_integral(model, pole[0], b, cfg));
          },
          1};
}

/// g_a(a′) = exp(i g^{a_0}(a′_0, f)) with f the tag of a′.
inline GaugeFamily gauge_lift(const GaugeFunctionFamily& g) {
  return {[g](const Simplex& pole, const Simplex& point) {
            return UnitaryValue::phase(SmearedGauge(g, point.tag).value(pole[0], point[0]));
          },
          1};
}

}  // namespace loopnet
