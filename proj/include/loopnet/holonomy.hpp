#pragma once

// 2-cochains, loop representations, connection systems and gauge families,
// with the constructive correspondences between them.

#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "loopnet/geometry.hpp"
#include "loopnet/loopgroup.hpp"
#include "loopnet/simplex.hpp"
#include "loopnet/unitary.hpp"

namespace loopnet {

/// Group under which a cochain is covariant, and the value w(Pc) that
/// covariance predicts from data at c.
struct Covariance {
  std::string group = "none";
  std::function<bool(const PoincareElement&)> contains = [](const PoincareElement&) { return false; };
  std::function<UnitaryValue(const PoincareElement&, const Simplex&)> predicted;
};

struct Cochain {
  std::function<UnitaryValue(const Simplex&)> evaluate;
  Eigen::Index value_dim = 1;
  Covariance covariance;

  UnitaryValue operator()(const Simplex& c) const {
    if (c.dim() != 2) throw SimplexError("cochains take 2-simplices");
    return evaluate(c);
  }

  static Cochain trivial() {
    return {[](const Simplex&) { return UnitaryValue::identity(); }, 1,
            {"full", [](const PoincareElement&) { return true; },
             [](const PoincareElement&, const Simplex&) { return UnitaryValue::identity(); }}};
  }
};

struct LoopRepresentation {
  std::function<UnitaryValue(const LoopWord&)> evaluate;
  Eigen::Index value_dim = 1;

  UnitaryValue operator()(const LoopWord& w) const { return evaluate(w); }
  UnitaryValue operator()(const Path& loop) const { return evaluate(LoopWord(loop)); }

  static LoopRepresentation trivial() {
    return {[](const LoopWord&) { return UnitaryValue::identity(); }, 1};
  }
};

/// Pole-indexed values u_a(b) on 1-simplices b of a's component.
struct Connection {
  std::function<UnitaryValue(const Simplex&, const Simplex&)> evaluate;
  Eigen::Index value_dim = 1;

  UnitaryValue operator()(const Simplex& pole, const Simplex& b) const {
    if (pole.dim() != 0 || b.dim() != 1) throw SimplexError("connections take a 0-simplex and a 1-simplex");
    return evaluate(pole, b);
  }
  UnitaryValue operator()(const Simplex& pole, const Letter& b) const {
    const UnitaryValue v = (*this)(pole, b.segment());
    return b.inverted() ? v.adjoint() : v;
  }
  /// u_a(b_n ... b_1) = u_a(b_n) ... u_a(b_1).
  UnitaryValue operator()(const Simplex& pole, const Path& p) const {
    UnitaryValue out = UnitaryValue::identity();
    for (const auto& b : p.word().letters) out *= (*this)(pole, b);
    return out;
  }

  static Connection trivial() {
    return {[](const Simplex&, const Simplex&) { return UnitaryValue::identity(); }, 1};
  }
};

/// g_a(a′) for a pole a and a point a′ of its component.
struct GaugeFamily {
  std::function<UnitaryValue(const Simplex&, const Simplex&)> evaluate;
  Eigen::Index value_dim = 1;

  UnitaryValue operator()(const Simplex& pole, const Simplex& point) const { return evaluate(pole, point); }

  static GaugeFamily trivial() {
    return {[](const Simplex&, const Simplex&) { return UnitaryValue::identity(); }, 1};
  }
};

/// λ^w(p) = w(h^a(b_n)) ... w(h^a(b_1)) per loop factor p over a.
inline LoopRepresentation rep_from_cochain(Cochain w) {
  const Eigen::Index d = w.value_dim;
  return {[w = std::move(w)](const LoopWord& loops) {
            UnitaryValue out = UnitaryValue::identity();
            for (const auto& p : loops.factors) {
              if (!p.is_loop()) throw WordError("representation evaluated on a non-loop");
              for (const auto& b : p.word().letters) {
                const UnitaryValue v = w(cone(p.source(), b.segment()));
                out *= b.inverted() ? v.adjoint() : v;
              }
            }
            return out;
          },
          d};
}

/// w^λ(c) = λ(𝝏c).
inline Cochain cochain_from_rep(LoopRepresentation lambda) {
  Cochain w;
  w.value_dim = lambda.value_dim;
  w.evaluate = [lambda = std::move(lambda)](const Simplex& c) { return lambda(path_boundary(c)); };
  return w;
}

/// The loop p_(a,∂0 b) b p_(a,∂1 b)‾ over a.
inline Path framed_loop(const PathFrameSystem& frames, const Simplex& pole, const Simplex& b) {
  const Path to_end = frames(pole, make_point(b[1], b.tag));
  const Path to_start = frames(pole, make_point(b[0], b.tag));
  return compose(to_end, compose(Path::from_simplex(b), to_start.inverse()));
}

/// u^λ_a(b) = λ(p_(a,∂0 b) b p_(a,∂1 b)‾).
inline Connection connection_from_rep(LoopRepresentation lambda, PathFrameSystem frames) {
  const Eigen::Index d = lambda.value_dim;
  return {[lambda = std::move(lambda), frames = std::move(frames)](const Simplex& pole, const Simplex& b) {
            return lambda(framed_loop(frames, pole, b));
          },
          d};
}

/// λ^u(p_n ... p_1) = u_{a_n}(p_n) ... u_{a_1}(p_1).
inline LoopRepresentation rep_from_connection(Connection u) {
  const Eigen::Index d = u.value_dim;
  return {[u = std::move(u)](const LoopWord& loops) {
            UnitaryValue out = UnitaryValue::identity();
            for (const auto& p : loops.factors) {
              if (!p.is_loop()) throw WordError("representation evaluated on a non-loop");
              out *= u(p.source_point(), p);
            }
            return out;
          },
          d};
}

/// u^g_a(b) = g_a(∂0 b) u_a(b) g_a(∂1 b)*.
inline Connection apply_gauge(Connection u, GaugeFamily g) {
  if (u.value_dim != g.value_dim && u.value_dim != 1 && g.value_dim != 1)
    throw UnitaryError("gauge and connection values have different dimensions");
  const Eigen::Index d = std::max(u.value_dim, g.value_dim);
  return {[u = std::move(u), g = std::move(g)](const Simplex& pole, const Simplex& b) {
            return g(pole, make_point(b[1], b.tag)) * u(pole, b) * g(pole, make_point(b[0], b.tag)).adjoint();
          },
          d};
}

/// g_a(a′) = λ(q_(a,a′) p_(a,a′)‾); carries u^λ_P to u^λ_Q.
inline GaugeFamily frame_change_gauge(LoopRepresentation lambda, PathFrameSystem p_frames,
                                      PathFrameSystem q_frames) {
  const Eigen::Index d = lambda.value_dim;
  return {[lambda = std::move(lambda), p = std::move(p_frames), q = std::move(q_frames)](const Simplex& pole,
                                                                                         const Simplex& point) {
            return lambda(compose(q(pole, point), p(pole, point).inverse()));
          },
          d};
}

/// Max over samples of ||t_a(∂0 b) u_a(b) t_a(∂1 b)* - u′_a(b)||.
inline double equivalence_defect(const Connection& u, const Connection& u_prime, const GaugeFamily& t,
                                 const std::vector<std::pair<Simplex, Simplex>>& pole_segment_pairs) {
  double worst = 0.0;
  for (const auto& [pole, b] : pole_segment_pairs) {
    const UnitaryValue lhs = t(pole, make_point(b[1], b.tag)) * u(pole, b) * t(pole, make_point(b[0], b.tag)).adjoint();
    worst = std::max(worst, distance(lhs, u_prime(pole, b)));
  }
  return worst;
}

/// Max violation of u_a(b̄) = u_a(b)* and u_a(e) = 1 over samples.
inline double connection_axiom_defect(const Connection& u,
                                      const std::vector<std::pair<Simplex, Simplex>>& pole_segment_pairs) {
  double worst = 0.0;
  for (const auto& [pole, b] : pole_segment_pairs) {
    worst = std::max(worst, distance(u(pole, opposite(b)), u(pole, b).adjoint()));
    worst = std::max(worst, distance(u(pole, make_segment(b[0], b[0], b.tag)), UnitaryValue::identity()));
  }
  return worst;
}

struct CochainSamples {
  std::vector<Simplex> simplices;
  std::vector<std::pair<Simplex, Simplex>> causal_pairs;
  std::vector<PoincareElement> group;
};

struct CochainVerification {
  double adjoint_violation = 0.0;
  double degeneracy_violation = 0.0;
  double causality_violation = 0.0;
  double covariance_violation = 0.0;
  std::size_t covariance_samples = 0;

  double max_violation() const {
    return std::max({adjoint_violation, degeneracy_violation, causality_violation, covariance_violation});
  }
};

/// Largest violations of w(c̄) = w(c)*, w(degenerate) = 1, causal commutation
/// and covariance under the declared group.
inline CochainVerification verify_cochain(const Cochain& w, const CochainSamples& samples) {
  CochainVerification out;
  for (const auto& c : samples.simplices) {
    const UnitaryValue v = w(c);
    out.adjoint_violation = std::max(out.adjoint_violation, distance(w(opposite(c)), v.adjoint()));
    const Simplex collapsed = make_triangle(c[0], c[0], c[2], c.tag);
    out.degeneracy_violation = std::max(out.degeneracy_violation, distance(w(collapsed), UnitaryValue::identity()));
    if (w.covariance.predicted) {
      for (const auto& p : samples.group) {
        if (!w.covariance.contains(p)) continue;
        ++out.covariance_samples;
        out.covariance_violation =
            std::max(out.covariance_violation, distance(w(poincare_act(p, c)), w.covariance.predicted(p, c)));
      }
    }
  }
  for (const auto& [c1, c2] : samples.causal_pairs)
    out.causality_violation = std::max(out.causality_violation, commutator_norm(w(c1), w(c2)));
  return out;
}

}  // namespace loopnet
