#pragma once

// Free-group words over smearing 1-simplices, and the paths and path frames
// built from them.
//
// Words are stored in written order: letters[0] is the leftmost factor b_n and
// letters.back() is b_1, the first segment traversed.

#include <algorithm>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "loopnet/geometry.hpp"
#include "loopnet/simplex.hpp"

namespace loopnet {

class WordError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Stack reduction of a free-group word. `is_trivial(x)` marks letters equal
/// to the identity, `cancels(x, y)` marks adjacent pairs x y equal to it.
/// Works for any letter type; used with integer alphabets in tests.
template <class Letter, class IsTrivial, class Cancels>
std::vector<Letter> reduce_letters(const std::vector<Letter>& letters, IsTrivial is_trivial, Cancels cancels) {
  // Track survivors by pointer; letters are only copied once at the end.
  std::vector<const Letter*> stack;
  stack.reserve(letters.size());
  for (const auto& x : letters) {
    if (is_trivial(x)) continue;
    if (!stack.empty() && cancels(*stack.back(), x)) {
      stack.pop_back();
    } else {
      stack.push_back(&x);
    }
  }
  std::vector<Letter> out;
  out.reserve(stack.size());
  for (const Letter* x : stack) out.push_back(*x);
  return out;
}

/// A generator b or its inverse b̄. The stored segment is normalized so that
/// its vertices are sorted; the flag records the traversal direction.
class Letter {
 public:
  Letter() = default;
  Letter(Simplex segment, bool inverted = false) : segment_(std::move(segment)), inverted_(inverted) {
    if (segment_.dim() != 1) throw WordError("letters are 1-simplices");
    if (segment_[1] < segment_[0]) {
      std::swap(segment_.vertices[0], segment_.vertices[1]);
      inverted_ = !inverted_;
    }
  }

  const Simplex& segment() const { return segment_; }
  bool inverted() const { return inverted_; }
  const TestFunctionTag& tag() const { return segment_.tag; }

  /// The simplex in traversal direction.
  Simplex oriented() const { return inverted_ ? opposite(segment_) : segment_; }
  /// ∂_1 of the traversed simplex.
  const FourVector& start() const { return inverted_ ? segment_[1] : segment_[0]; }
  /// ∂_0 of the traversed simplex.
  const FourVector& end() const { return inverted_ ? segment_[0] : segment_[1]; }

  bool degenerate() const { return segment_[0] == segment_[1]; }
  Letter inverse() const {
    Letter out = *this;
    out.inverted_ = !inverted_;
    return out;
  }

  friend bool operator==(const Letter& a, const Letter& b) {
    return a.inverted_ == b.inverted_ && a.segment_ == b.segment_;
  }
  friend bool operator<(const Letter& a, const Letter& b) {
    if (a.segment_ == b.segment_) return a.inverted_ < b.inverted_;
    return a.segment_ < b.segment_;
  }

 private:
  Simplex segment_;
  bool inverted_ = false;
};

inline bool cancels(const Letter& a, const Letter& b) {
  return a.inverted() != b.inverted() && a.segment() == b.segment();
}

struct Word {
  std::vector<Letter> letters;

  static Word identity() { return {}; }
  bool empty() const { return letters.empty(); }
  std::size_t size() const { return letters.size(); }

  /// Group product: `*this` after `right`.
  friend Word operator*(const Word& left, const Word& right) {
    Word out = left;
    out.letters.insert(out.letters.end(), right.letters.begin(), right.letters.end());
    return out;
  }
  Word inverse() const {
    Word out;
    out.letters.reserve(letters.size());
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) out.letters.push_back(it->inverse());
    return out;
  }
  friend bool operator==(const Word&, const Word&) = default;
};

inline Word reduce(const Word& w) {
  return {reduce_letters(
      w.letters, [](const Letter& x) { return x.degenerate(); },
      [](const Letter& x, const Letter& y) { return cancels(x, y); })};
}

/// Word whose letters chain from `source` (∂_1) to `target` (∂_0), all
/// carrying one tag. The empty path is the trivial loop e_source.
class Path {
 public:
  Path(FourVector source, FourVector target, TestFunctionTag tag, Word word)
      : source_(source), target_(target), tag_(std::move(tag)), word_(std::move(word)) {
    validate();
  }

  /// e_a.
  static Path trivial(const FourVector& a, const TestFunctionTag& tag) { return {a, a, tag, {}}; }
  static Path trivial(const Simplex& point) {
    if (point.dim() != 0) throw WordError("trivial paths sit on 0-simplices");
    return trivial(point[0], point.tag);
  }
  static Path from_letter(const Letter& b) { return {b.start(), b.end(), b.tag(), {{b}}}; }
  static Path from_simplex(const Simplex& b) { return from_letter(Letter(b)); }

  /// Path through the listed points in order, one segment per consecutive pair.
  static Path through(const std::vector<FourVector>& points, const TestFunctionTag& tag) {
    if (points.empty()) throw WordError("a path needs at least one point");
    Word w;
    for (std::size_t i = points.size() - 1; i > 0; --i)
      w.letters.emplace_back(make_segment(points[i - 1], points[i], tag));
    return {points.front(), points.back(), tag, std::move(w)};
  }

  const FourVector& source() const { return source_; }
  const FourVector& target() const { return target_; }
  const TestFunctionTag& tag() const { return tag_; }
  const Word& word() const { return word_; }
  bool is_loop() const { return source_ == target_; }

  Path inverse() const { return {target_, source_, tag_, word_.inverse()}; }
  Path reduced() const { return {source_, target_, tag_, reduce(word_)}; }

  Simplex source_point() const { return make_point(source_, tag_); }
  Simplex target_point() const { return make_point(target_, tag_); }

 private:
  void validate() const {
    FourVector at = source_;
    for (auto it = word_.letters.rbegin(); it != word_.letters.rend(); ++it) {
      if (!(it->tag() == tag_)) throw WordError("path letters must share the path's tag");
      if (!(it->start() == at)) throw WordError("consecutive path letters do not chain");
      at = it->end();
    }
    if (!(at == target_)) throw WordError("path word does not end at the target");
  }

  FourVector source_;
  FourVector target_;
  TestFunctionTag tag_;
  Word word_;
};

/// q p: first p, then q.
inline Path compose(const Path& q, const Path& p) {
  if (!(p.tag() == q.tag())) throw WordError("composed paths must share a tag");
  if (!(p.target() == q.source())) throw WordError("path endpoints do not match");
  return {p.source(), q.target(), p.tag(), q.word() * p.word()};
}

/// Product of loops p_n ... p_1 kept with its factorization.
struct LoopWord {
  std::vector<Path> factors;  // written order, factors.back() acts first

  LoopWord() = default;
  explicit LoopWord(std::vector<Path> loops) : factors(std::move(loops)) {
    for (const auto& p : factors)
      if (!p.is_loop()) throw WordError("loop factor is not closed");
  }
  explicit LoopWord(Path loop) : LoopWord(std::vector<Path>{std::move(loop)}) {}

  Word word() const {
    Word out;
    for (const auto& p : factors) out = out * p.word();
    return out;
  }
  friend LoopWord operator*(const LoopWord& a, const LoopWord& b) {
    LoopWord out = a;
    out.factors.insert(out.factors.end(), b.factors.begin(), b.factors.end());
    return out;
  }
  LoopWord inverse() const {
    LoopWord out;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) out.factors.push_back(it->inverse());
    return out;
  }
};

/// 𝝏c = (∂₁c)‾ ∂₀c ∂₂c, a loop over c_0.
inline LoopWord path_boundary(const Simplex& c) {
  if (c.dim() != 2) throw WordError("path boundary needs a 2-simplex");
  Word w;
  w.letters.emplace_back(face(c, 1), true);
  w.letters.emplace_back(face(c, 0), false);
  w.letters.emplace_back(face(c, 2), false);
  return LoopWord(Path(c[0], c[0], c.tag, std::move(w)));
}

inline std::vector<SupportBall> support(const Word& w) {
  std::vector<SupportBall> out;
  for (const auto& b : reduce(w).letters) out.push_back(support_ball(b.segment()));
  return out;
}

/// True when every reduced letter's support surely lies in `o`, false when a
/// vertex of some letter lies outside `o`, unknown otherwise.
inline Tristate is_local(const Word& w, const DoubleCone& o) {
  Tristate result = Tristate::True;
  for (const auto& b : reduce(w).letters) {
    const Simplex& s = b.segment();
    // supp f_L = L supp f, an ellipsoid around each vertex.
    const double eps = s.tag.base_radius();
    for (const auto& v : s.vertices) {
      if (!o.contains(v)) return Tristate::False;
      // The double cone is convex, so end-ellipsoid containment covers the tube.
      if (!ellipsoid_in_cone(v, eps, s.tag.lorentz, o)) result = Tristate::Unknown;
    }
  }
  return result;
}

inline Letter poincare_act(const PoincareElement& p, const Letter& b) {
  return {poincare_act(p, b.segment()), b.inverted()};
}

inline Word poincare_act_word(const PoincareElement& p, const Word& w) {
  Word out;
  out.letters.reserve(w.size());
  for (const auto& b : w.letters) out.letters.push_back(poincare_act(p, b));
  return out;
}

inline Path poincare_act(const PoincareElement& p, const Path& path) {
  const TestFunctionTag tag = p.lorentz.is_identity() ? path.tag() : path.tag().rotated(p.lorentz);
  return {p.apply(path.source()), p.apply(path.target()), tag, poincare_act_word(p, path.word())};
}

inline LoopWord poincare_act(const PoincareElement& p, const LoopWord& w) {
  LoopWord out;
  for (const auto& f : w.factors) out.factors.push_back(poincare_act(p, f));
  return out;
}

/// Straight segment from a to a′ (∂_1 = a, ∂_0 = a′); e_a when a = a′.
inline Path euclidean_frame(const Simplex& a, const Simplex& a_prime) {
  if (a.dim() != 0 || a_prime.dim() != 0) throw WordError("frames connect 0-simplices");
  if (!(a.tag == a_prime.tag)) throw WordError("frame endpoints must share a tag");
  if (a[0] == a_prime[0]) return Path::trivial(a);
  return Path::from_simplex(make_segment(a[0], a_prime[0], a.tag));
}

enum class FrameKind { Euclidean, Custom };

/// Rule assigning to a pole a and a point a′ of its component a path p_(a,a′)
/// from a′ to a.
struct PathFrameSystem {
  FrameKind kind = FrameKind::Euclidean;
  std::string name = "euclidean";
  std::function<Path(const Simplex&, const Simplex&)> rule;

  Path operator()(const Simplex& a, const Simplex& a_prime) const {
    if (a.dim() != 0 || a_prime.dim() != 0) throw WordError("frames connect 0-simplices");
    if (!(a.tag == a_prime.tag)) throw WordError("frame endpoints lie in different components");
    if (a[0] == a_prime[0]) return Path::trivial(a);
    Path p = rule(a, a_prime);
    if (!(p.source() == a_prime[0]) || !(p.target() == a[0]))
      throw WordError("frame rule returned a path with wrong endpoints");
    return p;
  }

  static PathFrameSystem euclidean() {
    return {FrameKind::Euclidean, "euclidean",
            [](const Simplex& a, const Simplex& a_prime) { return euclidean_frame(a_prime, a); }};
  }

  /// Two-segment frame a′ → a′ + L v → a, with L the tag's recorded Lorentz
  /// matrix. Poincare covariant because the offset rotates with the tag.
  static PathFrameSystem detour(const FourVector& offset, std::string name = "detour") {
    return {FrameKind::Custom, std::move(name), [offset](const Simplex& a, const Simplex& a_prime) {
              const FourVector mid = a_prime[0] + a.tag.lorentz.apply(offset);
              return Path::through({a_prime[0], mid, a[0]}, a.tag);
            }};
  }

  /// Straight frame that overshoots past a by `factor` of the chord and comes
  /// back: a′ → a + factor (a − a′) → a.
  static PathFrameSystem overshoot(double factor, std::string name = "overshoot") {
    return {FrameKind::Custom, std::move(name), [factor](const Simplex& a, const Simplex& a_prime) {
              const FourVector far = a[0] + factor * (a[0] - a_prime[0]);
              return Path::through({a_prime[0], far, a[0]}, a.tag);
            }};
  }

  /// Detour whose offset does not rotate with the tag: covariant under
  /// translations only. Used as a negative control in covariance tests.
  static PathFrameSystem fixed_detour(const FourVector& offset) {
    return {FrameKind::Custom, "fixed-detour", [offset](const Simplex& a, const Simplex& a_prime) {
              return Path::through({a_prime[0], a_prime[0] + offset, a[0]}, a.tag);
            }};
  }
};

/// Largest vertex deviation between P p_(a,a′) and p_(Pa,Pa′) over the
/// samples; infinite when the reduced words differ in shape.
inline double frame_covariance_defect(const PathFrameSystem& frames,
                                      const std::vector<std::pair<Simplex, Simplex>>& pairs,
                                      const std::vector<PoincareElement>& group) {
  double worst = 0.0;
  for (const auto& [a, a_prime] : pairs)
    for (const auto& p : group) {
      const Word lhs = reduce(poincare_act(p, frames(a, a_prime)).word());
      const Word rhs = reduce(frames(poincare_act(p, a), poincare_act(p, a_prime)).word());
      if (lhs.size() != rhs.size()) return std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < lhs.size(); ++i) {
        if (lhs.letters[i].inverted() != rhs.letters[i].inverted())
          return std::numeric_limits<double>::infinity();
        for (int k = 0; k < 2; ++k)
          worst = std::max(worst, euclidean_norm(lhs.letters[i].segment()[k] - rhs.letters[i].segment()[k]));
      }
    }
  return worst;
}

}  // namespace loopnet
