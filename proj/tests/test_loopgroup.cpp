#include <gtest/gtest.h>

#include "loopnet/io.hpp"
#include "loopnet/scenario.hpp"
#include "oracles.hpp"

using namespace loopnet;

namespace {

const TestFunctionTag kTag = default_tag(TestFunctionKind::Bump, 0.05);

Letter seg(const FourVector& a, const FourVector& b, bool inv = false) { return Letter(make_segment(a, b, kTag), inv); }

/// Letters for the integer alphabet: k > 0 a generator, -k its inverse, 0 degenerate.
struct Alphabet {
  std::vector<Letter> gens;
  Letter degenerate;

  explicit Alphabet(Rng& rng) : degenerate(seg({0.5, 0.5, 0.5, 0.5}, {0.5, 0.5, 0.5, 0.5})) {
    for (int i = 0; i < 3; ++i) gens.push_back(Letter(random_simplex(rng, 1, kTag)));
  }
  Letter operator()(int k) const { return k == 0 ? degenerate : (k > 0 ? gens[k - 1] : gens[-k - 1].inverse()); }
  Word word(const std::vector<int>& w) const {
    Word out;
    for (int k : w) out.letters.push_back((*this)(k));
    return out;
  }
};

}  // namespace

TEST(Reduce, Examples) {
  const FourVector a{0, 0, 0, 0}, b{1, 0, 0, 0}, c{0, 1, 0, 0}, d{0, 0, 1, 0};
  const Letter b_ = seg(a, b), b1 = seg(b, c), b2 = seg(c, d), e = seg(a, a);
  EXPECT_TRUE(reduce(Word{{b_, b_.inverse()}}).empty());
  EXPECT_TRUE(reduce(Word{{e}}).empty());
  EXPECT_EQ(reduce(Word{{b2, b_, b_.inverse(), b1, e}}), (Word{{b2, b1}}));
}

TEST(Reduce, NormalizedLetterStorage) {
  const FourVector a{0, 0, 0, 0}, b{1, 0, 0, 0};
  // (b, a) is stored as the sorted segment (a, b) traversed backwards.
  const Letter back(make_segment(b, a, kTag));
  EXPECT_TRUE(back.inverted());
  EXPECT_EQ(back.start(), b);
  EXPECT_EQ(back.end(), a);
  EXPECT_TRUE(cancels(back, seg(a, b)));
  EXPECT_THROW(Letter(make_point(a, kTag)), WordError);
}

TEST(Reduce, MatchesRewritingOracle) {
  Rng rng(21);
  const Alphabet alphabet(rng);
  for (int i = 0; i < 20000; ++i) {
    std::vector<int> w;
    const auto len = uniform_int(rng, 0, 12);
    for (int k = 0; k < len; ++k) w.push_back(static_cast<int>(uniform_int(rng, -3, 3)));
    const auto expected = oracle::rewrite_normal_form(w);
    ASSERT_EQ(expected, oracle::rewrite_normal_form_leftmost(w));
    ASSERT_EQ(reduce(alphabet.word(w)), alphabet.word(expected));
  }
}

TEST(Reduce, InverseAndIdempotence) {
  Rng rng(22);
  const Alphabet alphabet(rng);
  for (int i = 0; i < 2000; ++i) {
    std::vector<int> w;
    for (int k = 0; k < 8; ++k) w.push_back(static_cast<int>(uniform_int(rng, -3, 3)));
    const Word word = alphabet.word(w);
    EXPECT_TRUE(reduce(word * word.inverse()).empty());
    EXPECT_EQ(reduce(reduce(word)), reduce(word));
  }
}

TEST(Path, ValidatesChaining) {
  const FourVector a{0, 0, 0, 0}, b{1, 0, 0, 0}, c{0, 1, 0, 0};
  EXPECT_NO_THROW(Path(a, c, kTag, Word{{seg(b, c), seg(a, b)}}));
  EXPECT_THROW(Path(a, c, kTag, Word{{seg(a, b), seg(b, c)}}), WordError);
  EXPECT_THROW(Path(a, b, kTag, Word{{seg(a, c)}}), WordError);
  const Letter other_tag(make_segment(a, b, default_tag(TestFunctionKind::Gaussian)));
  EXPECT_THROW(Path(a, b, kTag, Word{{other_tag}}), WordError);
}

TEST(Path, Compose) {
  Rng rng(23);
  const FourVector a = random_point(rng), b = random_point(rng), c = random_point(rng);
  const Path p = Path::through({a, b}, kTag);
  const Path q = Path::through({b, c}, kTag);
  const Path qp = compose(q, p);
  EXPECT_EQ(qp.source(), a);
  EXPECT_EQ(qp.target(), c);
  EXPECT_EQ(compose(Path::trivial(b, kTag), p).reduced().word(), p.word());
  EXPECT_TRUE(compose(p.inverse(), p).reduced().word().empty());
  EXPECT_THROW(compose(p, p), WordError);
  EXPECT_THROW(compose(Path::trivial(b, default_tag()), p), WordError);
}

TEST(Path, ReductionKeepsEndpoints) {
  Rng rng(24);
  for (int i = 0; i < 200; ++i) {
    const Path p = random_loop(rng, random_point(rng), kTag, 4);
    const Path pp = compose(p.inverse(), compose(p, p));
    const Path r = pp.reduced();
    EXPECT_EQ(r.source(), pp.source());
    EXPECT_EQ(r.target(), pp.target());
  }
}

TEST(PathBoundary, LetterOrder) {
  const FourVector c0{0, 0, 0, 0}, c1{1, 0, 0, 0}, c2{0, 1, 0, 0};
  const Simplex c = make_triangle(c0, c1, c2, kTag);
  const LoopWord w = path_boundary(c);
  EXPECT_EQ(w.word(), (Word{{seg(c0, c2, true), seg(c1, c2), seg(c0, c1)}}));
  EXPECT_EQ(w.factors.front().source(), c0);
}

TEST(PathBoundary, OppositeIsInverse) {
  Rng rng(25);
  for (int i = 0; i < 200; ++i) {
    const Simplex c = random_simplex(rng, 2, kTag);
    EXPECT_EQ(reduce(path_boundary(opposite(c)).word()), reduce(path_boundary(c).word().inverse()));
  }
}

TEST(PathBoundary, DegenerateDropsLetter) {
  const FourVector c0{0, 0, 0, 0}, c2{0, 1, 0, 0};
  const Simplex c = make_triangle(c0, c0, c2, kTag);
  EXPECT_EQ(reduce(path_boundary(c).word()), reduce(Word{{seg(c0, c2, true), seg(c0, c2)}}));
  EXPECT_TRUE(reduce(path_boundary(c).word()).empty());
}

TEST(Support, ReducedLettersOnly) {
  const FourVector a{0, 0, 0, 0}, b{1, 0, 0, 0}, c{0, 1, 0, 0};
  EXPECT_TRUE(support(Word{}).empty());
  const auto s = support(Word{{seg(a, b), seg(a, b, true), seg(b, c)}});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].hull, seg(b, c).segment().vertices);  // stored sorted
}

TEST(Support, Covariant) {
  Rng rng(26);
  for (int i = 0; i < 50; ++i) {
    const Word w = random_loop(rng, random_point(rng), kTag, 3).word();
    const auto p = random_poincare(rng, 2.0);
    const auto moved = support(poincare_act_word(p, w));
    const auto orig = support(w);
    ASSERT_EQ(moved.size(), orig.size());
    for (std::size_t k = 0; k < orig.size(); ++k) {
      EXPECT_NEAR(moved[k].eps, orig[k].eps * p.lorentz.spectral_norm(), 1e-12);
      for (std::size_t v = 0; v < 2; ++v) {
        // Letter storage re-sorts vertices, so compare as sets.
        const FourVector img = p.apply(orig[k].hull[v]);
        const double d = std::min(euclidean_norm(moved[k].hull[0] - img), euclidean_norm(moved[k].hull[1] - img));
        EXPECT_EQ(d, 0.0);
      }
    }
  }
}

TEST(Locality, Examples) {
  const DoubleCone o({0, 0, 0, 0}, 1.0);
  EXPECT_EQ(is_local(Word{}, o), Tristate::True);
  Rng rng(27);
  const Path tiny = random_loop(rng, {0, 0, 0, 0}, kTag, 3, 0.05);
  EXPECT_EQ(is_local(tiny.word(), o), Tristate::True);
  const Path straddle = Path::through({{0, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 0.1, 0}, {0, 0, 0, 0}}, kTag);
  EXPECT_EQ(is_local(straddle.word(), o), Tristate::False);
  const Path edge = Path::through({{0, 0, 0, 0}, {0, 0.99, 0, 0}, {0, 0, 0.1, 0}, {0, 0, 0, 0}}, kTag);
  EXPECT_EQ(is_local(edge.word(), o), Tristate::Unknown);
}

TEST(Locality, Covariant) {
  Rng rng(28);
  int trues = 0;
  for (int i = 0; i < 300; ++i) {
    const DoubleCone o(random_point(rng), uniform(rng, 1.0, 2.0), random_poincare(rng, 2.0));
    const Word w = random_loop(rng, o.world_center() + random_point(rng, 0.2), kTag, 3, 0.3).word();
    const auto p = random_poincare(rng, 2.0);
    const Tristate before = is_local(w, o);
    if (before == Tristate::True) {
      ++trues;
      EXPECT_EQ(is_local(poincare_act_word(p, w), o.transformed(p)), Tristate::True);
    }
  }
  EXPECT_GT(trues, 0);
}

TEST(PoincareWord, Examples) {
  Rng rng(29);
  const Path loop = random_loop(rng, random_point(rng), kTag, 4);
  EXPECT_EQ(poincare_act_word(PoincareElement::identity(), loop.word()), loop.word());
  const auto p = random_poincare(rng, 1.0);
  const Word w = loop.word() * loop.word().inverse() * loop.word();
  EXPECT_EQ(reduce(poincare_act_word(p, w)), poincare_act_word(p, reduce(w)));
  const Path moved = poincare_act(p, loop);
  EXPECT_TRUE(moved.is_loop());
  EXPECT_EQ(moved.source(), p.apply(loop.source()));
}

TEST(Frames, Euclidean) {
  const Simplex a = make_point(FourVector{0, 0, 0, 0}, kTag), b = make_point(FourVector{1, 1, 0, 0}, kTag);
  EXPECT_TRUE(euclidean_frame(a, a).word().empty());
  const Path e = euclidean_frame(a, b);
  EXPECT_EQ(e.source(), a[0]);
  EXPECT_EQ(e.target(), b[0]);
  EXPECT_THROW(euclidean_frame(a, make_point(FourVector{1, 1, 0, 0}, default_tag())), WordError);
  const PathFrameSystem frames = PathFrameSystem::euclidean();
  EXPECT_EQ(frames(a, b).source(), b[0]);
  EXPECT_EQ(frames(a, b).target(), a[0]);
  EXPECT_TRUE(frames(a, a).word().empty());
}

TEST(Frames, Covariance) {
  Rng rng(30);
  std::vector<std::pair<Simplex, Simplex>> pairs;
  for (int i = 0; i < 20; ++i) pairs.emplace_back(make_point(random_point(rng), kTag), make_point(random_point(rng), kTag));
  std::vector<PoincareElement> group;
  for (int i = 0; i < 20; ++i) group.push_back(random_poincare(rng, 2.0));
  EXPECT_EQ(frame_covariance_defect(PathFrameSystem::euclidean(), pairs, group), 0.0);
  EXPECT_LE(frame_covariance_defect(PathFrameSystem::detour({0.2, 0.3, 0, 0}), pairs, group), 1e-10);
  EXPECT_LE(frame_covariance_defect(PathFrameSystem::overshoot(0.5), pairs, group), 1e-10);
  // Negative control: an offset fixed in world coordinates is not boost covariant.
  EXPECT_GT(frame_covariance_defect(PathFrameSystem::fixed_detour({0.2, 0.3, 0, 0}), pairs, group), 1e-3);
  std::vector<PoincareElement> translations;
  for (int i = 0; i < 20; ++i) translations.push_back(PoincareElement::translation_by(random_point(rng)));
  EXPECT_LE(frame_covariance_defect(PathFrameSystem::fixed_detour({0.2, 0.3, 0, 0}), pairs, translations), 1e-12);
}

TEST(WordJson, RoundTrips) {
  Rng rng(31);
  const Path p = random_loop(rng, random_point(rng), kTag, 4);
  const Path back = io::decode_path(io::Json::parse(io::encode(p).dump()));
  EXPECT_EQ(back.word(), p.word());
  EXPECT_EQ(back.source(), p.source());
  EXPECT_EQ(io::encode(p)["kind"], "loop");
  const LoopWord lw({p, p.inverse()});
  const LoopWord lb = io::decode_loop_word(io::Json::parse(io::encode(lw).dump()));
  EXPECT_EQ(lb.word(), lw.word());
  EXPECT_EQ(io::decode_word(io::encode(p.word())), p.word());
  auto broken = io::encode(p);
  broken["target"] = io::encode(FourVector{9, 9, 9, 9});
  EXPECT_THROW(io::decode_path(broken), io::FormatError);
  EXPECT_THROW(io::decode_loop_word(io::Json::parse(R"({"factors":[{"kind":"path","source":[0,0,0,0],"target":[1,0,0,0],"tag":{},"letters":[{"simplex":{"vertices":[[0,0,0,0],[1,0,0,0]],"tag":{}},"inverted":false}]}]})")),
               io::FormatError);
}
