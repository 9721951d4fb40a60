#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "loopnet/holonomy.hpp"
#include "loopnet/mock_lattice.hpp"
#include "loopnet/scenario.hpp"

using namespace loopnet;

namespace {

const TestFunctionTag kTag = default_tag(TestFunctionKind::Gaussian, 0.05);

/// U(1) cochain exp(i B_{μν} σ^{μν}/2) for a fixed antisymmetric B: the
/// closed-form flux of a constant field, used as a simple abelian test case.
Cochain toy_cochain(const Eigen::Matrix4d& b) {
  Cochain w;
  w.evaluate = [b](const Simplex& c) { return UnitaryValue::phase(0.5 * (b.cwiseProduct(bivector(c))).sum()); };
  return w;
}

Eigen::Matrix4d toy_field() {
  Rng rng(41);
  return random_antisymmetric(rng);
}

MockLattice unit_lattice() { return MockLattice(DoubleCone(FourVector{}, 1.0), 1.0, 2); }

Cochain unit_mock() { return mock_lattice_cochain(DoubleCone(FourVector{}, 1.0), 1.0, 2); }

Eigen::MatrixXcd random_unitary(Rng& rng, int d) {
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Complex(uniform(rng, -1, 1), uniform(rng, -1, 1));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  return qr.householderQ();
}

double svd_norm(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

TEST(Unitary, PhaseAlgebra) {
  const auto a = UnitaryValue::phase(0.3), b = UnitaryValue::phase(-1.1);
  EXPECT_DOUBLE_EQ((a * b).as_phase().theta, -0.8);
  EXPECT_DOUBLE_EQ(a.adjoint().as_phase().theta, -0.3);
  EXPECT_NEAR(distance(UnitaryValue::phase(0.0), UnitaryValue::phase(std::numbers::pi)), 2.0, 1e-15);
  EXPECT_EQ(commutator_norm(a, b), 0.0);
}

TEST(Unitary, KronDistanceMatchesDenseNorm) {
  Rng rng(42);
  for (int i = 0; i < 30; ++i) {
    std::vector<Eigen::MatrixXcd> fa, fb;
    for (int k = 0; k < 3; ++k) {
      fa.push_back(random_unitary(rng, 2));
      fb.push_back(k == 1 ? fa.back() : random_unitary(rng, 2));
    }
    const auto a = UnitaryValue::kron(fa), b = UnitaryValue::kron(fb);
    EXPECT_NEAR(distance(a, b), svd_norm(a.dense() - b.dense()), 1e-12);
    EXPECT_NEAR(commutator_norm(a, b), svd_norm(a.dense() * b.dense() - b.dense() * a.dense()), 1e-12);
    const auto p = UnitaryValue::phase(0.7);
    EXPECT_NEAR(distance(p * a, b), svd_norm(std::polar(1.0, 0.7) * a.dense() - b.dense()), 1e-12);
    EXPECT_LE((a * b).unitarity_defect(), 1e-12);
  }
}

TEST(Unitary, DimensionMismatchThrows) {
  const auto a = UnitaryValue::matrix(Eigen::MatrixXcd::Identity(2, 2));
  const auto b = UnitaryValue::matrix(Eigen::MatrixXcd::Identity(3, 3));
  EXPECT_THROW(a * b, UnitaryError);
  EXPECT_THROW(distance(a, b), UnitaryError);
}

TEST(RepFromCochain, TrivialAndPathBoundary) {
  Rng rng(43);
  const LoopRepresentation trivial = rep_from_cochain(Cochain::trivial());
  const Path loop = random_loop(rng, random_point(rng), kTag, 4);
  EXPECT_EQ(distance(trivial(loop), UnitaryValue::identity()), 0.0);

  for (const Cochain& w : {toy_cochain(toy_field()), unit_mock()}) {
    const LoopRepresentation lambda = rep_from_cochain(w);
    for (int i = 0; i < 20; ++i) {
      const Simplex c = random_simplex(rng, 2, kTag);
      EXPECT_LE(distance(lambda(path_boundary(c)), w(c)), 1e-12);
      const Path p = random_loop(rng, random_point(rng), kTag, 3);
      EXPECT_LE(distance(lambda(compose(p.inverse(), p)), UnitaryValue::identity()), 1e-12);
      EXPECT_LE(distance(lambda(p.inverse()), lambda(p).adjoint()), 1e-12);
    }
  }
  EXPECT_THROW(rep_from_cochain(Cochain::trivial())(Path::through({{0, 0, 0, 0}, {1, 0, 0, 0}}, kTag)), WordError);
}

TEST(RoundTrips, CochainAndRepresentation) {
  Rng rng(44);
  for (const Cochain& w : {toy_cochain(toy_field()), unit_mock()}) {
    const LoopRepresentation lambda = rep_from_cochain(w);
    const Cochain back = cochain_from_rep(lambda);
    const LoopRepresentation again = rep_from_cochain(back);
    for (int i = 0; i < 30; ++i) {
      const Simplex c = random_simplex(rng, 2, kTag);
      EXPECT_LE(distance(back(c), w(c)), 1e-12);
      const Path p = random_loop(rng, random_point(rng), kTag, static_cast<int>(uniform_int(rng, 2, 5)));
      EXPECT_LE(distance(again(p), lambda(p)), 1e-12);
    }
  }
  const Cochain trivial = cochain_from_rep(LoopRepresentation::trivial());
  EXPECT_EQ(distance(trivial(random_simplex(rng, 2, kTag)), UnitaryValue::identity()), 0.0);
}

TEST(RepFromCochain, ReductionInvariantAndMultiplicative) {
  Rng rng(45);
  const LoopRepresentation lambda = rep_from_cochain(unit_mock());
  for (int i = 0; i < 20; ++i) {
    const FourVector a = random_point(rng);
    const Path p = random_loop(rng, a, kTag, 3), q = random_loop(rng, a, kTag, 3);
    const Path padded = compose(p, compose(q.inverse(), q));
    EXPECT_LE(distance(lambda(padded), lambda(padded.reduced())), 1e-12);
    EXPECT_LE(distance(lambda(LoopWord({p, q})), lambda(p) * lambda(q)), 1e-12);
  }
}

TEST(Connection, RestoresRepresentationOnLoops) {
  Rng rng(46);
  for (const Cochain& w : {toy_cochain(toy_field()), unit_mock()}) {
    const LoopRepresentation lambda = rep_from_cochain(w);
    for (const auto& frames : {PathFrameSystem::euclidean(), PathFrameSystem::detour({0.1, 0.2, -0.1, 0.3})}) {
      const Connection u = connection_from_rep(lambda, frames);
      for (int i = 0; i < 15; ++i) {
        const Path p = random_loop(rng, random_point(rng), kTag, 3);
        EXPECT_LE(distance(u(p.source_point(), p), lambda(p)), 1e-12);
      }
      std::vector<std::pair<Simplex, Simplex>> samples;
      for (int i = 0; i < 15; ++i) samples.emplace_back(make_point(random_point(rng), kTag), random_simplex(rng, 1, kTag));
      EXPECT_LE(connection_axiom_defect(u, samples), 1e-12);
    }
  }
  const Connection trivial = connection_from_rep(LoopRepresentation::trivial(), PathFrameSystem::euclidean());
  EXPECT_EQ(distance(trivial(make_point(FourVector{}, kTag), random_simplex(rng, 1, kTag)), UnitaryValue::identity()), 0.0);
}

TEST(Connection, EuclideanLegTrivialAtPole) {
  const FourVector a{0, 0, 0, 0}, b1{1, 0.5, 0, 0};
  const Path loop = framed_loop(PathFrameSystem::euclidean(), make_point(a, kTag), make_segment(a, b1, kTag));
  EXPECT_EQ(loop.reduced().word().size(), 0u);  // (b1 -> a)(a -> b1) cancels entirely
  const FourVector b0{0.2, 0, 0, 0};
  const Path loop2 = framed_loop(PathFrameSystem::euclidean(), make_point(a, kTag), make_segment(b0, b1, kTag));
  EXPECT_EQ(loop2.word().size(), 3u);
}

TEST(Connection, RepFromConnectionRoundTrip) {
  Rng rng(47);
  const LoopRepresentation lambda = rep_from_cochain(unit_mock());
  const Connection u = connection_from_rep(lambda, PathFrameSystem::detour({0.1, 0.2, 0.0, -0.2}));
  const LoopRepresentation lambda_u = rep_from_connection(u);
  const PathFrameSystem e = PathFrameSystem::euclidean();
  const Connection back = connection_from_rep(lambda_u, e);
  const GaugeFamily t{[u, e](const Simplex& a, const Simplex& x) { return u(a, e(a, x)); }, u.value_dim};
  std::vector<std::pair<Simplex, Simplex>> samples;
  for (int i = 0; i < 20; ++i) samples.emplace_back(make_point(random_point(rng), kTag), random_simplex(rng, 1, kTag));
  EXPECT_LE(equivalence_defect(u, back, t, samples), 1e-12);

  // Single-loop word: ordered product of letter values.
  const Path p = random_loop(rng, random_point(rng), kTag, 3);
  UnitaryValue expected = UnitaryValue::identity();
  for (const auto& b : p.word().letters) expected *= u(p.source_point(), b);
  EXPECT_LE(distance(lambda_u(p), expected), 1e-12);
  EXPECT_EQ(distance(rep_from_connection(Connection::trivial())(p), UnitaryValue::identity()), 0.0);
}

TEST(Gauge, ApplyGaugeExamples) {
  Rng rng(48);
  const MockLattice lattice = unit_lattice();
  const LoopRepresentation lambda = rep_from_cochain(unit_mock());
  const Connection u = connection_from_rep(lambda, PathFrameSystem::euclidean());
  // Nonabelian gauge: the mock value of a small triangle anchored at the point.
  const GaugeFamily g{[lattice](const Simplex& a, const Simplex& x) {
                        const FourVector o = x[0] + 0.3 * a[0];
                        return lattice.value(make_triangle(o, o + FourVector{0.2, 0.1, 0, 0}, o + FourVector{0, 0, 0.2, 0.1}, kTag));
                      },
                      lattice.total_dim()};
  const Connection ug = apply_gauge(u, g);
  std::vector<std::pair<Simplex, Simplex>> samples;
  for (int i = 0; i < 15; ++i) samples.emplace_back(make_point(random_point(rng), kTag), random_simplex(rng, 1, kTag));
  EXPECT_LE(connection_axiom_defect(ug, samples), 1e-12);
  EXPECT_LE(equivalence_defect(u, apply_gauge(u, GaugeFamily::trivial()), GaugeFamily::trivial(), samples), 0.0);
  for (int i = 0; i < 15; ++i) {
    const Path p = random_loop(rng, random_point(rng), kTag, 3);
    const Simplex a = p.source_point();
    EXPECT_LE(distance(ug(a, p), g(a, a) * u(a, p) * g(a, a).adjoint()), 1e-12);
  }

  // Abelian: phase gauges leave loop values untouched.
  const Connection v = connection_from_rep(rep_from_cochain(toy_cochain(toy_field())), PathFrameSystem::euclidean());
  const GaugeFamily phase{[](const Simplex& a, const Simplex& x) { return UnitaryValue::phase(x[0][1] - 2.0 * x[0][3] + a[0][0]); }, 1};
  for (int i = 0; i < 15; ++i) {
    const Path p = random_loop(rng, random_point(rng), kTag, 3);
    EXPECT_LE(distance(apply_gauge(v, phase)(p.source_point(), p), v(p.source_point(), p)), 1e-12);
  }
}

TEST(Gauge, FrameChange) {
  Rng rng(49);
  for (const Cochain& w : {toy_cochain(toy_field()), unit_mock()}) {
    const LoopRepresentation lambda = rep_from_cochain(w);
    const PathFrameSystem p = PathFrameSystem::euclidean();
    const PathFrameSystem q = PathFrameSystem::overshoot(0.4);
    const GaugeFamily same = frame_change_gauge(lambda, p, p);
    const GaugeFamily g = frame_change_gauge(lambda, p, q);
    const Connection carried = apply_gauge(connection_from_rep(lambda, p), g);
    const Connection target = connection_from_rep(lambda, q);
    for (int i = 0; i < 20; ++i) {
      const Simplex a = make_point(random_point(rng), kTag);
      const Simplex x = make_point(random_point(rng), kTag);
      const Simplex b = random_simplex(rng, 1, kTag);
      EXPECT_LE(distance(same(a, x), UnitaryValue::identity()), 1e-12);
      EXPECT_EQ(distance(g(a, a), UnitaryValue::identity()), 0.0);
      EXPECT_LE(distance(carried(a, b), target(a, b)), 1e-12);
    }
  }
}

TEST(VerifyCochain, TrivialMockAndBroken) {
  Rng rng(50);
  CochainSamples s;
  for (int i = 0; i < 20; ++i) s.simplices.push_back(random_simplex(rng, 2, kTag));
  s.group.push_back(PoincareElement::translation_by({0.3, 1.0, -1.0, 2.0}));
  s.group.push_back(random_poincare(rng, 1.0));
  EXPECT_EQ(verify_cochain(Cochain::trivial(), s).max_violation(), 0.0);

  const auto mock = verify_cochain(unit_mock(), s);
  EXPECT_EQ(mock.adjoint_violation, 0.0);
  EXPECT_EQ(mock.degeneracy_violation, 0.0);
  EXPECT_LE(mock.covariance_violation, 1e-12);
  EXPECT_EQ(mock.covariance_samples, 20u);  // only the lattice translation is in the declared group

  Cochain broken = unit_mock();
  const auto inner = broken.evaluate;
  broken.evaluate = [inner](const Simplex& c) { return inner(canonical_order(c).second); };
  EXPECT_GT(verify_cochain(broken, s).adjoint_violation, 1e-3);
}

TEST(Mock, Structure) {
  const MockLattice lattice = unit_lattice();
  EXPECT_EQ(lattice.cell_count(), 8u);
  EXPECT_EQ(lattice.total_dim(), 256);
  EXPECT_THROW(MockLattice(DoubleCone(FourVector{}, 3.0), 1.0, 2), std::invalid_argument);
  EXPECT_THROW(MockLattice(DoubleCone(FourVector{}, 1.0), 0.0, 2), std::invalid_argument);
  EXPECT_NO_THROW(MockLattice(DoubleCone(FourVector{}, 1.0), 1.0, 2));
}

TEST(Mock, DegenerateIsIdentityAndOppositeIsAdjoint) {
  Rng rng(51);
  const MockLattice lattice = unit_lattice();
  const FourVector a = random_point(rng), b = random_point(rng);
  EXPECT_EQ(distance(lattice.value(make_triangle(a, a, b, kTag)), UnitaryValue::identity()), 0.0);
  for (int i = 0; i < 20; ++i) {
    const Simplex c = random_simplex(rng, 2, kTag);
    EXPECT_EQ(distance(lattice.value(opposite(c)), lattice.value(c).adjoint()), 0.0);
  }
}

TEST(Mock, WeightsMatchSampledAreas) {
  // Oracle: area fractions by uniform sampling of the parameter triangle.
  Rng rng(52);
  const MockLattice lattice = unit_lattice();
  for (int i = 0; i < 10; ++i) {
    const Simplex c = random_simplex(rng, 2, kTag, 0.9);
    const auto sigma = bivector(c);
    const auto w = lattice.weights(c);
    std::vector<double> hits(lattice.cell_count(), 0.0);
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
      double t1 = uniform(rng, 0, 1), t2 = uniform(rng, 0, 1);
      if (t1 + t2 > 1.0) {
        t1 = 1.0 - t1;
        t2 = 1.0 - t2;
      }
      const double t[2] = {t1, t2};
      hits[lattice.cell_of(point_at(c, t))] += 0.5 / n;
    }
    for (std::size_t cell = 0; cell < hits.size(); ++cell) {
      EXPECT_NEAR(w[cell][0], 4.0 * sigma(0, 1) * hits[cell], 4.0 * std::abs(sigma(0, 1)) * 0.005);
      EXPECT_NEAR(w[cell][1], 4.0 * sigma(2, 3) * hits[cell], 4.0 * std::abs(sigma(2, 3)) * 0.005);
    }
  }
}

TEST(Mock, CellUnitaryMatchesMatrixExponential) {
  Rng rng(53);
  const MockLattice lattice = unit_lattice();
  Eigen::Matrix2cd x, z;
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  for (int i = 0; i < 10; ++i) {
    // A triangle inside one cell: weights are coupling * sigma * 1/2.
    const FourVector o{uniform(rng, -0.5, 0.5), 0.3, 0.3, 0.3};
    const Simplex c = make_triangle(o, o + FourVector{0.1, 0.2, 0.05, 0.1}, o + FourVector{0.05, 0.1, 0.3, 0.2}, kTag);
    const auto sigma = bivector(c);
    const double a1 = 4.0 * sigma(0, 1) * 0.5, a2 = 4.0 * sigma(2, 3) * 0.5;
    const Eigen::Matrix2cd expected = (Complex(0, 1) * (a1 * x + a2 * z)).exp();
    const auto v = lattice.value(c);
    const std::size_t cell = lattice.cell_of(o);
    EXPECT_LE(svd_norm(v.as_kron().factors[cell] - expected), 1e-12);
    for (std::size_t k = 0; k < lattice.cell_count(); ++k)
      if (k != cell) EXPECT_TRUE(v.as_kron().factors[k].isIdentity(0.0));
  }
}

TEST(Mock, QutritIsUnitary) {
  Rng rng(54);
  const MockLattice lattice(DoubleCone(FourVector{}, 0.5), 1.0, 3);
  EXPECT_EQ(lattice.total_dim(), 3);
  const auto v = lattice.value(random_simplex(rng, 2, kTag, 0.4));
  EXPECT_LE(v.unitarity_defect(), 1e-12);
}

TEST(Mock, CausalityAndNoncommutativity) {
  const MockLattice lattice = unit_lattice();
  const TestFunctionTag tiny = default_tag(TestFunctionKind::Gaussian, 0.01);
  const Simplex a = make_triangle(FourVector{0, -0.6, -0.6, -0.6}, FourVector{0.02, -0.4, -0.6, -0.5}, FourVector{0, -0.5, -0.3, -0.4}, tiny);
  const Simplex b = make_triangle(FourVector{0, 0.6, 0.6, 0.6}, FourVector{0.02, 0.4, 0.6, 0.5}, FourVector{0, 0.5, 0.3, 0.4}, tiny);
  EXPECT_EQ(commutator_norm(lattice.value(a), lattice.value(b)), 0.0);
  const FourVector p{0, 0.2, 0.2, 0.2};
  const Simplex tx = make_triangle(p, p + FourVector{0.4, 0, 0, 0}, p + FourVector{0, 0.4, 0, 0}, tiny);
  const Simplex yz = make_triangle(p, p + FourVector{0, 0, 0.4, 0}, p + FourVector{0, 0, 0, 0.4}, tiny);
  EXPECT_GT(commutator_norm(lattice.value(tx), lattice.value(yz)), 0.1);
}

TEST(Mock, TranslationCovariance) {
  Rng rng(55);
  const MockLattice lattice = unit_lattice();
  for (int i = 0; i < 20; ++i) {
    const Simplex c = random_simplex(rng, 2, kTag);
    const auto p = PoincareElement::translation_by({uniform(rng, -1, 1), 1.0, 0.0, -2.0});
    EXPECT_TRUE(lattice.is_lattice_translation(p));
    EXPECT_LE(distance(lattice.value(poincare_act(p, c)), lattice.transport(p, lattice.value(c))), 1e-12);
  }
  EXPECT_FALSE(lattice.is_lattice_translation(PoincareElement::translation_by({0, 0.5, 0, 0})));
  EXPECT_FALSE(lattice.is_lattice_translation({FourVector{}, loopnet::boost(1, 0.1)}));
}
