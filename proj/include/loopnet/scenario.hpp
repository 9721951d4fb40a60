#pragma once

// Random samplers for property checks. Every sampler draws from a caller-owned
// std::mt19937_64 so runs are reproducible from one seed.

#include <array>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>
#include <vector>

#include "loopnet/emfield.hpp"
#include "loopnet/geometry.hpp"
#include "loopnet/loopgroup.hpp"
#include "loopnet/simplex.hpp"

namespace loopnet {

using Rng = std::mt19937_64;

/// Seed for a named sub-stream: FNV-1a of the name mixed with the base seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view name) {
  std::uint64_t h = 1469598103934665603ull;
  for (const char ch : name) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  std::uint64_t out = 0;
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  out = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return out;
}

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// Rational coordinates p/q with |p| <= 4 q, q in 1..4.
inline ExactFourVector random_exact_point(Rng& rng) {
  ExactFourVector v;
  for (std::size_t mu = 0; mu < 4; ++mu) {
    const std::int64_t q = uniform_int(rng, 1, 4);
    v[mu] = Rational(uniform_int(rng, -4 * q, 4 * q), q);
  }
  return v;
}

inline TestFunctionTag default_tag(TestFunctionKind kind = TestFunctionKind::Gaussian, double eps = 0.1) {
  TestFunctionTag tag;
  tag.kind = kind;
  tag.eps = eps;
  tag.id = kind == TestFunctionKind::Gaussian ? "gauss" : "bump";
  return tag;
}

/// Random chain of `length` terms of dimension `dim` with coefficients in
/// [-3, 3] over a pool of a few tags.
inline Chain<Rational> random_exact_chain(Rng& rng, int dim, int length) {
  static const std::array<TestFunctionTag, 2> tags{default_tag(TestFunctionKind::Gaussian),
                                                   default_tag(TestFunctionKind::Bump)};
  Chain<Rational> out;
  for (int i = 0; i < length; ++i) {
    std::vector<ExactFourVector> v;
    for (int k = 0; k <= dim; ++k) v.push_back(random_exact_point(rng));
    out.add(ExactSimplex(std::move(v), tags[static_cast<std::size_t>(uniform_int(rng, 0, 1))]),
            uniform_int(rng, -3, 3));
  }
  return out;
}

inline FourVector random_point(Rng& rng, double scale = 1.0) {
  return {uniform(rng, -scale, scale), uniform(rng, -scale, scale), uniform(rng, -scale, scale),
          uniform(rng, -scale, scale)};
}

inline Simplex random_simplex(Rng& rng, int dim, const TestFunctionTag& tag, double scale = 1.0) {
  std::vector<FourVector> v;
  for (int k = 0; k <= dim; ++k) v.push_back(random_point(rng, scale));
  return Simplex(std::move(v), tag);
}

/// Rotation, boost of rapidity <= max_rapidity along a random axis, rotation.
inline LorentzMatrix random_lorentz(Rng& rng, double max_rapidity) {
  const auto axis = [&] { return static_cast<int>(uniform_int(rng, 1, 3)); };
  const double pi = std::numbers::pi;
  return rotation(axis(), uniform(rng, -pi, pi)) * boost(axis(), uniform(rng, -max_rapidity, max_rapidity)) *
         rotation(axis(), uniform(rng, -pi, pi));
}

inline PoincareElement random_poincare(Rng& rng, double max_rapidity, double scale = 1.0) {
  return {random_point(rng, scale), random_lorentz(rng, max_rapidity)};
}

/// Closed path base → x_1 → ... → x_{n-1} → base with n segments.
inline Path random_loop(Rng& rng, const FourVector& base, const TestFunctionTag& tag, int segments,
                        double scale = 1.0) {
  std::vector<FourVector> pts{base};
  for (int i = 1; i < segments; ++i) pts.push_back(base + random_point(rng, scale));
  pts.push_back(base);
  return Path::through(pts, tag);
}

inline Eigen::Matrix4d random_antisymmetric(Rng& rng, double scale = 1.0) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      m(i, j) = uniform(rng, -scale, scale);
      m(j, i) = -m(i, j);
    }
  return m;
}

/// Closed linear field from a quadratic potential A_ν = ½ T_{νρσ} y^ρ y^σ.
inline FieldModel random_linear_field(Rng& rng, double scale = 1.0) {
  double t[4][4][4];
  for (int nu = 0; nu < 4; ++nu)
    for (int r = 0; r < 4; ++r)
      for (int s = r; s < 4; ++s) t[nu][r][s] = t[nu][s][r] = uniform(rng, -scale, scale);
  std::array<Eigen::Matrix4d, 4> d;
  for (int s = 0; s < 4; ++s)
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) d[s](mu, nu) = t[nu][mu][s] - t[mu][nu][s];
  return FieldModel::linear_field(random_antisymmetric(rng, scale), d);
}

inline FieldModel random_plane_wave(Rng& rng, double k_scale = 2.0) {
  Eigen::Vector4d eps;
  for (int i = 0; i < 4; ++i) eps(i) = uniform(rng, -1.0, 1.0);
  return FieldModel::plane_wave(eps, random_point(rng, k_scale), uniform(rng, -std::numbers::pi, std::numbers::pi));
}

}  // namespace loopnet
