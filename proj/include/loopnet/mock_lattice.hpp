#pragma once

// Noncommutative test cochain: each spatial lattice cell carries a qudit, and
// a 2-simplex acts on a cell through the part of its area bivector lying in
// that cell. The lattice is periodic over the bounding box of a double cone.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <vector>

#include "loopnet/geometry.hpp"
#include "loopnet/holonomy.hpp"
#include "loopnet/simplex.hpp"
#include "loopnet/unitary.hpp"

namespace loopnet {

/// Largest total tensor dimension the mock will build.
inline constexpr double kMaxMockDimension = 1024.0;

struct MockLatticeOptions {
  double coupling = 4.0;
};

namespace detail {

using Polygon = std::vector<std::array<double, 2>>;

/// Keeps the part of `poly` with a0 + a1 t1 + a2 t2 >= 0.
inline Polygon clip_half_plane(const Polygon& poly, double a0, double a1, double a2) {
  Polygon out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % n];
    const double fp = a0 + a1 * p[0] + a2 * p[1];
    const double fq = a0 + a1 * q[0] + a2 * q[1];
    if (fp >= 0.0) out.push_back(p);
    if ((fp >= 0.0) != (fq >= 0.0)) {
      const double s = fp / (fp - fq);
      out.push_back({p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])});
    }
  }
  return out;
}

inline double polygon_area(const Polygon& poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    twice += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * std::abs(twice);
}

}  // namespace detail

class MockLattice {
 public:
  MockLattice(const DoubleCone& region, double cell_size, int qudit_dim, MockLatticeOptions opts = {})
      : cell_size_(cell_size), qudit_dim_(qudit_dim), opts_(opts) {
    if (!(cell_size > 0.0)) throw std::invalid_argument("cell size must be positive");
    if (qudit_dim < 2) throw std::invalid_argument("qudit dimension must be >= 2");
    const auto half = region.half_widths();
    const FourVector c = region.world_center();
    std::size_t cells = 1;
    for (int i = 0; i < 3; ++i) {
      lower_[i] = c[i + 1] - half[i + 1];
      counts_[i] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(2.0 * half[i + 1] / cell_size - 1e-9)));
      cells *= static_cast<std::size_t>(counts_[i]);
    }
    if (static_cast<double>(cells) * std::log2(qudit_dim) > std::log2(kMaxMockDimension) + 1e-9)
      throw std::invalid_argument("region too large for the maximal tensor dimension");
    cell_count_ = cells;
    build_generators();
  }

  std::size_t cell_count() const { return cell_count_; }
  int qudit_dim() const { return qudit_dim_; }
  double cell_size() const { return cell_size_; }
  std::array<std::int64_t, 3> counts() const { return counts_; }
  Eigen::Index total_dim() const {
    Eigen::Index d = 1;
    for (std::size_t i = 0; i < cell_count_; ++i) d *= qudit_dim_;
    return d;
  }

  /// Per-cell (α1, α2) for c, computed on sorted vertices and signed by the
  /// sorting permutation so that c̄ gives exactly -α.
  std::vector<std::array<double, 2>> weights(const Simplex& c) const {
    std::vector<std::array<double, 2>> out(cell_count_, {0.0, 0.0});
    const auto [sign, s] = canonical_order(c);
    const Eigen::Matrix4d sigma = bivector(s);
    const double r1 = sigma(0, 1);
    const double r2 = sigma(2, 3);
    if (r1 == 0.0 && r2 == 0.0) return out;
    for (const auto& [cell, area] : cell_areas(s)) {
      out[cell][0] += sign * opts_.coupling * r1 * area;
      out[cell][1] += sign * opts_.coupling * r2 * area;
    }
    return out;
  }

  /// Cells on which c acts nontrivially.
  std::vector<std::size_t> touched_cells(const Simplex& c) const {
    std::vector<std::size_t> out;
    const auto w = weights(c);
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i][0] != 0.0 || w[i][1] != 0.0) out.push_back(i);
    return out;
  }

  /// Cells met by the image of c, whether or not its weights vanish there.
  std::vector<std::size_t> covered_cells(const Simplex& c) const {
    std::vector<std::size_t> out;
    for (const auto& [cell, area] : cell_areas(canonical_order(c).second)) {
      (void)area;
      if (std::find(out.begin(), out.end(), cell) == out.end()) out.push_back(cell);
    }
    if (out.empty()) out.push_back(cell_of(c[0]));
    return out;
  }

  UnitaryValue value(const Simplex& c) const {
    const auto w = weights(c);
    KronUnitary out;
    out.factors.reserve(cell_count_);
    for (const auto& a : w) out.factors.push_back(cell_unitary(a[0], a[1]));
    return out;
  }

  /// Spatial lattice translation with zero Lorentz part; time shifts are free.
  bool is_lattice_translation(const PoincareElement& p) const {
    if (!p.lorentz.is_identity()) return false;
    for (int i = 0; i < 3; ++i) {
      const double m = p.translation[i + 1] / cell_size_;
      if (std::abs(m - std::round(m)) > 1e-12) return false;
    }
    return true;
  }

  /// U(P) v U(P)*: relabels tensor factors by the cell shift.
  UnitaryValue transport(const PoincareElement& p, const UnitaryValue& v) const {
    if (!v.is_kron()) return v;
    const auto& in = v.as_kron().factors;
    std::vector<Eigen::MatrixXcd> out(in.size());
    std::array<std::int64_t, 3> shift{};
    for (int i = 0; i < 3; ++i) shift[i] = static_cast<std::int64_t>(std::llround(p.translation[i + 1] / cell_size_));
    for (std::size_t cell = 0; cell < in.size(); ++cell) {
      auto idx = unflatten(cell);
      for (int i = 0; i < 3; ++i) idx[i] += shift[i];
      out[flatten(idx)] = in[cell];
    }
    return UnitaryValue::kron(std::move(out));
  }

  std::size_t cell_of(const FourVector& x) const {
    std::array<std::int64_t, 3> idx{};
    for (int i = 0; i < 3; ++i) idx[i] = static_cast<std::int64_t>(std::floor((x[i + 1] - lower_[i]) / cell_size_));
    return flatten(idx);
  }

 private:
  std::size_t flatten(std::array<std::int64_t, 3> idx) const {
    std::size_t out = 0;
    for (int i = 0; i < 3; ++i) {
      std::int64_t k = idx[i] % counts_[i];
      if (k < 0) k += counts_[i];
      out = out * static_cast<std::size_t>(counts_[i]) + static_cast<std::size_t>(k);
    }
    return out;
  }
  std::array<std::int64_t, 3> unflatten(std::size_t cell) const {
    std::array<std::int64_t, 3> idx{};
    for (int i = 2; i >= 0; --i) {
      idx[i] = static_cast<std::int64_t>(cell % static_cast<std::size_t>(counts_[i]));
      cell /= static_cast<std::size_t>(counts_[i]);
    }
    return idx;
  }

  /// Parameter-space area of the part of Δ2 whose image lies in each
  /// (periodically wrapped) cell.
  std::vector<std::pair<std::size_t, double>> cell_areas(const Simplex& s) const {
    std::vector<std::pair<std::size_t, double>> out;
    std::array<std::int64_t, 3> lo{}, hi{};
    std::array<bool, 3> flat{};
    for (int i = 0; i < 3; ++i) {
      double mn = s[0][i + 1], mx = s[0][i + 1];
      for (const auto& v : s.vertices) {
        mn = std::min(mn, v[i + 1]);
        mx = std::max(mx, v[i + 1]);
      }
      lo[i] = static_cast<std::int64_t>(std::floor((mn - lower_[i]) / cell_size_));
      hi[i] = static_cast<std::int64_t>(std::floor((mx - lower_[i]) / cell_size_));
      flat[i] = mn == mx;
    }
    const FourVector d1 = s[1] - s[0];
    const FourVector d2 = s[2] - s[0];
    for (std::int64_t k0 = lo[0]; k0 <= hi[0]; ++k0)
      for (std::int64_t k1 = lo[1]; k1 <= hi[1]; ++k1)
        for (std::int64_t k2 = lo[2]; k2 <= hi[2]; ++k2) {
          detail::Polygon poly{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
          const std::array<std::int64_t, 3> k{k0, k1, k2};
          for (int i = 0; i < 3 && !poly.empty(); ++i) {
            if (flat[i]) continue;
            const double base = s[0][i + 1];
            const double cell_lo = lower_[i] + static_cast<double>(k[i]) * cell_size_;
            const double cell_hi = cell_lo + cell_size_;
            poly = detail::clip_half_plane(poly, base - cell_lo, d1[i + 1], d2[i + 1]);
            if (!poly.empty()) poly = detail::clip_half_plane(poly, cell_hi - base, -d1[i + 1], -d2[i + 1]);
          }
          if (poly.size() < 3) continue;
          const double area = detail::polygon_area(poly);
          if (area > 0.0) out.emplace_back(flatten(k), area);
        }
    return out;
  }

  void build_generators() {
    const int d = qudit_dim_;
    const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / d);
    Eigen::MatrixXcd shift = Eigen::MatrixXcd::Zero(d, d);
    Eigen::MatrixXcd clock = Eigen::MatrixXcd::Zero(d, d);
    for (int j = 0; j < d; ++j) {
      shift((j + 1) % d, j) = 1.0;
      clock(j, j) = std::pow(omega, j);
    }
    if (d == 2) clock(1, 1) = -1.0;
    gen_x_ = 0.5 * (shift + shift.adjoint());
    gen_z_ = 0.5 * (clock + clock.adjoint());
  }

  /// exp(i (a1 X + a2 Z)) with the Hermitian generators of this qudit.
  Eigen::MatrixXcd cell_unitary(double a1, double a2) const {
    const int d = qudit_dim_;
    if (a1 == 0.0 && a2 == 0.0) return Eigen::MatrixXcd::Identity(d, d);
    if (d == 2) {
      // X and Z anticommute and square to 1.
      const double r = std::hypot(a1, a2);
      const Complex i_sin(0.0, std::sin(r) / r);
      Eigen::MatrixXcd out(2, 2);
      out(0, 0) = std::cos(r) + i_sin * a2;
      out(1, 1) = std::cos(r) - i_sin * a2;
      out(0, 1) = i_sin * a1;
      out(1, 0) = i_sin * a1;
      return out;
    }
    const Eigen::MatrixXcd h = a1 * gen_x_ + a2 * gen_z_;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    Eigen::VectorXcd phases(d);
    for (int j = 0; j < d; ++j) phases(j) = std::polar(1.0, solver.eigenvalues()(j));
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
  }

  double cell_size_;
  int qudit_dim_;
  MockLatticeOptions opts_;
  std::array<double, 3> lower_{};
  std::array<std::int64_t, 3> counts_{};
  std::size_t cell_count_ = 0;
  Eigen::MatrixXcd gen_x_;
  Eigen::MatrixXcd gen_z_;
};

/// Cochain of the mock lattice, covariant under lattice translations.
inline Cochain mock_lattice_cochain(const DoubleCone& region, double cell_size, int qudit_dim,
                                    MockLatticeOptions opts = {}) {
  auto lattice = std::make_shared<const MockLattice>(region, cell_size, qudit_dim, opts);
  Cochain w;
  w.value_dim = lattice->total_dim();
  w.evaluate = [lattice](const Simplex& c) { return lattice->value(c); };
  w.covariance.group = "lattice-translations";
  w.covariance.contains = [lattice](const PoincareElement& p) { return lattice->is_lattice_translation(p); };
  w.covariance.predicted = [lattice](const PoincareElement& p, const Simplex& c) {
    return lattice->transport(p, lattice->value(c));
  };
  return w;
}

}  // namespace loopnet
