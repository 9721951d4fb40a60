#pragma once

// Unitary values behind one algebra. Phases and Kronecker products stay
// factored as long as the operands allow it.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace loopnet {

class UnitaryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Complex = std::complex<double>;

/// e^{iθ}, acting as a scalar on any space.
struct Phase {
  double theta = 0.0;
};

struct DenseUnitary {
  Eigen::MatrixXcd matrix;
};

/// factors[0] ⊗ factors[1] ⊗ ... (factor 0 is the most significant index).
struct KronUnitary {
  std::vector<Eigen::MatrixXcd> factors;
};

class UnitaryValue {
 public:
  UnitaryValue() : v_(Phase{0.0}) {}
  UnitaryValue(Phase p) : v_(p) {}
  UnitaryValue(DenseUnitary d) : v_(std::move(d)) {}
  UnitaryValue(KronUnitary k) : v_(std::move(k)) {}

  static UnitaryValue identity() { return Phase{0.0}; }
  static UnitaryValue phase(double theta) { return Phase{theta}; }
  static UnitaryValue matrix(Eigen::MatrixXcd m) { return DenseUnitary{std::move(m)}; }
  static UnitaryValue kron(std::vector<Eigen::MatrixXcd> factors) { return KronUnitary{std::move(factors)}; }

  bool is_phase() const { return std::holds_alternative<Phase>(v_); }
  bool is_kron() const { return std::holds_alternative<KronUnitary>(v_); }
  bool is_dense() const { return std::holds_alternative<DenseUnitary>(v_); }
  const Phase& as_phase() const { return std::get<Phase>(v_); }
  const KronUnitary& as_kron() const { return std::get<KronUnitary>(v_); }

  /// 1 for phases.
  Eigen::Index dim() const {
    if (is_phase()) return 1;
    if (is_dense()) return std::get<DenseUnitary>(v_).matrix.rows();
    Eigen::Index d = 1;
    for (const auto& f : as_kron().factors) d *= f.rows();
    return d;
  }

  /// Matrix of size `d` (needed for phases, which have no size of their own).
  Eigen::MatrixXcd dense(Eigen::Index d = -1) const {
    if (is_phase()) {
      if (d < 0) d = 1;
      return std::polar(1.0, as_phase().theta) * Eigen::MatrixXcd::Identity(d, d);
    }
    if (is_dense()) return std::get<DenseUnitary>(v_).matrix;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (const auto& f : as_kron().factors) {
      Eigen::MatrixXcd next = Eigen::kroneckerProduct(out, f).eval();
      out = std::move(next);
    }
    return out;
  }

  UnitaryValue adjoint() const {
    if (is_phase()) return Phase{-as_phase().theta};
    if (is_dense()) return DenseUnitary{std::get<DenseUnitary>(v_).matrix.adjoint()};
    KronUnitary out;
    for (const auto& f : as_kron().factors) out.factors.push_back(f.adjoint());
    return out;
  }

  friend UnitaryValue operator*(const UnitaryValue& a, const UnitaryValue& b) {
    if (a.is_phase() && b.is_phase()) return Phase{a.as_phase().theta + b.as_phase().theta};
    if (a.is_phase()) return b.scaled(std::polar(1.0, a.as_phase().theta));
    if (b.is_phase()) return a.scaled(std::polar(1.0, b.as_phase().theta));
    if (a.is_kron() && b.is_kron() && same_structure(a.as_kron(), b.as_kron())) {
      KronUnitary out;
      const auto& fa = a.as_kron().factors;
      const auto& fb = b.as_kron().factors;
      out.factors.reserve(fa.size());
      for (std::size_t i = 0; i < fa.size(); ++i) out.factors.push_back(fa[i] * fb[i]);
      return out;
    }
    if (a.dim() != b.dim()) throw UnitaryError("unitary values of different dimensions");
    return DenseUnitary{a.dense() * b.dense()};
  }
  UnitaryValue& operator*=(const UnitaryValue& b) { return *this = *this * b; }

  /// Max |U U* - 1| entry.
  double unitarity_defect() const {
    if (is_phase()) return 0.0;
    double worst = 0.0;
    auto check = [&](const Eigen::MatrixXcd& m) {
      worst = std::max(worst, (m * m.adjoint() - Eigen::MatrixXcd::Identity(m.rows(), m.rows())).cwiseAbs().maxCoeff());
    };
    if (is_dense()) {
      check(std::get<DenseUnitary>(v_).matrix);
    } else {
      for (const auto& f : as_kron().factors) check(f);
    }
    return worst;
  }

  /// Operator-norm distance ||a - b||.
  friend double distance(const UnitaryValue& a, const UnitaryValue& b) {
    if (a.is_phase() && b.is_phase()) return std::abs(std::polar(1.0, a.as_phase().theta) - std::polar(1.0, b.as_phase().theta));
    if (a.is_kron() && b.is_kron() && same_structure(a.as_kron(), b.as_kron()))
      return kron_distance(a.as_kron(), b.as_kron());
    const Eigen::Index d = std::max(a.dim(), b.dim());
    if ((!a.is_phase() && a.dim() != d) || (!b.is_phase() && b.dim() != d))
      throw UnitaryError("unitary values of different dimensions");
    return operator_norm(a.dense(d) - b.dense(d));
  }

  /// ||ab - ba||.
  friend double commutator_norm(const UnitaryValue& a, const UnitaryValue& b) { return distance(a * b, b * a); }

  static double operator_norm(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0.0;
    const Eigen::MatrixXcd gram = m.adjoint() * m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
  }

 private:
  UnitaryValue scaled(Complex z) const {
    if (is_dense()) return DenseUnitary{z * std::get<DenseUnitary>(v_).matrix};
    KronUnitary out = as_kron();
    if (out.factors.empty()) return DenseUnitary{z * Eigen::MatrixXcd::Identity(1, 1)};
    out.factors.front() *= z;
    return out;
  }

  static bool same_structure(const KronUnitary& a, const KronUnitary& b) {
    if (a.factors.size() != b.factors.size()) return false;
    for (std::size_t i = 0; i < a.factors.size(); ++i)
      if (a.factors[i].rows() != b.factors[i].rows()) return false;
    return true;
  }

  /// ||A - B|| = ||1 - A*B|| for unitaries; A*B is a tensor product of normal
  /// factors, so its spectrum is the set of products of factor eigenvalues.
  static double kron_distance(const KronUnitary& a, const KronUnitary& b) {
    bool identical = true;
    for (std::size_t i = 0; i < a.factors.size() && identical; ++i) identical = a.factors[i] == b.factors[i];
    if (identical) return 0.0;
    std::vector<Complex> spectrum{Complex(1.0, 0.0)};
    for (std::size_t i = 0; i < a.factors.size(); ++i) {
      const Eigen::MatrixXcd c = a.factors[i].adjoint() * b.factors[i];
      if (c.isIdentity(0.0)) continue;
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(c, false);
      std::vector<Complex> next;
      next.reserve(spectrum.size() * static_cast<std::size_t>(c.rows()));
      for (const Complex& s : spectrum)
        for (Eigen::Index k = 0; k < c.rows(); ++k) next.push_back(s * solver.eigenvalues()(k));
      spectrum = std::move(next);
    }
    double worst = 0.0;
    for (const Complex& s : spectrum) worst = std::max(worst, std::abs(Complex(1.0, 0.0) - s));
    return worst;
  }

  std::variant<Phase, DenseUnitary, KronUnitary> v_;
};

}  // namespace loopnet
