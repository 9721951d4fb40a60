#pragma once

// Fixed-order Gauss rules, cached per order. Node tables come from GSL.

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <gsl/gsl_integration.h>

namespace loopnet {

struct QuadratureConfig {
  /// Gauss-Legendre points per axis, shared by every parameter integral.
  int order = 32;

  void validate() const {
    if (order < 2) throw std::invalid_argument("quadrature order must be >= 2");
  }
};

/// Gauss-Legendre rule mapped to [0,1].
struct LineRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit LineRule(int order) {
    if (order < 1) throw std::invalid_argument("Gauss-Legendre order must be >= 1");
    std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> table(
        gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(order)), &gsl_integration_glfixed_table_free);
    if (!table) throw std::runtime_error("failed to allocate Gauss-Legendre table");
    nodes.resize(static_cast<std::size_t>(order));
    weights.resize(static_cast<std::size_t>(order));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      double x = 0.0, w = 0.0;
      gsl_integration_glfixed_point(0.0, 1.0, i, &x, &w, table.get());
      nodes[i] = x;
      weights[i] = w;
    }
  }

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// Collapsed (Duffy) product rule on {t1,t2 >= 0, t1+t2 <= 1}; weights sum to 1/2.
struct TriangleRule {
  struct Node {
    double t1;
    double t2;
    double weight;
  };
  std::vector<Node> nodes;

  explicit TriangleRule(int order) {
    const LineRule line(order);
    nodes.reserve(line.size() * line.size());
    for (std::size_t i = 0; i < line.size(); ++i) {
      const double u = line.nodes[i];
      for (std::size_t j = 0; j < line.size(); ++j) {
        const double v = line.nodes[j];
        nodes.push_back({u, (1.0 - u) * v, line.weights[i] * line.weights[j] * (1.0 - u)});
      }
    }
  }
};

/// Gauss-Hermite rule for the weight exp(-x^2) on R.
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit HermiteRule(int order) {
    if (order < 1) throw std::invalid_argument("Gauss-Hermite order must be >= 1");
    std::unique_ptr<gsl_integration_fixed_workspace, decltype(&gsl_integration_fixed_free)> ws(
        gsl_integration_fixed_alloc(gsl_integration_fixed_hermite, static_cast<std::size_t>(order), 0.0, 1.0, 0.0,
                                    0.0),
        &gsl_integration_fixed_free);
    if (!ws) throw std::runtime_error("failed to allocate Gauss-Hermite table");
    const double* x = gsl_integration_fixed_nodes(ws.get());
    const double* w = gsl_integration_fixed_weights(ws.get());
    nodes.assign(x, x + order);
    weights.assign(w, w + order);
  }
};

/// Shared immutable rules, built once per order.
template <class Rule>
const Rule& cached_rule(int order) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const Rule>> cache;
  const std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<const Rule>(order);
  return *slot;
}

}  // namespace loopnet
