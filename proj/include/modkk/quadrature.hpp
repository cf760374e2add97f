#pragma once

// Matrix-valued integrals over (0, infinity).  The substitution
// lambda = t^2/(1-t)^2 maps the half line to (0,1); with the weights that
// appear throughout (lambda^{-1/2} d-lambda and plain d-lambda) the pulled
// back integrands are smooth up to the endpoints, so composite
// Gauss-Legendre with panel doubling converges quickly.

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "matrix.hpp"

namespace modkk {

struct QuadratureNoConvergence : Error {
  using Error::Error;
};

struct QuadratureSpec {
  std::size_t panels = 8;            // initial panel count
  std::size_t points_per_panel = 16; // Gauss-Legendre order
  double abs_tol = 1e-12;
  double rel_tol = 1e-8;
  std::size_t max_evals = std::size_t(1) << 20;
};

namespace detail {

// nodes/weights on (-1, 1) by Newton iteration on the Legendre recurrence
inline void gauss_legendre(std::size_t n, std::vector<double>& nodes,
                           std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double pi = 3.14159265358979323846;
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (double(i) + 0.75) / (double(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 =
            ((2.0 * double(k) - 1.0) * x * p1 - (double(k) - 1.0) * p0) /
            double(k);
        p0 = p1;
        p1 = p2;
      }
      dp = double(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

inline const std::pair<std::vector<double>, std::vector<double>>&
gl_rule(std::size_t n) {
  static std::vector<std::pair<std::vector<double>, std::vector<double>>>
      cache(64);
  if (n == 0 || n >= cache.size()) throw Error("gl_rule: order out of range");
  auto& entry = cache[n];
  if (entry.first.empty()) gauss_legendre(n, entry.first, entry.second);
  return entry;
}

}  // namespace detail

// composite Gauss-Legendre for a matrix-valued integrand on (0,1), doubling
// the panel count until the Frobenius change drops under tolerance
inline CMatrix integrate_unit(const std::function<CMatrix(double)>& f,
                              const QuadratureSpec& spec = {},
                              std::size_t* evals_used = nullptr) {
  const auto& rule = detail::gl_rule(spec.points_per_panel);
  const auto& nodes = rule.first;
  const auto& weights = rule.second;

  std::size_t evals = 0;
  auto pass = [&](std::size_t panels) {
    CMatrix acc;
    bool first = true;
    const double h = 1.0 / double(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      const double a = h * double(p);
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double t = a + 0.5 * h * (nodes[j] + 1.0);
        CMatrix val = f(t);
        ++evals;
        val *= cd(0.5 * h * weights[j], 0.0);
        if (first) {
          acc = std::move(val);
          first = false;
        } else {
          acc += val;
        }
      }
    }
    return acc;
  };

  std::size_t panels = std::max<std::size_t>(spec.panels, 1);
  CMatrix prev = pass(panels);
  while (true) {
    panels *= 2;
    if (evals + panels * nodes.size() > spec.max_evals)
      throw QuadratureNoConvergence(
          "integrate_unit: evaluation budget exhausted before tolerance");
    CMatrix next = pass(panels);
    const double diff = (next - prev).frobenius_norm();
    const double scale = next.frobenius_norm();
    prev = std::move(next);
    if (diff <= spec.abs_tol || diff <= spec.rel_tol * (scale + 1e-300)) break;
  }
  if (evals_used) *evals_used = evals;
  return prev;
}

// integral of F over (0, infinity) in d-lambda
inline CMatrix integrate_halfline(const std::function<CMatrix(double)>& f,
                                  const QuadratureSpec& spec = {}) {
  return integrate_unit(
      [&](double t) {
        const double u = 1.0 - t;
        const double lambda = (t / u) * (t / u);
        const double jac = 2.0 * t / (u * u * u);
        CMatrix v = f(lambda);
        v *= cd(jac, 0.0);
        return v;
      },
      spec);
}

// integral of lambda^{-1/2} F(lambda) over (0, infinity); the substitution
// cancels the root singularity, leaving weight 2/(1-t)^2
inline CMatrix integrate_halfline_sqrt(const std::function<CMatrix(double)>& f,
                                       const QuadratureSpec& spec = {}) {
  return integrate_unit(
      [&](double t) {
        const double u = 1.0 - t;
        const double lambda = (t / u) * (t / u);
        CMatrix v = f(lambda);
        v *= cd(2.0 / (u * u), 0.0);
        return v;
      },
      spec);
}

}  // namespace modkk
