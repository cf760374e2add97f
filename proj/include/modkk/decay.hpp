#pragma once

// Carrier for norm sweeps over a lambda grid together with a fitted decay
// rate.  Bounds of the form C*(1+lambda)^{-alpha} are checked by fitting
// log(norm) against log(1+lambda) on the asymptotic part of the grid.

#include <cmath>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace modkk {

struct DecayFit {
  std::string name;
  std::vector<double> lambdas;
  std::vector<double> norms;
  double slope = 0.0;         // fitted exponent of (1+lambda)
  double constant = 0.0;      // smallest C with norm <= C*(1+lambda)^{-alpha}
  double alpha = 0.0;         // claimed exponent the constant refers to
  double fit_residual = 0.0;  // max |log norm - fit| over fitted points
  bool all_zero = false;      // sweep vanished; slope is meaningless
};

// Least-squares slope of log(norm) vs log(1+lambda).  Only lambda >= 10
// participates (small lambda sits on the constant plateau), and of those
// points only the upper half by index, so the fit sees the tail behaviour.
inline DecayFit fit_decay(std::string name, std::vector<double> lambdas,
                          std::vector<double> norms, double alpha = 0.0) {
  if (lambdas.size() != norms.size())
    throw Error("fit_decay: grid/value length mismatch");
  DecayFit out;
  out.name = std::move(name);
  out.lambdas = std::move(lambdas);
  out.norms = std::move(norms);
  out.alpha = alpha;

  double top = 0.0;
  for (double v : out.norms) top = std::max(top, v);
  if (top <= 0.0) {
    out.all_zero = true;
    return out;
  }
  for (std::size_t i = 0; i < out.norms.size(); ++i)
    out.constant = std::max(
        out.constant, out.norms[i] * std::pow(1.0 + out.lambdas[i], alpha));

  std::vector<std::size_t> tail;
  for (std::size_t i = 0; i < out.lambdas.size(); ++i)
    if (out.lambdas[i] >= 10.0 && out.norms[i] > 1e-300 * top)
      tail.push_back(i);
  if (tail.size() >= 2) tail.erase(tail.begin(), tail.begin() + tail.size() / 2);
  if (tail.size() < 2) {
    // grid too short for a tail fit; fall back to every usable point
    tail.clear();
    for (std::size_t i = 0; i < out.lambdas.size(); ++i)
      if (out.norms[i] > 1e-300 * top) tail.push_back(i);
  }
  if (tail.size() < 2) {
    out.all_zero = true;
    return out;
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i : tail) {
    const double x = std::log1p(out.lambdas[i]);
    const double y = std::log(out.norms[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = double(tail.size());
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) {
    out.all_zero = true;
    return out;
  }
  out.slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - out.slope * sx) / n;
  for (std::size_t i : tail) {
    const double x = std::log1p(out.lambdas[i]);
    const double y = std::log(out.norms[i]);
    out.fit_residual =
        std::max(out.fit_residual, std::abs(y - (out.slope * x + intercept)));
  }
  return out;
}

inline std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (count < 2 || lo <= 0.0 || hi <= lo)
    throw Error("log_grid: need count >= 2 and 0 < lo < hi");
  std::vector<double> g(count);
  const double step = (std::log(hi) - std::log(lo)) / double(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    g[i] = std::exp(std::log(lo) + step * double(i));
  return g;
}

}  // namespace modkk
