#pragma once

// Least-squares line fits for log-log exponent estimation.

#include <cmath>
#include <vector>

#include "zklab/core.hpp"

namespace zklab {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double ci_lo = 0.0;  // slope +- 2 standard errors
  double ci_hi = 0.0;
  int n = 0;
};

inline FitResult ols_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw ContractViolation("ols_fit: need at least two matched points");
  const int n = static_cast<int>(xs.size());
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += xs[static_cast<size_t>(i)];
    my += ys[static_cast<size_t>(i)];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = xs[static_cast<size_t>(i)] - mx;
    sxx += dx * dx;
    sxy += dx * (ys[static_cast<size_t>(i)] - my);
  }
  if (sxx == 0.0) throw ContractViolation("ols_fit: degenerate abscissae");
  FitResult f;
  f.n = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r =
        ys[static_cast<size_t>(i)] - (f.intercept + f.slope * xs[static_cast<size_t>(i)]);
    sse += r * r;
  }
  if (n > 2) f.stderr_slope = std::sqrt(sse / (n - 2) / sxx);
  f.ci_lo = f.slope - 2.0 * f.stderr_slope;
  f.ci_hi = f.slope + 2.0 * f.stderr_slope;
  return f;
}

// Fit y ~ C * x^slope from positive samples (log-log OLS).
inline FitResult loglog_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> lx, ly;
  lx.reserve(xs.size());
  ly.reserve(ys.size());
  for (size_t i = 0; i < xs.size() && i < ys.size(); ++i) {
    if (xs[i] > 0.0 && ys[i] > 0.0) {
      lx.push_back(std::log2(xs[i]));
      ly.push_back(std::log2(ys[i]));
    }
  }
  if (lx.size() < 2) throw DegenerateInputError("loglog_fit: fewer than two positive samples");
  return ols_fit(lx, ly);
}

}  // namespace zklab
