#include "artdir/stats.hpp"

#include "artdir/core.hpp"
#include "artdir/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace artdir {

namespace {

// Continued fraction for I_x(a,b) (Lentz's method). Converges for
// x < (a+1)/(a+b+2); the symmetry relation covers the rest.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-14;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DataError("regularized_incomplete_beta: a, b must be positive");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) {
    throw DataError("student_t_cdf: df must be positive");
  }
  const double x = df / (df + t * t);
  const double tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x);
  return t >= 0.0 ? 1.0 - tail : tail;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) {
    throw TooFewSamples("quantile_sorted: empty sample");
  }
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, 0.5);
}

double silverman_bandwidth(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (const double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (const double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const double iqr =
      quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

std::vector<double> gaussian_kde(const std::vector<double>& values, double lo,
                                 double hi, std::size_t grid_points,
                                 double bandwidth) {
  if (values.empty() || grid_points < 2) {
    throw TooFewSamples("gaussian_kde: need samples and >= 2 grid points");
  }
  // A degenerate bandwidth (identical samples) still has to produce a
  // spike resolvable on the grid.
  const double min_bw = (hi - lo) / (2.0 * static_cast<double>(grid_points));
  const double h = std::max(bandwidth, min_bw);
  const double norm =
      1.0 / (static_cast<double>(values.size()) * h * std::sqrt(2.0 * kPi));
  std::vector<double> out(grid_points, 0.0);
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) /
                              static_cast<double>(grid_points - 1);
    double acc = 0.0;
    for (const double v : values) {
      const double u = (x - v) / h;
      acc += std::exp(-0.5 * u * u);
    }
    out[i] = norm * acc;
  }
  return out;
}

}  // namespace artdir
