#pragma once

#include <cstddef>
#include <vector>

namespace artdir {

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation
/// (modified Lentz), absolute tolerance 1e-12.
double regularized_incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student's t with df degrees of freedom.
double student_t_cdf(double t, double df);

/// Linear-interpolation quantile (order statistic position (n-1)p) of a
/// sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double p);

double median(std::vector<double> values);

/// Silverman rule-of-thumb bandwidth: 0.9 min(sd, IQR/1.34) n^{-1/5}.
double silverman_bandwidth(const std::vector<double>& values);

/// Gaussian-kernel density estimate evaluated on a uniform grid over
/// [lo, hi] (grid_points samples, endpoints included).
std::vector<double> gaussian_kde(const std::vector<double>& values, double lo,
                                 double hi, std::size_t grid_points,
                                 double bandwidth);

}  // namespace artdir
