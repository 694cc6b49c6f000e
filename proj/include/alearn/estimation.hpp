#pragma once

#include <span>
#include <vector>

#include "alearn/dyadic.hpp"
#include "alearn/problems.hpp"

namespace alearn {

/// Known-marginal histogram estimator on the cubes of level m meeting A:
/// value = sum_j Y_j 1_R(X_j) / (N * Pi(R n A) / Pi(A)), clamped to [-1, 1], 0 off A.
PiecewiseConstantFn fit_histogram(std::span<const LabeledSample> sample, int m, const DyadicCover& a, const Problem& p);

/// Per-cube mean label (0 on empty cubes); the empirical least-squares fit over F_m.
PiecewiseConstantFn empirical_mean_fit(std::span<const LabeledSample> sample, int m, const DyadicCover& a);

/// Mean of (y - f(x))^2.
double empirical_risk(const PiecewiseConstantFn& f, std::span<const LabeledSample> sample);

/// Empirical risk of empirical_mean_fit at each level in `levels`, from per-cube label sums.
std::vector<double> fitted_risks(std::span<const LabeledSample> sample, std::span<const int> levels);

/// Per-cube Pi-weighted average of eta by midpoint quadrature at quad_level >= m + 4.
PiecewiseConstantFn l2_projection(const Problem& p, int m, int quad_level);
inline PiecewiseConstantFn l2_projection(const Problem& p, int m) { return l2_projection(p, m, m + 6); }

/// E(eta - bar eta_m)^2 under Pi, same quadrature as l2_projection.
double squared_bias(const Problem& p, int m, int quad_level);

struct BernsteinBound {
  double probability;  ///< right-hand side of the union-Bernstein bound
  double threshold;    ///< deviation level t sqrt(2^{dm} Pi(A) / (u1 N))
};

/// Union-bound Bernstein tail for sup |eta_hat_{m,A} - bar eta_m| over the d_m cubes meeting A.
BernsteinBound bernstein_deviation(int m, double a_mass, std::size_t n, double t, double u1, int dim, std::size_t d_m);

/// Number of level-m cubes meeting A with positive Pi-mass.
std::size_t restricted_dimension(const Problem& p, int m, const DyadicCover& a);

}  // namespace alearn
