#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "alearn/dyadic.hpp"
#include "alearn/problems.hpp"
#include "alearn/rng.hpp"

namespace alearn {

/// A classifier returns +1 or -1.
using Classifier = std::function<int(std::span<const double>)>;

/// sign(f) with sign(0) = +1.
Classifier sign_classifier(PiecewiseConstantFn f);

/// R(f) - R* = integral of |eta| over {sign f != sign eta}, Pi-weighted midpoint quadrature.
double excess_risk(const Classifier& f, const Problem& p, int quad_level);
/// As above with quad_level raised to at least f.level() + 4.
double excess_risk(const PiecewiseConstantFn& f, const Problem& p, int quad_level);

/// Pi{sign f != sign eta}.
double disagreement_mass(const Classifier& f, const Problem& p, int quad_level);

struct MonteCarloEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Mean of 1{f(X) != Y} - 1{sign eta(X) != Y} over n fresh draws.
MonteCarloEstimate empirical_excess_risk(const Classifier& f, const Problem& p, std::size_t n, Rng& rng);

/// Least-squares line through (x, y) pairs.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_ = 0.0;  ///< standard error of the slope
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// log(risk) against log(N). Needs >= 4 budgets with positive risk.
LineFit fit_rate(const std::vector<std::pair<double, double>>& points);

/// Shifted-threshold family f_t = sign(eta - t) and the scaling content of the comparison inequalities.
struct ComparisonReport {
  std::vector<double> t;
  std::vector<double> excess;
  std::vector<double> disagreement;
  LineFit excess_vs_deviation;     ///< log excess vs log sup |f_t - eta| = log t
  LineFit excess_vs_disagreement;  ///< log excess vs log disagreement mass
  bool passed = false;
};
ComparisonReport check_comparison(const Problem& p, const std::vector<double>& ts, int quad_level);

struct Assumption2Report {
  double min_ratio = 1.0;
  int evaluated = 0;
  int skipped = 0;  ///< (m, t) pairs with identically zero residual, ratio taken as 1
  int grid_level = 0;
};

/// min over (m, t) of [int_A (eta - bar eta_m)^2 dPi(.|A)] / sup_A (eta - bar eta_m)^2 where
/// A = union of level-m cubes meeting {|eta| <= t}. Sup over the grid nodes at quad_level.
Assumption2Report check_assumption2(const Problem& p, const std::vector<int>& levels, const std::vector<double>& thresholds,
                                    int quad_level);

}  // namespace alearn
