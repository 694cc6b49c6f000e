#include "alearn/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace alearn {

Classifier sign_classifier(PiecewiseConstantFn f) {
  return [f = std::move(f)](std::span<const double> x) { return sign_of(f(x)); };
}

namespace {

/// Calls visit(center, mass) for every positive-mass cell of the level-`level` grid.
template <typename Visit>
void for_each_cell(const Problem& p, int level, Visit&& visit) {
  if (level > max_level(p.dim)) throw ArgumentError("quadrature level too fine");
  const std::uint64_t cells = std::uint64_t{1} << (p.dim * level);
  Point c(static_cast<std::size_t>(p.dim));
  const std::uint64_t mask = (std::uint64_t{1} << level) - 1;
  for (std::uint64_t k = 0; k < cells; ++k) {
    const double w = p.marginal->cube_mass(level, k);
    if (w <= 0.0) continue;
    std::uint64_t key = k;
    for (int i = p.dim - 1; i >= 0; --i) {
      c[i] = std::ldexp(static_cast<double>(key & mask) + 0.5, -level);
      key >>= level;
    }
    visit(std::span<const double>(c), w);
  }
}

}  // namespace

double excess_risk(const Classifier& f, const Problem& p, int quad_level) {
  double total = 0.0;
  for_each_cell(p, quad_level, [&](std::span<const double> x, double w) {
    const double e = p.eta(x);
    if (f(x) != sign_of(e)) total += std::abs(e) * w;
  });
  return total;
}

double excess_risk(const PiecewiseConstantFn& f, const Problem& p, int quad_level) {
  return excess_risk(sign_classifier(f), p, std::max(quad_level, f.level() + 4));
}

double disagreement_mass(const Classifier& f, const Problem& p, int quad_level) {
  double total = 0.0;
  for_each_cell(p, quad_level, [&](std::span<const double> x, double w) {
    if (f(x) != sign_of(p.eta(x))) total += w;
  });
  return total;
}

MonteCarloEstimate empirical_excess_risk(const Classifier& f, const Problem& p, std::size_t n, Rng& rng) {
  if (n < 2) throw ArgumentError("Monte Carlo estimate needs n >= 2");
  const ConditionalSampler sampler(p, DyadicCover::full(p.dim, 0));
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = sampler.draw(rng);
    const double e = p.eta(x);
    const int y = rng.rademacher(0.5 * (1.0 + e));
    const double diff = static_cast<double>(f(x) != y) - static_cast<double>(sign_of(e) != y);
    sum += diff;
    sum_sq += diff * diff;
  }
  const double nn = static_cast<double>(n);
  const double mean = sum / nn;
  const double var = std::max(0.0, (sum_sq - nn * mean * mean) / (nn - 1.0));
  return MonteCarloEstimate{mean, std::sqrt(var / nn)};
}

// ---------------------------------------------------------------------------

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ArgumentError("line fit needs matching inputs of size >= 2");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ArgumentError("line fit needs distinct abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.stderr_ = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return fit;
}

LineFit fit_rate(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) throw ArgumentError("rate fit needs at least 4 budgets");
  std::vector<double> lx, ly;
  for (const auto& [n, risk] : points) {
    if (!(risk > 0.0) || !(n > 0.0)) throw ArgumentError("rate fit needs positive budgets and risks");
    lx.push_back(std::log(n));
    ly.push_back(std::log(risk));
  }
  return fit_line(lx, ly);
}

ComparisonReport check_comparison(const Problem& p, const std::vector<double>& ts, int quad_level) {
  ComparisonReport r;
  std::vector<double> log_t, log_excess, log_dis;
  for (double t : ts) {
    if (!(t > 0.0)) continue;
    const Classifier f = [&p, t](std::span<const double> x) { return sign_of(p.eta(x) - t); };
    const double ex = excess_risk(f, p, quad_level);
    const double dis = disagreement_mass(f, p, quad_level);
    r.t.push_back(t);
    r.excess.push_back(ex);
    r.disagreement.push_back(dis);
    if (ex > 0.0 && dis > 0.0) {
      log_t.push_back(std::log(t));
      log_excess.push_back(std::log(ex));
      log_dis.push_back(std::log(dis));
    }
  }
  if (log_t.size() < 2) return r;
  r.excess_vs_deviation = fit_line(log_t, log_excess);
  r.excess_vs_disagreement = fit_line(log_dis, log_excess);
  const double g = p.gamma;
  r.passed = r.excess_vs_deviation.slope >= (1.0 + g) - 0.1 &&
             r.excess_vs_disagreement.slope >= (1.0 + g) / g - 0.1 &&
             r.excess_vs_disagreement.slope <= (1.0 + g) / g + 0.3;
  return r;
}

// ---------------------------------------------------------------------------

Assumption2Report check_assumption2(const Problem& p, const std::vector<int>& levels, const std::vector<double>& thresholds,
                                    int quad_level) {
  Assumption2Report report;
  report.grid_level = quad_level;
  const int dim = p.dim;
  for (int m : levels) {
    if (quad_level < m + 4) throw ArgumentError("quadrature level must be at least m + 4");
    struct CubeStats {
      double mass = 0.0;
      double mean_sq = 0.0;
      double sup_sq = 0.0;
      double min_abs = 0.0;
    };
    std::vector<CubeStats> stats;
    const std::uint64_t cubes = std::uint64_t{1} << (dim * m);
    const int sub = quad_level - m;
    const std::uint64_t per_axis = (std::uint64_t{1} << sub) + 1;
    Point x(static_cast<std::size_t>(dim));
    for (std::uint64_t k = 0; k < cubes; ++k) {
      CubeStats s;
      double w_eta = 0.0, w_eta2 = 0.0;
      for (auto cell : descendant_keys(dim, m, k, quad_level)) {
        const double w = p.marginal->cube_mass(quad_level, cell);
        if (w <= 0.0) continue;
        const double e = p.eta(CubeIndex::from_key(dim, quad_level, cell).center());
        s.mass += w;
        w_eta += w * e;
        w_eta2 += w * e * e;
      }
      if (s.mass <= 0.0) {
        stats.push_back(s);
        continue;
      }
      const double mean = w_eta / s.mass;
      s.mean_sq = std::max(0.0, w_eta2 / s.mass - mean * mean);
      // Sup and min over the grid nodes of the closed cube.
      const auto cube = CubeIndex::from_key(dim, m, k);
      std::vector<std::uint64_t> idx(static_cast<std::size_t>(dim), 0);
      s.min_abs = std::numeric_limits<double>::infinity();
      for (;;) {
        for (int i = 0; i < dim; ++i) x[i] = std::ldexp(static_cast<double>((std::uint64_t{cube.coords[i]} << sub) + idx[i]), -quad_level);
        const double e = p.eta(x);
        s.sup_sq = std::max(s.sup_sq, (e - mean) * (e - mean));
        s.min_abs = std::min(s.min_abs, std::abs(e));
        int i = dim - 1;
        while (i >= 0 && ++idx[i] == per_axis) idx[i--] = 0;
        if (i < 0) break;
      }
      stats.push_back(s);
    }
    for (double t : thresholds) {
      double mass = 0.0, weighted = 0.0, sup_sq = 0.0;
      for (const auto& s : stats) {
        if (s.mass <= 0.0 || s.min_abs > t) continue;
        mass += s.mass;
        weighted += s.mass * s.mean_sq;
        sup_sq = std::max(sup_sq, s.sup_sq);
      }
      if (mass <= 0.0) continue;
      // Rounding residue of a constant eta counts as an identically zero residual.
      if (sup_sq <= 1e-24) {
        ++report.skipped;
        continue;
      }
      ++report.evaluated;
      report.min_ratio = std::min(report.min_ratio, (weighted / mass) / sup_sq);
    }
  }
  return report;
}

}  // namespace alearn
