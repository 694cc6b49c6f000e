#include <cmath>

#include "alearn/estimation.hpp"
#include "alearn/minimax.hpp"
#include "doctest.h"

using namespace alearn;

namespace {
std::vector<LabeledSample> draw(const Problem& p, const DyadicCover& a, std::size_t n, Rng& rng) {
  ConditionalSampler s(p, a);
  return draw_labeled(p, s, n, rng);
}

// L2(Pi) distance squared between eta and f by midpoint quadrature.
double l2_dist(const Problem& p, const PiecewiseConstantFn& f, int level) {
  double acc = 0.0;
  for (const auto& c : DyadicCover::full(p.dim, level).cubes()) {
    double w = p.marginal->cube_mass(level, c.key());
    if (w == 0.0) continue;
    auto x = c.center();
    double r = p.eta(x) - f(x);
    acc += w * r * r;
  }
  return acc;
}
}  // namespace

TEST_CASE("histogram value on a single cube") {
  auto p = constant_problem(0.0);
  DyadicCover a(1, 0, std::vector<std::uint64_t>{0});
  std::vector<LabeledSample> s{{{0.1}, 1}, {{0.2}, 1}, {{0.7}, -1}, {{0.9}, 1}};
  auto f = fit_histogram(s, 0, a, p);
  CHECK(f.coeff(0) == doctest::Approx(0.5));
}

TEST_CASE("histogram of noiseless positive labels is 1") {
  auto p = constant_problem(1.0);
  Rng rng(1);
  auto s = draw(p, DyadicCover::full(1, 0), 100, rng);
  auto f = fit_histogram(s, 0, DyadicCover::full(1, 0), p);
  CHECK(f.coeff(0) == doctest::Approx(1.0));
}

TEST_CASE("histogram on a restricted cover uses conditional masses and is zero off the cover") {
  auto p = find_problem("ramp1d");
  DyadicCover a(1, 2, std::vector<std::uint64_t>{1, 2});
  std::vector<LabeledSample> s{{{0.3}, 1}, {{0.3}, 1}, {{0.6}, -1}, {{0.4}, 1}};
  auto f = fit_histogram(s, 2, a, p);
  // Pi_A of each cube is 1/2, N = 4: cube 1 has labels (1, 1, 1) and cube 2 has -1.
  CHECK(f.coeff(1) == doctest::Approx(1.0));  // 3 / 2 clamps to 1
  CHECK(f.coeff(2) == doctest::Approx(-0.5));
  CHECK(f.coeff(0) == 0.0);
  CHECK(f.coeff(3) == 0.0);
  CHECK_THROWS(fit_histogram(s, 2, DyadicCover::empty(1, 2), p));
}

TEST_CASE("histogram of pure noise stays within 4 sqrt(2^m / N)") {
  auto p = constant_problem(0.0);
  const std::size_t n = 10000;
  const int m = 2;
  const double bound = 4.0 * std::sqrt(std::ldexp(1.0, m) / n);
  int good = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Rng rng(derive_seed(3, rep, 0, StreamKind::kAux));
    auto s = draw(p, DyadicCover::full(1, 0), n, rng);
    auto f = fit_histogram(s, m, DyadicCover::full(1, 0), p);
    bool ok = true;
    for (std::uint64_t k = 0; k < 4; ++k) ok = ok && std::abs(f.coeff(k)) <= bound;
    good += ok ? 1 : 0;
  }
  CHECK(good >= 99);
}

TEST_CASE("empirical_mean_fit examples") {
  std::vector<LabeledSample> s{{{0.1}, 1}, {{0.2}, -1}, {{0.8}, 1}};
  auto f = empirical_mean_fit(s, 2, DyadicCover::full(1, 2));
  CHECK(f.coeff(0) == 0.0);
  CHECK(f.coeff(1) == 0.0);  // empty cube
  CHECK(f.coeff(3) == 1.0);
}

TEST_CASE("empirical_mean_fit minimizes the empirical risk over F_m") {
  Rng rng(17);
  auto p = find_problem("tent1d");
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + trial % 3;
    auto s = draw(p, DyadicCover::full(1, 0), 5 + trial, rng);
    auto fit = empirical_mean_fit(s, m, DyadicCover::full(1, 0));
    double best = empirical_risk(fit, s);
    for (int c = 0; c < 100; ++c) {
      std::vector<double> vals(std::size_t{1} << m);
      for (auto& v : vals) v = rng.uniform(-1.0, 1.0);
      CHECK(best <= empirical_risk(PiecewiseConstantFn::from_values(1, m, vals), s) + 1e-12);
    }
  }
}

TEST_CASE("empirical_risk examples") {
  std::vector<LabeledSample> all_plus{{{0.1}, 1}, {{0.5}, 1}};
  std::vector<LabeledSample> mixed{{{0.1}, 1}, {{0.5}, -1}};
  auto zero = PiecewiseConstantFn::constant(1, 0, 0.0);
  auto one = PiecewiseConstantFn::constant(1, 0, 1.0);
  CHECK(empirical_risk(zero, mixed) == doctest::Approx(1.0));
  CHECK(empirical_risk(one, all_plus) == doctest::Approx(0.0));
  CHECK(empirical_risk(one, mixed) == doctest::Approx(2.0));
}

TEST_CASE("fitted_risks agrees with the explicit fit") {
  Rng rng(2);
  auto p = find_problem("gradient2d");
  auto s = draw(p, DyadicCover::full(2, 0), 500, rng);
  std::vector<int> levels{0, 1, 2, 3};
  auto risks = fitted_risks(s, levels);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    auto f = empirical_mean_fit(s, levels[i], DyadicCover::full(2, 0));
    CHECK(risks[i] == doctest::Approx(empirical_risk(f, s)).epsilon(1e-12));
  }
}

TEST_CASE("l2_projection examples") {
  auto c = constant_problem(0.37);
  auto f = l2_projection(c, 3);
  for (const auto& [k, v] : f.coeffs()) CHECK(v == doctest::Approx(0.37));
  auto ramp = find_problem("ramp1d");
  auto g = l2_projection(ramp, 1, 12);
  CHECK(g.coeff(0) == doctest::Approx(-0.5));
  CHECK(g.coeff(1) == doctest::Approx(0.5));
  CHECK_THROWS(l2_projection(ramp, 4, 6));
}

TEST_CASE("l2_projection beats perturbed candidates on the minimax family") {
  MinimaxFamily fam(make_bump_params(1, 8, 1.0, 1.0));
  auto p = fam.problem(fam.all_ones());
  const int m = 3, quad = 12;
  auto proj = l2_projection(p, m, quad);
  double best = l2_dist(p, proj, quad);
  Rng rng(4);
  for (int c = 0; c < 200; ++c) {
    std::vector<double> vals(8);
    for (std::size_t k = 0; k < 8; ++k) vals[k] = std::clamp(proj.coeff(k) + rng.uniform(-0.05, 0.05), -1.0, 1.0);
    CHECK(best <= l2_dist(p, PiecewiseConstantFn::from_values(1, m, vals), quad) + 1e-15);
  }
}

TEST_CASE("projection residual is orthogonal to F_m") {
  for (const char* name : {"gradient2d", "tent1d", "convex1d"}) {
    auto p = find_problem(name);
    const int m = 2, quad = p.dim == 1 ? 12 : 8;
    auto proj = l2_projection(p, m, quad);
    for (auto k : DyadicCover::full(p.dim, m).keys()) {
      double acc = 0.0;
      for (auto sub : descendant_keys(p.dim, m, k, quad)) {
        auto x = CubeIndex::from_key(p.dim, quad, sub).center();
        acc += p.marginal->cube_mass(quad, sub) * (p.eta(x) - proj(x));
      }
      CHECK(std::abs(acc) < 1e-6);
    }
  }
}

TEST_CASE("squared bias of the tent is 4^-m / 3") {
  auto p = find_problem("tent1d");
  for (int m = 1; m <= 6; ++m) CHECK(squared_bias(p, m, m + 8) == doctest::Approx(std::pow(4.0, -m) / 3.0).epsilon(1e-3));
}

TEST_CASE("histogram estimator is unbiased given positive counts") {
  auto p = find_problem("ramp1d");
  const int m = 2, reps = 10000;
  const std::size_t n = 2000;
  auto proj = l2_projection(p, m, 14);
  std::vector<double> sum(4, 0.0), sumsq(4, 0.0);
  auto full = DyadicCover::full(1, 0);
  ConditionalSampler sampler(p, full);
  for (int r = 0; r < reps; ++r) {
    Rng rng(derive_seed(99, r, 0, StreamKind::kAux));
    auto s = draw_labeled(p, sampler, n, rng);
    auto f = fit_histogram(s, m, full, p);
    for (std::uint64_t k = 0; k < 4; ++k) {
      sum[k] += f.coeff(k);
      sumsq[k] += f.coeff(k) * f.coeff(k);
    }
  }
  for (std::uint64_t k = 0; k < 4; ++k) {
    double mean = sum[k] / reps;
    double se = std::sqrt((sumsq[k] / reps - mean * mean) / reps);
    CAPTURE(k);
    CHECK(std::abs(mean - proj.coeff(k)) <= 3.0 * se);
  }
}

TEST_CASE("Bernstein bound examples") {
  auto b = bernstein_deviation(2, 1.0, 100000, 100.0, 1.0, 1, 4);
  CHECK(b.probability < 1e-10);
  double prev = 1e300;
  for (double t = 0.5; t < 20.0; t += 0.5) {
    auto r = bernstein_deviation(3, 0.5, 4096, t, 1.0, 1, 8);
    CHECK(r.probability <= prev);
    prev = r.probability;
  }
  auto e = bernstein_deviation(3, 1.0, 4096, 2.0, 1.0, 1, 8);
  double scale = std::sqrt(8.0 / 4096.0);
  CHECK(e.threshold == doctest::Approx(2.0 * scale));
  CHECK(e.probability == doctest::Approx(16.0 * std::exp(-4.0 / (2.0 * (1.0 + 2.0 / 3.0 * scale)))));
  CHECK_THROWS(bernstein_deviation(3, 1.0, 4096, 0.0, 1.0, 1, 8));
}

TEST_CASE("Bernstein coverage on ramp1d") {
  auto p = find_problem("ramp1d");
  const int m = 3;
  const std::size_t n = 4096;
  const double t = 2.0 * std::log(static_cast<double>(n));
  auto full = DyadicCover::full(1, 0);
  auto bound = bernstein_deviation(m, 1.0, n, t, p.u1, 1, 8);
  auto proj = l2_projection(p, m, 14);
  ConditionalSampler sampler(p, full);
  int exceed = 0;
  for (int r = 0; r < 200; ++r) {
    Rng rng(derive_seed(5, r, 0, StreamKind::kAux));
    auto f = fit_histogram(draw_labeled(p, sampler, n, rng), m, full, p);
    double sup = 0.0;
    for (std::uint64_t k = 0; k < 8; ++k) sup = std::max(sup, std::abs(f.coeff(k) - proj.coeff(k)));
    exceed += sup > bound.threshold ? 1 : 0;
  }
  CHECK(exceed <= 10);
}

TEST_CASE("restricted dimension bound") {
  Rng rng(31);
  for (const auto& p : builtin_problems()) {
    CAPTURE(p.name);
    for (int trial = 0; trial < 20; ++trial) {
      const int level = p.dim == 1 ? 4 : 2;
      std::vector<std::uint64_t> keys;
      for (std::uint64_t k = 0; k < (std::uint64_t{1} << (p.dim * level)); ++k) {
        if (rng.uniform() < 0.4) keys.push_back(k);
      }
      DyadicCover a(p.dim, level, keys);
      double mass = pi_measure(p, a);
      if (mass == 0.0) continue;
      for (int m = level; m <= level + 3; ++m) {
        double cap = std::ldexp(1.0, p.dim * m) * mass / p.u1;
        CHECK(static_cast<double>(restricted_dimension(p, m, a)) <= cap * (1 + 1e-9));
      }
    }
  }
}
