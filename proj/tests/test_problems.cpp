#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "alearn/minimax.hpp"
#include "alearn/problems.hpp"
#include "doctest.h"

using namespace alearn;

namespace {
// Pi(|eta| <= t) by midpoint quadrature at the given level.
double noise_mass(const Problem& p, double t, int level) {
  double mass = 0.0;
  for (const auto& c : DyadicCover::full(p.dim, level).cubes()) {
    auto x = c.center();
    if (std::abs(p.eta(x)) <= t) mass += p.marginal->cube_mass(level, c.key());
  }
  return mass;
}
}  // namespace

TEST_CASE("pi_measure examples") {
  auto ramp = find_problem("ramp1d");
  for (int m = 0; m <= 6; ++m) CHECK(pi_measure(ramp, DyadicCover::full(1, m)) == doctest::Approx(1.0).epsilon(1e-12));
  auto flat2 = constant_problem(0.3, 2);
  CHECK(pi_measure(flat2, DyadicCover(2, 3, std::vector<std::uint64_t>{5})) == doctest::Approx(0.015625));
  MinimaxFamily fam(make_bump_params(1, 16, 1.0, 1.0));
  auto mm = fam.problem(fam.all_ones());
  for (const auto& cell : fam.geom->ordered_cells) {
    if (!fam.geom->in_S(cell.key())) continue;
    CHECK(pi_measure(mm, cell) == doctest::Approx(1.0 / 16.0).epsilon(1e-9));
  }
}

TEST_CASE("conditional sampler moments") {
  auto p = find_problem("ramp1d");
  DyadicCover half(1, 1, std::vector<std::uint64_t>{0});
  Rng rng(123);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    auto x = sample_x(p, half, rng);
    CHECK_MESSAGE(half.contains(x), "draw left the cover");
    sum += x[0];
  }
  CHECK(std::abs(sum / n - 0.25) < 0.005);
}

TEST_CASE("zero-measure cover is rejected") {
  auto p = find_problem("ramp1d");
  Rng rng(1);
  CHECK_THROWS(sample_x(p, DyadicCover::empty(1, 2), rng));
  // gradient2d has full support; the minimax marginal leaves cubes with no mass.
  MinimaxFamily fam(make_bump_params(1, 16, 1.0, 1.0));
  auto mm = fam.problem(fam.all_ones());
  DyadicCover null_cover = DyadicCover::empty(1, 4);
  for (std::uint64_t k = 0; k < 16; ++k) {
    if (mm.marginal->cube_mass(4, k) == 0.0) {
      null_cover = DyadicCover(1, 4, std::vector<std::uint64_t>{k});
      break;
    }
  }
  if (!null_cover.empty()) CHECK_THROWS(sample_x(mm, null_cover, rng));
}

TEST_CASE("cube frequencies pass a chi-square test") {
  for (const auto& p : builtin_problems()) {
    CAPTURE(p.name);
    const int m = 2;
    auto full = DyadicCover::full(p.dim, 0);
    ConditionalSampler sampler(p, full);
    Rng rng(derive_seed(77, 0, 0, StreamKind::kAux));
    std::size_t cells = std::size_t{1} << (p.dim * m);
    std::vector<double> counts(cells, 0.0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) counts[key_of_point(sampler.draw(rng), m)] += 1.0;
    double chi2 = 0.0;
    int df = -1;
    for (std::size_t k = 0; k < cells; ++k) {
      double expected = n * p.marginal->cube_mass(m, k);
      if (expected == 0.0) {
        CHECK(counts[k] == 0.0);
        continue;
      }
      chi2 += (counts[k] - expected) * (counts[k] - expected) / expected;
      ++df;
    }
    if (df > 0) {
      boost::math::chi_squared dist(df);
      CHECK(chi2 <= boost::math::quantile(dist, 0.99));
    }
  }
}

TEST_CASE("uniform marginal cube frequencies match 2^-dm within 3 sigma") {
  auto p = constant_problem(0.0, 2);
  auto full = DyadicCover::full(2, 0);
  Rng rng(5);
  std::vector<int> counts(16, 0);
  const int n = 50000;
  for (int i = 0; i < n; ++i) ++counts[key_of_point(sample_x(p, full, rng), 2)];
  double pr = 1.0 / 16.0, sd = std::sqrt(n * pr * (1 - pr));
  for (int c : counts) CHECK(std::abs(c - n * pr) <= 3.0 * sd + 1.0);
}

TEST_CASE("sample_y follows (1 + eta) / 2") {
  Rng rng(8);
  Point x{0.4};
  auto plus = constant_problem(1.0);
  auto minus = constant_problem(-1.0);
  auto zero = constant_problem(0.0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    CHECK(sample_y(plus, x, rng) == 1);
    CHECK(sample_y(minus, x, rng) == -1);
    sum += sample_y(zero, x, rng);
  }
  CHECK(std::abs(sum / n) < 0.01);
  auto ramp = find_problem("ramp1d");
  Point x8{0.9};
  sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_y(ramp, x8, rng);
  CHECK(std::abs(sum / n - 0.8) < 0.01);
}

TEST_CASE("catalog contents and declared constants") {
  auto names = problem_names();
  for (const char* want : {"ramp1d", "tent1d", "gradient2d", "convex1d", "minimax"}) {
    CHECK(std::find(names.begin(), names.end(), want) != names.end());
  }
  for (const auto& p : builtin_problems()) {
    CAPTURE(p.name);
    CHECK_NOTHROW(validate(p));
    CHECK(p.beta > 0.0);
    CHECK(p.beta <= 1.0);
    CHECK(p.u1 <= p.u2);
    if (p.upper_bound_regime) CHECK(p.beta * p.gamma <= p.dim);
  }
  CHECK_THROWS(find_problem("no_such_problem"));
  auto ramp = find_problem("ramp1d");
  CHECK(ramp.noise_B == 1.0);
  CHECK(ramp.holder_B1 == 2.0);
}

TEST_CASE("ramp1d noise mass equals t") {
  auto p = find_problem("ramp1d");
  for (double t : {0.1, 0.25, 0.5, 0.9}) CHECK(noise_mass(p, t, 14) == doctest::Approx(t).epsilon(1e-3));
}

TEST_CASE("ramp1d Lipschitz constant is 2") {
  auto p = find_problem("ramp1d");
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Point a{i / 1000.0}, b{(i + 1) / 1000.0};
    worst = std::max(worst, std::abs(p.eta(a) - p.eta(b)) / 1e-3);
  }
  CHECK(worst == doctest::Approx(2.0));
}

TEST_CASE("tent1d Bayes risk is one quarter") {
  auto p = find_problem("tent1d");
  const int level = 14;
  double risk = 0.0;
  for (const auto& c : DyadicCover::full(1, level).cubes()) risk += (1.0 - std::abs(p.eta(c.center()))) / 2.0 * c.volume();
  CHECK(risk == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("low-noise certificate of every built-in problem") {
  for (const auto& p : builtin_problems()) {
    CAPTURE(p.name);
    int level = p.dim == 1 ? 14 : 8;
    // Midpoint quadrature misplaces at most a few boundary cells.
    double tol = 4.0 * std::ldexp(1.0, -level);
    for (int i = 1; i <= 10; ++i) {
      double t = 0.05 * i;
      CAPTURE(t);
      CHECK(noise_mass(p, t, level) <= p.noise_B * std::pow(t, p.gamma) + tol);
    }
  }
}

TEST_CASE("regularity certificate of every built-in problem") {
  for (const auto& p : builtin_problems()) {
    CAPTURE(p.name);
    // The annulus family is regular from its grid level on; coarser cubes straddle the empty ring.
    int start = p.name == "minimax" ? 4 : 0;
    for (int m = start; m <= 10 && p.dim * m <= 16; ++m) {
      double scale = std::ldexp(1.0, -p.dim * m);
      for (auto key : DyadicCover::full(p.dim, m).keys()) {
        if (p.marginal->cube_mass(m, key) == 0.0) continue;
        double mass = p.marginal->cube_mass(m, key);
        CHECK(mass >= p.u1 * scale * (1 - 1e-9));
        CHECK(mass <= p.u2 * scale * (1 + 1e-9));
      }
    }
  }
}

TEST_CASE("eta values stay in [-1, 1]") {
  Rng rng(4);
  for (const auto& p : builtin_problems()) {
    Point x(p.dim);
    for (int i = 0; i < 2000; ++i) {
      for (auto& xi : x) xi = rng.uniform();
      double v = p.eta(x);
      CHECK(v >= -1.0);
      CHECK(v <= 1.0);
    }
  }
}
