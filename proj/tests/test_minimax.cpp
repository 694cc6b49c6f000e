#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <set>

#include "alearn/minimax.hpp"
#include "doctest.h"

using namespace alearn;

namespace {
// Direct adaptive quadrature of the smooth-step integral, independent of the tabulated version.
double u_oracle(double x, int v) {
  const double a = std::ldexp(1.0, -v), b = 0.5;
  auto U = [&](double t) {
    if (t <= a || t >= b) return 0.0;
    return std::exp(-1.0 / ((b - t) * (t - a)));
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double den = GK::integrate(U, a, b, 15, 1e-14);
  if (x <= a) return 1.0;
  if (x >= b) return 0.0;
  return GK::integrate(U, x, b, 15, 1e-14) / den;
}

double l2(const Point& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}
}  // namespace

TEST_CASE("bump_u boundary values and monotonicity") {
  for (int v : {2, 3, 4, 6}) {
    CHECK(bump_u(0.0, v) == 1.0);
    CHECK(bump_u(std::ldexp(1.0, -v), v) == 1.0);
    CHECK(bump_u(0.5, v) == 0.0);
    CHECK(bump_u(0.9, v) == 0.0);
    double prev = 1.0;
    for (int i = 0; i <= 200; ++i) {
      double x = 0.5 * i / 200.0;
      double u = bump_u(x, v);
      CHECK(u <= prev + 1e-15);
      CHECK(u >= 0.0);
      prev = u;
    }
  }
  double a = bump_u(0.3, 3), b = bump_u(0.35, 3);
  CHECK(a > 0.0);
  CHECK(a < 1.0);
  CHECK(a > b);
}

TEST_CASE("bump_u agrees with adaptive quadrature") {
  for (int v : {3, 4}) {
    for (double x : {0.13, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.49}) {
      CAPTURE(v);
      CAPTURE(x);
      CHECK(bump_u(x, v) == doctest::Approx(u_oracle(x, v)).epsilon(1e-9));
    }
  }
}

TEST_CASE("bump_phi peak, support and radial monotonicity") {
  auto params = make_bump_params(2, 8, 1.0, 1.0);
  Point zero{0.0, 0.0};
  CHECK(bump_phi(zero, params) == doctest::Approx(params.holder_C));
  Point far{0.4, 0.4};
  CHECK(bump_phi(far, params) == 0.0);
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    Point x1{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
    Point x2{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
    if (l2(x1) <= l2(x2)) CHECK(bump_phi(x1, params) >= bump_phi(x2, params));
  }
}

TEST_CASE("constant chain of the construction") {
  for (int d : {1, 2, 3}) {
    auto p = make_bump_params(d, 8, 1.0, 1.0);
    CAPTURE(d);
    CHECK(p.v > p.r1);
    CHECK(std::ldexp(1.0, -p.r1) * std::sqrt(d) < std::ldexp(std::sqrt(d), -p.r2));
    CHECK(std::ldexp(std::sqrt(d), -p.r2) < 0.5);
    CHECK(p.m_cells >= 1);
    CHECK(p.m_cells <= std::pow(p.q, d));
    CHECK(p.m_cells * std::pow(p.q, -d) <= p.side_c * std::pow(p.q, -p.beta * p.gamma) + 1e-12);
    CHECK_NOTHROW(validate(p));
  }
  auto bad = make_bump_params(1, 16, 1.0, 1.0);
  bad.r1 = bad.v;
  CHECK_THROWS(validate(bad));
}

TEST_CASE("geometry ordering, sandwich and outer region") {
  for (int d : {1, 2}) {
    auto params = make_bump_params(d, 8, 1.0, 1.0);
    auto geom = make_geometry(params);
    CAPTURE(d);
    CHECK(geom.ordered_cells.size() == static_cast<std::size_t>(std::pow(8, d)));
    for (std::size_t i = 1; i < geom.ordered_cells.size(); ++i) {
      double a = l2(geom.ordered_cells[i - 1].center()), b = l2(geom.ordered_cells[i].center());
      CHECK(a <= b + 1e-15);
      if (std::abs(a - b) < 1e-15) CHECK(geom.ordered_cells[i - 1] < geom.ordered_cells[i]);
    }
    CHECK(geom.S.size() == static_cast<std::size_t>(params.m_cells));
    // r_S: largest corner distance over S.
    double r = 0.0;
    for (const auto& c : geom.S.cubes()) {
      Point corner(d);
      for (int i = 0; i < d; ++i) corner[i] = c.upper(i);
      r = std::max(r, l2(corner));
    }
    CHECK(geom.r_S == doctest::Approx(r));
    CHECK(radius_sandwich_k(geom, params) >= 1);
    // A0 cells stay clear of the outer ball: their nearest point is beyond outer_radius.
    for (const auto& c : geom.A0.cubes()) {
      Point nearest(d);
      for (int i = 0; i < d; ++i) nearest[i] = c.lower(i);
      CHECK(l2(nearest) >= geom.outer_radius - 1e-12);
    }
  }
}

TEST_CASE("eta_sigma at cell centers and on the shell") {
  MinimaxFamily fam(make_bump_params(1, 16, 1.0, 1.0));
  const auto& params = fam.params;
  const auto& geom = *fam.geom;
  Rng rng(3);
  SigmaHypothesis sigma{std::vector<int>(params.m_cells)};
  for (auto& s : sigma.sigma) s = rng.rademacher(0.5);
  for (int i = 0; i < params.m_cells; ++i) {
    auto z = geom.ordered_cells[i].center();
    double expect = sigma.sigma[i] * std::pow(params.q, -params.beta) * params.holder_C;
    CHECK(eta_sigma(z, sigma, geom, params) == doctest::Approx(expect));
    CHECK(sign_of(eta_sigma(z, sigma, geom, params)) == sigma.sigma[i]);
  }
  Point shell{geom.r_S};
  CHECK(eta_sigma(shell, sigma, geom, params) == doctest::Approx(0.0));
}

TEST_CASE("annulus marginal: hole, cell mass, total mass") {
  for (int d : {1, 2}) {
    MinimaxFamily fam(make_bump_params(d, 8, 1.0, 1.0));
    const auto& params = fam.params;
    const auto& geom = *fam.geom;
    CAPTURE(d);
    auto z = geom.ordered_cells[0].center();
    CHECK(marginal_density_p(z, geom, params) == 0.0);
    const int level = geom.grid_level + params.r1 + 2;
    double total = 0.0;
    for (const auto& c : DyadicCover::full(d, level).cubes()) total += marginal_density_p(c.center(), geom, params) * c.volume();
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    double cell_target = std::pow(params.q, -d);
    for (const auto& cell : geom.S.cubes()) {
      double mass = 0.0;
      for (auto k : descendant_keys(d, geom.grid_level, cell.key(), level)) {
        auto sub = CubeIndex::from_key(d, level, k);
        mass += marginal_density_p(sub.center(), geom, params) * sub.volume();
      }
      CHECK(mass == doctest::Approx(cell_target).epsilon(1e-8));
      CHECK(fam.marginal->cube_mass(geom.grid_level, cell.key()) == doctest::Approx(cell_target).epsilon(1e-12));
    }
    double outer = 0.0;
    for (auto k : geom.A0.keys()) outer += fam.marginal->cube_mass(geom.grid_level, k);
    CHECK(params.m_cells * cell_target + outer == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("Gilbert-Varshamov codes") {
  for (int m : {8, 16, 24}) {
    Rng rng(derive_seed(1, 0, 0, StreamKind::kGilbertVarshamov));
    auto code = gilbert_varshamov(m, rng);
    CAPTURE(m);
    CHECK(code.size() >= static_cast<std::size_t>(1 + std::floor(std::pow(2.0, m / 8.0))));
    CHECK(code[0].sigma == std::vector<int>(m, 1));
    int min_dist = (m + 7) / 8;
    for (std::size_t i = 0; i < code.size(); ++i) {
      for (int s : code[i].sigma) CHECK((s == 1 || s == -1));
      for (std::size_t j = i + 1; j < code.size(); ++j) CHECK(hamming(code[i], code[j]) >= min_dist);
    }
  }
  Rng rng(1);
  CHECK_THROWS(gilbert_varshamov(7, rng));
}

TEST_CASE("Bernoulli KL") {
  CHECK(bernoulli_kl(0.3, 0.3) == 0.0);
  double expect = 0.6 * std::log(0.6 / 0.5) + 0.4 * std::log(0.4 / 0.5);
  CHECK(bernoulli_kl(0.2, 0.0) == doctest::Approx(expect).epsilon(1e-12));
  // 0.6 ln 1.2 + 0.4 ln 0.8 = 0.0201355.
  CHECK(bernoulli_kl(0.2, 0.0) == doctest::Approx(0.0201355).epsilon(1e-5));
  CHECK_THROWS(bernoulli_kl(1.0, 0.0));
  CHECK_THROWS(bernoulli_kl(0.0, -1.0));
}

TEST_CASE("per-sample KL bound on random support points") {
  MinimaxFamily fam(make_bump_params(1, 16, 1.0, 1.0));
  const auto& geom = *fam.geom;
  Rng rng(6);
  auto code = gilbert_varshamov(fam.params.m_cells, rng);
  REQUIRE(code.size() >= 2);
  auto support = fam.marginal->support();
  ConditionalSampler sampler(fam.problem(code[0]), support);
  for (int i = 0; i < 10000; ++i) {
    auto x = sampler.draw(rng);
    double e1 = eta_sigma(x, code[1], geom, fam.params), e0 = eta_sigma(x, code[0], geom, fam.params);
    double kl = kl_per_sample(x, code[1], code[0], geom, fam.params);
    CHECK(kl >= 0.0);
    CHECK(kl <= 8.0 * (e1 - e0) * (e1 - e0) + 1e-15);
  }
  Point x{0.1};
  CHECK(kl_per_sample(x, code[0], code[0], geom, fam.params) == 0.0);
}

TEST_CASE("separation equals Hamming distance times cell mass") {
  MinimaxFamily fam(make_bump_params(1, 16, 1.0, 1.0));
  const auto& geom = *fam.geom;
  Rng rng(10);
  auto code = gilbert_varshamov(fam.params.m_cells, rng);
  double cell = 1.0 / fam.params.q;
  CHECK(separation(code[0], code[0], geom, fam.params) == 0.0);
  for (std::size_t i = 1; i < code.size(); ++i) {
    double s = separation(code[0], code[i], geom, fam.params);
    CHECK(s == doctest::Approx(hamming(code[0], code[i]) * cell));
    CHECK(s >= fam.params.m_cells / 8.0 * cell - 1e-15);
    // Brute force: integrate the disagreement indicator against the marginal.
    auto p0 = fam.problem(code[0]);
    auto pi = fam.problem(code[i]);
    const int level = geom.grid_level + fam.params.r1 + 3;
    double mass = 0.0;
    for (const auto& c : DyadicCover::full(1, level).cubes()) {
      auto x = c.center();
      if (sign_of(p0.eta(x)) != sign_of(pi.eta(x))) mass += fam.marginal->cube_mass(level, c.key());
    }
    CHECK(mass == doctest::Approx(s).epsilon(1e-9));
  }
}

TEST_CASE("Holder certificate with the constructed constant") {
  for (int d : {1, 2}) {
    MinimaxFamily fam(make_bump_params(d, 8, 1.0, 1.0));
    const auto& geom = *fam.geom;
    double K = constructed_holder_constant(geom, fam.params);
    Rng rng(12);
    SigmaHypothesis sigma{std::vector<int>(fam.params.m_cells)};
    for (auto& s : sigma.sigma) s = rng.rademacher(0.5);
    for (int i = 0; i < 10000; ++i) {
      Point a(d), b(d);
      double dist = 0.0;
      for (int j = 0; j < d; ++j) {
        a[j] = rng.uniform();
        // Half the pairs are close, where the quotient is largest.
        b[j] = i % 2 ? rng.uniform() : std::clamp(a[j] + rng.uniform(-0.01, 0.01), 0.0, 1.0);
        dist = std::max(dist, std::abs(a[j] - b[j]));
      }
      if (dist == 0.0) continue;
      double diff = std::abs(eta_sigma(a, sigma, geom, fam.params) - eta_sigma(b, sigma, geom, fam.params));
      CHECK(diff <= K * std::pow(dist, fam.params.beta) * (1 + 1e-9));
    }
  }
}

TEST_CASE("low-noise fit uses one constant across scales") {
  MinimaxFamily fam(make_bump_params(1, 16, 1.0, 1.0));
  auto p = fam.problem(fam.all_ones());
  std::vector<double> ts;
  for (double t = 0.5; t > 1e-3; t /= std::sqrt(2.0)) ts.push_back(t);
  auto fit = fit_low_noise(p, ts, 14);
  REQUIRE(fit.mass.size() == ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) CHECK(fit.mass[i] <= fit.c_hat * std::pow(ts[i], p.gamma) * (1 + 1e-12));
  CHECK(std::isfinite(fit.c_hat));
  CHECK(eta_floor_on_support(*fam.geom, fam.params) > 0.0);
}
