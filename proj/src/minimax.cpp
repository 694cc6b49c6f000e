#include "alearn/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

namespace alearn {

namespace {

double bump_density_U(double t, double lo) {
  if (t <= lo || t >= 0.5) return 0.0;
  return std::exp(-1.0 / ((0.5 - t) * (t - lo)));
}

/// Tail integrals of U from the nodes of a uniform grid on [2^-v, 1/2], built once per v.
struct TailTable {
  double lo = 0.0;
  double step = 0.0;
  std::vector<double> tail;  ///< tail[i] = integral of U over [lo + i step, 1/2]
};

constexpr int kTailNodes = 2048;

const TailTable& tail_table(int v) {
  thread_local std::map<int, TailTable> cache;
  auto it = cache.find(v);
  if (it != cache.end()) return it->second;
  TailTable t;
  t.lo = std::ldexp(1.0, -v);
  t.step = (0.5 - t.lo) / kTailNodes;
  t.tail.assign(kTailNodes + 1, 0.0);
  for (int i = kTailNodes - 1; i >= 0; --i) {
    t.tail[i] = t.tail[i + 1] + boost::math::quadrature::gauss<double, 30>::integrate(
                                    [lo = t.lo](double s) { return bump_density_U(s, lo); }, t.lo + i * t.step,
                                    t.lo + (i + 1) * t.step);
  }
  return cache.emplace(v, std::move(t)).first->second;
}

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return std::sqrt(s);
}

/// Largest Holder-beta quotient of samples taken on a uniform grid.
double grid_holder_quotient(const std::vector<double>& values, double step, double beta) {
  double best = 0.0;
  const std::size_t n = values.size();
  if (beta >= 1.0) {
    for (std::size_t i = 1; i < n; ++i) best = std::max(best, std::abs(values[i] - values[i - 1]) / step);
    return best;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dist = static_cast<double>(j - i) * step;
      best = std::max(best, std::abs(values[j] - values[i]) / std::pow(dist, beta));
    }
  }
  return best;
}

double box_overlap(const CubeIndex& cube, std::span<const double> lo, std::span<const double> hi) {
  double vol = 1.0;
  for (int i = 0; i < cube.dim(); ++i) {
    const double a = std::max(cube.lower(i), lo[i]);
    const double b = std::min(cube.upper(i), hi[i]);
    if (b <= a) return 0.0;
    vol *= b - a;
  }
  return vol;
}

int log2_exact(int q) {
  if (q < 2 || (q & (q - 1)) != 0) throw ArgumentError("grid parameter q must be a power of two >= 2");
  int g = 0;
  while ((1 << g) < q) ++g;
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------

double bump_u(double x, int v) {
  if (v < 1) throw ArgumentError("bump_u requires v >= 1");
  const double lo = std::ldexp(1.0, -v);
  if (x <= lo) return 1.0;
  if (x >= 0.5) return 0.0;
  // Tabulated tail from the next node plus a fixed 20-point Gauss rule on the remainder.
  const auto& t = tail_table(v);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>((x - lo) / t.step), kTailNodes - 1);
  const double node = lo + static_cast<double>(i + 1) * t.step;
  const double rest = x < node ? boost::math::quadrature::gauss<double, 20>::integrate(
                                     [lo](double s) { return bump_density_U(s, lo); }, x, node)
                               : 0.0;
  return std::clamp((t.tail[i + 1] + rest) / t.tail[0], 0.0, 1.0);
}

double bump_holder_quotient(int v, double beta, int grid) {
  const double lo = std::ldexp(1.0, -v);
  if (beta >= 1.0) {
    // Lipschitz constant of u is max U / integral U, attained at the midpoint of the support.
    return bump_density_U(0.5 * (0.5 + lo), lo) / tail_table(v).tail[0];
  }
  std::vector<double> values(static_cast<std::size_t>(grid) + 1);
  const double step = 0.5 / grid;
  for (int i = 0; i <= grid; ++i) values[i] = bump_u(i * step, v);
  return grid_holder_quotient(values, step, beta);
}

double bump_phi(std::span<const double> x, const BumpParams& params) {
  return params.holder_C * bump_u(norm2(x), params.v);
}

// ---------------------------------------------------------------------------

void validate(const BumpParams& p) {
  log2_exact(p.q);
  if (p.d < 1) throw ArgumentError("dimension must be positive");
  const double cells = std::pow(static_cast<double>(p.q), p.d);
  if (p.m_cells < 1 || p.m_cells > cells) throw ArgumentError("m_cells must lie in [1, q^d]");
  if (!(p.beta > 0.0 && p.beta <= 1.0)) throw ArgumentError("beta must lie in (0,1]");
  if (!(p.gamma > 0.0)) throw ArgumentError("gamma must be positive");
  if (p.d / p.gamma < p.beta) throw ArgumentError("construction requires d/gamma >= beta");
  const double sd = std::sqrt(static_cast<double>(p.d));
  // The middle link 2^-r1 < 2^-r1 sqrt(d) degenerates to equality when d = 1.
  const bool chain = std::ldexp(1.0, -p.v) < std::ldexp(1.0, -p.r1) &&
                     std::ldexp(1.0, -p.r1) <= std::ldexp(sd, -p.r1) &&
                     std::ldexp(sd, -p.r1) < std::ldexp(sd, -p.r2) && std::ldexp(sd, -p.r2) < 0.5;
  if (!chain) throw ArgumentError("integers v > r1 > r2 violate the annulus constant chain");
  const double lhs = p.m_cells / cells;
  const double rhs = p.side_c * std::pow(static_cast<double>(p.q), -p.beta * p.gamma);
  if (lhs > rhs * (1.0 + 1e-12)) throw ArgumentError("m_cells q^-d exceeds side_c q^(-beta gamma)");
  if (!(p.holder_C > 0.0)) throw ArgumentError("holder_C not initialised");
}

BumpParams make_bump_params(int d, int q, double beta, double gamma, double c2, double holder_L) {
  BumpParams p;
  p.d = d;
  p.q = q;
  p.beta = beta;
  p.gamma = gamma;
  p.holder_L = holder_L;
  p.side_c = c2;
  log2_exact(q);
  const double sd = std::sqrt(static_cast<double>(d));
  p.r2 = 1;
  while (std::ldexp(sd, -p.r2) >= 0.5) ++p.r2;
  p.r1 = p.r2 + 1;
  p.v = p.r1 + 1;
  const double cells = std::pow(static_cast<double>(q), d);
  const double m = std::floor(c2 * std::pow(static_cast<double>(q), d - beta * gamma));
  p.m_cells = static_cast<int>(std::clamp(m, 1.0, cells));
  p.holder_C = holder_L / bump_holder_quotient(p.v, beta);
  validate(p);
  return p;
}

int hamming(const SigmaHypothesis& a, const SigmaHypothesis& b) {
  if (a.sigma.size() != b.sigma.size()) throw ArgumentError("hypotheses of different length");
  int h = 0;
  for (std::size_t i = 0; i < a.sigma.size(); ++i) h += a.sigma[i] != b.sigma[i];
  return h;
}

// ---------------------------------------------------------------------------

SupportGeometry make_geometry(const BumpParams& params) {
  SupportGeometry g;
  g.grid_level = log2_exact(params.q);
  const int d = params.d;
  const auto all = DyadicCover::full(d, g.grid_level).cubes();

  // Exact ordering: squared norm of 2q * center is an integer.
  auto center_key = [](const CubeIndex& c) {
    long long s = 0;
    for (auto k : c.coords) s += (2LL * k + 1) * (2LL * k + 1);
    return s;
  };
  g.ordered_cells = all;
  std::stable_sort(g.ordered_cells.begin(), g.ordered_cells.end(), [&](const CubeIndex& a, const CubeIndex& b) {
    const auto ka = center_key(a);
    const auto kb = center_key(b);
    return ka != kb ? ka < kb : a.coords < b.coords;
  });
  g.rank_of_key.assign(all.size(), 0);
  for (std::size_t i = 0; i < g.ordered_cells.size(); ++i) g.rank_of_key[g.ordered_cells[i].key()] = static_cast<int>(i);

  std::vector<CubeIndex> s_cells(g.ordered_cells.begin(), g.ordered_cells.begin() + params.m_cells);
  g.S = DyadicCover(d, g.grid_level, s_cells);
  long long far = 0;
  for (const auto& c : s_cells) {
    long long s = 0;
    for (auto k : c.coords) s += (k + 1LL) * (k + 1LL);
    far = std::max(far, s);
  }
  g.r_S = std::sqrt(static_cast<double>(far)) / params.q;
  g.outer_radius = g.r_S + std::pow(static_cast<double>(params.q), -params.beta * params.gamma / d);

  std::vector<CubeIndex> a0;
  for (const auto& c : all) {
    double s = 0.0;
    for (auto k : c.coords) s += static_cast<double>(k) * k;
    if (std::sqrt(s) / params.q > g.outer_radius) a0.push_back(c);
  }
  g.A0 = DyadicCover(d, g.grid_level, a0);
  return g;
}

int radius_sandwich_k(const SupportGeometry& geom, const BumpParams& params) {
  const int d = params.d;
  long long min_out = static_cast<long long>(d) * params.q * params.q;
  for (std::size_t i = geom.S.size(); i < geom.ordered_cells.size(); ++i) {
    long long s = 0;
    for (auto k : geom.ordered_cells[i].coords) s += static_cast<long long>(k) * k;
    min_out = std::min(min_out, s);
  }
  long long k = static_cast<long long>(std::floor(std::sqrt(static_cast<double>(min_out))));
  while (k * k > min_out) --k;
  while ((k + 1) * (k + 1) <= min_out) ++k;
  const double sd = std::sqrt(static_cast<double>(d));
  if (k < 1 || k > params.q * sd) return 0;
  if (geom.r_S * params.q > static_cast<double>(k) + 3.0 * sd + 1e-12) return 0;
  return static_cast<int>(k);
}

// ---------------------------------------------------------------------------

double eta_sigma(std::span<const double> x, const SigmaHypothesis& sigma, const SupportGeometry& geom,
                 const BumpParams& params) {
  if (static_cast<int>(x.size()) != params.d) throw ArgumentError("point dimension differs from construction");
  if (static_cast<int>(sigma.sigma.size()) != params.m_cells) throw ArgumentError("sigma length differs from m_cells");
  const auto key = key_of_point(x, geom.grid_level);
  const int rank = geom.rank_of_key[key];
  double value;
  if (rank < params.m_cells) {
    const auto cell = CubeIndex::from_key(params.d, geom.grid_level, key);
    Point y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = params.q * (x[i] - std::ldexp(cell.coords[i] + 0.5, -geom.grid_level));
    value = sigma.sigma[rank] * std::pow(static_cast<double>(params.q), -params.beta) * bump_phi(y, params);
  } else {
    const double dist = std::max(norm2(x) - geom.r_S, 0.0);
    if (dist == 0.0) return 0.0;
    const double psi = bump_u(0.5 - std::pow(static_cast<double>(params.q), params.beta * params.gamma / params.d) * dist, params.v);
    value = std::pow(dist, params.d / params.gamma) * psi / (params.holder_C * std::sqrt(static_cast<double>(params.d)));
  }
  return std::clamp(value, -1.0, 1.0);
}

double annulus_density(const BumpParams& p) {
  return std::ldexp(1.0, p.d * (p.r1 - 1)) / (std::ldexp(1.0, p.d * (p.r1 - p.r2)) - 1.0);
}

double outer_density(const SupportGeometry& geom, const BumpParams& p) {
  if (geom.A0.empty()) return 0.0;
  const double cell_vol = std::pow(static_cast<double>(p.q), -p.d);
  return (1.0 - p.m_cells * cell_vol) / (static_cast<double>(geom.A0.size()) * cell_vol);
}

double marginal_density_p(std::span<const double> x, const SupportGeometry& geom, const BumpParams& params) {
  const auto key = key_of_point(x, geom.grid_level);
  if (geom.in_S(key)) {
    const auto z = CubeIndex::from_key(params.d, geom.grid_level, key).center();
    const double outer = std::ldexp(1.0, -params.r2) / params.q;
    const double inner = std::ldexp(1.0, -params.r1) / params.q;
    double linf = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) linf = std::max(linf, std::abs(x[i] - z[i]));
    return (linf <= outer && linf > inner) ? annulus_density(params) : 0.0;
  }
  if (geom.A0.contains_key(key)) return outer_density(geom, params);
  return 0.0;
}

// ---------------------------------------------------------------------------

std::vector<SigmaHypothesis> gilbert_varshamov(int m_cells, Rng& rng, int max_draws) {
  if (m_cells < 8) throw ArgumentError("Gilbert-Varshamov codes need m_cells >= 8");
  const auto target = static_cast<std::size_t>(1 + std::ceil(std::pow(2.0, m_cells / 8.0)));
  const int min_dist = (m_cells + 7) / 8;
  std::vector<SigmaHypothesis> code{SigmaHypothesis{std::vector<int>(m_cells, 1)}};
  int draws = 0;
  while (code.size() < target) {
    if (draws++ >= max_draws) throw std::runtime_error("Gilbert-Varshamov search exhausted its retry bound");
    SigmaHypothesis cand{std::vector<int>(m_cells)};
    for (auto& s : cand.sigma) s = rng.rademacher(0.5);
    const bool far = std::all_of(code.begin(), code.end(), [&](const SigmaHypothesis& c) { return hamming(c, cand) >= min_dist; });
    if (far) code.push_back(std::move(cand));
  }
  return code;
}

double bernoulli_kl(double eta1, double eta2) {
  const double p = 0.5 * (1.0 + eta1);
  const double q = 0.5 * (1.0 + eta2);
  if (!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0)) throw DomainError("degenerate Bernoulli probability in KL");
  return p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
}

double kl_per_sample(std::span<const double> x, const SigmaHypothesis& s1, const SigmaHypothesis& s2,
                     const SupportGeometry& geom, const BumpParams& params) {
  const double e1 = eta_sigma(x, s1, geom, params);
  const double e2 = eta_sigma(x, s2, geom, params);
  if (e1 == e2) return 0.0;
  return bernoulli_kl(e1, e2);
}

double separation(const SigmaHypothesis& s1, const SigmaHypothesis& s2, const SupportGeometry&, const BumpParams& params) {
  return hamming(s1, s2) * std::pow(static_cast<double>(params.q), -params.d);
}

double constructed_holder_constant(const SupportGeometry& geom, const BumpParams& params) {
  const double d = params.d;
  const double sd = std::sqrt(d);
  // Bumps: q^-beta C u(q |x - z|) is (L, beta)-Holder in l2, hence L d^(beta/2) in sup norm.
  const double k_bumps = params.holder_L * std::pow(sd, params.beta);
  // Outer ramp: radial profile r -> clip(r^(d/gamma) Psi(r) / (C sqrt d)) on [0, sqrt d].
  const int n = params.beta >= 1.0 ? 200000 : 3000;
  const double step = sd / n;
  const double scale = std::pow(static_cast<double>(params.q), params.beta * params.gamma / d);
  std::vector<double> profile(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double r = i * step;
    const double psi = bump_u(0.5 - scale * r, params.v);
    profile[i] = std::min(1.0, std::pow(r, d / params.gamma) * psi / (params.holder_C * sd));
  }
  (void)geom;
  const double k_outer = grid_holder_quotient(profile, step, params.beta) * std::pow(sd, params.beta);
  // Pieces glue continuously (each vanishes on the shared boundaries); factor 2 covers chaining.
  return 2.0 * std::max(k_bumps, k_outer);
}

double eta_floor_on_support(const SupportGeometry& geom, const BumpParams& params) {
  const double sd = std::sqrt(static_cast<double>(params.d));
  const double qb = std::pow(static_cast<double>(params.q), -params.beta);
  double floor = params.holder_C * qb * bump_u(std::ldexp(sd, -params.r2), params.v);
  if (!geom.A0.empty()) floor = std::min(floor, std::min(1.0, qb / (params.holder_C * sd)));
  return floor;
}

// ---------------------------------------------------------------------------

MinimaxAnnulusMarginal::MinimaxAnnulusMarginal(SupportGeometry geom, BumpParams params)
    : geom_(std::move(geom)),
      params_(params),
      annulus_density_(annulus_density(params_)),
      outer_density_(outer_density(geom_, params_)) {}

double MinimaxAnnulusMarginal::density(std::span<const double> x) const { return marginal_density_p(x, geom_, params_); }

double MinimaxAnnulusMarginal::cell_mass_within(const CubeIndex& cube, std::uint64_t cell_key) const {
  if (geom_.in_S(cell_key)) {
    const auto cell = CubeIndex::from_key(params_.d, geom_.grid_level, cell_key);
    const auto z = cell.center();
    const double outer = std::ldexp(1.0, -params_.r2) / params_.q;
    const double inner = std::ldexp(1.0, -params_.r1) / params_.q;
    Point olo(z), ohi(z), ilo(z), ihi(z);
    for (std::size_t i = 0; i < z.size(); ++i) {
      olo[i] -= outer;
      ohi[i] += outer;
      ilo[i] -= inner;
      ihi[i] += inner;
    }
    return annulus_density_ * (box_overlap(cube, olo, ohi) - box_overlap(cube, ilo, ihi));
  }
  if (geom_.A0.contains_key(cell_key)) return outer_density_ * cube.volume();
  return 0.0;
}

double MinimaxAnnulusMarginal::cube_mass(int level, std::uint64_t key) const {
  const int g = geom_.grid_level;
  if (level >= g) {
    const auto cube = CubeIndex::from_key(params_.d, level, key);
    return cell_mass_within(cube, ancestor_key(params_.d, level, key, g));
  }
  const double cell_vol = std::pow(static_cast<double>(params_.q), -params_.d);
  double total = 0.0;
  for (auto cell : descendant_keys(params_.d, level, key, g)) {
    if (geom_.in_S(cell)) total += cell_vol;
    else if (geom_.A0.contains_key(cell)) total += outer_density_ * cell_vol;
  }
  return total;
}

void MinimaxAnnulusMarginal::sample_in_cube(int level, std::uint64_t key, Rng& rng, std::span<double> out) const {
  const int g = geom_.grid_level;
  if (level < g) {
    const auto cells = descendant_keys(params_.d, level, key, g);
    std::vector<double> cum;
    cum.reserve(cells.size());
    double total = 0.0;
    for (auto c : cells) {
      total += cube_mass(g, c);
      cum.push_back(total);
    }
    if (!(total > 0.0)) throw DomainError("empty conditional");
    const double u = rng.uniform() * total;
    auto idx = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
    idx = std::min(idx, cells.size() - 1);
    while (cum[idx] - (idx ? cum[idx - 1] : 0.0) <= 0.0 && idx + 1 < cells.size()) ++idx;
    sample_in_cube(g, cells[idx], rng, out);
    return;
  }
  const auto cube = CubeIndex::from_key(params_.d, level, key);
  const auto cell_key = ancestor_key(params_.d, level, key, g);
  if (!geom_.in_S(cell_key)) {
    if (!geom_.A0.contains_key(cell_key)) throw DomainError("empty conditional");
    uniform_in_cube(cube, rng, out);
    return;
  }
  const auto z = CubeIndex::from_key(params_.d, g, cell_key).center();
  const double outer = std::ldexp(1.0, -params_.r2) / params_.q;
  const double inner = std::ldexp(1.0, -params_.r1) / params_.q;
  Point lo(z.size()), hi(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    lo[i] = std::max(cube.lower(i), z[i] - outer);
    hi[i] = std::min(cube.upper(i), z[i] + outer);
    if (hi[i] <= lo[i]) throw DomainError("empty conditional");
  }
  // Rejection inside the sup-norm annulus.
  for (int attempt = 0; attempt < 1000000; ++attempt) {
    double linf = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      out[i] = rng.uniform(lo[i], hi[i]);
      linf = std::max(linf, std::abs(out[i] - z[i]));
    }
    if (linf > inner) return;
  }
  throw DomainError("empty conditional");
}

DyadicCover MinimaxAnnulusMarginal::support() const {
  // Exact support: the annulus holes are cut out at the resolution level.
  const int level = resolution_level();
  std::vector<std::uint64_t> keys;
  for (const auto* cover : {&geom_.S, &geom_.A0}) {
    for (auto cell : cover->keys()) {
      for (auto k : descendant_keys(params_.d, geom_.grid_level, cell, level)) {
        if (cube_mass(level, k) > 0.0) keys.push_back(k);
      }
    }
  }
  return DyadicCover(params_.d, level, std::move(keys));
}

double MinimaxAnnulusMarginal::density_min() const {
  return geom_.A0.empty() ? annulus_density_ : std::min(annulus_density_, outer_density_);
}

double MinimaxAnnulusMarginal::density_max() const { return std::max(annulus_density_, outer_density_); }

// ---------------------------------------------------------------------------

MinimaxFamily::MinimaxFamily(BumpParams p) : params(p) {
  validate(params);
  auto g = make_geometry(params);
  geom = std::make_shared<const SupportGeometry>(g);
  marginal = std::make_shared<const MinimaxAnnulusMarginal>(std::move(g), params);
  // Cube masses against volume from the grid level down to the resolution level. Coarser cubes
  // straddle the empty ring around S and are not regular.
  u1 = marginal->density_min();
  u2 = marginal->density_max();
  for (int m = geom->grid_level; m <= marginal->resolution_level(); ++m) {
    const double vol = std::ldexp(1.0, -params.d * m);
    for (auto k : DyadicCover::full(params.d, m).keys()) {
      const double ratio = marginal->cube_mass(m, k) / vol;
      if (ratio <= 0.0) continue;
      u1 = std::min(u1, ratio);
      u2 = std::max(u2, ratio);
    }
  }
}

Problem MinimaxFamily::problem(const SigmaHypothesis& sigma) const {
  if (static_cast<int>(sigma.sigma.size()) != params.m_cells) throw ArgumentError("sigma length differs from m_cells");
  Problem p;
  p.name = "minimax";
  p.dim = params.d;
  p.beta = params.beta;
  p.gamma = params.gamma;
  p.noise_B = std::pow(eta_floor_on_support(*geom, params), -params.gamma);
  p.holder_B1 = constructed_holder_constant(*geom, params);
  p.u1 = u1;
  p.u2 = u2;
  p.upper_bound_regime = params.beta * params.gamma <= params.d;
  auto g = geom;
  auto bp = params;
  p.eta = [g, bp, sigma](std::span<const double> x) { return eta_sigma(x, sigma, *g, bp); };
  p.marginal = marginal;
  return p;
}

// ---------------------------------------------------------------------------

LowNoiseFit fit_low_noise(const Problem& p, const std::vector<double>& t_grid, int quad_level) {
  const auto n = std::uint64_t{1} << (p.dim * quad_level);
  std::vector<std::pair<double, double>> cells;  // (|eta| at center, mass)
  cells.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    const double mass = p.marginal->cube_mass(quad_level, k);
    if (mass <= 0.0) continue;
    const auto c = CubeIndex::from_key(p.dim, quad_level, k).center();
    cells.emplace_back(std::abs(p.eta(c)), mass);
  }
  std::sort(cells.begin(), cells.end());
  std::vector<double> prefix(cells.size() + 1, 0.0);
  for (std::size_t i = 0; i < cells.size(); ++i) prefix[i + 1] = prefix[i] + cells[i].second;
  LowNoiseFit fit;
  for (double t : t_grid) {
    const auto it = std::upper_bound(cells.begin(), cells.end(), std::make_pair(t, std::numeric_limits<double>::infinity()));
    const double m = prefix[static_cast<std::size_t>(it - cells.begin())];
    fit.t.push_back(t);
    fit.mass.push_back(m);
    fit.c_hat = std::max(fit.c_hat, m / std::pow(t, p.gamma));
  }
  return fit;
}

}  // namespace alearn
