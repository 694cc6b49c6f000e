#include "alearn/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace alearn {

namespace {

struct CubeSums {
  double label_sum = 0.0;
  std::size_t count = 0;
};

std::map<std::uint64_t, CubeSums> sums_at_level(std::span<const LabeledSample> sample, int m) {
  std::map<std::uint64_t, CubeSums> sums;
  for (const auto& s : sample) {
    auto& c = sums[key_of_point(s.x, m)];
    c.label_sum += s.y;
    ++c.count;
  }
  return sums;
}

/// Keys of level-m cubes meeting A.
std::unordered_set<std::uint64_t> meeting_keys(const DyadicCover& a, int m) {
  std::unordered_set<std::uint64_t> out;
  if (m >= a.level()) {
    const auto refined = a.refined(m);
    for (auto k : refined.keys()) out.insert(k);
  } else {
    for (auto k : a.keys()) out.insert(ancestor_key(a.dim(), a.level(), k, m));
  }
  return out;
}

}  // namespace

PiecewiseConstantFn fit_histogram(std::span<const LabeledSample> sample, int m, const DyadicCover& a, const Problem& p) {
  const double a_mass = pi_measure(p, a);
  if (!(a_mass > 0.0)) throw DomainError("empty cover");
  const int dim = a.dim();
  const auto n = static_cast<double>(sample.size());
  std::map<std::uint64_t, double> coeffs;
  if (sample.empty()) return PiecewiseConstantFn(dim, m, {});

  // Pi(R n A) for the cubes that received samples.
  auto cube_in_a_mass = [&](std::uint64_t key) -> double {
    if (m >= a.level()) {
      return a.contains_key(ancestor_key(dim, m, key, a.level())) ? p.marginal->cube_mass(m, key) : 0.0;
    }
    double total = 0.0;
    for (auto k : descendant_keys(dim, m, key, a.level())) {
      if (a.contains_key(k)) total += p.marginal->cube_mass(a.level(), k);
    }
    return total;
  };

  for (const auto& [key, s] : sums_at_level(sample, m)) {
    const double mass = cube_in_a_mass(key);
    if (mass <= 0.0) continue;
    const double value = std::clamp(s.label_sum * a_mass / (n * mass), -1.0, 1.0);
    if (value != 0.0) coeffs.emplace_hint(coeffs.end(), key, value);
  }
  return PiecewiseConstantFn(dim, m, std::move(coeffs));
}

PiecewiseConstantFn empirical_mean_fit(std::span<const LabeledSample> sample, int m, const DyadicCover& a) {
  const int dim = a.dim();
  std::map<std::uint64_t, double> coeffs;
  const auto allowed = meeting_keys(a, m);
  for (const auto& [key, s] : sums_at_level(sample, m)) {
    if (!allowed.contains(key)) continue;
    const double mean = std::clamp(s.label_sum / static_cast<double>(s.count), -1.0, 1.0);
    if (mean != 0.0) coeffs.emplace_hint(coeffs.end(), key, mean);
  }
  return PiecewiseConstantFn(dim, m, std::move(coeffs));
}

double empirical_risk(const PiecewiseConstantFn& f, std::span<const LabeledSample> sample) {
  if (sample.empty()) return 0.0;
  double total = 0.0;
  for (const auto& s : sample) {
    const double r = s.y - f(s.x);
    total += r * r;
  }
  return total / static_cast<double>(sample.size());
}

std::vector<double> fitted_risks(std::span<const LabeledSample> sample, std::span<const int> levels) {
  std::vector<double> out;
  out.reserve(levels.size());
  if (sample.empty()) {
    out.assign(levels.size(), 0.0);
    return out;
  }
  const int finest = *std::max_element(levels.begin(), levels.end());
  const int dim = static_cast<int>(sample.front().x.size());
  std::vector<std::uint64_t> keys;
  keys.reserve(sample.size());
  for (const auto& s : sample) keys.push_back(key_of_point(s.x, finest));
  const auto n = static_cast<double>(sample.size());
  for (int m : levels) {
    // With y in {-1, 1}: sum over cubes of (n_c - S_c^2 / n_c).
    std::unordered_map<std::uint64_t, CubeSums> sums;
    sums.reserve(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
      auto& c = sums[ancestor_key(dim, finest, keys[i], m)];
      c.label_sum += sample[i].y;
      ++c.count;
    }
    double explained = 0.0;
    for (const auto& [k, c] : sums) explained += c.label_sum * c.label_sum / static_cast<double>(c.count);
    out.push_back(std::max(0.0, 1.0 - explained / n));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Moments {
  double w = 0.0;
  double w_eta = 0.0;
  double w_eta2 = 0.0;
};

std::vector<Moments> projection_moments(const Problem& p, int m, int quad_level) {
  if (quad_level < m + 4) throw ArgumentError("quadrature level must be at least m + 4");
  const int dim = p.dim;
  if (quad_level > max_level(dim)) throw ArgumentError("quadrature level too fine");
  const std::uint64_t cubes = std::uint64_t{1} << (dim * m);
  std::vector<Moments> out(cubes);
  const std::uint64_t cells = std::uint64_t{1} << (dim * quad_level);
  Point c(static_cast<std::size_t>(dim));
  for (std::uint64_t k = 0; k < cells; ++k) {
    const double w = p.marginal->cube_mass(quad_level, k);
    if (w <= 0.0) continue;
    const auto cell = CubeIndex::from_key(dim, quad_level, k);
    for (int i = 0; i < dim; ++i) c[i] = std::ldexp(cell.coords[i] + 0.5, -quad_level);
    const double e = p.eta(c);
    auto& mo = out[ancestor_key(dim, quad_level, k, m)];
    mo.w += w;
    mo.w_eta += w * e;
    mo.w_eta2 += w * e * e;
  }
  return out;
}

}  // namespace

PiecewiseConstantFn l2_projection(const Problem& p, int m, int quad_level) {
  const auto mom = projection_moments(p, m, quad_level);
  std::map<std::uint64_t, double> coeffs;
  for (std::uint64_t k = 0; k < mom.size(); ++k) {
    if (mom[k].w <= 0.0) continue;
    const double v = std::clamp(mom[k].w_eta / mom[k].w, -1.0, 1.0);
    if (v != 0.0) coeffs.emplace_hint(coeffs.end(), k, v);
  }
  return PiecewiseConstantFn(p.dim, m, std::move(coeffs));
}

double squared_bias(const Problem& p, int m, int quad_level) {
  double total = 0.0;
  for (const auto& mo : projection_moments(p, m, quad_level)) {
    if (mo.w > 0.0) total += std::max(0.0, mo.w_eta2 - mo.w_eta * mo.w_eta / mo.w);
  }
  return total;
}

BernsteinBound bernstein_deviation(int m, double a_mass, std::size_t n, double t, double u1, int dim, std::size_t d_m) {
  if (!(t > 0.0)) throw ArgumentError("Bernstein deviation needs t > 0");
  if (n == 0 || !(u1 > 0.0)) throw ArgumentError("Bernstein deviation needs n > 0 and u1 > 0");
  const double scale = std::sqrt(std::ldexp(1.0, dim * m) * a_mass / (u1 * static_cast<double>(n)));
  const double exponent = -t * t / (2.0 * (1.0 + (t / 3.0) * scale));
  return BernsteinBound{2.0 * static_cast<double>(d_m) * std::exp(exponent), t * scale};
}

std::size_t restricted_dimension(const Problem& p, int m, const DyadicCover& a) {
  std::size_t count = 0;
  for (auto k : meeting_keys(a, m)) {
    if (p.marginal->cube_mass(m, k) > 0.0) ++count;
  }
  return count;
}

}  // namespace alearn
