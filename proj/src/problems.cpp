#include "alearn/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "alearn/minimax.hpp"

namespace alearn {

void uniform_in_cube(const CubeIndex& cube, Rng& rng, std::span<double> out) {
  for (int i = 0; i < cube.dim(); ++i) out[i] = rng.uniform(cube.lower(i), cube.upper(i));
}

// ---------------------------------------------------------------------------

UniformMarginal::UniformMarginal(int dim) : dim_(dim) {
  if (dim < 1) throw ArgumentError("dimension must be positive");
}

double UniformMarginal::density(std::span<const double> x) const {
  for (double xi : x) {
    if (xi < 0.0 || xi > 1.0) return 0.0;
  }
  return 1.0;
}

double UniformMarginal::cube_mass(int level, std::uint64_t) const { return std::ldexp(1.0, -level * dim_); }

void UniformMarginal::sample_in_cube(int level, std::uint64_t key, Rng& rng, std::span<double> out) const {
  uniform_in_cube(CubeIndex::from_key(dim_, level, key), rng, out);
}

// ---------------------------------------------------------------------------

PiecewiseDensityMarginal::PiecewiseDensityMarginal(int dim, int level, std::vector<double> densities)
    : dim_(dim), level_(level), density_(std::move(densities)) {
  if (density_.size() != (std::size_t{1} << (dim * level))) throw ArgumentError("density table size mismatch");
  double mass = 0.0;
  for (double v : density_) {
    if (!(v >= 0.0)) throw ArgumentError("negative density entry");
    mass += v;
  }
  mass *= std::ldexp(1.0, -dim * level);
  if (!(mass > 0.0)) throw ArgumentError("density table has zero mass");
  for (double& v : density_) v /= mass;
}

double PiecewiseDensityMarginal::density(std::span<const double> x) const { return density_[key_of_point(x, level_)]; }

double PiecewiseDensityMarginal::cube_mass(int level, std::uint64_t key) const {
  if (level >= level_) return density_[ancestor_key(dim_, level, key, level_)] * std::ldexp(1.0, -level * dim_);
  double total = 0.0;
  for (auto k : descendant_keys(dim_, level, key, level_)) total += density_[k];
  return total * std::ldexp(1.0, -level_ * dim_);
}

void PiecewiseDensityMarginal::sample_in_cube(int level, std::uint64_t key, Rng& rng, std::span<double> out) const {
  if (level >= level_) {
    uniform_in_cube(CubeIndex::from_key(dim_, level, key), rng, out);
    return;
  }
  const auto kids = descendant_keys(dim_, level, key, level_);
  double total = 0.0;
  for (auto k : kids) total += density_[k];
  if (!(total > 0.0)) throw DomainError("empty conditional");
  double u = rng.uniform() * total;
  std::size_t pick = kids.size() - 1;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (density_[kids[i]] > 0.0 && u < density_[kids[i]]) {
      pick = i;
      break;
    }
    u -= density_[kids[i]];
  }
  while (density_[kids[pick]] <= 0.0 && pick > 0) --pick;
  uniform_in_cube(CubeIndex::from_key(dim_, level_, kids[pick]), rng, out);
}

DyadicCover PiecewiseDensityMarginal::support() const {
  std::vector<std::uint64_t> keys;
  for (std::size_t k = 0; k < density_.size(); ++k) {
    if (density_[k] > 0.0) keys.push_back(k);
  }
  return DyadicCover(dim_, level_, std::move(keys));
}

double PiecewiseDensityMarginal::density_min() const {
  double lo = std::numeric_limits<double>::infinity();
  for (double v : density_) {
    if (v > 0.0) lo = std::min(lo, v);
  }
  return lo;
}

double PiecewiseDensityMarginal::density_max() const { return *std::max_element(density_.begin(), density_.end()); }

// ---------------------------------------------------------------------------

void validate(const Problem& p) {
  if (!p.eta) throw ArgumentError("problem has no regression function");
  if (!p.marginal) throw ArgumentError("problem has no marginal");
  if (p.marginal->dim() != p.dim) throw ArgumentError("marginal dimension differs from problem dimension");
  if (!(p.beta > 0.0 && p.beta <= 1.0)) throw ArgumentError("beta must lie in (0,1]");
  if (!(p.gamma > 0.0)) throw ArgumentError("gamma must be positive");
  if (!(p.u1 > 0.0 && p.u1 <= p.u2)) throw ArgumentError("regularity requires 0 < u1 <= u2");
  if (p.upper_bound_regime && p.beta * p.gamma > p.dim) throw ArgumentError("beta*gamma exceeds d in upper-bound regime");
}

double pi_measure(const Problem& p, const DyadicCover& a) {
  if (a.dim() != p.dim) throw ArgumentError("cover dimension differs from problem dimension");
  double total = 0.0;
  for (auto k : a.keys()) total += p.marginal->cube_mass(a.level(), k);
  return total;
}

double pi_measure(const Problem& p, const CubeIndex& cube) { return p.marginal->cube_mass(cube.level, cube.key()); }

ConditionalSampler::ConditionalSampler(const Problem& p, const DyadicCover& a) : marginal_(p.marginal), cover_(a) {
  if (a.dim() != p.dim) throw ArgumentError("cover dimension differs from problem dimension");
  cumulative_.reserve(a.size());
  keys_.reserve(a.size());
  for (auto k : a.keys()) {
    const double m = p.marginal->cube_mass(a.level(), k);
    if (m <= 0.0) continue;
    total_ += m;
    cumulative_.push_back(total_);
    keys_.push_back(k);
  }
  if (!(total_ > 0.0)) throw DomainError("empty conditional");
}

Point ConditionalSampler::draw(Rng& rng) const {
  const double u = rng.uniform() * total_;
  auto idx = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
  idx = std::min(idx, keys_.size() - 1);
  Point x(static_cast<std::size_t>(marginal_->dim()));
  marginal_->sample_in_cube(cover_.level(), keys_[idx], rng, x);
  return x;
}

Point sample_x(const Problem& p, const DyadicCover& a, Rng& rng) { return ConditionalSampler(p, a).draw(rng); }

int sample_y(const Problem& p, std::span<const double> x, Rng& rng) {
  return rng.rademacher(0.5 * (1.0 + p.eta(x)));
}

std::vector<LabeledSample> draw_labeled(const Problem& p, const ConditionalSampler& sampler, std::size_t n, Rng& rng) {
  std::vector<LabeledSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto x = sampler.draw(rng);
    const int y = sample_y(p, x, rng);
    out.push_back(LabeledSample{std::move(x), y});
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Problem make_ramp1d() {
  Problem p;
  p.name = "ramp1d";
  p.dim = 1;
  // Pi(|2x - 1| <= t) = t.
  p.beta = 1.0;
  p.gamma = 1.0;
  p.noise_B = 1.0;
  p.holder_B1 = 2.0;
  // Linear residual on an h-cube: mean square h^2/3 against sup h^2.
  p.assumption2_B2 = 1.0 / 3.0;
  p.eta = [](std::span<const double> x) { return 2.0 * x[0] - 1.0; };
  p.marginal = std::make_shared<UniformMarginal>(1);
  return p;
}

// Same slope as ramp1d with the boundary at the non-dyadic point 1/3.
Problem make_shifted_ramp1d() {
  Problem p;
  p.name = "shifted_ramp1d";
  p.dim = 1;
  // |eta| <= t is an interval of length t around 1/3 for t <= 2/3, and shorter than t beyond.
  p.beta = 1.0;
  p.gamma = 1.0;
  p.noise_B = 1.0;
  p.holder_B1 = 2.0;
  p.assumption2_B2 = 1.0 / 3.0;
  p.eta = [](std::span<const double> x) { return std::clamp(2.0 * x[0] - 2.0 / 3.0, -1.0, 1.0); };
  p.marginal = std::make_shared<UniformMarginal>(1);
  return p;
}

Problem make_tent1d() {
  Problem p;
  p.name = "tent1d";
  p.dim = 1;
  // |eta| <= t iff x <= t/2 or x >= 1 - t/2, so Pi = t.
  p.beta = 1.0;
  p.gamma = 1.0;
  p.noise_B = 1.0;
  p.holder_B1 = 2.0;
  p.assumption2_B2 = 1.0 / 3.0;
  p.eta = [](std::span<const double> x) { return 1.0 - 2.0 * std::abs(x[0] - 0.5); };
  p.marginal = std::make_shared<UniformMarginal>(1);
  return p;
}

Problem make_gradient2d() {
  Problem p;
  p.name = "gradient2d";
  p.dim = 2;
  // For fixed x1, eta is affine in x2 with slope 1.25, so {|eta| <= t} has x2-length <= 1.6 t;
  // with density <= 1.5 this gives B = 2.4.
  p.beta = 1.0;
  p.gamma = 1.0;
  p.noise_B = 2.4;
  p.holder_B1 = (1.0 + 0.2 * std::numbers::pi) / 1.6 + 1.25;
  p.u1 = 0.5;
  p.u2 = 1.5;
  p.eta = [](std::span<const double> x) {
    return (x[0] + 2.0 * x[1] - 1.5 + 0.1 * std::sin(2.0 * std::numbers::pi * x[0])) / 1.6;
  };
  p.marginal = std::make_shared<PiecewiseDensityMarginal>(2, 1, std::vector<double>{0.5, 1.0, 1.0, 1.5});
  return p;
}

Problem make_convex1d() {
  Problem p;
  p.name = "convex1d";
  p.dim = 1;
  // Pi(|eta| <= t) = sqrt(1/4 + t) - sqrt(1/4 - t) for t <= 1/4, maximal ratio 2 sqrt 2 at t = 1/4.
  p.beta = 1.0;
  p.gamma = 1.0;
  p.noise_B = 2.0 * std::numbers::sqrt2;
  p.holder_B1 = 4.0;
  p.eta = [](std::span<const double> x) {
    const double u = x[0] - 0.5;
    return std::clamp(4.0 * u * u - 0.25, -1.0, 1.0);
  };
  p.marginal = std::make_shared<UniformMarginal>(1);
  return p;
}

const MinimaxFamily& default_minimax_family() {
  static const MinimaxFamily family(make_bump_params(1, 16, 1.0, 1.0, 8.0));
  return family;
}

}  // namespace

Problem constant_problem(double value, int dim) {
  if (!(value >= -1.0 && value <= 1.0)) throw DomainError("constant regression value outside [-1,1]");
  Problem p;
  p.name = "const:" + std::to_string(value);
  p.dim = dim;
  p.beta = 1.0;
  p.gamma = 1.0;
  p.noise_B = value == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / std::abs(value);
  p.holder_B1 = 0.0;
  p.upper_bound_regime = true;
  p.eta = [value](std::span<const double>) { return value; };
  p.marginal = std::make_shared<UniformMarginal>(dim);
  return p;
}

std::vector<Problem> builtin_problems() {
  const auto& mm = default_minimax_family();
  return {make_ramp1d(),     make_tent1d(), make_gradient2d(), make_convex1d(), mm.problem(mm.all_ones()),
          make_shifted_ramp1d()};
}

std::vector<std::string> problem_names() { return {"ramp1d", "tent1d", "gradient2d", "convex1d", "minimax", "shifted_ramp1d"}; }

Problem find_problem(std::string_view name) {
  if (name == "ramp1d") return make_ramp1d();
  if (name == "tent1d") return make_tent1d();
  if (name == "shifted_ramp1d") return make_shifted_ramp1d();
  if (name == "gradient2d") return make_gradient2d();
  if (name == "convex1d") return make_convex1d();
  if (name == "minimax") {
    const auto& mm = default_minimax_family();
    return mm.problem(mm.all_ones());
  }
  if (name.starts_with("const:")) {
    std::string rest(name.substr(6));
    int dim = 1;
    if (auto colon = rest.find(':'); colon != std::string::npos) {
      dim = std::stoi(rest.substr(colon + 1));
      rest = rest.substr(0, colon);
    }
    return constant_problem(std::stod(rest), dim);
  }
  throw ArgumentError("unknown problem '" + std::string(name) + "'");
}

}  // namespace alearn
