#include "alearn/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace alearn {

namespace {

void check_level(int dim, int level) {
  if (dim < 1) throw ArgumentError("dimension must be positive");
  if (level < 0 || level > max_level(dim)) {
    throw ArgumentError("level " + std::to_string(level) + " out of range for dim " + std::to_string(dim));
  }
}

std::uint64_t encode(std::span<const std::uint32_t> coords, int level) {
  std::uint64_t key = 0;
  for (std::uint32_t c : coords) key = (key << level) | c;
  return key;
}

void decode(std::uint64_t key, int level, std::span<std::uint32_t> out) {
  const std::uint64_t mask = (std::uint64_t{1} << level) - 1;
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = static_cast<std::uint32_t>(key & mask);
    key >>= level;
  }
}

}  // namespace

int max_level(int dim) { return std::min(31, 62 / std::max(dim, 1)); }

std::uint64_t CubeIndex::key() const { return encode(coords, level); }

CubeIndex CubeIndex::from_key(int dim, int level, std::uint64_t key) {
  check_level(dim, level);
  CubeIndex c{level, std::vector<std::uint32_t>(static_cast<std::size_t>(dim))};
  decode(key, level, c.coords);
  return c;
}

double CubeIndex::side() const { return std::ldexp(1.0, -level); }
double CubeIndex::volume() const { return std::ldexp(1.0, -level * dim()); }
double CubeIndex::lower(int axis) const { return std::ldexp(static_cast<double>(coords[axis]), -level); }
double CubeIndex::upper(int axis) const { return std::ldexp(static_cast<double>(coords[axis]) + 1.0, -level); }

Point CubeIndex::center() const {
  Point p(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) p[i] = std::ldexp(coords[i] + 0.5, -level);
  return p;
}

bool CubeIndex::contains(std::span<const double> x) const {
  if (x.size() != coords.size()) return false;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (x[i] < 0.0 || x[i] > 1.0) return false;
    if (cube_of_point(x.subspan(i, 1), level).coords[0] != coords[i]) return false;
  }
  return true;
}

std::uint64_t key_of_point(std::span<const double> x, int m) {
  const int dim = static_cast<int>(x.size());
  check_level(dim, m);
  const std::uint64_t n = std::uint64_t{1} << m;
  std::uint64_t key = 0;
  for (double xi : x) {
    if (!(xi >= 0.0 && xi <= 1.0)) throw DomainError("point coordinate outside [0,1]");
    auto k = static_cast<std::uint64_t>(std::ldexp(xi, m));
    if (k >= n) k = n - 1;
    key = (key << m) | k;
  }
  return key;
}

CubeIndex cube_of_point(std::span<const double> x, int m) {
  return CubeIndex::from_key(static_cast<int>(x.size()), m, key_of_point(x, m));
}

std::vector<std::uint64_t> descendant_keys(int dim, int from, std::uint64_t key, int to) {
  if (to < from) throw ArgumentError("descendant level below ancestor level");
  check_level(dim, to);
  const int shift = to - from;
  std::vector<std::uint32_t> base(static_cast<std::size_t>(dim));
  decode(key, from, base);
  const std::uint64_t per_axis = std::uint64_t{1} << shift;
  std::uint64_t total = std::uint64_t{1} << (shift * dim);
  std::vector<std::uint64_t> out;
  out.reserve(total);
  std::vector<std::uint32_t> child(static_cast<std::size_t>(dim));
  // Odometer over offsets; axis 0 is the most significant so output stays sorted.
  std::vector<std::uint64_t> offset(static_cast<std::size_t>(dim), 0);
  for (std::uint64_t n = 0; n < total; ++n) {
    for (int i = 0; i < dim; ++i) child[i] = static_cast<std::uint32_t>((std::uint64_t{base[i]} << shift) + offset[i]);
    out.push_back(encode(child, to));
    for (int i = dim - 1; i >= 0; --i) {
      if (++offset[i] < per_axis) break;
      offset[i] = 0;
    }
  }
  return out;
}

std::uint64_t ancestor_key(int dim, int from, std::uint64_t key, int to) {
  if (to > from) throw ArgumentError("ancestor level above descendant level");
  std::vector<std::uint32_t> c(static_cast<std::size_t>(dim));
  decode(key, from, c);
  for (auto& ci : c) ci >>= (from - to);
  return encode(c, to);
}

// ---------------------------------------------------------------------------

DyadicCover::DyadicCover(int dim, int level, std::vector<std::uint64_t> keys)
    : dim_(dim), level_(level), keys_(std::move(keys)) {
  check_level(dim, level);
  const std::uint64_t limit = std::uint64_t{1} << (dim * level);
  std::sort(keys_.begin(), keys_.end());
  keys_.erase(std::unique(keys_.begin(), keys_.end()), keys_.end());
  if (!keys_.empty() && keys_.back() >= limit) throw ArgumentError("cube key out of range for level");
}

DyadicCover::DyadicCover(int dim, int level, const std::vector<CubeIndex>& cubes) : dim_(dim), level_(level) {
  check_level(dim, level);
  keys_.reserve(cubes.size());
  for (const auto& c : cubes) {
    if (c.level != level || c.dim() != dim) throw ArgumentError("cube level or dimension differs from cover");
    for (auto k : c.coords) {
      if (k >= (std::uint64_t{1} << level)) throw ArgumentError("cube coordinate out of range");
    }
    keys_.push_back(c.key());
  }
  std::sort(keys_.begin(), keys_.end());
  keys_.erase(std::unique(keys_.begin(), keys_.end()), keys_.end());
}

DyadicCover DyadicCover::full(int dim, int level) {
  check_level(dim, level);
  std::vector<std::uint64_t> keys(std::size_t{1} << (dim * level));
  for (std::size_t i = 0; i < keys.size(); ++i) keys[i] = i;
  return DyadicCover(dim, level, std::move(keys));
}

std::vector<CubeIndex> DyadicCover::cubes() const {
  std::vector<CubeIndex> out;
  out.reserve(keys_.size());
  for (auto k : keys_) out.push_back(CubeIndex::from_key(dim_, level_, k));
  return out;
}

bool DyadicCover::contains_key(std::uint64_t key) const { return std::binary_search(keys_.begin(), keys_.end(), key); }

bool DyadicCover::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) throw ArgumentError("point dimension differs from cover");
  return contains_key(key_of_point(x, level_));
}

double DyadicCover::volume() const { return static_cast<double>(keys_.size()) * std::ldexp(1.0, -dim_ * level_); }

DyadicCover DyadicCover::refined(int level) const {
  if (level < level_) throw ArgumentError("cannot refine a cover to a coarser level");
  if (level == level_) return *this;
  std::vector<std::uint64_t> out;
  out.reserve(keys_.size() << (dim_ * (level - level_)));
  for (auto k : keys_) {
    auto kids = descendant_keys(dim_, level_, k, level);
    out.insert(out.end(), kids.begin(), kids.end());
  }
  return DyadicCover(dim_, level, std::move(out));
}

bool DyadicCover::subset_of(const DyadicCover& other) const {
  if (other.dim_ != dim_) return false;
  if (level_ >= other.level_) {
    return std::all_of(keys_.begin(), keys_.end(), [&](std::uint64_t k) {
      return other.contains_key(ancestor_key(dim_, level_, k, other.level_));
    });
  }
  return refined(other.level_).subset_of(other);
}

// ---------------------------------------------------------------------------

PiecewiseConstantFn::PiecewiseConstantFn(int dim, int level, std::map<std::uint64_t, double> coeffs)
    : dim_(dim), level_(level), coeffs_(std::move(coeffs)) {
  check_level(dim, level);
  const std::uint64_t limit = std::uint64_t{1} << (dim * level);
  for (const auto& [k, v] : coeffs_) {
    if (k >= limit) throw ArgumentError("coefficient key out of range for level");
    if (!(v >= -1.0 && v <= 1.0)) throw DomainError("coefficient outside [-1,1]");
  }
}

PiecewiseConstantFn PiecewiseConstantFn::constant(int dim, int level, double value) {
  check_level(dim, level);
  std::map<std::uint64_t, double> c;
  if (value != 0.0) {
    const std::uint64_t n = std::uint64_t{1} << (dim * level);
    for (std::uint64_t k = 0; k < n; ++k) c.emplace_hint(c.end(), k, value);
  }
  return PiecewiseConstantFn(dim, level, std::move(c));
}

PiecewiseConstantFn PiecewiseConstantFn::from_values(int dim, int level, std::span<const double> dense) {
  check_level(dim, level);
  if (dense.size() != (std::size_t{1} << (dim * level))) throw ArgumentError("dense coefficient count mismatch");
  std::map<std::uint64_t, double> c;
  for (std::size_t k = 0; k < dense.size(); ++k) {
    if (dense[k] != 0.0) c.emplace_hint(c.end(), k, dense[k]);
  }
  return PiecewiseConstantFn(dim, level, std::move(c));
}

double PiecewiseConstantFn::coeff(std::uint64_t key) const {
  auto it = coeffs_.find(key);
  return it == coeffs_.end() ? 0.0 : it->second;
}

double PiecewiseConstantFn::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) throw ArgumentError("point dimension differs from function");
  return coeff(key_of_point(x, level_));
}

PiecewiseConstantFn PiecewiseConstantFn::refined(int level) const {
  if (level < level_) throw ArgumentError("refinement level below function level");
  if (level == level_) return *this;
  std::map<std::uint64_t, double> out;
  for (const auto& [k, v] : coeffs_) {
    for (auto child : descendant_keys(dim_, level_, k, level)) out.emplace_hint(out.end(), child, v);
  }
  return PiecewiseConstantFn(dim_, level, std::move(out));
}

PiecewiseConstantFn refine(const PiecewiseConstantFn& f, int level) { return f.refined(level); }

// ---------------------------------------------------------------------------

double ConfidenceBand::lower(std::span<const double> x) const {
  return domain.contains(x) ? center(x) - half_width : outside(x);
}

double ConfidenceBand::upper(std::span<const double> x) const {
  return domain.contains(x) ? center(x) + half_width : outside(x);
}

DyadicCover sign_crossing_set(const ConfidenceBand& band, int out_level) {
  if (band.half_width < 0.0) throw ArgumentError("negative band half-width");
  if (out_level < band.center.level() || out_level < band.domain.level()) {
    throw ArgumentError("output level coarser than the band");
  }
  const int dim = band.domain.dim();
  const int center_level = band.center.level();
  std::vector<std::uint64_t> out;
  const auto refined_domain = band.domain.refined(out_level);
  for (auto k : refined_domain.keys()) {
    const double c = band.center.coeff(ancestor_key(dim, out_level, k, center_level));
    if (sign_of(c - band.half_width) != sign_of(c + band.half_width)) out.push_back(k);
  }
  return DyadicCover(dim, out_level, std::move(out));
}

}  // namespace alearn
