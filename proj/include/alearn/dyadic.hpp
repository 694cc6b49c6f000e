#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace alearn {

using Point = std::vector<double>;

/// Raised when a point or parameter lies outside the domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised for inconsistent arguments (level mismatches, malformed sizes).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sign with the convention sign(0) = +1.
inline int sign_of(double v) { return v < 0.0 ? -1 : 1; }

/// Largest level such that dim * level fits a 62-bit cube key.
int max_level(int dim);

/// Half-open dyadic cube prod [k_i 2^-m, (k_i + 1) 2^-m), with the face at 1 closed.
struct CubeIndex {
  int level = 0;
  std::vector<std::uint32_t> coords;

  /// Row-major key with coords[0] most significant, so key order is lexicographic order.
  std::uint64_t key() const;
  static CubeIndex from_key(int dim, int level, std::uint64_t key);

  int dim() const { return static_cast<int>(coords.size()); }
  double side() const;
  double volume() const;
  double lower(int axis) const;
  double upper(int axis) const;
  Point center() const;
  bool contains(std::span<const double> x) const;

  friend bool operator==(const CubeIndex&, const CubeIndex&) = default;
  friend auto operator<=>(const CubeIndex&, const CubeIndex&) = default;
};

/// Unique cube of level m containing x; coordinates equal to 1.0 map to the last cube.
CubeIndex cube_of_point(std::span<const double> x, int m);
std::uint64_t key_of_point(std::span<const double> x, int m);

/// Keys of all level-`to` descendants of a level-`from` cube, ascending.
std::vector<std::uint64_t> descendant_keys(int dim, int from, std::uint64_t key, int to);
/// Key of the level-`to` ancestor (to <= from).
std::uint64_t ancestor_key(int dim, int from, std::uint64_t key, int to);

/// A union of cubes sharing one level, stored as a sorted duplicate-free key list.
class DyadicCover {
 public:
  DyadicCover() = default;
  DyadicCover(int dim, int level, std::vector<std::uint64_t> keys);
  DyadicCover(int dim, int level, const std::vector<CubeIndex>& cubes);

  static DyadicCover full(int dim, int level);
  static DyadicCover empty(int dim, int level) { return DyadicCover(dim, level, std::vector<std::uint64_t>{}); }

  int dim() const { return dim_; }
  int level() const { return level_; }
  const std::vector<std::uint64_t>& keys() const { return keys_; }
  std::size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }
  std::vector<CubeIndex> cubes() const;

  bool contains_key(std::uint64_t key) const;
  bool contains(std::span<const double> x) const;
  /// Lebesgue volume of the union.
  double volume() const;

  /// Same point set expressed at a finer level.
  DyadicCover refined(int level) const;
  /// Point-set inclusion: every cube of *this lies inside `other`.
  bool subset_of(const DyadicCover& other) const;

  friend bool operator==(const DyadicCover&, const DyadicCover&) = default;

 private:
  int dim_ = 1;
  int level_ = 0;
  std::vector<std::uint64_t> keys_;
};

/// Element of F_m: one coefficient in [-1, 1] per cube, absent cubes are 0.
class PiecewiseConstantFn {
 public:
  PiecewiseConstantFn() = default;
  PiecewiseConstantFn(int dim, int level, std::map<std::uint64_t, double> coeffs);

  static PiecewiseConstantFn constant(int dim, int level, double value);
  static PiecewiseConstantFn from_values(int dim, int level, std::span<const double> dense);

  int dim() const { return dim_; }
  int level() const { return level_; }
  const std::map<std::uint64_t, double>& coeffs() const { return coeffs_; }
  double coeff(std::uint64_t key) const;
  double operator()(std::span<const double> x) const;

  PiecewiseConstantFn refined(int level) const;

 private:
  int dim_ = 1;
  int level_ = 0;
  std::map<std::uint64_t, double> coeffs_;
};

/// Returns f expressed at level m' >= f.level(); pointwise identical.
PiecewiseConstantFn refine(const PiecewiseConstantFn& f, int level);

/// The set of F_m functions within half_width of `center` on `domain`, frozen to `outside` elsewhere.
struct ConfidenceBand {
  PiecewiseConstantFn center;
  double half_width = 0.0;
  DyadicCover domain;
  PiecewiseConstantFn outside;

  double lower(std::span<const double> x) const;
  double upper(std::span<const double> x) const;
};

/// Level-out_level cubes inside band.domain where sign(center - delta) != sign(center + delta).
DyadicCover sign_crossing_set(const ConfidenceBand& band, int out_level);

}  // namespace alearn
