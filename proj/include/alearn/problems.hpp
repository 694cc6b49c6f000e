#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "alearn/dyadic.hpp"
#include "alearn/rng.hpp"

namespace alearn {

/// Known marginal distribution Pi of X on [0,1]^d.
///
/// Implementations give exact cube masses and exact within-cube conditional sampling,
/// so conditioning on an arbitrary DyadicCover is a two-stage draw: pick a cube with
/// probability proportional to its mass, then draw inside it.
class Marginal {
 public:
  virtual ~Marginal() = default;

  virtual std::string_view kind() const = 0;
  virtual int dim() const = 0;
  virtual double density(std::span<const double> x) const = 0;
  virtual double cube_mass(int level, std::uint64_t key) const = 0;
  /// Draws X ~ Pi( . | cube). Requires cube_mass(level, key) > 0.
  virtual void sample_in_cube(int level, std::uint64_t key, Rng& rng, std::span<double> out) const = 0;
  /// Dyadic cover whose union carries all the mass.
  virtual DyadicCover support() const = 0;
  /// Finest level at which the density changes; cubes at or below it have constant density.
  virtual int resolution_level() const = 0;
  /// Bounds of the density on its support.
  virtual double density_min() const = 0;
  virtual double density_max() const = 0;
};

class UniformMarginal final : public Marginal {
 public:
  explicit UniformMarginal(int dim);
  std::string_view kind() const override { return "uniform"; }
  int dim() const override { return dim_; }
  double density(std::span<const double> x) const override;
  double cube_mass(int level, std::uint64_t key) const override;
  void sample_in_cube(int level, std::uint64_t key, Rng& rng, std::span<double> out) const override;
  DyadicCover support() const override { return DyadicCover::full(dim_, 0); }
  int resolution_level() const override { return 0; }
  double density_min() const override { return 1.0; }
  double density_max() const override { return 1.0; }

 private:
  int dim_;
};

/// Density constant on each cube of a fixed level; zero entries lie outside the support.
class PiecewiseDensityMarginal final : public Marginal {
 public:
  /// `densities` has one entry per level-`level` cube, key order; normalized to total mass 1.
  PiecewiseDensityMarginal(int dim, int level, std::vector<double> densities);
  std::string_view kind() const override { return "dyadic-piecewise-density"; }
  int dim() const override { return dim_; }
  double density(std::span<const double> x) const override;
  double cube_mass(int level, std::uint64_t key) const override;
  void sample_in_cube(int level, std::uint64_t key, Rng& rng, std::span<double> out) const override;
  DyadicCover support() const override;
  int resolution_level() const override { return level_; }
  double density_min() const override;
  double density_max() const override;

 private:
  int dim_;
  int level_;
  std::vector<double> density_;
};

/// Uniform draw inside a cube.
void uniform_in_cube(const CubeIndex& cube, Rng& rng, std::span<double> out);

struct LabeledSample {
  Point x;
  int y = 1;
};

/// Synthetic distribution oracle with its certified smoothness and noise constants.
struct Problem {
  std::string name;
  int dim = 1;
  double beta = 1.0;        ///< Holder exponent in (0, 1]
  double gamma = 1.0;       ///< low-noise exponent
  double noise_B = 1.0;     ///< Pi(|eta| <= t) <= noise_B t^gamma
  double holder_B1 = 1.0;   ///< |eta(x1) - eta(x2)| <= B1 |x1 - x2|_inf^beta
  std::optional<double> assumption2_B2;
  double u1 = 1.0;
  double u2 = 1.0;
  bool upper_bound_regime = true;  ///< beta * gamma <= d
  std::function<double(std::span<const double>)> eta;
  std::shared_ptr<const Marginal> marginal;

  double eta_at(std::span<const double> x) const { return eta(x); }
};

/// Checks the documented invariants of a Problem; throws ArgumentError on violation.
void validate(const Problem& p);

/// Exact Pi-measure of a cover.
double pi_measure(const Problem& p, const DyadicCover& a);
/// Exact Pi-measure of one cube.
double pi_measure(const Problem& p, const CubeIndex& cube);

/// Pi( . | A) sampler with the cube lottery precomputed.
class ConditionalSampler {
 public:
  ConditionalSampler(const Problem& p, const DyadicCover& a);

  double mass() const { return total_; }
  /// Draw order: one uniform for the cube lottery, then the within-cube draws.
  Point draw(Rng& rng) const;

 private:
  std::shared_ptr<const Marginal> marginal_;
  DyadicCover cover_;
  std::vector<double> cumulative_;
  std::vector<std::uint64_t> keys_;
  double total_ = 0.0;
};

Point sample_x(const Problem& p, const DyadicCover& a, Rng& rng);
int sample_y(const Problem& p, std::span<const double> x, Rng& rng);

/// n i.i.d. labeled draws from Pi( . | A); per sample: lottery, within-cube, label.
std::vector<LabeledSample> draw_labeled(const Problem& p, const ConditionalSampler& sampler, std::size_t n, Rng& rng);

/// Catalog: ramp1d, tent1d, gradient2d, convex1d, minimax (default construction, sigma = all ones),
/// shifted_ramp1d (ramp with a non-dyadic boundary).
std::vector<Problem> builtin_problems();
std::vector<std::string> problem_names();
/// Catalog lookup; also accepts the constant-eta test problems "const:<value>:<dim>".
Problem find_problem(std::string_view name);
/// eta == value everywhere with uniform marginal.
Problem constant_problem(double value, int dim = 1);

}  // namespace alearn
