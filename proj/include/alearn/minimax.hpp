#pragma once

#include <memory>
#include <vector>

#include "alearn/dyadic.hpp"
#include "alearn/problems.hpp"
#include "alearn/rng.hpp"

namespace alearn {

/// Parameters of the hypercube-of-bumps lower-bound construction.
struct BumpParams {
  int d = 1;
  int q = 16;        ///< grid parameter, power of two
  int m_cells = 8;   ///< number of perturbed cells
  int v = 4;
  int r1 = 3;
  int r2 = 2;
  double beta = 1.0;
  double gamma = 1.0;
  double holder_L = 1.0;
  double side_c = 8.0;  ///< m_cells * q^-d <= side_c * q^(-beta*gamma)
  double holder_C = 0.0;  ///< C_{L,beta}; filled by make_bump_params
};

/// Smallest admissible (r2, r1, v) for dimension d, m_cells = floor(c2 * q^(d - beta*gamma)),
/// and holder_C from the numerical Holder quotient of the bump profile.
BumpParams make_bump_params(int d, int q, double beta, double gamma, double c2 = 8.0, double holder_L = 1.0);
void validate(const BumpParams& params);

struct SigmaHypothesis {
  std::vector<int> sigma;
};

int hamming(const SigmaHypothesis& a, const SigmaHypothesis& b);

struct SupportGeometry {
  int grid_level = 0;                 ///< log2 q
  std::vector<CubeIndex> ordered_cells;
  std::vector<int> rank_of_key;       ///< cell key -> position in ordered_cells
  DyadicCover S;
  DyadicCover A0;
  double r_S = 0.0;
  double outer_radius = 0.0;          ///< r_S + q^(-beta*gamma/d)

  bool in_S(std::uint64_t cell_key) const { return rank_of_key[cell_key] < static_cast<int>(S.size()); }
};

SupportGeometry make_geometry(const BumpParams& params);

/// Radius sandwich B+(0, k/q) in S in B+(0, (k + 3 sqrt d)/q); returns the k found or 0.
int radius_sandwich_k(const SupportGeometry& geom, const BumpParams& params);

/// Smooth step: 1 on (-inf, 2^-v], 0 on [1/2, inf).
double bump_u(double x, int v);
double bump_phi(std::span<const double> x, const BumpParams& params);
/// Holder-beta quotient sup of r -> bump_u(r, v) over a dense grid.
double bump_holder_quotient(int v, double beta, int grid = 4000);

double eta_sigma(std::span<const double> x, const SigmaHypothesis& sigma, const SupportGeometry& geom,
                 const BumpParams& params);
double marginal_density_p(std::span<const double> x, const SupportGeometry& geom, const BumpParams& params);

/// Annulus density on construction cells of S.
double annulus_density(const BumpParams& params);
/// Uniform density on A0.
double outer_density(const SupportGeometry& geom, const BumpParams& params);

/// Randomized greedy code containing all-ones, pairwise distance >= ceil(m/8), size >= 1 + 2^(m/8).
std::vector<SigmaHypothesis> gilbert_varshamov(int m_cells, Rng& rng, int max_draws = 1000000);

/// KL( Bern((1+eta1)/2) || Bern((1+eta2)/2) ).
double bernoulli_kl(double eta1, double eta2);
double kl_per_sample(std::span<const double> x, const SigmaHypothesis& s1, const SigmaHypothesis& s2,
                     const SupportGeometry& geom, const BumpParams& params);

/// Pi(sign eta_s1 != sign eta_s2) = hamming * q^-d.
double separation(const SigmaHypothesis& s1, const SigmaHypothesis& s2, const SupportGeometry& geom,
                  const BumpParams& params);

/// Holder constant (sup-norm metric) built from the pieces of eta_sigma.
double constructed_holder_constant(const SupportGeometry& geom, const BumpParams& params);
/// Lower bound of |eta_sigma| on the support of the marginal.
double eta_floor_on_support(const SupportGeometry& geom, const BumpParams& params);

class MinimaxAnnulusMarginal final : public Marginal {
 public:
  MinimaxAnnulusMarginal(SupportGeometry geom, BumpParams params);
  std::string_view kind() const override { return "minimax-annulus"; }
  int dim() const override { return params_.d; }
  double density(std::span<const double> x) const override;
  double cube_mass(int level, std::uint64_t key) const override;
  void sample_in_cube(int level, std::uint64_t key, Rng& rng, std::span<double> out) const override;
  DyadicCover support() const override;
  int resolution_level() const override { return geom_.grid_level + params_.r1; }
  double density_min() const override;
  double density_max() const override;

 private:
  double cell_mass_within(const CubeIndex& cube, std::uint64_t cell_key) const;

  SupportGeometry geom_;
  BumpParams params_;
  double annulus_density_;
  double outer_density_;
};

/// A fully assembled member P_sigma of the hypercube family.
struct MinimaxFamily {
  BumpParams params;
  std::shared_ptr<const SupportGeometry> geom;
  std::shared_ptr<const MinimaxAnnulusMarginal> marginal;
  /// Regularity constants: extreme cube mass / volume over support cubes at levels grid..resolution.
  double u1 = 1.0;
  double u2 = 1.0;

  explicit MinimaxFamily(BumpParams params);
  Problem problem(const SigmaHypothesis& sigma) const;
  SigmaHypothesis all_ones() const { return SigmaHypothesis{std::vector<int>(params.m_cells, 1)}; }
};

/// Low-noise fit: C_hat = max_t Pi(|eta| <= t) / t^gamma over the grid, by cellwise quadrature.
struct LowNoiseFit {
  std::vector<double> t;
  std::vector<double> mass;
  double c_hat = 0.0;
};
LowNoiseFit fit_low_noise(const Problem& p, const std::vector<double>& t_grid, int quad_level);

}  // namespace alearn
