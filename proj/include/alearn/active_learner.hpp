#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "alearn/dyadic.hpp"
#include "alearn/problems.hpp"

namespace alearn {

enum class Variant { k1a, k1b };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view s);

struct LearnerConfig {
  std::size_t budget_N = 4096;
  double alpha = 0.05;
  double K1 = 1.5;
  double band_D = 0.03;  ///< band constant in delta_k = D ln^2(N/alpha) sqrt(2^{d m_k} / N_k)
  Variant variant = Variant::k1a;
  int d = 1;

  void validate() const;
};

/// Identifies the random streams of one run: iteration k draws from Rng(seed, run_id, k, ...).
struct RunStream {
  std::uint64_t seed = 0;
  std::uint64_t run_id = 0;
};

struct IterationRecord {
  int k = 0;
  std::uint64_t N_k = 0;
  std::uint64_t N_act = 0;  ///< floor(N_k Pi(A_k)) labels requested
  int m_hat = 0;
  double delta_k = 0.0;
  double pi_active = 0.0;
  std::uint64_t remaining_LB = 0;  ///< after the draw
};

enum class Termination { kEmptyActiveSet, kBudgetExhausted, kLoopEnd };
std::string_view to_string(Termination t);

struct RunTrace {
  std::vector<IterationRecord> iterations;
  std::vector<DyadicCover> active_sets;  ///< A_k for each executed iteration
  /// Last estimate on its active set, frozen predecessors elsewhere.
  PiecewiseConstantFn final_estimate;
  ConfidenceBand final_band;
  Termination termination = Termination::kLoopEnd;
  /// Pi of the active set computed at the break (0 when it was empty).
  double final_pi_active = 0.0;

  std::uint64_t labels_used() const;
};

/// Initial exponent: N_0 = 2^{floor(log2 sqrt N)}.
std::uint64_t initial_density(std::size_t budget);

/// delta_k = band_D ln^2(N/alpha) sqrt(2^{d m} / N_k).
double band_half_width(const LearnerConfig& cfg, int m_hat, std::uint64_t N_k);

/// Runs the plug-in active learner until the band leaves no uncertain region or the budget runs out.
RunTrace run_active(const Problem& p, const LearnerConfig& cfg, RunStream stream);

/// sign of the final composite estimate, sign(0) = +1.
int classify(const RunTrace& trace, std::span<const double> x);

struct PassiveResult {
  PiecewiseConstantFn estimate;
  int m_hat = 0;
};

/// n unconditional draws, level from the standalone penalized scheme with s = 3,
/// histogram fit on [0,1]^d.
PassiveResult run_passive(const Problem& p, std::size_t n, const LearnerConfig& cfg, RunStream stream);

}  // namespace alearn
