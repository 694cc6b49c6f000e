#pragma once

#include <span>
#include <vector>

#include "alearn/dyadic.hpp"
#include "alearn/problems.hpp"

namespace alearn {

struct SelectionConfig {
  double K1 = 1.5;     ///< penalty constant
  double K2 = 2.0;     ///< oracle constant
  double alpha = 0.05;
  double s = 3.0;      ///< confidence parameter of the standalone scheme

  void validate() const;
};

/// Levels m >= 0 with 2^{dm} <= n / ln^2 n (m = 0 always included). Requires n >= 8.
std::vector<int> index_set(std::size_t n, int dim);

struct LevelScore {
  int level = 0;
  double risk = 0.0;
  double penalty = 0.0;
  double objective() const { return risk + penalty; }
};

/// Penalized objective of the standalone scheme at every level of index_set(n, dim):
/// risk + K1 (2^{dm} + m (s + ln log2 n)) / n.
std::vector<LevelScore> score_levels(std::span<const LabeledSample> sample, const SelectionConfig& cfg, std::size_t n, int dim);

/// argmin of score_levels, ties toward the smallest level.
int select_level(std::span<const LabeledSample> sample, const SelectionConfig& cfg, std::size_t n, int dim);

/// Smallest m >= 1 with E(bar eta_m - eta)^2 <= K2 2^{dm} / n (squared bias at quad level m + quad_offset).
int oracle_level(const Problem& p, std::size_t n, const SelectionConfig& cfg, int quad_offset = 6);

/// Confidence term of the in-loop penalty: m (ln N + ln 1/alpha).
double active_confidence_term(int m, std::size_t budget, double alpha);

/// In-loop penalized objective over m >= base_m whose restricted dimension |A| 2^{d(m - level A)}
/// stays <= n / ln^2 n, n = sample size:
/// risk + K1 (2^{dm} Pi(A) + (m - base_m)(ln N + ln 1/alpha)) / n.
std::vector<LevelScore> score_levels_active(std::span<const LabeledSample> sample, int base_m, const DyadicCover& a,
                                            const Problem& p, const SelectionConfig& cfg, std::size_t budget);

/// argmin of score_levels_active (ties toward the smallest level); base_m when no level is admissible.
int select_level_active(std::span<const LabeledSample> sample, int base_m, const DyadicCover& a, const Problem& p,
                        const SelectionConfig& cfg, std::size_t budget);

}  // namespace alearn
