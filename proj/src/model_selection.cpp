#include "alearn/model_selection.hpp"

#include <cmath>

#include "alearn/estimation.hpp"

namespace alearn {

void SelectionConfig::validate() const {
  if (!(K1 > 0.0) || !(K2 > 0.0)) throw ArgumentError("K1 and K2 must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("alpha must lie in (0,1)");
}

std::vector<int> index_set(std::size_t n, int dim) {
  if (n < 8) throw ArgumentError("index set needs n >= 8");
  const double log_n = std::log(static_cast<double>(n));
  const double cap = static_cast<double>(n) / (log_n * log_n);
  std::vector<int> levels{0};
  for (int m = 1; m <= max_level(dim); ++m) {
    if (std::ldexp(1.0, dim * m) > cap) break;
    levels.push_back(m);
  }
  return levels;
}

namespace {

int argmin_first(const std::vector<LevelScore>& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i].objective() < scores[best].objective()) best = i;
  }
  return scores[best].level;
}

}  // namespace

std::vector<LevelScore> score_levels(std::span<const LabeledSample> sample, const SelectionConfig& cfg, std::size_t n, int dim) {
  if (sample.empty()) throw ArgumentError("model selection needs a nonempty sample");
  const auto levels = index_set(n, dim);
  const auto risks = fitted_risks(sample, levels);
  const double nn = static_cast<double>(n);
  const double log_log = std::log(std::log2(nn));
  std::vector<LevelScore> out;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const int m = levels[i];
    const double s_m = m * (cfg.s + log_log);
    out.push_back(LevelScore{m, risks[i], cfg.K1 * (std::ldexp(1.0, dim * m) + s_m) / nn});
  }
  return out;
}

int select_level(std::span<const LabeledSample> sample, const SelectionConfig& cfg, std::size_t n, int dim) {
  return argmin_first(score_levels(sample, cfg, n, dim));
}

int oracle_level(const Problem& p, std::size_t n, const SelectionConfig& cfg, int quad_offset) {
  const int top = max_level(p.dim) - quad_offset;
  for (int m = 1; m <= top; ++m) {
    const double bias = squared_bias(p, m, m + quad_offset);
    if (bias <= cfg.K2 * std::ldexp(1.0, p.dim * m) / static_cast<double>(n)) return m;
  }
  return top;
}

double active_confidence_term(int m, std::size_t budget, double alpha) {
  return m * (std::log(static_cast<double>(budget)) + std::log(1.0 / alpha));
}

std::vector<LevelScore> score_levels_active(std::span<const LabeledSample> sample, int base_m, const DyadicCover& a,
                                            const Problem& p, const SelectionConfig& cfg, std::size_t budget) {
  if (base_m < a.level()) throw ArgumentError("base level coarser than the active cover");
  const double a_mass = pi_measure(p, a);
  if (!(a_mass > 0.0)) throw DomainError("empty cover");
  const std::size_t n = sample.size();
  const double nn = static_cast<double>(n);
  const double cap = n >= 8 ? nn / (std::log(nn) * std::log(nn)) : 0.0;
  std::vector<int> levels;
  for (int m = base_m; m <= max_level(p.dim); ++m) {
    const double dimension = static_cast<double>(a.size()) * std::ldexp(1.0, p.dim * (m - a.level()));
    if (dimension > cap) break;
    levels.push_back(m);
  }
  std::vector<LevelScore> out;
  if (levels.empty() || n == 0) return out;
  const auto risks = fitted_risks(sample, levels);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const int m = levels[i];
    const double pen = cfg.K1 * (std::ldexp(1.0, p.dim * m) * a_mass + active_confidence_term(m - base_m, budget, cfg.alpha)) / nn;
    out.push_back(LevelScore{m, risks[i], pen});
  }
  return out;
}

int select_level_active(std::span<const LabeledSample> sample, int base_m, const DyadicCover& a, const Problem& p,
                        const SelectionConfig& cfg, std::size_t budget) {
  const auto scores = score_levels_active(sample, base_m, a, p, cfg, budget);
  return scores.empty() ? base_m : argmin_first(scores);
}

}  // namespace alearn
