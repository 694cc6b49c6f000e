#include "alearn/active_learner.hpp"

#include <cmath>
#include <string>

#include "alearn/estimation.hpp"
#include "alearn/model_selection.hpp"

namespace alearn {

std::string_view to_string(Variant v) { return v == Variant::k1a ? "1a" : "1b"; }

Variant parse_variant(std::string_view s) {
  if (s == "1a") return Variant::k1a;
  if (s == "1b") return Variant::k1b;
  throw ArgumentError("variant must be 1a or 1b, got '" + std::string(s) + "'");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::kEmptyActiveSet: return "empty_active_set";
    case Termination::kBudgetExhausted: return "budget_exhausted";
    case Termination::kLoopEnd: return "loop_end";
  }
  return "unknown";
}

void LearnerConfig::validate() const {
  if (budget_N < 16) throw ArgumentError("label budget must be at least 16");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("alpha must lie in (0,1)");
  if (!(band_D > 0.0)) throw ArgumentError("band constant must be positive");
  if (!(K1 > 0.0)) throw ArgumentError("K1 must be positive");
  if (d < 1) throw ArgumentError("dimension must be positive");
}

std::uint64_t RunTrace::labels_used() const {
  std::uint64_t total = 0;
  for (const auto& it : iterations) total += it.N_act;
  return total;
}

std::uint64_t initial_density(std::size_t budget) {
  const auto e = static_cast<int>(std::floor(std::log2(std::sqrt(static_cast<double>(budget)))));
  return std::uint64_t{1} << e;
}

double band_half_width(const LearnerConfig& cfg, int m_hat, std::uint64_t N_k) {
  const double l = std::log(static_cast<double>(cfg.budget_N) / cfg.alpha);
  return cfg.band_D * l * l * std::sqrt(std::ldexp(1.0, cfg.d * m_hat) / static_cast<double>(N_k));
}

namespace {

/// `previous` refined to `fit`'s level, with the cubes of `domain` overwritten by `fit`.
PiecewiseConstantFn overwrite_on(const PiecewiseConstantFn& previous, const PiecewiseConstantFn& fit, const DyadicCover& domain) {
  auto coeffs = previous.refined(fit.level()).coeffs();
  const auto refined_domain = domain.refined(fit.level());
  for (auto k : refined_domain.keys()) {
    const double v = fit.coeff(k);
    if (v == 0.0) coeffs.erase(k);
    else coeffs[k] = v;
  }
  return PiecewiseConstantFn(fit.dim(), fit.level(), std::move(coeffs));
}

}  // namespace

RunTrace run_active(const Problem& p, const LearnerConfig& cfg, RunStream stream) {
  cfg.validate();
  if (cfg.d != p.dim) throw ArgumentError("learner dimension differs from problem dimension");
  const SelectionConfig sel{cfg.K1, 2.0, cfg.alpha, std::log(static_cast<double>(cfg.budget_N) / cfg.alpha)};

  RunTrace trace;
  std::uint64_t budget_left = cfg.budget_N;
  std::uint64_t density = initial_density(cfg.budget_N);
  int m_prev = 0;
  // eta_0 = 0 and F_0 = all constants in [-1, 1]: a full-width band over the whole cube.
  PiecewiseConstantFn estimate = PiecewiseConstantFn::constant(p.dim, 0, 0.0);
  ConfidenceBand band{estimate, 1.0, DyadicCover::full(p.dim, 0), estimate};

  for (int k = 1;; ++k) {
    if (k > 62 || density > (std::uint64_t{1} << 61)) {
      trace.termination = Termination::kLoopEnd;
      break;
    }
    density *= 2;
    const DyadicCover active = sign_crossing_set(band, band.center.level());
    const double pi_active = active.empty() ? 0.0 : pi_measure(p, active);
    const auto n_act = static_cast<std::uint64_t>(std::floor(static_cast<double>(density) * pi_active));
    trace.final_pi_active = pi_active;
    if (!(pi_active > 0.0)) {
      trace.termination = Termination::kEmptyActiveSet;
      break;
    }
    if (budget_left < n_act) {
      trace.termination = Termination::kBudgetExhausted;
      break;
    }
    if (n_act == 0) {
      // Active set below one label at this density: nothing further can be learned.
      trace.termination = Termination::kEmptyActiveSet;
      break;
    }

    Rng rng(stream.seed, stream.run_id, static_cast<std::uint64_t>(k), StreamKind::kActiveIteration);
    const ConditionalSampler sampler(p, active);
    const auto sample = draw_labeled(p, sampler, n_act, rng);
    budget_left -= n_act;

    std::span<const LabeledSample> select_part(sample);
    std::span<const LabeledSample> fit_part(sample);
    if (cfg.variant == Variant::k1b) {
      const std::size_t first = (sample.size() + 1) / 2;
      select_part = std::span<const LabeledSample>(sample).first(first);
      fit_part = std::span<const LabeledSample>(sample).subspan(first);
    }
    const int m_hat = select_level_active(select_part, m_prev, active, p, sel, cfg.budget_N);
    const auto fit = fit_histogram(fit_part, m_hat, active, p);
    const double delta = band_half_width(cfg, m_hat, density);

    const auto next_estimate = overwrite_on(estimate, fit, active);
    band = ConfidenceBand{fit, delta, active, estimate};
    estimate = next_estimate;
    m_prev = m_hat;

    trace.iterations.push_back(IterationRecord{k, density, n_act, m_hat, delta, pi_active, budget_left});
    trace.active_sets.push_back(active);
    if (trace.labels_used() > cfg.budget_N) throw std::logic_error("label budget exceeded");
  }
  trace.final_estimate = estimate;
  trace.final_band = band;
  return trace;
}

int classify(const RunTrace& trace, std::span<const double> x) { return sign_of(trace.final_estimate(x)); }

PassiveResult run_passive(const Problem& p, std::size_t n, const LearnerConfig& cfg, RunStream stream) {
  if (n < 8) throw ArgumentError("passive learner needs n >= 8");
  const auto full = DyadicCover::full(p.dim, 0);
  Rng rng(stream.seed, stream.run_id, 0, StreamKind::kPassiveSample);
  const auto sample = draw_labeled(p, ConditionalSampler(p, full), n, rng);
  const SelectionConfig sel{cfg.K1, 2.0, cfg.alpha, 3.0};
  const int m_hat = select_level(sample, sel, n, p.dim);
  return PassiveResult{fit_histogram(sample, m_hat, full, p), m_hat};
}

}  // namespace alearn
