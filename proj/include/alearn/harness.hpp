#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "alearn/active_learner.hpp"
#include "alearn/evaluation.hpp"

namespace alearn {

/// Run CSV schema. Bump the version whenever the column set changes.
inline constexpr int kRunCsvVersion = 1;
inline constexpr std::string_view kRunCsvHeader =
    "run_id,budget,seed,row_type,k,N_k,N_act,m_hat,delta_k,pi_active,remaining_LB,excess_risk,termination";
inline constexpr int kRatesCsvVersion = 1;
inline constexpr std::string_view kRatesCsvHeader = "method,budget,replications,mean_excess_risk,stderr,mean_m_hat,mean_labels";
inline constexpr int kMinimaxCsvVersion = 1;
inline constexpr std::string_view kMinimaxCsvHeader = "certificate,passed,measured,bound,detail";

struct ExperimentConfig {
  std::string problem = "ramp1d";
  std::vector<std::size_t> budgets{4096};
  int replications = 1;
  double alpha = 0.05;
  double K1 = 1.5;
  double band_D = 0.03;
  Variant variant = Variant::k1a;
  std::uint64_t seed = 1;
  std::string out_path;  ///< empty or "-" writes the CSV to the output stream
  int jobs = 1;
  int q = 16;    ///< minimax-check grid parameter
  int dim = 1;   ///< minimax-check dimension

  void validate() const;
  LearnerConfig learner(std::size_t budget, int problem_dim) const;
};

/// Sets one key of the config; throws ArgumentError on unknown keys or malformed values.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);
/// key=value lines; blank lines and lines starting with '#' or ';' are ignored.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});
/// Comma- or space-separated list of positive integers.
std::vector<std::size_t> parse_budgets(std::string_view text);

/// Quadrature level used for excess risk: 16 in d = 1, 10 in d = 2, 20 / d beyond.
int default_quad_level(int dim);

/// Stream identifier of replication `rep` at `budget`; independent of the other budgets and replication count.
std::uint64_t run_stream_id(std::size_t budget, int rep);

/// fn(i) for every i in [0, count) on up to `jobs` threads. Exceptions are rethrown after all workers stop.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

struct RunResult {
  std::size_t run_id = 0;  ///< position in (budget, replication) order
  std::size_t budget = 0;
  int replication = 0;
  RunTrace trace;
  double excess_risk = 0.0;
};

std::vector<RunResult> run_experiment(const ExperimentConfig& cfg);
void write_run_csv(std::ostream& os, const ExperimentConfig& cfg, const std::vector<RunResult>& runs);

struct RatePoint {
  std::size_t budget = 0;
  double mean_excess = 0.0;
  double stderr_ = 0.0;
  double mean_m_hat = 0.0;
  double mean_labels = 0.0;
};

struct RatesReport {
  std::vector<RatePoint> active;
  std::vector<RatePoint> passive;
  std::optional<LineFit> active_fit;   ///< empty when a mean risk is zero or fewer than 4 budgets
  std::optional<LineFit> passive_fit;
};

RatesReport compute_rates(const ExperimentConfig& cfg);
void write_rates_csv(std::ostream& os, const ExperimentConfig& cfg, const RatesReport& report);

struct Certificate {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
};

struct MinimaxCheckParams {
  int d = 1;
  int q = 16;
  double beta = 1.0;
  double gamma = 1.0;
  std::uint64_t seed = 1;
  int holder_pairs = 10000;
  int kl_points = 10000;
};

/// Holder, low-noise, KL, Gilbert-Varshamov, separation and mass certificates of the construction.
std::vector<Certificate> minimax_certificates(const MinimaxCheckParams& params);
void write_minimax_csv(std::ostream& os, const std::vector<Certificate>& certs);

/// Subcommands. Return the process exit code; diagnostics go to `err`.
int cmd_run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_rates(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_minimax_check(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(std::string_view suite, const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);

/// printf %.10g, the number format of every CSV.
std::string format_number(double v);

}  // namespace alearn
