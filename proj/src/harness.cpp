#include "alearn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "alearn/minimax.hpp"
#include "alearn/verify.hpp"

namespace alearn {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) s = s.substr(1, s.size() - 2);
  return std::string(s);
}

template <typename T>
T parse_integer(std::string_view key, std::string_view text) {
  T value{};
  const auto s = trim(text);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ArgumentError("config key '" + std::string(key) + "': expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

double parse_real(std::string_view key, std::string_view text) {
  const std::string s(trim(text));
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ArgumentError("config key '" + std::string(key) + "': expected a number, got '" + s + "'");
  }
}

void write_or_print(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& emit) {
  if (path.empty() || path == "-") {
    emit(out);
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  emit(f);
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::validate() const {
  if (budgets.empty()) throw ArgumentError("budgets must not be empty");
  if (!std::is_sorted(budgets.begin(), budgets.end())) throw ArgumentError("budgets must be sorted ascending");
  for (auto b : budgets) {
    if (b < 16) throw ArgumentError("every budget must be at least 16");
  }
  if (replications < 1) throw ArgumentError("replications must be at least 1");
  if (jobs < 1) throw ArgumentError("jobs must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("alpha must lie in (0,1)");
  if (!(K1 > 0.0)) throw ArgumentError("K1 must be positive");
  if (!(band_D > 0.0)) throw ArgumentError("band_D must be positive");
  if (q < 2 || (q & (q - 1)) != 0) throw ArgumentError("q must be a power of two");
  if (dim < 1) throw ArgumentError("dim must be positive");
}

LearnerConfig ExperimentConfig::learner(std::size_t budget, int problem_dim) const {
  LearnerConfig c;
  c.budget_N = budget;
  c.alpha = alpha;
  c.K1 = K1;
  c.band_D = band_D;
  c.variant = variant;
  c.d = problem_dim;
  return c;
}

std::vector<std::size_t> parse_budgets(std::string_view text) {
  std::vector<std::size_t> out;
  std::string token;
  auto flush = [&] {
    const auto t = trim(token);
    if (!t.empty()) out.push_back(parse_integer<std::size_t>("budgets", t));
    token.clear();
  };
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t' || c == '[' || c == ']') flush();
    else token.push_back(c);
  }
  flush();
  return out;
}

void apply_setting(ExperimentConfig& cfg, std::string_view key_in, std::string_view value_in) {
  const auto key = trim(key_in);
  const std::string value = unquote(value_in);
  if (key == "problem") cfg.problem = value;
  else if (key == "budgets" || key == "budget") cfg.budgets = parse_budgets(value);
  else if (key == "replications") cfg.replications = parse_integer<int>(key, value);
  else if (key == "alpha") cfg.alpha = parse_real(key, value);
  else if (key == "K1") cfg.K1 = parse_real(key, value);
  else if (key == "band_D") cfg.band_D = parse_real(key, value);
  else if (key == "variant") cfg.variant = parse_variant(value);
  else if (key == "seed") cfg.seed = parse_integer<std::uint64_t>(key, value);
  else if (key == "out" || key == "out_path") cfg.out_path = value;
  else if (key == "jobs") cfg.jobs = parse_integer<int>(key, value);
  else if (key == "q") cfg.q = parse_integer<int>(key, value);
  else if (key == "dim") cfg.dim = parse_integer<int>(key, value);
  else throw ArgumentError("unknown config key '" + std::string(key) + "'");
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#' || line.front() == ';' || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ArgumentError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

int default_quad_level(int dim) {
  if (dim == 1) return 16;
  if (dim == 2) return 10;
  return std::max(1, 20 / dim);
}

std::uint64_t run_stream_id(std::size_t budget, int rep) {
  return mix64(static_cast<std::uint64_t>(budget)) ^ static_cast<std::uint64_t>(rep);
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(count, 1)))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) threads.emplace_back(work);
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// run

std::vector<RunResult> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Problem p = find_problem(cfg.problem);
  const int quad = default_quad_level(p.dim);
  const auto reps = static_cast<std::size_t>(cfg.replications);
  std::vector<RunResult> runs(cfg.budgets.size() * reps);
  parallel_for(runs.size(), cfg.jobs, [&](std::size_t i) {
    RunResult& r = runs[i];
    r.run_id = i;
    r.budget = cfg.budgets[i / reps];
    r.replication = static_cast<int>(i % reps);
    r.trace = run_active(p, cfg.learner(r.budget, p.dim), RunStream{cfg.seed, run_stream_id(r.budget, r.replication)});
    r.excess_risk = excess_risk(r.trace.final_estimate, p, quad);
  });
  return runs;
}

void write_run_csv(std::ostream& os, const ExperimentConfig& cfg, const std::vector<RunResult>& runs) {
  os << kRunCsvHeader << '\n';
  const std::string seed = std::to_string(cfg.seed);
  for (const auto& r : runs) {
    const std::string prefix = std::to_string(r.run_id) + ',' + std::to_string(r.budget) + ',' + seed + ',';
    for (const auto& it : r.trace.iterations) {
      os << prefix << "iter," << it.k << ',' << it.N_k << ',' << it.N_act << ',' << it.m_hat << ','
         << format_number(it.delta_k) << ',' << format_number(it.pi_active) << ',' << it.remaining_LB << ",,\n";
    }
    const auto& its = r.trace.iterations;
    const int m_final = its.empty() ? 0 : its.back().m_hat;
    const std::uint64_t left = r.budget - r.trace.labels_used();
    os << prefix << "summary," << its.size() << ",," << r.trace.labels_used() << ',' << m_final << ','
       << format_number(r.trace.final_band.half_width) << ',' << format_number(r.trace.final_pi_active) << ',' << left << ','
       << format_number(r.excess_risk) << ',' << to_string(r.trace.termination) << '\n';
  }
}

int cmd_run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const auto runs = run_experiment(cfg);
    write_or_print(cfg.out_path, out, [&](std::ostream& os) { write_run_csv(os, cfg, runs); });
    if (!cfg.out_path.empty() && cfg.out_path != "-") {
      out << "problem " << cfg.problem << ", seed " << cfg.seed << ", " << runs.size() << " runs -> " << cfg.out_path << '\n';
      const auto reps = static_cast<std::size_t>(cfg.replications);
      for (std::size_t b = 0; b < cfg.budgets.size(); ++b) {
        std::vector<double> risk, labels;
        for (std::size_t r = 0; r < reps; ++r) {
          risk.push_back(runs[b * reps + r].excess_risk);
          labels.push_back(static_cast<double>(runs[b * reps + r].trace.labels_used()));
        }
        out << "  N=" << cfg.budgets[b] << "  mean excess risk " << format_number(mean_of(risk)) << "  mean labels used "
            << format_number(mean_of(labels)) << '\n';
      }
    }
    return 0;
  } catch (const std::exception& e) {
    err << "run: " << e.what() << '\n';
    return 2;
  }
}

// ---------------------------------------------------------------------------
// rates

RatesReport compute_rates(const ExperimentConfig& cfg) {
  cfg.validate();
  const Problem p = find_problem(cfg.problem);
  const int quad = default_quad_level(p.dim);
  const auto reps = static_cast<std::size_t>(cfg.replications);
  const std::size_t total = cfg.budgets.size() * reps;
  struct Cell {
    double active_risk, passive_risk, active_m, passive_m, labels;
  };
  std::vector<Cell> cells(total);
  parallel_for(total, cfg.jobs, [&](std::size_t i) {
    const std::size_t budget = cfg.budgets[i / reps];
    const int rep = static_cast<int>(i % reps);
    const RunStream stream{cfg.seed, run_stream_id(budget, rep)};
    const auto lc = cfg.learner(budget, p.dim);
    const auto trace = run_active(p, lc, stream);
    const auto passive = run_passive(p, budget, lc, stream);
    cells[i] = Cell{excess_risk(trace.final_estimate, p, quad), excess_risk(passive.estimate, p, quad),
                    trace.iterations.empty() ? 0.0 : static_cast<double>(trace.iterations.back().m_hat),
                    static_cast<double>(passive.m_hat), static_cast<double>(trace.labels_used())};
  });
  RatesReport report;
  std::vector<std::pair<double, double>> active_pts, passive_pts;
  bool active_positive = true, passive_positive = true;
  for (std::size_t b = 0; b < cfg.budgets.size(); ++b) {
    std::vector<double> ar, pr, am, pm, lab;
    for (std::size_t r = 0; r < reps; ++r) {
      const auto& c = cells[b * reps + r];
      ar.push_back(c.active_risk);
      pr.push_back(c.passive_risk);
      am.push_back(c.active_m);
      pm.push_back(c.passive_m);
      lab.push_back(c.labels);
    }
    const auto n = static_cast<double>(cfg.budgets[b]);
    report.active.push_back(RatePoint{cfg.budgets[b], mean_of(ar), stderr_of(ar), mean_of(am), mean_of(lab)});
    report.passive.push_back(RatePoint{cfg.budgets[b], mean_of(pr), stderr_of(pr), mean_of(pm), n});
    active_positive = active_positive && mean_of(ar) > 0.0;
    passive_positive = passive_positive && mean_of(pr) > 0.0;
    active_pts.emplace_back(n, mean_of(ar));
    passive_pts.emplace_back(n, mean_of(pr));
  }
  if (cfg.budgets.size() >= 4) {
    if (active_positive) report.active_fit = fit_rate(active_pts);
    if (passive_positive) report.passive_fit = fit_rate(passive_pts);
  }
  return report;
}

void write_rates_csv(std::ostream& os, const ExperimentConfig& cfg, const RatesReport& report) {
  os << kRatesCsvHeader << '\n';
  auto rows = [&](std::string_view method, const std::vector<RatePoint>& pts) {
    for (const auto& pt : pts) {
      os << method << ',' << pt.budget << ',' << cfg.replications << ',' << format_number(pt.mean_excess) << ','
         << format_number(pt.stderr_) << ',' << format_number(pt.mean_m_hat) << ',' << format_number(pt.mean_labels) << '\n';
    }
  };
  rows("active", report.active);
  rows("passive", report.passive);
}

int cmd_rates(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const auto report = compute_rates(cfg);
    write_or_print(cfg.out_path, out, [&](std::ostream& os) { write_rates_csv(os, cfg, report); });
    auto slope = [](const std::optional<LineFit>& f) {
      return f ? format_number(f->slope) + " (stderr " + format_number(f->stderr_) + ")"
               : std::string("undefined (needs >= 4 budgets with positive mean risk)");
    };
    // Keep stdout pure CSV when the CSV goes there.
    std::ostream& summary = cfg.out_path.empty() || cfg.out_path == "-" ? err : out;
    summary << "problem " << cfg.problem << ", " << cfg.replications << " replications per budget\n";
    summary << "  active slope:  " << slope(report.active_fit) << '\n';
    summary << "  passive slope: " << slope(report.passive_fit) << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "rates: " << e.what() << '\n';
    return 2;
  }
}

// ---------------------------------------------------------------------------
// minimax-check

std::vector<Certificate> minimax_certificates(const MinimaxCheckParams& mp) {
  std::vector<Certificate> certs;
  const MinimaxFamily family(make_bump_params(mp.d, mp.q, mp.beta, mp.gamma));
  const auto& params = family.params;
  const auto& geom = *family.geom;
  const int d = params.d;
  const double cell_vol = std::pow(static_cast<double>(params.q), -d);

  Rng gv_rng(mp.seed, 0, 0, StreamKind::kGilbertVarshamov);
  const auto code = gilbert_varshamov(params.m_cells, gv_rng);

  // (a) Holder: half global pairs, half pairs at dyadic-random small offsets.
  {
    Rng rng(mp.seed, 1, 0, StreamKind::kAux);
    SigmaHypothesis sigma{std::vector<int>(params.m_cells)};
    for (auto& s : sigma.sigma) s = rng.rademacher(0.5);
    const Problem p = family.problem(sigma);
    double worst = 0.0;
    Point x1(d), x2(d);
    for (int i = 0; i < mp.holder_pairs; ++i) {
      for (int j = 0; j < d; ++j) x1[j] = rng.uniform();
      if (i % 2 == 0) {
        for (int j = 0; j < d; ++j) x2[j] = rng.uniform();
      } else {
        const double r = std::exp2(-rng.uniform(2.0, 16.0));
        for (int j = 0; j < d; ++j) x2[j] = std::clamp(x1[j] + r * rng.uniform(-1.0, 1.0), 0.0, 1.0);
      }
      double dist = 0.0;
      for (int j = 0; j < d; ++j) dist = std::max(dist, std::abs(x1[j] - x2[j]));
      if (dist == 0.0) continue;
      worst = std::max(worst, std::abs(p.eta(x1) - p.eta(x2)) / std::pow(dist, params.beta));
    }
    certs.push_back(Certificate{"holder", worst <= p.holder_B1, worst, p.holder_B1,
                                std::to_string(mp.holder_pairs) + " pairs, sup-norm quotient vs constructed K"});
  }

  // (b) Low noise: one C_hat over a log t-grid, stable when q is doubled and quadrupled.
  {
    std::vector<double> c_hats;
    bool bounded = true;
    for (int factor : {1, 2, 4}) {
      const MinimaxFamily fam(make_bump_params(mp.d, mp.q * factor, mp.beta, mp.gamma));
      const Problem p = fam.problem(fam.all_ones());
      // Half-octave grid from 1/2 down past the bump scale, where the construction cells enter.
      const double t_min = 0.25 * eta_floor_on_support(*fam.geom, fam.params);
      std::vector<double> ts;
      for (int j = 0; ts.empty() || ts.back() > t_min; ++j) ts.push_back(0.5 * std::exp2(-0.5 * j));
      const int quad = std::max(default_quad_level(d), fam.marginal->resolution_level() + 4);
      const auto fit = fit_low_noise(p, ts, quad);
      for (std::size_t i = 0; i < fit.t.size(); ++i) {
        bounded = bounded && fit.mass[i] <= fit.c_hat * std::pow(fit.t[i], params.gamma) * (1.0 + 1e-12);
      }
      c_hats.push_back(fit.c_hat);
    }
    const double spread = *std::max_element(c_hats.begin(), c_hats.end()) / *std::min_element(c_hats.begin(), c_hats.end());
    certs.push_back(Certificate{"low_noise", bounded && spread <= 2.0, spread, 2.0,
                                "C_hat at q, 2q, 4q: " + format_number(c_hats[0]) + " " + format_number(c_hats[1]) + " " +
                                    format_number(c_hats[2]) + "; spread " + format_number(spread) + " <= 2"});
  }

  // (c) KL <= 8 (delta eta)^2 at marginal draws inside the construction cells.
  {
    Rng rng(mp.seed, 2, 0, StreamKind::kAux);
    const Problem p0 = family.problem(family.all_ones());
    const ConditionalSampler sampler(p0, geom.S);
    double worst = 0.0;
    bool ok = true;
    for (int i = 0; i < mp.kl_points; ++i) {
      const auto x = sampler.draw(rng);
      const auto& other = code[1 + static_cast<std::size_t>(i) % (code.size() - 1)];
      const double e1 = eta_sigma(x, family.all_ones(), geom, params);
      const double e2 = eta_sigma(x, other, geom, params);
      const double kl = kl_per_sample(x, family.all_ones(), other, geom, params);
      const double diff2 = (e1 - e2) * (e1 - e2);
      if (kl > 8.0 * diff2 * (1.0 + 1e-12) + 1e-300) ok = false;
      if (diff2 > 0.0) worst = std::max(worst, kl / diff2);
    }
    certs.push_back(Certificate{"kl", ok, worst, 8.0, std::to_string(mp.kl_points) + " support points, max KL / (delta eta)^2"});
  }

  // (d) Gilbert-Varshamov distances, exhaustive.
  {
    int min_dist = params.m_cells;
    for (std::size_t i = 0; i < code.size(); ++i) {
      for (std::size_t j = i + 1; j < code.size(); ++j) min_dist = std::min(min_dist, hamming(code[i], code[j]));
    }
    const int need = (params.m_cells + 7) / 8;
    const auto need_size = static_cast<std::size_t>(1 + std::ceil(std::exp2(params.m_cells / 8.0)));
    certs.push_back(Certificate{"gilbert_varshamov", min_dist >= need && code.size() >= need_size, static_cast<double>(min_dist),
                                static_cast<double>(need),
                                std::to_string(code.size()) + " codewords over " + std::to_string(params.m_cells) + " cells"});
  }

  // (e) Separation against a cellwise disagreement sum with exact masses.
  {
    const int quad = family.marginal->resolution_level() + 2;
    const auto cells = std::uint64_t{1} << (d * quad);
    double worst = 0.0;
    for (std::size_t i = 0; i < code.size(); ++i) {
      for (std::size_t j = i + 1; j < code.size(); ++j) {
        double mass = 0.0;
        for (std::uint64_t k = 0; k < cells; ++k) {
          const double w = family.marginal->cube_mass(quad, k);
          if (w <= 0.0) continue;
          const auto c = CubeIndex::from_key(d, quad, k).center();
          if (sign_of(eta_sigma(c, code[i], geom, params)) != sign_of(eta_sigma(c, code[j], geom, params))) mass += w;
        }
        const double sep = separation(code[i], code[j], geom, params);
        worst = std::max({worst, std::abs(mass - sep), std::abs(sep - hamming(code[i], code[j]) * cell_vol)});
      }
    }
    certs.push_back(Certificate{"separation", worst <= 1e-12, worst, 1e-12, "max |disagreement mass - hamming q^-d| over code pairs"});
  }

  // (f) Total mass, from exact cube masses and from density quadrature.
  {
    const int res = family.marginal->resolution_level();
    double exact = 0.0;
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << (d * res)); ++k) exact += family.marginal->cube_mass(res, k);
    const int fine = res + 4;
    double quad = 0.0;
    const double vol = std::ldexp(1.0, -d * fine);
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << (d * fine)); ++k) {
      quad += family.marginal->density(CubeIndex::from_key(d, fine, k).center()) * vol;
    }
    const double worst = std::max(std::abs(exact - 1.0), std::abs(quad - 1.0));
    certs.push_back(Certificate{"total_mass", worst <= 1e-6, worst, 1e-6,
                                "exact " + format_number(exact) + ", density quadrature " + format_number(quad)});
  }
  return certs;
}

void write_minimax_csv(std::ostream& os, const std::vector<Certificate>& certs) {
  os << kMinimaxCsvHeader << '\n';
  for (const auto& c : certs) {
    std::string detail = c.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    os << c.name << ',' << (c.passed ? 1 : 0) << ',' << format_number(c.measured) << ',' << format_number(c.bound) << ','
       << detail << '\n';
  }
}

int cmd_minimax_check(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    MinimaxCheckParams mp;
    mp.d = cfg.dim;
    mp.q = cfg.q;
    mp.seed = cfg.seed;
    const auto certs = minimax_certificates(mp);
    if (!cfg.out_path.empty() && cfg.out_path != "-") {
      write_or_print(cfg.out_path, out, [&](std::ostream& os) { write_minimax_csv(os, certs); });
    }
    bool all = true;
    for (const auto& c : certs) {
      out << (c.passed ? "PASS " : "FAIL ") << c.name << ": measured " << format_number(c.measured) << ", bound "
          << format_number(c.bound) << " (" << c.detail << ")\n";
      all = all && c.passed;
    }
    return all ? 0 : 1;
  } catch (const std::exception& e) {
    err << "minimax-check: " << e.what() << '\n';
    return 2;
  }
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(std::string_view suite, const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    VerifyOptions opts;
    opts.seed = cfg.seed;
    opts.jobs = cfg.jobs;
    opts.K1 = cfg.K1;
    opts.band_D = cfg.band_D;
    bool all = true;
    for (int id : suite_criteria(suite)) {
      const auto r = run_criterion(id, opts);
      out << format_result(r) << std::endl;
      all = all && r.passed;
    }
    return all ? 0 : 1;
  } catch (const std::exception& e) {
    err << "verify: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace alearn
