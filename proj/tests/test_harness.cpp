#include <set>
#include <sstream>

#include "alearn/harness.hpp"
#include "doctest.h"

using namespace alearn;

namespace {
std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

ExperimentConfig small() {
  return parse_config("problem = ramp1d\nbudgets = 256, 1024\nreplications = 3\nseed = 4\n");
}
}  // namespace

TEST_CASE("config parsing") {
  auto cfg = parse_config("# comment\n; also\n\n[section]\nproblem=tent1d\nbudgets = 512 2048\nalpha = 0.1\nK1=2\nband_D=0.05\n"
                          "variant = 1b\nseed=9\nout=x.csv\njobs=2\nreplications=4\n");
  CHECK(cfg.problem == "tent1d");
  CHECK(cfg.budgets == std::vector<std::size_t>{512, 2048});
  CHECK(cfg.alpha == 0.1);
  CHECK(cfg.K1 == 2.0);
  CHECK(cfg.band_D == 0.05);
  CHECK(cfg.variant == Variant::k1b);
  CHECK(cfg.seed == 9);
  CHECK(cfg.out_path == "x.csv");
  CHECK(cfg.jobs == 2);
  CHECK(cfg.replications == 4);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("malformed configs are rejected") {
  CHECK_THROWS_AS(parse_config("budgetz = 3\n"), ArgumentError);
  CHECK_THROWS_AS(parse_config("just a line\n"), ArgumentError);
  CHECK_THROWS_AS(parse_config("seed = abc\n"), ArgumentError);
  CHECK_THROWS_AS(parse_config("alpha = 0.1x\n"), ArgumentError);
  CHECK(parse_budgets("").empty());
  CHECK_THROWS(parse_config("budgets =\n").validate());
  CHECK_THROWS_AS(parse_budgets("512,-3"), ArgumentError);
  CHECK_THROWS(load_config("/nonexistent/file.cfg"));
  auto cfg = parse_config("budgets = 2048, 512\n");
  CHECK_THROWS(cfg.validate());
  cfg = parse_config("alpha = 1.5\n");
  CHECK_THROWS(cfg.validate());
  cfg = parse_config("q = 12\n");
  CHECK_THROWS(cfg.validate());
  cfg = parse_config("problem = nope\n");
  CHECK_THROWS(run_experiment(cfg));
}

TEST_CASE("stream ids are distinct and independent of the replication count") {
  std::set<std::uint64_t> ids;
  for (std::size_t b : {256u, 512u, 1024u}) {
    for (int r = 0; r < 50; ++r) ids.insert(run_stream_id(b, r));
  }
  CHECK(ids.size() == 150);
  auto a = small();
  auto b = a;
  b.replications = 5;
  auto ra = run_experiment(a);
  auto rb = run_experiment(b);
  for (const auto& x : ra) {
    for (const auto& y : rb) {
      if (x.budget == y.budget && x.replication == y.replication) CHECK(x.excess_risk == y.excess_risk);
    }
  }
}

TEST_CASE("run CSV schema") {
  auto cfg = small();
  auto runs = run_experiment(cfg);
  CHECK(runs.size() == 6);
  std::ostringstream os;
  write_run_csv(os, cfg, runs);
  auto lines = lines_of(os.str());
  REQUIRE(!lines.empty());
  CHECK(lines[0] == kRunCsvHeader);
  const auto columns = split(std::string(kRunCsvHeader)).size();
  std::set<std::string> run_ids;
  int summaries = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto cells = split(lines[i]);
    CHECK(cells.size() == columns);
    CHECK((cells[3] == "iter" || cells[3] == "summary"));
    run_ids.insert(cells[0]);
    if (cells[3] == "summary") {
      ++summaries;
      CHECK(!cells[11].empty());
      CHECK(!cells[12].empty());
    }
  }
  CHECK(summaries == 6);
  CHECK(run_ids.size() == 6);
}

TEST_CASE("three replications give three distinct run ids at one budget") {
  auto cfg = parse_config("problem=ramp1d\nbudgets=1024\nreplications=3\n");
  auto runs = run_experiment(cfg);
  std::set<std::size_t> ids;
  for (const auto& r : runs) ids.insert(r.run_id);
  CHECK(ids.size() == 3);
}

TEST_CASE("run output is identical for any job count") {
  auto cfg = small();
  std::ostringstream one, four, err;
  CHECK(cmd_run(cfg, one, err) == 0);
  cfg.jobs = 4;
  CHECK(cmd_run(cfg, four, err) == 0);
  CHECK(one.str() == four.str());
}

TEST_CASE("rates CSV") {
  auto cfg = parse_config("problem=shifted_ramp1d\nbudgets=256,512,1024,2048\nreplications=2\n");
  auto report = compute_rates(cfg);
  CHECK(report.active.size() == 4);
  CHECK(report.passive.size() == 4);
  std::ostringstream os;
  write_rates_csv(os, cfg, report);
  auto lines = lines_of(os.str());
  CHECK(lines[0] == kRatesCsvHeader);
  int active = 0, passive = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto cells = split(lines[i]);
    if (cells[0] == "active") ++active;
    if (cells[0] == "passive") ++passive;
  }
  CHECK(active >= 4);
  CHECK(passive >= 4);
}

TEST_CASE("minimax certificates all pass at the default construction") {
  MinimaxCheckParams params;
  auto certs = minimax_certificates(params);
  CHECK(certs.size() >= 6);
  for (const auto& c : certs) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.passed);
  }
  std::ostringstream os;
  write_minimax_csv(os, certs);
  CHECK(lines_of(os.str())[0] == kMinimaxCsvHeader);
}

TEST_CASE("helpers") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.3333333333");
  CHECK(default_quad_level(1) == 16);
  CHECK(default_quad_level(2) == 10);
  CHECK(default_quad_level(4) == 5);
  std::vector<int> hit(100, 0);
  parallel_for(100, 4, [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) CHECK(h == 1);
  CHECK_THROWS(parallel_for(10, 3, [](std::size_t i) {
    if (i == 7) throw std::runtime_error("boom");
  }));
}
