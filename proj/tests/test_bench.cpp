#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ccffs/bench.hpp"

using namespace ccffs;

namespace {

struct ParsedRow {
  std::string engine;
  int iteration;
  double cumulative_seconds;
  long long n_instances, n_features, n_responses, t, seed;
};

// minimal reader for the fixed bench schema; the parse oracle for round-trips
std::vector<ParsedRow> read_bench_csv(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  REQUIRE(std::getline(in, line));
  REQUIRE(line == "engine,iteration,cumulative_seconds,N,n,m,t,seed");
  std::vector<ParsedRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    ParsedRow r;
    std::string field;
    std::getline(ss, r.engine, ',');
    std::getline(ss, field, ',');
    r.iteration = std::stoi(field);
    std::getline(ss, field, ',');
    r.cumulative_seconds = std::stod(field);
    std::getline(ss, field, ',');
    r.n_instances = std::stoll(field);
    std::getline(ss, field, ',');
    r.n_features = std::stoll(field);
    std::getline(ss, field, ',');
    r.n_responses = std::stoll(field);
    std::getline(ss, field, ',');
    r.t = std::stoll(field);
    std::getline(ss, field, ',');
    r.seed = std::stoll(field);
    rows.push_back(r);
  }
  return rows;
}

BenchParams small_params() {
  BenchParams p;
  p.n_instances = 30;
  p.n_features = 4;
  p.n_responses = 2;
  p.t = 2;
  p.seed = 11;
  return p;
}

}  // namespace

TEST_CASE("a single engine with t=1 yields exactly one record") {
  BenchParams p = small_params();
  p.t = 1;
  p.engines = {SelectionMode::h_correlation};
  const BenchResult res = run_bench(p);
  REQUIRE(res.records.size() == 1);
  CHECK(res.records[0].engine == SelectionMode::h_correlation);
  CHECK(res.records[0].iteration == 0);
  CHECK(res.records[0].cumulative_seconds > 0.0);
  CHECK(res.records[0].rng == std::string("mt19937_64"));
  CHECK(res.records[0].host_note == "threads=1");
}

TEST_CASE("three engines and two iterations produce six ordered rows") {
  const BenchParams p = small_params();
  const BenchResult res = run_bench(p);
  REQUIRE(res.records.size() == 6);

  const auto path = (std::filesystem::temp_directory_path() / "ccffs_bench_test.csv").string();
  emit_csv(res.records, path);
  const auto rows = read_bench_csv(path);
  REQUIRE(rows.size() == 6);
  // deterministic order: engine name, then iteration
  CHECK(rows[0].engine == "definition");
  CHECK(rows[1].engine == "definition");
  CHECK(rows[2].engine == "h");
  CHECK(rows[4].engine == "theta");
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    CHECK(rows[i].iteration == 0);
    CHECK(rows[i + 1].iteration == 1);
  }

  // round-trip: parsed values equal the records exactly
  for (const auto& row : rows) {
    bool found = false;
    for (const BenchRecord& rec : res.records) {
      if (std::string(to_string(rec.engine)) == row.engine &&
          rec.iteration == row.iteration) {
        CHECK(row.cumulative_seconds == rec.cumulative_seconds);  // %.17g round-trips
        CHECK(row.n_instances == rec.n_instances);
        CHECK(row.n_features == rec.n_features);
        CHECK(row.n_responses == rec.n_responses);
        CHECK(row.t == rec.t);
        CHECK(row.seed == static_cast<long long>(rec.seed));
        found = true;
      }
    }
    CHECK(found);
  }
  std::remove(path.c_str());
}

TEST_CASE("cumulative seconds never decrease within an engine") {
  BenchParams p = small_params();
  p.t = 4;
  const BenchResult res = run_bench(p);
  for (const EngineTiming& timing : res.engines) {
    for (const auto& rep : timing.raw_cumulative_seconds) {
      for (std::size_t i = 1; i < rep.size(); ++i) CHECK(rep[i] >= rep[i - 1]);
    }
  }
}

TEST_CASE("all engines report the same selected sequence") {
  const BenchParams p = small_params();
  const BenchResult res = run_bench(p);
  REQUIRE(res.engines.size() == 3);
  CHECK(res.engines[0].sequence == res.engines[1].sequence);
  CHECK(res.engines[0].sequence == res.engines[2].sequence);
}

TEST_CASE("repeat averages the raw cumulative times") {
  BenchParams p = small_params();
  p.engines = {SelectionMode::theta_angle};
  p.repeat = 3;
  const BenchResult res = run_bench(p);
  REQUIRE(res.engines.size() == 1);
  REQUIRE(res.engines[0].raw_cumulative_seconds.size() == 3);
  REQUIRE(res.records.size() == static_cast<std::size_t>(p.t));
  for (int it = 0; it < p.t; ++it) {
    double mean = 0.0;
    for (const auto& rep : res.engines[0].raw_cumulative_seconds)
      mean += rep[static_cast<std::size_t>(it)];
    mean /= 3.0;
    CHECK(std::abs(res.records[static_cast<std::size_t>(it)].cumulative_seconds - mean) <=
          1e-12);
  }
}

TEST_CASE("bench parameter validation") {
  BenchParams p = small_params();
  p.engines.clear();
  CHECK_THROWS_AS(run_bench(p), error);
  p = small_params();
  p.t = 99;
  CHECK_THROWS_AS(run_bench(p), dimension_error);
  p = small_params();
  p.repeat = 0;
  CHECK_THROWS_AS(run_bench(p), error);
}

TEST_CASE("emit_csv error paths") {
  CHECK_THROWS_AS(emit_csv({}, "/tmp/ccffs_never.csv"), error);
  BenchRecord rec;
  CHECK_THROWS_AS(emit_csv({rec}, "/nonexistent-dir/x.csv"), io_error);
}

TEST_CASE("first_divergence finds the earliest mismatch") {
  CHECK(first_divergence({1, 2, 3}, {1, 2, 3}) == -1);
  CHECK(first_divergence({1, 2, 3}, {1, 9, 3}) == 1);
  CHECK(first_divergence({5}, {4}) == 0);
  CHECK(first_divergence({1, 2}, {1, 2, 3}) == -1);  // prefix counts as agreement
}
