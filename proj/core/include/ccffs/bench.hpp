#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccffs/selector.hpp"

namespace ccffs {

struct BenchRecord {
  SelectionMode engine = SelectionMode::theta_angle;
  int iteration = 0;                // 0-based
  double cumulative_seconds = 0.0;  // wall clock up to and including this selection
  Eigen::Index n_instances = 0, n_features = 0, n_responses = 0;
  int t = 0;
  std::uint64_t seed = 0;
  std::string rng;        // dataset generator name
  std::string host_note;  // provenance, e.g. "threads=1"
};

struct BenchParams {
  Eigen::Index n_instances = 5000;
  Eigen::Index n_features = 700;
  Eigen::Index n_responses = 50;
  int t = 50;
  std::uint64_t seed = 1;
  std::vector<SelectionMode> engines = {SelectionMode::definition,
                                        SelectionMode::h_correlation,
                                        SelectionMode::theta_angle};
  int repeat = 1;  // cumulative_seconds become per-iteration means over repeats
  int threads = 1;
};

struct EngineTiming {
  SelectionMode engine = SelectionMode::theta_angle;
  std::vector<int> sequence;  // selected original indices
  std::vector<std::vector<double>> raw_cumulative_seconds;  // [repeat][iteration]
};

struct BenchResult {
  std::vector<BenchRecord> records;  // means over repeats
  std::vector<EngineTiming> engines;
};

/// Times the greedy selection per engine on one shared synthetic dataset.
/// Engines run sequentially; the clock covers initialization (the theta
/// engine's one-time SVD lands in its first iteration) plus each selection,
/// but not dataset generation. All engines must agree on the selected
/// sequence or a consistency_error carrying the first divergent iteration is
/// thrown before any timing is reported.
BenchResult run_bench(const BenchParams& params);

/// CSV with header engine,iteration,cumulative_seconds,N,n,m,t,seed and rows
/// ordered by (engine name, iteration). Seconds are written round-trip exact.
void emit_csv(const std::vector<BenchRecord>& records, const std::string& path);

/// First index at which two selection sequences differ, or -1 when one is a
/// prefix of the other or they are equal.
int first_divergence(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace ccffs
