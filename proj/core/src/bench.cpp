#include "ccffs/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>

#include "ccffs/dataset.hpp"

namespace ccffs {

int first_divergence(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] != b[i]) return static_cast<int>(i);
  return -1;
}

BenchResult run_bench(const BenchParams& params) {
  if (params.engines.empty()) throw error("run_bench: no engines requested");
  if (params.repeat < 1) throw error("run_bench: repeat must be at least 1");
  if (params.t < 1 || params.t > params.n_features)
    throw dimension_error("run_bench: t must be in [1, n]");

  const EncodedDataset dataset = synthetic_uniform(
      params.n_instances, params.n_features, params.n_responses, params.seed);
  const std::string host_note = "threads=" + std::to_string(std::max(1, params.threads));

  BenchResult result;
  for (SelectionMode engine : params.engines) {
    EngineTiming timing;
    timing.engine = engine;
    for (int rep = 0; rep < params.repeat; ++rep) {
      SelectorOptions opts;
      opts.mode_override = engine;
      opts.threads = params.threads;
      const SelectionReport report = run(dataset, params.t, opts);

      std::vector<double> cumulative;
      double acc = report.init_seconds;
      for (double sec : report.iteration_seconds) cumulative.push_back(acc += sec);

      std::vector<int> sequence;
      for (const SelectionRecord& s : report.selections) sequence.push_back(s.index);
      if (rep == 0) {
        timing.sequence = sequence;
      } else if (timing.sequence != sequence) {
        throw internal_error(std::string("engine ") + to_string(engine) +
                             " selected different features across repeats");
      }
      timing.raw_cumulative_seconds.push_back(std::move(cumulative));
    }
    result.engines.push_back(std::move(timing));
  }

  for (std::size_t e = 1; e < result.engines.size(); ++e) {
    const int d = first_divergence(result.engines[0].sequence, result.engines[e].sequence);
    if (d >= 0)
      throw consistency_error(
          std::string("engines ") + to_string(result.engines[0].engine) + " and " +
              to_string(result.engines[e].engine) +
              " disagree at iteration " + std::to_string(d),
          d);
  }

  for (const EngineTiming& timing : result.engines) {
    for (int it = 0; it < params.t; ++it) {
      double mean = 0.0;
      for (const auto& rep : timing.raw_cumulative_seconds)
        mean += rep[static_cast<std::size_t>(it)];
      mean /= static_cast<double>(timing.raw_cumulative_seconds.size());
      BenchRecord rec;
      rec.engine = timing.engine;
      rec.iteration = it;
      rec.cumulative_seconds = mean;
      rec.n_instances = params.n_instances;
      rec.n_features = params.n_features;
      rec.n_responses = params.n_responses;
      rec.t = params.t;
      rec.seed = params.seed;
      rec.rng = rng_name;
      rec.host_note = host_note;
      result.records.push_back(std::move(rec));
    }
  }
  return result;
}

void emit_csv(const std::vector<BenchRecord>& records, const std::string& path) {
  if (records.empty()) throw error("emit_csv: no records to write");

  std::vector<BenchRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const BenchRecord& a, const BenchRecord& b) {
                     const int cmp = std::string_view(to_string(a.engine))
                                         .compare(to_string(b.engine));
                     if (cmp != 0) return cmp < 0;
                     return a.iteration < b.iteration;
                   });

  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << "engine,iteration,cumulative_seconds,N,n,m,t,seed\n";
  char sec[64];
  for (const BenchRecord& r : sorted) {
    std::snprintf(sec, sizeof sec, "%.17g", r.cumulative_seconds);
    out << to_string(r.engine) << ',' << r.iteration << ',' << sec << ','
        << r.n_instances << ',' << r.n_features << ',' << r.n_responses << ','
        << r.t << ',' << r.seed << '\n';
  }
  out.flush();
  if (!out) throw io_error("write failed for '" + path + "'");
}

}  // namespace ccffs
