// ccffs: canonical-correlation fast feature selection
//
// Subcommands:
//   select      greedy feature selection on a CSV dataset, JSON report
//   bench       elapsed-time comparison of the engines on synthetic data, CSV
//   verify-iris built-in seven-instance walkthrough with known intermediates
//
// Exit codes: 0 ok, 1 data/usage error, 2 engine disagreement,
//             3 no informative candidate left, 4 verification mismatch.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccffs/bench.hpp"
#include "ccffs/correlation.hpp"
#include "ccffs/dataset.hpp"
#include "ccffs/regression.hpp"
#include "ccffs/selector.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_data_error = 1;
constexpr int exit_engine_disagreement = 2;
constexpr int exit_no_informative = 3;
constexpr int exit_verify_mismatch = 4;

int resolve_threads(std::optional<int> flag_value) {
  if (const char* env = std::getenv("CCFFS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw ccffs::error("CCFFS_THREADS must be a positive integer");
    return static_cast<int>(v);
  }
  if (flag_value) {
    if (*flag_value < 1) throw ccffs::error("--threads must be a positive integer");
    return *flag_value;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::optional<ccffs::SelectionMode> parse_method(const std::string& method) {
  if (method == "auto") return std::nullopt;
  const auto mode = ccffs::mode_from_string(method);
  if (!mode) throw ccffs::error("unknown method '" + method + "'");
  return mode;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ccffs::io_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw ccffs::io_error("write failed for '" + path + "'");
}

// ---------------------------------------------------------------------------
// select

struct SelectArgs {
  std::string data_path;
  std::vector<std::string> targets;
  int num_features = 1;
  std::string method = "auto";
  bool apply_zscore = false;
  std::string output = "-";
  std::optional<int> threads;
};

int cmd_select(const SelectArgs& args) {
  const int threads = resolve_threads(args.threads);
  ccffs::EncodedDataset dataset = ccffs::load_csv(args.data_path, args.targets);
  if (args.apply_zscore) dataset.x = ccffs::zscore(dataset.x);

  ccffs::SelectorOptions opts;
  opts.mode_override = parse_method(args.method);
  opts.threads = threads;
  const ccffs::SelectionReport report = ccffs::run(dataset, args.num_features, opts);

  nlohmann::ordered_json j;
  j["ccffs_schema"] = 1;
  j["mode"] = ccffs::to_string(report.mode);
  j["N"] = report.n_instances;
  j["n"] = report.n_features;
  j["m"] = report.n_responses;
  j["threads"] = report.threads;
  nlohmann::ordered_json selections = nlohmann::ordered_json::array();
  for (const ccffs::SelectionRecord& s : report.selections) {
    selections.push_back({{"iteration", s.iteration},
                          {"index", s.index},
                          {"name", s.name},
                          {"increment", s.increment},
                          {"cumulative_ssc", s.cumulative_ssc}});
  }
  j["selections"] = std::move(selections);
  write_text(args.output, j.dump(2) + "\n");
  return exit_ok;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  ccffs::BenchParams params;
  std::vector<std::string> engines = {"definition", "h", "theta"};
  std::string output = "ccffs_bench.csv";
  std::optional<int> threads;
};

int cmd_bench(const BenchArgs& args) {
  ccffs::BenchParams params = args.params;
  params.threads = resolve_threads(args.threads);
  params.engines.clear();
  for (const std::string& name : args.engines) {
    const auto mode = ccffs::mode_from_string(name);
    if (!mode) throw ccffs::error("unknown engine '" + name + "'");
    params.engines.push_back(*mode);
  }

  const ccffs::BenchResult result = ccffs::run_bench(params);
  ccffs::emit_csv(result.records, args.output);

  std::cout << "N=" << params.n_instances << " n=" << params.n_features
            << " m=" << params.n_responses << " t=" << params.t
            << " seed=" << params.seed << " repeat=" << params.repeat
            << " threads=" << params.threads << " rng=" << ccffs::rng_name << "\n";
  const ccffs::EngineTiming* h_timing = nullptr;
  const ccffs::EngineTiming* theta_timing = nullptr;
  for (const ccffs::EngineTiming& timing : result.engines) {
    double total = 0.0;
    for (const auto& rep : timing.raw_cumulative_seconds) total += rep.back();
    total /= static_cast<double>(timing.raw_cumulative_seconds.size());
    std::cout << "  " << ccffs::to_string(timing.engine) << ": " << total << " s\n";
    if (timing.engine == ccffs::SelectionMode::h_correlation) h_timing = &timing;
    if (timing.engine == ccffs::SelectionMode::theta_angle) theta_timing = &timing;
  }
  if (h_timing && theta_timing) {
    // machine-dependent; reported, never asserted
    int crossover = -1;
    for (int it = 0; it < params.t; ++it) {
      if (theta_timing->raw_cumulative_seconds[0][static_cast<std::size_t>(it)] <
          h_timing->raw_cumulative_seconds[0][static_cast<std::size_t>(it)]) {
        crossover = it;
        break;
      }
    }
    if (crossover >= 0)
      std::cout << "  theta overtakes h at iteration " << crossover << "\n";
    else
      std::cout << "  theta did not overtake h within t=" << params.t << "\n";
  }
  std::cout << "wrote " << args.output << "\n";
  return exit_ok;
}

// ---------------------------------------------------------------------------
// verify-iris

// Seven instances of the Fisher iris data with three species; the expected
// intermediates below are the published four-decimal walkthrough values.
ccffs::EncodedDataset iris_fixture() {
  ccffs::EncodedDataset d;
  d.x.values.resize(7, 4);
  d.x.values << 5.1, 3.5, 1.4, 0.2,
                4.9, 3.0, 1.4, 0.2,
                7.0, 3.2, 4.7, 1.4,
                6.4, 3.2, 4.5, 1.5,
                6.3, 3.3, 6.0, 2.5,
                5.8, 2.7, 5.1, 1.9,
                7.1, 3.0, 5.9, 2.1;
  d.x.col_names = {"sepal length", "sepal width", "petal length", "petal width"};
  d.feature_encodings.assign(4, ccffs::FeatureEncoding{});
  const std::vector<std::string> species = {"setosa",     "setosa",    "versicolor",
                                            "versicolor", "virginica", "virginica",
                                            "virginica"};
  d.y = ccffs::dummy_encode(species, "species");
  d.response_encoding.kind = ccffs::ResponseEncoding::Kind::dummy;
  d.response_encoding.classes = {"setosa", "versicolor", "virginica"};
  d.response_encoding.reference_class = "virginica";
  return d;
}

struct VerifyArgs {
  std::string method = "auto";
  double tolerance = 1e-3;
  std::optional<int> threads;
};

int cmd_verify_iris(const VerifyArgs& args) {
  const int threads = resolve_threads(args.threads);
  const ccffs::EncodedDataset dataset = iris_fixture();

  const std::vector<std::vector<double>> expected_increments = {
      {0.7628, 0.2264, 0.9779, 0.9604},
      {0.4458, 0.0841, 0.4644},
      {0.0382, 0.1108}};
  const std::vector<int> expected_order = {2, 3, 1};
  const std::vector<std::string> expected_names = {"petal length", "petal width",
                                                   "sepal width"};
  const double expected_r1 = 0.9905;
  const double expected_r2 = 0.5626;
  const double expected_ssc = 1.5531;

  int failures = 0;
  auto check = [&](const std::string& name, double expected, double actual) {
    const bool ok = std::abs(expected - actual) <= args.tolerance;
    if (!ok) ++failures;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << ": expected " << expected
              << ", actual " << actual << "\n";
  };
  auto check_text = [&](const std::string& name, const std::string& expected,
                        const std::string& actual) {
    const bool ok = expected == actual;
    if (!ok) ++failures;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << ": expected '" << expected
              << "', actual '" << actual << "'\n";
  };

  ccffs::SelectorOptions opts;
  opts.mode_override = parse_method(args.method);
  opts.threads = threads;
  ccffs::SelectionState state = ccffs::init(dataset, opts);
  check_text("engine", args.method == "auto" ? "theta" : args.method,
             ccffs::to_string(state.mode));

  for (std::size_t it = 0; it < expected_increments.size(); ++it) {
    const ccffs::CriterionBreakdown br = ccffs::evaluate_candidates(state);
    for (std::size_t c = 0; c < expected_increments[it].size(); ++c) {
      check("iteration " + std::to_string(it) + " candidate '" +
                state.feature_names[static_cast<std::size_t>(br.candidates[c])] + "'",
            expected_increments[it][c], br.increments(static_cast<Eigen::Index>(c)));
    }
    const ccffs::SelectionStep step = ccffs::select_next(state);
    check_text("iteration " + std::to_string(it) + " selection",
               expected_names[it],
               state.feature_names[static_cast<std::size_t>(step.index)]);
    if (step.index != expected_order[it]) ++failures;
  }

  Eigen::MatrixXd x_sel(7, 3);
  for (int k = 0; k < 3; ++k) x_sel.col(k) = dataset.x.values.col(expected_order[static_cast<std::size_t>(k)]);
  const ccffs::CcaResult cca_result = ccffs::cca(x_sel, dataset.y.values);
  check("R1^2 of selected triple", expected_r1, cca_result.r_squared(0));
  check("R2^2 of selected triple", expected_r2, cca_result.r_squared(1));
  check("SSC of selected triple", expected_ssc, cca_result.r_squared.sum());
  check("greedy cumulative SSC", expected_ssc, state.criterion_total);

  if (failures > 0) {
    std::cout << failures << " check(s) failed\n";
    return exit_verify_mismatch;
  }
  std::cout << "all checks passed\n";
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"canonical-correlation fast feature selection"};
  app.require_subcommand(1);

  SelectArgs select_args;
  int select_threads = 0;
  CLI::App* select = app.add_subcommand("select", "greedy feature selection on a CSV file");
  select->add_option("--data", select_args.data_path, "input CSV path")->required();
  select->add_option("--target", select_args.targets,
                     "target column name(s); repeat or comma-separate for multiple")
      ->required()
      ->delimiter(',');
  select->add_option("--num-features", select_args.num_features, "number of features to select")
      ->required();
  select->add_option("--method", select_args.method, "auto|definition|h|theta")
      ->default_val("auto");
  select->add_flag("--zscore", select_args.apply_zscore, "standardize features first");
  select->add_option("--output", select_args.output, "JSON report path ('-' = stdout)")
      ->default_val("-");
  CLI::Option* sel_thr = select->add_option("--threads", select_threads,
                                            "candidate-evaluation threads");

  BenchArgs bench_args;
  int bench_threads = 0;
  CLI::App* bench = app.add_subcommand("bench", "elapsed-time comparison of the engines");
  bench->add_option("--instances", bench_args.params.n_instances, "N")->default_val(5000);
  bench->add_option("--features", bench_args.params.n_features, "n")->default_val(700);
  bench->add_option("--responses", bench_args.params.n_responses, "m")->default_val(50);
  bench->add_option("--select", bench_args.params.t, "t, features to select")->default_val(50);
  bench->add_option("--seed", bench_args.params.seed, "dataset seed")->default_val(1);
  bench->add_option("--engines", bench_args.engines, "subset of definition,h,theta")
      ->delimiter(',');
  bench->add_option("--repeat", bench_args.params.repeat, "average timings over this many runs")
      ->default_val(1);
  bench->add_option("--output", bench_args.output, "CSV output path")
      ->default_val("ccffs_bench.csv");
  CLI::Option* ben_thr = bench->add_option("--threads", bench_threads,
                                           "candidate-evaluation threads");

  VerifyArgs verify_args;
  int verify_threads = 0;
  CLI::App* verify = app.add_subcommand("verify-iris",
                                        "check the built-in iris walkthrough fixture");
  verify->add_option("--method", verify_args.method, "auto|definition|h|theta")
      ->default_val("auto");
  verify->add_option("--tolerance", verify_args.tolerance, "absolute tolerance per check")
      ->default_val(1e-3);
  CLI::Option* ver_thr = verify->add_option("--threads", verify_threads,
                                            "candidate-evaluation threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_data_error;
  }

  try {
    if (select->parsed()) {
      if (sel_thr->count() > 0) select_args.threads = select_threads;
      return cmd_select(select_args);
    }
    if (bench->parsed()) {
      if (ben_thr->count() > 0) bench_args.threads = bench_threads;
      return cmd_bench(bench_args);
    }
    if (verify->parsed()) {
      if (ver_thr->count() > 0) verify_args.threads = verify_threads;
      return cmd_verify_iris(verify_args);
    }
  } catch (const ccffs::consistency_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_engine_disagreement;
  } catch (const ccffs::no_informative_candidate_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_no_informative;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_data_error;
  }
  return exit_data_error;
}
