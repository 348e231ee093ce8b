#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "ccffs/correlation.hpp"
#include "ccffs/selector.hpp"
#include "test_util.hpp"

using namespace ccffs;

TEST_CASE("iris walkthrough: increments, order and cumulative criterion") {
  const auto data = testutil::iris7();
  SelectionState st = init(data);
  CHECK(st.mode == SelectionMode::theta_angle);  // 7 > 4 + 2

  const std::vector<std::vector<double>> expected = {
      {0.7628, 0.2264, 0.9779, 0.9604}, {0.4458, 0.0841, 0.4644}, {0.0382, 0.1108}};
  const std::vector<int> expected_order = {2, 3, 1};
  const std::vector<double> expected_cumulative = {0.9779, 1.4423, 1.5531};

  for (std::size_t it = 0; it < 3; ++it) {
    const CriterionBreakdown br = evaluate_candidates(st);
    REQUIRE(br.increments.size() == static_cast<Eigen::Index>(expected[it].size()));
    for (std::size_t c = 0; c < expected[it].size(); ++c) {
      CHECK_NEAR(br.increments(static_cast<Eigen::Index>(c)), expected[it][c], 1e-3);
      // pair terms total the increment
      CHECK_NEAR(br.pair_terms.row(static_cast<Eigen::Index>(c)).sum(),
                 br.increments(static_cast<Eigen::Index>(c)), 1e-12);
    }
    const SelectionStep step = select_next(st);
    CHECK(step.index == expected_order[it]);
    CHECK_NEAR(st.criterion_total, expected_cumulative[it], 1e-3);
  }
}

TEST_CASE("engine dispatch follows the instance-count rule") {
  const auto big = testutil::make_dataset(testutil::random_matrix(10, 4, 1),
                                          testutil::random_matrix(10, 2, 2));
  CHECK(init(big).mode == SelectionMode::theta_angle);  // 10 > 6

  const auto boundary = testutil::make_dataset(testutil::random_matrix(6, 4, 3),
                                               testutil::random_matrix(6, 2, 4));
  CHECK(init(boundary).mode == SelectionMode::h_correlation);  // 6 == 6

  SelectorOptions opts;
  opts.mode_override = SelectionMode::h_correlation;
  CHECK(init(big, opts).mode == SelectionMode::h_correlation);
}

TEST_CASE("init rejects unusable datasets") {
  SUBCASE("all features constant") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Constant(8, 3, 2.0);
    const auto d = testutil::make_dataset(x, testutil::random_matrix(8, 1, 5));
    CHECK_THROWS_AS(init(d), degenerate_input_error);
  }
  SUBCASE("rank-deficient responses") {
    Eigen::MatrixXd y(10, 2);
    y.col(0) = testutil::random_vector(10, 6);
    y.col(1) = 3.0 * y.col(0);
    const auto d = testutil::make_dataset(testutil::random_matrix(10, 3, 7), y);
    CHECK_THROWS_AS(init(d), degenerate_input_error);
    SelectorOptions defn;
    defn.mode_override = SelectionMode::definition;
    CHECK_THROWS_AS(init(d, defn), degenerate_input_error);
  }
  SUBCASE("too few instances for the theta engine") {
    const auto d = testutil::make_dataset(testutil::random_matrix(4, 4, 8),
                                          testutil::random_matrix(4, 2, 9));
    SelectorOptions opts;
    opts.mode_override = SelectionMode::theta_angle;
    CHECK_THROWS_AS(init(d, opts), dimension_error);
  }
}

TEST_CASE("a candidate equal to a selected feature gets increment exactly zero") {
  Eigen::MatrixXd x(12, 3);
  x.col(0) = testutil::random_vector(12, 10);
  x.col(1) = x.col(0);  // duplicate
  x.col(2) = testutil::random_vector(12, 11);
  // the duplicated pair is perfectly correlated with the response, so the
  // first pick is the 0/1 tie and must resolve to the lower index
  const auto d = testutil::make_dataset(x, Eigen::MatrixXd(x.col(0)));

  for (SelectionMode mode : {SelectionMode::h_correlation, SelectionMode::theta_angle,
                             SelectionMode::definition}) {
    CAPTURE(std::string(to_string(mode)));
    SelectorOptions opts;
    opts.mode_override = mode;
    SelectionState st = init(d, opts);
    const SelectionStep first = select_next(st);
    CHECK(first.index == 0);
    const CriterionBreakdown br = evaluate_candidates(st);
    REQUIRE(br.candidates.size() == 2);
    CHECK(br.candidates[0] == 1);
    CHECK(br.increments(0) == 0.0);
    CHECK(static_cast<bool>(br.degenerate[0]));
  }
}

TEST_CASE("selection stops with an error when only degenerate candidates remain") {
  Eigen::MatrixXd x(10, 2);
  x.col(0) = testutil::random_vector(10, 13);
  x.col(1) = -2.0 * x.col(0);
  const auto d = testutil::make_dataset(x, testutil::random_matrix(10, 1, 14));
  CHECK_THROWS_AS(run(d, 2), no_informative_candidate_error);
}

TEST_CASE("run validates t") {
  const auto d = testutil::make_dataset(testutil::random_matrix(10, 3, 15),
                                        testutil::random_matrix(10, 1, 16));
  CHECK_THROWS_AS(run(d, 0), dimension_error);
  CHECK_THROWS_AS(run(d, 4), dimension_error);
}

TEST_CASE("t=1 with a single response picks the max squared pearson feature") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = testutil::random_instance(6000 + seed, 8, 1);
    const SelectionReport rep = run(inst.dataset, 1);
    REQUIRE(rep.selections.size() == 1);

    int best = -1;
    double best_r2 = -1.0;
    const Eigen::VectorXd y = inst.dataset.y.values.col(0);
    for (Eigen::Index i = 0; i < inst.dataset.n_features(); ++i) {
      const double r = pearson(inst.dataset.x.values.col(i), y);
      if (r * r > best_r2) {
        best_r2 = r * r;
        best = static_cast<int>(i);
      }
    }
    CHECK(rep.selections[0].index == best);
    CHECK_NEAR(rep.selections[0].increment, best_r2, 1e-8);
  }
}

TEST_CASE("a full run accumulates to the definition-based criterion of all features") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 gen(6500 + seed);
    const Eigen::Index n = 3 + static_cast<Eigen::Index>(gen() % 4);
    const Eigen::MatrixXd x = testutil::random_matrix(30, n, gen());
    const Eigen::MatrixXd y = testutil::random_matrix(30, n, gen());
    const auto d = testutil::make_dataset(x, y);
    const SelectionReport rep = run(d, static_cast<int>(n));
    CHECK_NEAR(rep.selections.back().cumulative_ssc, ssc(x, y), 1e-8);
  }
}

TEST_CASE("the three engines agree on sequences and criteria") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto inst = testutil::random_instance(7000 + seed, 12, 4);
    const int t = static_cast<int>(inst.n_features);

    SelectorOptions defn, h, theta;
    defn.mode_override = SelectionMode::definition;
    h.mode_override = SelectionMode::h_correlation;
    theta.mode_override = SelectionMode::theta_angle;
    const SelectionReport rep_d = run(inst.dataset, t, defn);
    const SelectionReport rep_h = run(inst.dataset, t, h);
    const SelectionReport rep_t = run(inst.dataset, t, theta);

    for (int it = 0; it < t; ++it) {
      CAPTURE(seed);
      CAPTURE(it);
      CHECK(rep_d.selections[static_cast<std::size_t>(it)].index ==
            rep_h.selections[static_cast<std::size_t>(it)].index);
      CHECK(rep_d.selections[static_cast<std::size_t>(it)].index ==
            rep_t.selections[static_cast<std::size_t>(it)].index);
      CHECK_NEAR(rep_d.selections[static_cast<std::size_t>(it)].cumulative_ssc,
                 rep_h.selections[static_cast<std::size_t>(it)].cumulative_ssc, 1e-7);
      CHECK_NEAR(rep_d.selections[static_cast<std::size_t>(it)].cumulative_ssc,
                 rep_t.selections[static_cast<std::size_t>(it)].cumulative_ssc, 1e-7);
    }
  }
}

TEST_CASE("the running criterion equals the from-scratch criterion of the selected set") {
  // superposition, exercised end to end
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = testutil::random_instance(8000 + seed);
    SelectionState st = init(inst.dataset);
    Eigen::MatrixXd x_sel(inst.n_instances, 0);
    for (Eigen::Index it = 0; it < inst.n_features; ++it) {
      const SelectionStep step = select_next(st);
      x_sel.conservativeResize(Eigen::NoChange, x_sel.cols() + 1);
      x_sel.col(x_sel.cols() - 1) = inst.dataset.x.values.col(step.index);
      CHECK_NEAR(st.criterion_total, ssc(x_sel, inst.dataset.y.values), 1e-7);
    }
  }
}

TEST_CASE("each increment equals the criterion difference of the grown set") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = testutil::random_instance(8500 + seed);
    SelectionState st = init(inst.dataset);
    Eigen::MatrixXd x_sel(inst.n_instances, 0);
    double prev = 0.0;
    for (Eigen::Index it = 0; it < inst.n_features; ++it) {
      const SelectionStep step = select_next(st);
      x_sel.conservativeResize(Eigen::NoChange, x_sel.cols() + 1);
      x_sel.col(x_sel.cols() - 1) = inst.dataset.x.values.col(step.index);
      const double grown = ssc(x_sel, inst.dataset.y.values);
      CHECK_NEAR(step.increment, grown - prev, 1e-7);
      prev = grown;
    }
  }
}

TEST_CASE("criterion increments are non-negative and bounded") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = testutil::random_instance(9000 + seed);
    const SelectionReport rep = run(inst.dataset, static_cast<int>(inst.n_features));
    double prev = 0.0;
    for (std::size_t p = 0; p < rep.selections.size(); ++p) {
      CHECK(rep.selections[p].increment >= -1e-10);
      CHECK(rep.selections[p].cumulative_ssc >= prev - 1e-10);
      CHECK(rep.selections[p].cumulative_ssc <=
            static_cast<double>(std::min<Eigen::Index>(static_cast<Eigen::Index>(p) + 1,
                                                       inst.n_responses)) +
                1e-9);
      prev = rep.selections[p].cumulative_ssc;
    }
  }
}

TEST_CASE("affine rescaling of features changes nothing") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = testutil::random_instance(9500 + seed);
    const SelectionReport base = run(inst.dataset, static_cast<int>(inst.n_features));

    std::mt19937_64 gen(9600 + seed);
    ccffs::EncodedDataset scaled = inst.dataset;
    for (Eigen::Index c = 0; c < scaled.n_features(); ++c) {
      const double scale = 0.1 + 5.0 * testutil::uniform01(gen);
      const double shift = -3.0 + 6.0 * testutil::uniform01(gen);
      scaled.x.values.col(c) = scale * scaled.x.values.col(c).array() + shift;
    }
    const SelectionReport moved = run(scaled, static_cast<int>(inst.n_features));
    for (std::size_t p = 0; p < base.selections.size(); ++p) {
      CHECK(base.selections[p].index == moved.selections[p].index);
      CHECK_NEAR(base.selections[p].increment, moved.selections[p].increment, 1e-8);
    }
  }
}

TEST_CASE("parallel candidate evaluation is identical to serial") {
  for (SelectionMode mode : {SelectionMode::h_correlation, SelectionMode::theta_angle,
                             SelectionMode::definition}) {
    CAPTURE(to_string(mode));
    const auto inst = testutil::random_instance(9900, 10, 3);
    SelectorOptions serial, parallel;
    serial.mode_override = mode;
    serial.threads = 1;
    parallel.mode_override = mode;
    parallel.threads = 4;
    const SelectionReport a = run(inst.dataset, static_cast<int>(inst.n_features), serial);
    const SelectionReport b = run(inst.dataset, static_cast<int>(inst.n_features), parallel);
    REQUIRE(a.selections.size() == b.selections.size());
    for (std::size_t p = 0; p < a.selections.size(); ++p) {
      CHECK(a.selections[p].index == b.selections[p].index);
      CHECK(a.selections[p].increment == b.selections[p].increment);  // bitwise
    }
  }
}

TEST_CASE("the report carries names, sizes and per-iteration timings") {
  const auto data = testutil::iris7();
  const SelectionReport rep = run(data, 3);
  CHECK(rep.n_instances == 7);
  CHECK(rep.n_features == 4);
  CHECK(rep.n_responses == 2);
  REQUIRE(rep.selections.size() == 3);
  CHECK(rep.selections[0].name == "petal length");
  CHECK(rep.selections[1].name == "petal width");
  CHECK(rep.selections[2].name == "sepal width");
  CHECK(rep.iteration_seconds.size() == 3);
  CHECK(rep.init_seconds >= 0.0);
  double total = 0.0;
  for (std::size_t p = 0; p < 3; ++p) {
    total += rep.selections[p].increment;
    CHECK_NEAR(rep.selections[p].cumulative_ssc, total, 1e-9);
    CHECK(rep.iteration_seconds[p] >= 0.0);
  }
}
