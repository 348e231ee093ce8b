#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccffs/dataset.hpp"
#include "ccffs/linalg.hpp"

namespace ccffs {

enum class SelectionMode { h_correlation, theta_angle, definition };

const char* to_string(SelectionMode mode);  // "h" / "theta" / "definition"
std::optional<SelectionMode> mode_from_string(std::string_view name);

struct SelectorOptions {
  std::optional<SelectionMode> mode_override;
  int threads = 1;  // candidate-evaluation fan-out; results are thread-count independent
};

// Incremental state of the greedy search. The fast engines keep the working
// matrices F_X/F_Y (coordinates for theta, centred data for h), the
// orthogonal response basis V, the selected basis W_s and the residual
// candidate columns W_r. The definition engine keeps only the raw data and
// re-evaluates the criterion from scratch each iteration.
struct SelectionState {
  SelectionMode mode = SelectionMode::theta_angle;
  std::vector<int> selected;   // original feature indices, selection order
  std::vector<int> remaining;  // original feature indices, ascending

  Eigen::MatrixXd f_x, f_y;  // working matrices (fast engines)
  Eigen::MatrixXd v;         // orthogonal response basis
  Eigen::MatrixXd w_s;       // selected basis, one column per selection
  Eigen::MatrixXd w_r;       // column i belongs to remaining[i]
  std::vector<char> w_r_degenerate;
  Eigen::VectorXd w_r_ref_norm;  // working-space column norms at init

  // derived caches for the pair terms
  Eigen::MatrixXd v_work;  // centred V (h) or raw V (theta)
  Eigen::VectorXd v_work_sq;

  Eigen::MatrixXd raw_x, raw_y;  // definition engine only
  Eigen::MatrixXd x_sel;         // definition engine: selected raw columns

  std::vector<std::string> feature_names;
  double criterion_total = 0.0;
  int threads = 1;

  Eigen::Index n_instances = 0, n_features = 0, n_responses = 0;
};

// Criterion gain of every remaining candidate. pair_terms(i, j) holds h_{i,j}
// or theta_{i,j}; it is empty for the definition engine.
struct CriterionBreakdown {
  std::vector<int> candidates;  // original feature indices, remaining order
  Eigen::VectorXd increments;
  std::vector<char> degenerate;
  Eigen::MatrixXd pair_terms;
};

struct SelectionStep {
  int index = -1;  // original feature index
  double increment = 0.0;
};

struct SelectionRecord {
  int iteration;  // 0-based
  int index;      // original feature index
  std::string name;
  double increment;
  double cumulative_ssc;
};

struct SelectionReport {
  SelectionMode mode = SelectionMode::theta_angle;
  std::vector<SelectionRecord> selections;
  double init_seconds = 0.0;
  std::vector<double> iteration_seconds;
  Eigen::Index n_instances = 0, n_features = 0, n_responses = 0;
  int threads = 1;
};

/// Builds the selection state. Picks the theta engine iff N > m + n unless
/// overridden; the theta engine works on coordinates with respect to the
/// orthonormal basis of (X_C, Y_C) with z = n + m.
SelectionState init(const EncodedDataset& dataset, const SelectorOptions& options = {});

/// Criterion gain for every remaining candidate. Degenerate candidates
/// (residual in the span of the selected basis) get increment exactly 0.
CriterionBreakdown evaluate_candidates(const SelectionState& state);

/// Picks the argmax candidate (ties: lowest original index), appends its
/// residual to W_s, and re-orthogonalizes the other residuals against it.
SelectionStep select_next(SelectionState& state);

/// Full greedy run selecting t features.
SelectionReport run(const EncodedDataset& dataset, int t, const SelectorOptions& options = {});

}  // namespace ccffs
