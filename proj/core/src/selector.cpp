#include "ccffs/selector.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

#include "ccffs/correlation.hpp"

namespace ccffs {

namespace {

// Fan candidates out across threads. Writes are disjoint per index, so the
// result does not depend on scheduling. The first exception wins and is
// rethrown after join.
template <typename Fn>
void parallel_for(int threads, Eigen::Index count, Fn&& fn) {
  const int use = static_cast<int>(
      std::min<Eigen::Index>(std::max(threads, 1), count));
  if (use <= 1) {
    for (Eigen::Index i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<Eigen::Index> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(use));
  for (int t = 0; t < use; ++t) {
    pool.emplace_back([&] {
      try {
        for (Eigen::Index i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void erase_at(std::vector<int>& v, std::size_t pos) { v.erase(v.begin() + static_cast<std::ptrdiff_t>(pos)); }
void erase_at(std::vector<char>& v, std::size_t pos) { v.erase(v.begin() + static_cast<std::ptrdiff_t>(pos)); }

void erase_column(Eigen::MatrixXd& m, Eigen::Index col) {
  for (Eigen::Index c = col; c + 1 < m.cols(); ++c) m.col(c) = m.col(c + 1);
  m.conservativeResize(Eigen::NoChange, m.cols() - 1);
}

void erase_entry(Eigen::VectorXd& v, Eigen::Index pos) {
  for (Eigen::Index i = pos; i + 1 < v.size(); ++i) v(i) = v(i + 1);
  v.conservativeResize(v.size() - 1);
}

}  // namespace

const char* to_string(SelectionMode mode) {
  switch (mode) {
    case SelectionMode::h_correlation: return "h";
    case SelectionMode::theta_angle: return "theta";
    case SelectionMode::definition: return "definition";
  }
  return "?";
}

std::optional<SelectionMode> mode_from_string(std::string_view name) {
  if (name == "h") return SelectionMode::h_correlation;
  if (name == "theta") return SelectionMode::theta_angle;
  if (name == "definition") return SelectionMode::definition;
  return std::nullopt;
}

SelectionState init(const EncodedDataset& dataset, const SelectorOptions& options) {
  dataset.x.validate();
  dataset.y.validate();
  const Eigen::Index n_rows = dataset.n_instances();
  const Eigen::Index n = dataset.n_features();
  const Eigen::Index m = dataset.n_responses();
  if (dataset.y.rows() != n_rows)
    throw dimension_error("feature and response row counts differ");
  if (n_rows < 2) throw dimension_error("need at least two instances");

  SelectionState st;
  st.threads = std::max(1, options.threads);
  st.n_instances = n_rows;
  st.n_features = n;
  st.n_responses = m;
  st.mode = options.mode_override.value_or(
      n_rows > m + n ? SelectionMode::theta_angle : SelectionMode::h_correlation);

  if (dataset.x.col_names.empty()) {
    for (Eigen::Index i = 0; i < n; ++i) st.feature_names.push_back("f" + std::to_string(i));
  } else {
    st.feature_names = dataset.x.col_names;
  }

  st.remaining.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) st.remaining[static_cast<std::size_t>(i)] = static_cast<int>(i);

  CenteredMatrix xc = center(dataset.x.values);
  CenteredMatrix yc = center(dataset.y.values);

  // Constant features are degenerate from the start; a dataset made only of
  // them cannot drive the criterion at all.
  st.w_r_degenerate.assign(static_cast<std::size_t>(n), 0);
  bool any_informative = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double raw_norm = dataset.x.values.col(i).norm();
    const bool constant = xc.values.col(i).norm() <= rank_epsilon * raw_norm;
    st.w_r_degenerate[static_cast<std::size_t>(i)] = constant ? 1 : 0;
    any_informative = any_informative || !constant;
  }
  if (!any_informative)
    throw degenerate_input_error("all feature columns are constant");

  if (st.mode == SelectionMode::definition) {
    // Responses must keep full rank after centering in every engine.
    const OrthogonalColumns gs_y = gram_schmidt(yc.values);
    if (std::find(gs_y.degenerate.begin(), gs_y.degenerate.end(), 1) != gs_y.degenerate.end())
      throw degenerate_input_error("response matrix is rank-deficient after centering");
    st.raw_x = dataset.x.values;
    st.raw_y = dataset.y.values;
    st.x_sel.resize(n_rows, 0);
    st.w_r_ref_norm = xc.values.colwise().norm();
    return st;
  }

  if (st.mode == SelectionMode::theta_angle) {
    if (n_rows < n + m)
      throw dimension_error("theta engine requires at least n+m instances");
    Eigen::MatrixXd stacked(n_rows, n + m);
    stacked << xc.values, yc.values;
    // With U from the thin SVD of the stack M = U S V^T, the coordinate
    // matrix is U^T M = S V^T, and the X/Y blocks split off column-wise.
    // U itself is never needed, so only V is accumulated.
    Eigen::BDCSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeThinV);
    const Eigen::MatrixXd coords =
        svd.singularValues().asDiagonal() * svd.matrixV().transpose();
    st.f_x = coords.leftCols(n);
    st.f_y = coords.rightCols(m);
  } else {
    st.f_x = std::move(xc.values);
    st.f_y = std::move(yc.values);
  }

  OrthogonalColumns gs_y = gram_schmidt(st.f_y);
  if (std::find(gs_y.degenerate.begin(), gs_y.degenerate.end(), 1) != gs_y.degenerate.end())
    throw degenerate_input_error("response matrix is rank-deficient after centering");
  st.v = std::move(gs_y.values);

  // Pair terms are Pearson-squared in h mode (zero-mean by construction, so
  // centering only strips round-off) and plain squared cosines in theta mode.
  if (st.mode == SelectionMode::h_correlation) {
    st.v_work = st.v.rowwise() - st.v.colwise().mean();
  } else {
    st.v_work = st.v;
  }
  st.v_work_sq = st.v_work.colwise().squaredNorm();

  st.w_s.resize(st.f_x.rows(), 0);
  st.w_r = st.f_x;
  st.w_r_ref_norm = st.f_x.colwise().norm();
  return st;
}

CriterionBreakdown evaluate_candidates(const SelectionState& st) {
  const Eigen::Index q = static_cast<Eigen::Index>(st.remaining.size());
  if (q < 1) throw dimension_error("no remaining candidates");
  const Eigen::Index m = st.n_responses;

  CriterionBreakdown br;
  br.candidates = st.remaining;
  br.increments = Eigen::VectorXd::Zero(q);
  br.degenerate.assign(static_cast<std::size_t>(q), 0);

  if (st.mode == SelectionMode::definition) {
    const Eigen::Index p = static_cast<Eigen::Index>(st.selected.size());
    parallel_for(st.threads, q, [&](Eigen::Index i) {
      const std::size_t pos = static_cast<std::size_t>(i);
      if (st.w_r_degenerate[pos]) {
        br.degenerate[pos] = 1;
        return;
      }
      Eigen::MatrixXd trial(st.raw_x.rows(), p + 1);
      trial.leftCols(p) = st.x_sel;
      trial.col(p) = st.raw_x.col(st.remaining[pos]);
      try {
        br.increments(i) = ssc(trial, st.raw_y) - st.criterion_total;
      } catch (const degenerate_input_error&) {
        br.degenerate[pos] = 1;
        br.increments(i) = 0.0;
      }
    });
    return br;
  }

  br.pair_terms = Eigen::MatrixXd::Zero(q, m);
  const bool is_h = st.mode == SelectionMode::h_correlation;
  parallel_for(st.threads, q, [&](Eigen::Index i) {
    const std::size_t pos = static_cast<std::size_t>(i);
    if (st.w_r_degenerate[pos]) {
      br.degenerate[pos] = 1;
      return;
    }
    Eigen::VectorXd w = st.w_r.col(i);
    if (is_h) w.array() -= w.mean();
    const double w_sq = w.squaredNorm();
    if (w_sq <= 0.0) {
      br.degenerate[pos] = 1;
      return;
    }
    double total = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double dot = w.dot(st.v_work.col(j));
      const double term = dot * dot / (w_sq * st.v_work_sq(j));
      br.pair_terms(i, j) = term;
      total += term;
    }
    br.increments(i) = total;
  });
  return br;
}

SelectionStep select_next(SelectionState& st) {
  const CriterionBreakdown br = evaluate_candidates(st);
  const Eigen::Index q = br.increments.size();

  Eigen::Index best = -1;
  double best_inc = 0.0;
  for (Eigen::Index i = 0; i < q; ++i) {
    if (br.degenerate[static_cast<std::size_t>(i)]) continue;
    if (best < 0 || br.increments(i) > best_inc) {
      best = i;
      best_inc = br.increments(i);
    }
  }
  if (best < 0)
    throw no_informative_candidate_error("all remaining candidates are degenerate");

  const int chosen = st.remaining[static_cast<std::size_t>(best)];
  const std::size_t best_pos = static_cast<std::size_t>(best);

  if (st.mode == SelectionMode::definition) {
    st.x_sel.conservativeResize(Eigen::NoChange, st.x_sel.cols() + 1);
    st.x_sel.col(st.x_sel.cols() - 1) = st.raw_x.col(chosen);
    erase_at(st.remaining, best_pos);
    erase_at(st.w_r_degenerate, best_pos);
    erase_entry(st.w_r_ref_norm, best);
    st.selected.push_back(chosen);
    st.criterion_total += best_inc;
    return {chosen, best_inc};
  }

  const Eigen::VectorXd w_new = st.w_r.col(best);
  st.w_s.conservativeResize(Eigen::NoChange, st.w_s.cols() + 1);
  st.w_s.col(st.w_s.cols() - 1) = w_new;

  erase_at(st.remaining, best_pos);
  erase_at(st.w_r_degenerate, best_pos);
  erase_entry(st.w_r_ref_norm, best);
  erase_column(st.w_r, best);

  // Rank-1 update: every surviving residual only needs to lose its component
  // along the newly selected basis vector.
  const double w_new_sq = w_new.squaredNorm();
  const Eigen::Index q_left = st.w_r.cols();
  for (Eigen::Index i = 0; i < q_left; ++i) {
    const std::size_t pos = static_cast<std::size_t>(i);
    if (st.w_r_degenerate[pos]) continue;
    const double before = st.w_r.col(i).norm();
    st.w_r.col(i) -= (st.w_r.col(i).dot(w_new) / w_new_sq) * w_new;
    if (st.w_r.col(i).norm() < 0.1 * before)
      st.w_r.col(i) -= (st.w_r.col(i).dot(w_new) / w_new_sq) * w_new;
    if (st.w_r.col(i).norm() <= rank_epsilon * st.w_r_ref_norm(i))
      st.w_r_degenerate[pos] = 1;
  }

  st.selected.push_back(chosen);
  st.criterion_total += best_inc;
  return {chosen, best_inc};
}

SelectionReport run(const EncodedDataset& dataset, int t, const SelectorOptions& options) {
  if (t < 1) throw dimension_error("t must be at least 1");
  if (t > dataset.n_features()) throw dimension_error("t exceeds feature count");

  SelectionReport rep;
  const auto t0 = std::chrono::steady_clock::now();
  SelectionState st = init(dataset, options);
  rep.init_seconds = seconds_since(t0);
  rep.mode = st.mode;
  rep.n_instances = st.n_instances;
  rep.n_features = st.n_features;
  rep.n_responses = st.n_responses;
  rep.threads = st.threads;

  for (int it = 0; it < t; ++it) {
    const auto t1 = std::chrono::steady_clock::now();
    const SelectionStep step = select_next(st);
    rep.iteration_seconds.push_back(seconds_since(t1));
    rep.selections.push_back({it, step.index,
                              st.feature_names[static_cast<std::size_t>(step.index)],
                              step.increment, st.criterion_total});
  }
  return rep;
}

}  // namespace ccffs
