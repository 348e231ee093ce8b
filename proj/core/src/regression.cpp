#include "ccffs/regression.hpp"

#include <Eigen/QR>
#include <cmath>
#include <limits>

#include "ccffs/correlation.hpp"

namespace ccffs {

OlsFit ols_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const Eigen::Index n_rows = y.size();
  if (n_rows < 1) throw dimension_error("ols_fit: empty response");
  if (x.cols() > 0 && x.rows() != n_rows)
    throw dimension_error("ols_fit: row mismatch");

  Eigen::MatrixXd design(n_rows, x.cols() + 1);
  design.col(0).setOnes();
  design.rightCols(x.cols()) = x;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < design.cols())
    throw degenerate_input_error("ols_fit: design matrix with intercept is rank-deficient");

  OlsFit fit;
  fit.coefficients = qr.solve(y);
  const double rss = (y - design * fit.coefficients).squaredNorm();
  fit.rmse = std::sqrt(rss / static_cast<double>(n_rows));
  const double tss = (y.array() - y.mean()).matrix().squaredNorm();
  fit.r_squared = tss > 0.0 ? detail::clip_unit(1.0 - rss / tss, "ols_fit") : 0.0;
  return fit;
}

OlsFit ols_fit(const DataMatrix& x, const Eigen::VectorXd& y) {
  x.validate();
  return ols_fit(x.values, y);
}

std::vector<int> wrapper_greedy(const DataMatrix& x, const Eigen::VectorXd& y, int t) {
  x.validate();
  const Eigen::Index n = x.cols();
  if (x.rows() != y.size()) throw dimension_error("wrapper_greedy: row mismatch");
  if (t < 1) throw dimension_error("t must be at least 1");
  if (t > n) throw dimension_error("t exceeds feature count");

  std::vector<int> selected;
  std::vector<int> remaining;
  for (Eigen::Index i = 0; i < n; ++i) remaining.push_back(static_cast<int>(i));
  Eigen::MatrixXd x_sel(x.rows(), 0);

  for (int step = 0; step < t; ++step) {
    std::size_t best = remaining.size();
    double best_rmse = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd trial(x.rows(), x_sel.cols() + 1);
    trial.leftCols(x_sel.cols()) = x_sel;
    for (std::size_t pos = 0; pos < remaining.size(); ++pos) {
      trial.col(x_sel.cols()) = x.values.col(remaining[pos]);
      double rmse;
      try {
        rmse = ols_fit(trial, y).rmse;
      } catch (const degenerate_input_error&) {
        continue;
      }
      if (rmse < best_rmse) {
        best = pos;
        best_rmse = rmse;
      }
    }
    if (best == remaining.size())
      throw no_informative_candidate_error(
          "wrapper_greedy: no remaining candidate yields a full-rank fit");
    x_sel.conservativeResize(Eigen::NoChange, x_sel.cols() + 1);
    x_sel.col(x_sel.cols() - 1) = x.values.col(remaining[best]);
    selected.push_back(remaining[best]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return selected;
}

}  // namespace ccffs
