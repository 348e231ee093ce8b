#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ccffs/linalg.hpp"

namespace ccffs {

struct OlsFit {
  Eigen::VectorXd coefficients;  // intercept first, then one per feature
  double rmse = 0.0;             // sqrt(RSS / N), training fit
  double r_squared = 0.0;
};

/// Least squares with intercept, solved by orthogonal decomposition. The
/// design matrix (intercept column included) must have full rank. x may have
/// zero columns for an intercept-only fit.
OlsFit ols_fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);
OlsFit ols_fit(const DataMatrix& x, const Eigen::VectorXd& y);

/// Greedy forward wrapper: each step adds the candidate minimizing the OLS
/// training RMSE (ties: lowest original index). Rank-deficient candidate fits
/// are skipped; if no candidate fits, throws no_informative_candidate_error.
std::vector<int> wrapper_greedy(const DataMatrix& x, const Eigen::VectorXd& y, int t);

}  // namespace ccffs
