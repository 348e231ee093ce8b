#pragma once

#include <Eigen/Dense>

#include "ccffs/linalg.hpp"

namespace ccffs {

// Squared canonical correlation coefficients with the projection weights and
// the corresponding principal angles.
struct CcaResult {
  Eigen::VectorXd r_squared;  // R_k^2, descending, clipped to [0, 1]
  Eigen::MatrixXd weights_x;  // n x k; canonical variates X_C * col have unit norm
  Eigen::MatrixXd weights_y;  // m x k
  Eigen::VectorXd angles;     // arccos(R_k), ascending, radians
  bool underdetermined = false;  // N <= n + m
};

/// Pearson's correlation coefficient in [-1, 1]. Throws degenerate_input_error
/// on zero-variance input.
double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Squared multiple correlation R^2(X, y) = max_a r^2(X_C a, y_C), computed
/// through the normal-equations projection a = <X_C,X_C>^-1 <X_C,y_C>.
double multiple_correlation_sq(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);
double multiple_correlation_sq(const DataMatrix& x, const Eigen::VectorXd& y);

/// Canonical correlation analysis. The eigenproblem on the centred blocks is
/// solved through its symmetric equivalent: whiten both blocks by thin QR and
/// take the singular values of the cross-product. Requires both centred
/// blocks to have full column rank.
CcaResult cca(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);
CcaResult cca(const DataMatrix& x, const DataMatrix& y);

/// Sum of squared canonical correlation coefficients. Zero when either side
/// has no columns.
double ssc(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);
double ssc(const DataMatrix& x, const DataMatrix& y);

/// Principal angles between the column spans of a and b (no centering),
/// ascending in [0, pi/2].
Eigen::VectorXd principal_angles(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

namespace detail {

// Clamps round-off excursions of at most 1e-9 outside [0, 1]; anything larger
// raises internal_error.
double clip_unit(double v, const char* context);

}  // namespace detail

}  // namespace ccffs
