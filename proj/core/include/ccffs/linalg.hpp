#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ccffs/errors.hpp"

namespace ccffs {

// Relative threshold below which an orthogonalized column counts as zero.
inline constexpr double rank_epsilon = 1e-10;

// Dense numeric table; rows are instances, columns are named variables.
struct DataMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> col_names;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }

  // Throws if entries are non-finite, the table is empty, or the names do
  // not line up with the columns.
  void validate() const;
};

struct CenteredMatrix {
  Eigen::MatrixXd values;        // zero column means
  Eigen::VectorXd source_means;  // per-column means removed from the source
};

struct OrthonormalBasis {
  Eigen::MatrixXd values;  // N x z, with U^T U = I
  Eigen::Index cols() const { return values.cols(); }
};

struct OrthogonalizeResult {
  Eigen::VectorXd vec;
  bool degenerate = false;  // residual norm <= rank_epsilon * input norm
};

struct OrthogonalColumns {
  Eigen::MatrixXd values;
  std::vector<char> degenerate;  // per column
};

CenteredMatrix center(const Eigen::MatrixXd& m);
CenteredMatrix center(const DataMatrix& m);

/// Orthonormal basis with z columns whose range contains the columns of m,
/// taken from the left factor of an SVD. Column signs are unspecified, so
/// downstream comparisons must be sign-invariant.
OrthonormalBasis orthonormal_basis(const Eigen::MatrixXd& m, Eigen::Index z);
OrthonormalBasis orthonormal_basis(const CenteredMatrix& m, Eigen::Index z);

/// Coordinate matrix [m]_U with U * [m]_U == m. Throws not_in_range_error
/// when the reconstruction residual exceeds 1e-9 relative Frobenius.
Eigen::MatrixXd coordinates(const Eigen::MatrixXd& m, const OrthonormalBasis& u);
Eigen::MatrixXd coordinates(const CenteredMatrix& m, const OrthonormalBasis& u);

/// Residual of f after removing its projections onto the mutually orthogonal
/// columns of w. Uses the modified update order, with one extra pass when the
/// residual norm collapses below 0.1 of the input norm. Zero columns of w are
/// skipped. An empty w returns f unchanged.
OrthogonalizeResult orthogonalize_against(const Eigen::VectorXd& f, const Eigen::MatrixXd& w);

/// Column-by-column orthogonalization. Output column i spans the same flag of
/// leading subspaces as the first i input columns. Columns are not
/// normalized; near-dependent columns are flagged degenerate and excluded
/// from later projections.
OrthogonalColumns gram_schmidt(const Eigen::MatrixXd& m);

}  // namespace ccffs
