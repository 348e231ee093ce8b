#include "ccffs/linalg.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <utility>

namespace ccffs {

void DataMatrix::validate() const {
  if (values.rows() < 1) throw dimension_error("matrix must have at least one row");
  if (values.cols() < 1) throw dimension_error("matrix must have at least one column");
  if (!values.allFinite()) throw error("matrix contains non-finite entries");
  if (!col_names.empty() &&
      static_cast<Eigen::Index>(col_names.size()) != values.cols())
    throw dimension_error("column name count does not match column count");
}

CenteredMatrix center(const Eigen::MatrixXd& m) {
  CenteredMatrix out;
  out.source_means = m.colwise().mean();
  out.values = m.rowwise() - out.source_means.transpose();
  return out;
}

CenteredMatrix center(const DataMatrix& m) {
  m.validate();
  return center(m.values);
}

OrthonormalBasis orthonormal_basis(const Eigen::MatrixXd& m, Eigen::Index z) {
  const Eigen::Index n_rows = m.rows();
  if (z < 1) throw dimension_error("basis size must be positive");
  if (z > n_rows) throw dimension_error("basis size exceeds instance count");

  const bool need_full = z > std::min(n_rows, m.cols());
  Eigen::BDCSVD<Eigen::MatrixXd> svd(
      m, need_full ? Eigen::ComputeFullU : Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double tol =
      sv.size() > 0
          ? sv(0) * 1e-12 * static_cast<double>(std::max(n_rows, m.cols()))
          : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  if (z < rank) throw dimension_error("basis size below matrix rank");

  return OrthonormalBasis{svd.matrixU().leftCols(z)};
}

OrthonormalBasis orthonormal_basis(const CenteredMatrix& m, Eigen::Index z) {
  return orthonormal_basis(m.values, z);
}

Eigen::MatrixXd coordinates(const Eigen::MatrixXd& m, const OrthonormalBasis& u) {
  if (m.rows() != u.values.rows())
    throw dimension_error("row count mismatch between matrix and basis");
  Eigen::MatrixXd coords = u.values.transpose() * m;
  const double residual = (u.values * coords - m).norm();
  if (residual > 1e-9 * m.norm())
    throw not_in_range_error("matrix columns are not in the range of the basis");
  return coords;
}

Eigen::MatrixXd coordinates(const CenteredMatrix& m, const OrthonormalBasis& u) {
  return coordinates(m.values, u);
}

OrthogonalizeResult orthogonalize_against(const Eigen::VectorXd& f,
                                          const Eigen::MatrixXd& w) {
  if (w.cols() > 0 && f.size() != w.rows())
    throw dimension_error("vector length does not match basis rows");

  const double f_norm = f.norm();
  Eigen::VectorXd r = f;
  auto sweep = [&] {
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      const double denom = w.col(j).squaredNorm();
      if (denom <= 0.0) continue;
      r -= (r.dot(w.col(j)) / denom) * w.col(j);
    }
  };
  sweep();
  if (r.norm() < 0.1 * f_norm) sweep();

  OrthogonalizeResult out;
  out.degenerate = r.norm() <= rank_epsilon * f_norm;
  out.vec = std::move(r);
  return out;
}

OrthogonalColumns gram_schmidt(const Eigen::MatrixXd& m) {
  OrthogonalColumns out;
  out.values.resize(m.rows(), m.cols());
  out.degenerate.assign(static_cast<std::size_t>(m.cols()), 0);

  Eigen::MatrixXd basis(m.rows(), m.cols());
  Eigen::Index n_basis = 0;
  for (Eigen::Index i = 0; i < m.cols(); ++i) {
    OrthogonalizeResult res = orthogonalize_against(m.col(i), basis.leftCols(n_basis));
    out.degenerate[static_cast<std::size_t>(i)] = res.degenerate ? 1 : 0;
    out.values.col(i) = res.vec;
    if (!res.degenerate) basis.col(n_basis++) = res.vec;
  }
  return out;
}

}  // namespace ccffs
