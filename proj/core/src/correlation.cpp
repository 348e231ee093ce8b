#include "ccffs/correlation.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

namespace ccffs {

namespace detail {

double clip_unit(double v, const char* context) {
  if (v < -1e-9 || v > 1.0 + 1e-9)
    throw internal_error(std::string(context) + ": value " + std::to_string(v) +
                         " outside [0,1] beyond round-off tolerance");
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace detail

namespace {

struct ThinQr {
  Eigen::MatrixXd q;  // N x k, orthonormal columns
  Eigen::MatrixXd r;  // k x k, upper triangular
};

// Thin QR with a rank check; throws degenerate_input_error naming the block.
ThinQr thin_qr_full_rank(const Eigen::MatrixXd& m, const char* block_name) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> piv(m);
  if (piv.rank() < m.cols())
    throw degenerate_input_error(std::string(block_name) +
                                 " block is rank-deficient (rank " +
                                 std::to_string(piv.rank()) + " of " +
                                 std::to_string(m.cols()) + " columns)");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  ThinQr out;
  out.q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
  out.r = qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
  return out;
}

}  // namespace

double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) throw dimension_error("pearson: length mismatch");
  if (x.size() < 2) throw dimension_error("pearson: need at least two samples");
  const Eigen::VectorXd xc = x.array() - x.mean();
  const Eigen::VectorXd yc = y.array() - y.mean();
  const double nx = xc.norm();
  const double ny = yc.norm();
  if (nx <= 0.0 || ny <= 0.0)
    throw degenerate_input_error("pearson: zero-variance input");
  return std::clamp(xc.dot(yc) / (nx * ny), -1.0, 1.0);
}

double multiple_correlation_sq(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.cols() > 0 && x.rows() != y.size())
    throw dimension_error("multiple_correlation_sq: row mismatch");
  const Eigen::VectorXd yc = y.array() - y.mean();
  const double y_sq = yc.squaredNorm();
  if (y_sq <= 0.0)
    throw degenerate_input_error("multiple_correlation_sq: response has zero variance");
  if (x.cols() == 0) return 0.0;

  const CenteredMatrix xc = center(x);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> piv(xc.values);
  if (piv.rank() < x.cols())
    throw degenerate_input_error("multiple_correlation_sq: design block is rank-deficient");

  const Eigen::MatrixXd gram = xc.values.transpose() * xc.values;
  const Eigen::VectorXd alpha = gram.ldlt().solve(xc.values.transpose() * yc);
  const double proj_sq = (xc.values * alpha).squaredNorm();
  return detail::clip_unit(proj_sq / y_sq, "multiple_correlation_sq");
}

double multiple_correlation_sq(const DataMatrix& x, const Eigen::VectorXd& y) {
  x.validate();
  return multiple_correlation_sq(x.values, y);
}

CcaResult cca(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (x.rows() != y.rows()) throw dimension_error("cca: row mismatch between x and y");
  if (x.cols() < 1 || y.cols() < 1)
    throw dimension_error("cca: both sides need at least one column");
  if (x.rows() < 2) throw dimension_error("cca: need at least two instances");

  const CenteredMatrix xc = center(x);
  const CenteredMatrix yc = center(y);
  const ThinQr qx = thin_qr_full_rank(xc.values, "x");
  const ThinQr qy = thin_qr_full_rank(yc.values, "y");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(qx.q.transpose() * qy.q,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::Index k = std::min(x.cols(), y.cols());

  CcaResult out;
  out.underdetermined = x.rows() <= x.cols() + y.cols();
  out.r_squared.resize(k);
  out.angles.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double s = svd.singularValues()(i);
    out.r_squared(i) = detail::clip_unit(s * s, "cca");
    out.angles(i) = std::acos(std::sqrt(out.r_squared(i)));
  }
  // a_k = R_x^-1 u_k makes X_C a_k = Q_x u_k, a unit-norm canonical variate.
  out.weights_x = qx.r.triangularView<Eigen::Upper>().solve(svd.matrixU().leftCols(k));
  out.weights_y = qy.r.triangularView<Eigen::Upper>().solve(svd.matrixV().leftCols(k));
  return out;
}

CcaResult cca(const DataMatrix& x, const DataMatrix& y) {
  x.validate();
  y.validate();
  return cca(x.values, y.values);
}

double ssc(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (x.cols() == 0 || y.cols() == 0) return 0.0;
  return cca(x, y).r_squared.sum();
}

double ssc(const DataMatrix& x, const DataMatrix& y) {
  x.validate();
  y.validate();
  return ssc(x.values, y.values);
}

Eigen::VectorXd principal_angles(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows()) throw dimension_error("principal_angles: row mismatch");
  if (a.cols() < 1 || b.cols() < 1)
    throw dimension_error("principal_angles: both sides need at least one column");

  const ThinQr qa = thin_qr_full_rank(a, "a");
  const ThinQr qb = thin_qr_full_rank(b, "b");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(qa.q.transpose() * qb.q);

  const Eigen::Index k = std::min(a.cols(), b.cols());
  Eigen::VectorXd angles(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double c2 = detail::clip_unit(svd.singularValues()(i) * svd.singularValues()(i),
                                        "principal_angles");
    angles(i) = std::acos(std::sqrt(c2));
  }
  return angles;
}

}  // namespace ccffs
