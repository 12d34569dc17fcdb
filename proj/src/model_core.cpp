#include "ruvstar/model_core.hpp"

#include <cmath>

namespace ruvstar {

RotatedModel rotate(const ResponseMatrix& y, const Design& d) {
  y.validate();
  d.validate(y.p());
  const int n = y.n();
  const int k = d.k();
  if (d.n() != n) {
    throw ShapeError("Design and ResponseMatrix disagree on n");
  }
  if (n <= k) {
    throw InsufficientSamplesError("rotation requires n > k");
  }

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(d.x);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r =
      qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();

  // Fix the sign convention: nonnegative R diagonal.
  for (int i = 0; i < k; ++i) {
    if (r(i, i) < 0) {
      r.row(i) = -r.row(i);
      q.col(i) = -q.col(i);
    }
  }

  const double max_diag = r.diagonal().cwiseAbs().maxCoeff();
  for (int i = 0; i < k; ++i) {
    if (std::abs(r(i, i)) <= 1e-12 * std::max(1.0, max_diag)) {
      throw RankDeficiencyError("design matrix X is rank deficient");
    }
  }

  Eigen::MatrixXd qty = q.transpose() * y.values;

  RotatedModel rm;
  rm.n = n;
  rm.k1 = d.k1;
  rm.k2 = d.k2;
  rm.p = y.p();
  rm.controls = d.controls;
  rm.q = std::move(q);
  rm.r11 = r.topLeftCorner(d.k1, d.k1);
  rm.r12 = r.topRightCorner(d.k1, d.k2);
  rm.r22 = r.bottomRightCorner(d.k2, d.k2);
  rm.y1 = qty.topRows(d.k1);
  rm.y2 = qty.middleRows(d.k1, d.k2);
  rm.y3 = qty.bottomRows(n - k);
  return rm;
}

Eigen::VectorXd r22_se_scale(const Eigen::MatrixXd& r22) {
  const int k2 = static_cast<int>(r22.rows());
  Eigen::MatrixXd r22_inv = r22.triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(k2, k2));
  return (r22_inv * r22_inv.transpose()).diagonal().cwiseSqrt();
}

EffectResult ols_effects_for(const RotatedModel& rm,
                             const std::vector<int>& cols) {
  const int dof = rm.n - rm.k();
  if (dof <= 0) {
    throw ZeroDofError("ols_effects requires n - k > 0");
  }
  const Eigen::MatrixXd y2 = select_cols(rm.y2, cols);
  const Eigen::MatrixXd y3 = select_cols(rm.y3, cols);
  const int g = static_cast<int>(cols.size());

  EffectResult e;
  e.beta2hat = rm.r22.triangularView<Eigen::Upper>().solve(y2);
  e.se.resize(rm.k2, g);
  e.tstat.resize(rm.k2, g);
  e.dof = Eigen::VectorXd::Constant(g, static_cast<double>(dof));
  e.method_tag = "ols-o";

  const Eigen::VectorXd scale = r22_se_scale(rm.r22);
  for (int j = 0; j < g; ++j) {
    double s2 = y3.col(j).squaredNorm() / dof;
    if (s2 < kVarianceFloor) {
      s2 = kVarianceFloor;
      e.floored_columns.push_back(j);
    }
    e.se.col(j) = std::sqrt(s2) * scale;
  }
  e.tstat = e.beta2hat.cwiseQuotient(e.se);
  return e;
}

EffectResult ols_effects(const RotatedModel& rm) {
  return ols_effects_for(rm, rm.noncontrols());
}

Eigen::MatrixXd recover_beta2(const RotatedModel& rm,
                              const Eigen::MatrixXd& z2alpha) {
  const std::vector<int> nonc = rm.noncontrols();
  if (z2alpha.rows() != rm.k2 ||
      z2alpha.cols() != static_cast<Eigen::Index>(nonc.size())) {
    throw ShapeError("recover_beta2: z2alpha must be k2 x (p - m)");
  }
  Eigen::MatrixXd rhs = select_cols(rm.y2, nonc) - z2alpha;
  return rm.r22.triangularView<Eigen::Upper>().solve(rhs);
}

}  // namespace ruvstar
