#ifndef RUVSTAR_MODEL_CORE_HPP
#define RUVSTAR_MODEL_CORE_HPP

#include <Eigen/Dense>
#include <vector>

#include "ruvstar/types.hpp"

namespace ruvstar {

// QR rotation of the factor-augmented regression into three independent
// blocks:
//   Y1 = R11 b1 + R12 b2 + Z1 a + E1     (nuisance, ignored)
//   Y2 =          R22 b2 + Z2 a + E2     (interest)
//   Y3 =                   Z3 a + E3     (pure unwanted variation)
// Q is the full n x n orthogonal factor; the R diagonal is fixed
// nonnegative so the rotation is deterministic.
struct RotatedModel {
  Eigen::MatrixXd q;    // n x n orthogonal
  Eigen::MatrixXd r11;  // k1 x k1 upper triangular
  Eigen::MatrixXd r12;  // k1 x k2
  Eigen::MatrixXd r22;  // k2 x k2 upper triangular, invertible
  Eigen::MatrixXd y1;   // k1 x p
  Eigen::MatrixXd y2;   // k2 x p
  Eigen::MatrixXd y3;   // (n-k) x p
  int n = 0;
  int k1 = 0;
  int k2 = 0;
  int p = 0;
  std::vector<int> controls;  // copied from the Design

  int k() const { return k1 + k2; }
  std::vector<int> noncontrols() const {
    return complement_indices(controls, p);
  }
};

// Householder QR rotation of (Y, X). Throws RankDeficiencyError when X is
// column-rank deficient and InsufficientSamplesError when n <= k.
RotatedModel rotate(const ResponseMatrix& y, const Design& d);

// Baseline OLS effects for the non-control columns: b2 = R22^{-1} Y2,
// residual variance from Y3 with n - k degrees of freedom.
EffectResult ols_effects(const RotatedModel& rm);

// Same arithmetic restricted to an arbitrary column subset; used to obtain
// control-gene statistics for calibration.
EffectResult ols_effects_for(const RotatedModel& rm,
                             const std::vector<int>& cols);

// R22^{-1} (Y2_nonC - z2alpha). z2alpha must be k2 x (p - m).
Eigen::MatrixXd recover_beta2(const RotatedModel& rm,
                              const Eigen::MatrixXd& z2alpha);

// sqrt(diag(R22^{-1} R22^{-T})): per-covariate se scale shared by all the
// estimators (se_{ij} = sigma_j * scale_i).
Eigen::VectorXd r22_se_scale(const Eigen::MatrixXd& r22);

// Residual variance floor applied before forming standard errors.
inline constexpr double kVarianceFloor = 1e-12;

}  // namespace ruvstar

#endif  // RUVSTAR_MODEL_CORE_HPP
