#ifndef RUVSTAR_CALIBRATION_HPP
#define RUVSTAR_CALIBRATION_HPP

#include <Eigen/Dense>
#include <string>

#include "ruvstar/types.hpp"

namespace ruvstar {

// Record of what a calibration pass did to the standard errors.
struct CalibrationReport {
  std::string method;           // "ctl", "mad", "ebvm", "lambda-mle"
  double lambda = 1.0;          // multiplicative se factor (ctl, lambda-mle)
  Eigen::VectorXd center;       // per interest covariate (mad)
  Eigen::VectorXd scale;        // per interest covariate (mad)
  double d0 = 0.0;              // prior dof (ebvm)
  double s02 = 0.0;             // prior variance (ebvm)
  bool flagged = false;         // degenerate case handled specially
};

// Multiplicative se inflation from the control-gene statistics:
// lambda = sqrt(mean over all control entries of (beta/se)^2). Zero lambda
// (all control t statistics zero) is rejected.
EffectResult control_calibrate(const EffectResult& e,
                               const EffectResult& control_stats,
                               CalibrationReport* report = nullptr);

// Recentering and rescaling of the t statistics by their median and
// normal-consistent median absolute deviation, row by row. Implemented on
// (beta, se) so that tstat stays beta/se: beta' = beta - med * se,
// se' = 1.4826 * rawmad * se.
EffectResult mad_calibrate(const EffectResult& e,
                           CalibrationReport* report = nullptr);

// --- empirical Bayes variance moderation ----------------------------------

struct EbvmFit {
  double d0 = 0.0;    // prior degrees of freedom (may be huge when capped)
  double s02 = 0.0;   // prior variance
  bool capped = false;      // zero-dispersion case, d0 at the cap
  bool passthrough = false; // too few genes or d0 below floor
};

// Method-of-moments fit of the scaled-inverse-chi-square prior on the
// per-gene variances, via the moments of log variances.
EbvmFit ebvm_fit(const Eigen::VectorXd& variances, const Eigen::VectorXd& dofs);

struct EbvmResult {
  Eigen::VectorXd variances;  // (d0 s0^2 + d s^2) / (d0 + d)
  Eigen::VectorXd dofs;       // d + d0
  EbvmFit fit;
};

// Shrinks each variance toward s02 given a fit; exposed separately so the
// d0 = 0 and d0 = inf limits are testable directly.
EbvmResult ebvm_moderate(const Eigen::VectorXd& variances,
                         const Eigen::VectorXd& dofs, const EbvmFit& fit);

// fit + moderate in one call.
EbvmResult ebvm(const Eigen::VectorXd& variances, const Eigen::VectorXd& dofs);

// --- variance-inflated GLS fit --------------------------------------------

// MLE of the multiplicative variance inflation in the control-gene
// regression: lambda = tr[(Y2C - Z2 alphaC) SigmaC^{-1} (.)^T] / (k2 m).
// A lambda below 1e-12 signals a perfect fit and is flagged.
double lambda_mle_cate(const Eigen::MatrixXd& y2c, const Eigen::MatrixXd& z2hat,
                       const Eigen::MatrixXd& alphahat_c,
                       const Eigen::VectorXd& sigmahat_c,
                       bool* flagged = nullptr);

// se scaled by sqrt(lambda), t recomputed. Flagged (near-zero) lambdas leave
// the result unchanged rather than collapsing the standard errors.
EffectResult inflate_se(const EffectResult& e, double lambda, bool flagged,
                        CalibrationReport* report = nullptr);

}  // namespace ruvstar

#endif  // RUVSTAR_CALIBRATION_HPP
