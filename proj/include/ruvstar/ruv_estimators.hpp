#ifndef RUVSTAR_RUV_ESTIMATORS_HPP
#define RUVSTAR_RUV_ESTIMATORS_HPP

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "ruvstar/factor_analysis.hpp"
#include "ruvstar/model_core.hpp"
#include "ruvstar/types.hpp"

namespace ruvstar {

enum class RuvVariant { Ruv2Old, Ruv2, Ruv3, Ruv4Ols, Cate };
enum class GlsMode { Ols, Gls };

// Where empirical Bayes variance moderation enters the estimator:
// Before moderates the factor-analysis variances ahead of the GLS step,
// After moderates the final per-gene variances only.
enum class EbvmPlacement { None, Before, After };

struct RuvFit {
  EffectResult effect;          // non-control columns
  EffectResult control_effect;  // same statistics on the control columns
  Eigen::MatrixXd z2hat;        // k2 x q
  Eigen::MatrixXd alphahat;     // q x p, full column order
  Eigen::VectorXd sigmahat;     // p, full column order
  int q = 0;
  RuvVariant variant = RuvVariant::Ruv4Ols;
};

// Control-gene regression of the interest block: factor analysis on the
// pure-noise block, then Z2 from the control columns by OLS or by GLS
// weighted with the inverse control variances, then
// beta2 = R22^{-1}(Y2 - Z2 alpha) on the non-control columns.
RuvFit ruv4(const RotatedModel& rm, const FactorAnalysis& fa, int q,
            GlsMode mode, EbvmPlacement ebvm_placement = EbvmPlacement::None);

// Factor analysis on the stacked control columns [Y2C; Y3C]; loadings and
// variances by regressing Y3 on the bottom factor block.
RuvFit ruv2(const RotatedModel& rm, const FactorAnalysis& fa, int q);

// Unrotated form: factors from the control columns of Y itself, effects as
// partial regression coefficients of X given the estimated factors.
// Nuisance covariates are removed by first rotating X2 and Y onto an
// orthogonal complement of the nuisance columns.
RuvFit ruv2_old(const ResponseMatrix& y, const Design& d,
                const FactorAnalysis& fa, int q);

// Factor analysis on the control columns of the noise block only; Z2 by
// GLS against the control loadings, non-control loadings and variances by
// regression on the estimated factors.
RuvFit ruv3(const RotatedModel& rm, const FactorAnalysis& fa, int q,
            EbvmPlacement ebvm_placement = EbvmPlacement::None);

// Factor analyses constrained to depend on the control noise block only.
// Feeding the first into ruv4 (GLS) or the second into ruv2 reproduces ruv3.
std::unique_ptr<FactorAnalysis> constrained_fa_ruv4(
    std::shared_ptr<const FactorAnalysis> base, std::vector<int> controls);
std::unique_ptr<FactorAnalysis> constrained_fa_ruv2(
    std::shared_ptr<const FactorAnalysis> base, int k2);

}  // namespace ruvstar

#endif  // RUVSTAR_RUV_ESTIMATORS_HPP
