#include "ruvstar/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "ruvstar/factor_analysis.hpp"
#include "ruvstar/model_core.hpp"
#include "ruvstar/rng.hpp"
#include "ruvstar/ruv_estimators.hpp"

namespace ruvstar {

namespace {

// Moderates the per-gene variances of a finished fit. The se factorizes as
// sigma_j * scale_i, so sigma is recovered from the first interest row.
void moderate_effect(EffectResult& e, const Eigen::VectorXd& scale) {
  const int g = e.genes();
  Eigen::VectorXd var(g);
  for (int j = 0; j < g; ++j) {
    const double s = e.se(0, j) / scale[0];
    var[j] = s * s;
  }
  const EbvmResult mod = ebvm(var, e.dof);
  for (int j = 0; j < g; ++j) {
    e.se.col(j) = std::sqrt(mod.variances[j]) * scale;
  }
  e.dof = mod.dofs;
  e.tstat = e.beta2hat.cwiseQuotient(e.se);
}

EbvmPlacement placement_for(const std::string& token) {
  if (token == "lb") return EbvmPlacement::Before;
  if (token == "l" || token == "la") return EbvmPlacement::After;
  return EbvmPlacement::None;
}

}  // namespace

FitOutput run_fit(const ResponseMatrix& y, const Design& d,
                  const FitOptions& opt) {
  const RotatedModel rm = rotate(y, d);
  FitOutput out;
  out.gene_cols = rm.noncontrols();
  const int m = static_cast<int>(rm.controls.size());
  const Eigen::VectorXd scale = r22_se_scale(rm.r22);

  int q = opt.q;
  const bool needs_q = opt.variant.family != MethodFamily::Ols;
  if (needs_q && q < 0) {
    const int est = estimate_num_factors(rm.y3, opt.pa_perms,
                                         mix64(opt.seed) ^ 0x9a11e1ULL);
    q = std::clamp(est, 1, std::min(m - 1, rm.n - rm.k() - 1));
  }
  out.q_used = needs_q ? q : 0;

  const std::string& token = opt.variant.token;
  const TruncatedSvdFa fa;

  if (opt.variant.family == MethodFamily::Ruvb) {
    McmcSettings mcmc = opt.mcmc;
    mcmc.seed = opt.seed;
    out.draws = run_ruvb(rm, q, BfaHyper{}, mcmc);
    out.has_draws = true;
    const int dof_t = rm.n - rm.k() - q;
    if (token == "nn") {
      out.effect = summarize_effects(out.draws, RuvbLikelihood::Normal, dof_t);
    } else if (token == "s") {
      out.effect = summarize_effects(out.draws, RuvbLikelihood::Sample, dof_t,
                                     opt.level);
    } else {
      out.effect = summarize_effects(out.draws, RuvbLikelihood::T, dof_t);
      if (token == "n-l") {
        // The sampler se does not factor over a shared scale; moderate the
        // draw variances directly.
        Eigen::VectorXd var(out.effect.genes());
        for (int j = 0; j < out.effect.genes(); ++j) {
          var[j] = out.effect.se(0, j) * out.effect.se(0, j);
        }
        const EbvmResult mod = ebvm(var, out.effect.dof);
        for (int j = 0; j < out.effect.genes(); ++j) {
          out.effect.se(0, j) = std::sqrt(mod.variances[j]);
        }
        out.effect.dof = mod.dofs;
        out.effect.tstat = out.effect.beta2hat.cwiseQuotient(out.effect.se);
      }
    }
    out.effect.method_tag = print_variant(opt.variant);
    return out;
  }

  EffectResult effect;
  EffectResult control_effect;
  if (opt.variant.family == MethodFamily::Ols) {
    effect = ols_effects(rm);
    control_effect = ols_effects_for(rm, rm.controls);
  } else {
    RuvFit fit;
    switch (opt.variant.family) {
      case MethodFamily::Ruv2:
        fit = ruv2(rm, fa, q);
        break;
      case MethodFamily::Ruv4:
        fit = ruv4(rm, fa, q, GlsMode::Ols);
        break;
      case MethodFamily::Cate:
        fit = ruv4(rm, fa, q, GlsMode::Gls, placement_for(token));
        break;
      case MethodFamily::Ruv3:
        fit = ruv3(rm, fa, q, placement_for(token));
        break;
      default:
        throw ShapeError("unreachable method family");
    }
    effect = fit.effect;
    control_effect = fit.control_effect;
  }

  const bool gls_family = opt.variant.family == MethodFamily::Ruv3 ||
                          opt.variant.family == MethodFamily::Cate;
  if (token == "m") {
    effect = mad_calibrate(effect, &out.calibration);
    out.has_calibration = true;
  } else if (token == "c") {
    effect = control_calibrate(effect, control_effect, &out.calibration);
    out.has_calibration = true;
  } else if (token == "l" && !gls_family) {
    moderate_effect(effect, scale);
  }
  // For ruv3/cate the l, lb, la tokens were handled inside the estimator.

  effect.method_tag = print_variant(opt.variant);
  out.effect = effect;
  return out;
}

}  // namespace ruvstar
