#include "ruvstar/ruv_estimators.hpp"

#include <cmath>
#include <utility>

#include "ruvstar/calibration.hpp"

namespace ruvstar {

namespace {

void check_conditioning(const Eigen::MatrixXd& gram, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram,
                                                    Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    throw SingularControlError(what);
  }
}

// Z2 = Y2C W alphaC^T (alphaC W alphaC^T)^{-1}, W = I (ols) or
// diag(1/sigmaC) (gls). Refuses ill-conditioned control Grams outright:
// silent regularization would break the estimator equivalences.
Eigen::MatrixXd solve_z2(const Eigen::MatrixXd& y2c,
                         const Eigen::MatrixXd& alpha_c,
                         const Eigen::VectorXd& sigma_c, GlsMode mode) {
  Eigen::MatrixXd gram;
  Eigen::MatrixXd cross;
  if (mode == GlsMode::Ols) {
    gram = alpha_c * alpha_c.transpose();
    cross = y2c * alpha_c.transpose();
  } else {
    const Eigen::VectorXd w = sigma_c.cwiseInverse();
    gram = alpha_c * w.asDiagonal() * alpha_c.transpose();
    cross = y2c * w.asDiagonal() * alpha_c.transpose();
  }
  check_conditioning(gram, "control loading cross-product is singular");
  return gram.ldlt().solve(cross.transpose()).transpose();
}

// Effects for an arbitrary column subset from its fitted unwanted-variation
// contribution z2 * alpha and per-column variances.
EffectResult subset_effects(const RotatedModel& rm,
                            const std::vector<int>& cols,
                            const Eigen::MatrixXd& z2alpha,
                            const Eigen::VectorXd& sigma,
                            const Eigen::VectorXd& dofs) {
  const int g = static_cast<int>(cols.size());
  EffectResult e;
  Eigen::MatrixXd rhs = select_cols(rm.y2, cols) - z2alpha;
  e.beta2hat = rm.r22.triangularView<Eigen::Upper>().solve(rhs);
  e.se.resize(rm.k2, g);
  e.dof = dofs;
  const Eigen::VectorXd scale = r22_se_scale(rm.r22);
  for (int j = 0; j < g; ++j) {
    double s2 = sigma[j];
    if (s2 < kVarianceFloor) {
      s2 = kVarianceFloor;
      e.floored_columns.push_back(j);
    }
    e.se.col(j) = std::sqrt(s2) * scale;
  }
  e.tstat = e.beta2hat.cwiseQuotient(e.se);
  return e;
}

void fill_effects(RuvFit& fit, const RotatedModel& rm,
                  const Eigen::VectorXd& dofs) {
  const std::vector<int> nonc = rm.noncontrols();
  fit.effect = subset_effects(rm, nonc,
                              fit.z2hat * select_cols(fit.alphahat, nonc),
                              select_elems(fit.sigmahat, nonc),
                              select_elems(dofs, nonc));
  fit.control_effect =
      subset_effects(rm, rm.controls,
                     fit.z2hat * select_cols(fit.alphahat, rm.controls),
                     select_elems(fit.sigmahat, rm.controls),
                     select_elems(dofs, rm.controls));
}

int checked_dof(const RotatedModel& rm, int q) {
  const int dof = rm.n - rm.k() - q;
  if (dof <= 0) {
    throw ZeroDofError("estimator requires n - k - q > 0");
  }
  return dof;
}

void require_controls_exceed_q(const RotatedModel& rm, int q) {
  if (static_cast<int>(rm.controls.size()) <= q) {
    throw SingularControlError(
        "need more control genes than factors; refusing pseudo-inverse");
  }
}

}  // namespace

RuvFit ruv4(const RotatedModel& rm, const FactorAnalysis& fa, int q,
            GlsMode mode, EbvmPlacement ebvm_placement) {
  const int dof = checked_dof(rm, q);
  require_controls_exceed_q(rm, q);
  const FactorFit ff = fa.fit(rm.y3, q);

  RuvFit fit;
  fit.q = q;
  fit.variant = mode == GlsMode::Gls ? RuvVariant::Cate : RuvVariant::Ruv4Ols;
  fit.alphahat = ff.alphahat;
  fit.sigmahat = ff.sigmahat;
  Eigen::VectorXd dofs = Eigen::VectorXd::Constant(rm.p, dof);
  if (ebvm_placement == EbvmPlacement::Before) {
    const EbvmResult mod = ebvm(fit.sigmahat, dofs);
    fit.sigmahat = mod.variances;
    dofs = mod.dofs;
  }

  fit.z2hat = solve_z2(select_cols(rm.y2, rm.controls),
                       select_cols(fit.alphahat, rm.controls),
                       select_elems(fit.sigmahat, rm.controls), mode);
  if (ebvm_placement == EbvmPlacement::After) {
    const EbvmResult mod = ebvm(fit.sigmahat, dofs);
    fit.sigmahat = mod.variances;
    dofs = mod.dofs;
  }
  fill_effects(fit, rm, dofs);
  fit.effect.method_tag = mode == GlsMode::Gls ? "cate-o" : "ruv4-o";
  fit.control_effect.method_tag = fit.effect.method_tag;
  return fit;
}

RuvFit ruv2(const RotatedModel& rm, const FactorAnalysis& fa, int q) {
  const int dof = checked_dof(rm, q);
  require_controls_exceed_q(rm, q);
  const int nprime = rm.n - rm.k();

  Eigen::MatrixXd stacked(rm.k2 + nprime, rm.controls.size());
  stacked.topRows(rm.k2) = select_cols(rm.y2, rm.controls);
  stacked.bottomRows(nprime) = select_cols(rm.y3, rm.controls);
  const FactorFit ff = fa.fit(stacked, q);
  const Eigen::MatrixXd z3 = ff.zhat.bottomRows(nprime);

  // Loadings for every gene by regressing the noise block on the factors.
  const Eigen::MatrixXd gram = z3.transpose() * z3;
  check_conditioning(gram, "factor cross-product is singular");
  RuvFit fit;
  fit.q = q;
  fit.variant = RuvVariant::Ruv2;
  fit.z2hat = ff.zhat.topRows(rm.k2);
  fit.alphahat = gram.ldlt().solve(z3.transpose() * rm.y3);
  const Eigen::MatrixXd resid = rm.y3 - z3 * fit.alphahat;
  fit.sigmahat = resid.colwise().squaredNorm().transpose() / dof;

  fill_effects(fit, rm, Eigen::VectorXd::Constant(rm.p, dof));
  fit.effect.method_tag = "ruv2-o";
  fit.control_effect.method_tag = "ruv2-o";
  return fit;
}

RuvFit ruv2_old(const ResponseMatrix& y, const Design& d,
                const FactorAnalysis& fa, int q) {
  y.validate();
  d.validate(y.p());
  const int n = y.n();
  const int p = y.p();
  const int dof = n - d.k() - q;
  if (dof <= 0) {
    throw ZeroDofError("estimator requires n - k - q > 0");
  }
  if (d.m() <= q) {
    throw SingularControlError(
        "need more control genes than factors; refusing pseudo-inverse");
  }

  // Remove nuisance covariates by projecting onto an orthonormal basis of
  // the complement of their span; the basis choice does not matter for the
  // partial regression coefficients.
  Eigen::MatrixXd xr;
  Eigen::MatrixXd yr;
  if (d.k1 > 0) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(d.x.leftCols(d.k1));
    const Eigen::MatrixXd q1 = qr.householderQ();
    const Eigen::MatrixXd w = q1.rightCols(n - d.k1);
    xr = w.transpose() * d.x.rightCols(d.k2);
    yr = w.transpose() * y.values;
  } else {
    xr = d.x;
    yr = y.values;
  }
  const FactorFit ff = fa.fit(select_cols(yr, d.controls), q);
  const Eigen::MatrixXd& z = ff.zhat;
  const Eigen::MatrixXd zgram = z.transpose() * z;
  check_conditioning(zgram, "factor cross-product is singular");

  // Partial regression of X given (X, Z): S annihilates the factor span.
  const Eigen::MatrixXd sy = yr - z * zgram.ldlt().solve(z.transpose() * yr);
  const Eigen::MatrixXd sx = xr - z * zgram.ldlt().solve(z.transpose() * xr);
  Eigen::MatrixXd a = xr.transpose() * sx;
  a = 0.5 * (a + a.transpose());
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a,
                                                      Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > 1e12) {
      throw CollinearityError("covariates collinear with estimated factors");
    }
  }
  const Eigen::MatrixXd beta = a.ldlt().solve(xr.transpose() * sy);

  RuvFit fit;
  fit.q = q;
  fit.variant = RuvVariant::Ruv2Old;
  fit.z2hat.resize(d.k2, 0);
  const Eigen::MatrixXd partial = yr - xr * beta;
  fit.alphahat = zgram.ldlt().solve(z.transpose() * partial);
  const Eigen::MatrixXd resid = partial - z * fit.alphahat;
  fit.sigmahat = resid.colwise().squaredNorm().transpose() / dof;

  const Eigen::VectorXd scale =
      a.inverse().diagonal().cwiseSqrt();
  auto build = [&](const std::vector<int>& cols) {
    EffectResult e;
    e.beta2hat = select_cols(beta, cols);
    const int g = static_cast<int>(cols.size());
    e.se.resize(d.k2, g);
    e.dof = Eigen::VectorXd::Constant(g, dof);
    for (int j = 0; j < g; ++j) {
      double s2 = fit.sigmahat[cols[j]];
      if (s2 < kVarianceFloor) {
        s2 = kVarianceFloor;
        e.floored_columns.push_back(j);
      }
      e.se.col(j) = std::sqrt(s2) * scale;
    }
    e.tstat = e.beta2hat.cwiseQuotient(e.se);
    e.method_tag = "ruv2-o";
    return e;
  };
  fit.effect = build(complement_indices(d.controls, p));
  fit.control_effect = build(d.controls);
  return fit;
}

RuvFit ruv3(const RotatedModel& rm, const FactorAnalysis& fa, int q,
            EbvmPlacement ebvm_placement) {
  const int dof = checked_dof(rm, q);
  require_controls_exceed_q(rm, q);

  const FactorFit ff = fa.fit(select_cols(rm.y3, rm.controls), q);
  const Eigen::MatrixXd& z3 = ff.zhat;

  RuvFit fit;
  fit.q = q;
  fit.variant = RuvVariant::Ruv3;

  // Non-control loadings and variances by regression on the factors.
  const std::vector<int> nonc = rm.noncontrols();
  const Eigen::MatrixXd y3_nonc = select_cols(rm.y3, nonc);
  const Eigen::MatrixXd gram = z3.transpose() * z3;
  check_conditioning(gram, "factor cross-product is singular");
  const Eigen::MatrixXd alpha_nonc =
      gram.ldlt().solve(z3.transpose() * y3_nonc);
  const Eigen::MatrixXd resid = y3_nonc - z3 * alpha_nonc;
  const Eigen::VectorXd sigma_nonc =
      resid.colwise().squaredNorm().transpose() / dof;

  fit.alphahat.resize(q, rm.p);
  scatter_cols(fit.alphahat, rm.controls, ff.alphahat);
  scatter_cols(fit.alphahat, nonc, alpha_nonc);
  fit.sigmahat.resize(rm.p);
  scatter_elems(fit.sigmahat, rm.controls, ff.sigmahat);
  scatter_elems(fit.sigmahat, nonc, sigma_nonc);

  Eigen::VectorXd dofs = Eigen::VectorXd::Constant(rm.p, dof);
  if (ebvm_placement == EbvmPlacement::Before) {
    const EbvmResult mod = ebvm(fit.sigmahat, dofs);
    fit.sigmahat = mod.variances;
    dofs = mod.dofs;
  }
  fit.z2hat = solve_z2(select_cols(rm.y2, rm.controls),
                       select_cols(fit.alphahat, rm.controls),
                       select_elems(fit.sigmahat, rm.controls), GlsMode::Gls);
  if (ebvm_placement == EbvmPlacement::After) {
    const EbvmResult mod = ebvm(fit.sigmahat, dofs);
    fit.sigmahat = mod.variances;
    dofs = mod.dofs;
  }
  fill_effects(fit, rm, dofs);
  fit.effect.method_tag = "ruv3-o";
  fit.control_effect.method_tag = "ruv3-o";
  return fit;
}

namespace {

class ConstrainedRuv4Fa final : public FactorAnalysis {
 public:
  ConstrainedRuv4Fa(std::shared_ptr<const FactorAnalysis> base,
                    std::vector<int> controls)
      : base_(std::move(base)), controls_(std::move(controls)) {}

  FactorFit fit(const Eigen::MatrixXd& y, int q) const override {
    const int nprime = static_cast<int>(y.rows());
    const int p = static_cast<int>(y.cols());
    const FactorFit cf = base_->fit(select_cols(y, controls_), q);
    if (nprime <= q) {
      throw ZeroDofError("constrained factor analysis requires n' > q");
    }

    const std::vector<int> nonc = complement_indices(controls_, p);
    const Eigen::MatrixXd gram = cf.zhat.transpose() * cf.zhat;
    check_conditioning(gram, "factor cross-product is singular");
    const Eigen::MatrixXd y_nonc = select_cols(y, nonc);
    const Eigen::MatrixXd alpha_nonc =
        gram.ldlt().solve(cf.zhat.transpose() * y_nonc);
    const Eigen::MatrixXd resid = y_nonc - cf.zhat * alpha_nonc;
    const Eigen::VectorXd sigma_nonc =
        resid.colwise().squaredNorm().transpose() / (nprime - q);

    FactorFit out;
    out.zhat = cf.zhat;
    out.alphahat.resize(q, p);
    scatter_cols(out.alphahat, controls_, cf.alphahat);
    scatter_cols(out.alphahat, nonc, alpha_nonc);
    out.sigmahat.resize(p);
    scatter_elems(out.sigmahat, controls_, cf.sigmahat);
    scatter_elems(out.sigmahat, nonc, sigma_nonc);
    return out;
  }

 private:
  std::shared_ptr<const FactorAnalysis> base_;
  std::vector<int> controls_;
};

class ConstrainedRuv2Fa final : public FactorAnalysis {
 public:
  ConstrainedRuv2Fa(std::shared_ptr<const FactorAnalysis> base, int k2)
      : base_(std::move(base)), k2_(k2) {}

  FactorFit fit(const Eigen::MatrixXd& y, int q) const override {
    const int nprime = static_cast<int>(y.rows()) - k2_;
    if (nprime <= q) {
      throw ZeroDofError("constrained factor analysis requires n' > q");
    }
    const FactorFit cf = base_->fit(y.bottomRows(nprime), q);

    FactorFit out;
    out.zhat.resize(y.rows(), q);
    out.zhat.bottomRows(nprime) = cf.zhat;
    out.zhat.topRows(k2_) =
        solve_z2(y.topRows(k2_), cf.alphahat, cf.sigmahat, GlsMode::Gls);
    out.alphahat = cf.alphahat;
    out.sigmahat = cf.sigmahat;
    return out;
  }

 private:
  std::shared_ptr<const FactorAnalysis> base_;
  int k2_;
};

}  // namespace

std::unique_ptr<FactorAnalysis> constrained_fa_ruv4(
    std::shared_ptr<const FactorAnalysis> base, std::vector<int> controls) {
  return std::make_unique<ConstrainedRuv4Fa>(std::move(base),
                                             std::move(controls));
}

std::unique_ptr<FactorAnalysis> constrained_fa_ruv2(
    std::shared_ptr<const FactorAnalysis> base, int k2) {
  return std::make_unique<ConstrainedRuv2Fa>(std::move(base), k2);
}

}  // namespace ruvstar
