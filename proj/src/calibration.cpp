#include "ruvstar/calibration.hpp"

#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <vector>

namespace ruvstar {

namespace {

constexpr double kMadConsistency = 1.4826;
constexpr double kD0Cap = 1e8;

double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  const std::size_t mid = n / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double hi = v[mid];
  if (n % 2 == 1) return hi;
  double lo = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lo + hi);
}

// Inverse of the trigamma function by Newton iteration; trigamma is
// strictly decreasing on (0, inf) so the root is unique.
double trigamma_inverse(double y) {
  if (y <= 0.0) return kD0Cap;
  if (y > 1e7) return 1.0 / std::sqrt(y);
  double x = 0.5 + 1.0 / y;
  for (int it = 0; it < 100; ++it) {
    const double f = boost::math::trigamma(x) - y;
    const double fp = boost::math::polygamma(2, x);
    double step = f / fp;
    double next = x - step;
    if (next <= 0.0) next = x / 2.0;
    if (std::abs(next - x) < 1e-12 * std::max(1.0, std::abs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

}  // namespace

EffectResult control_calibrate(const EffectResult& e,
                               const EffectResult& control_stats,
                               CalibrationReport* report) {
  const int entries = control_stats.k2() * control_stats.genes();
  if (entries < 1) {
    throw ShapeError("control_calibrate requires at least one control");
  }
  if ((control_stats.se.array() <= 0.0).any()) {
    throw ShapeError("control_calibrate requires positive control ses");
  }
  const double mean_sq =
      control_stats.beta2hat.cwiseQuotient(control_stats.se).squaredNorm() /
      entries;
  const double lambda = std::sqrt(mean_sq);
  if (lambda <= 0.0) {
    throw DegenerateCalibrationError(
        "control t statistics are all zero; calibration factor undefined");
  }
  EffectResult out = e;
  out.se *= lambda;
  out.tstat = out.beta2hat.cwiseQuotient(out.se);
  out.method_tag = e.method_tag;
  if (report) {
    report->method = "ctl";
    report->lambda = lambda;
    report->flagged = false;
  }
  return out;
}

EffectResult mad_calibrate(const EffectResult& e, CalibrationReport* report) {
  const int g = e.genes();
  if (g < 2) {
    throw ShapeError("mad_calibrate requires at least two genes");
  }
  EffectResult out = e;
  Eigen::VectorXd centers(e.k2()), scales(e.k2());
  for (int i = 0; i < e.k2(); ++i) {
    std::vector<double> t(g);
    for (int j = 0; j < g; ++j) t[j] = e.tstat(i, j);
    const double med = median_of(t);
    std::vector<double> dev(g);
    for (int j = 0; j < g; ++j) dev[j] = std::abs(t[j] - med);
    const double raw_mad = median_of(dev);
    if (raw_mad <= 0.0) {
      throw DegenerateCalibrationError("zero MAD of t statistics");
    }
    const double scale = kMadConsistency * raw_mad;
    centers[i] = med;
    scales[i] = scale;
    // t' = (t - med) / scale, carried on (beta, se) so t stays beta/se.
    out.beta2hat.row(i) = e.beta2hat.row(i) - med * e.se.row(i);
    out.se.row(i) = scale * e.se.row(i);
  }
  out.tstat = out.beta2hat.cwiseQuotient(out.se);
  if (report) {
    report->method = "mad";
    report->center = centers;
    report->scale = scales;
  }
  return out;
}

EbvmFit ebvm_fit(const Eigen::VectorXd& variances,
                 const Eigen::VectorXd& dofs) {
  const int g = static_cast<int>(variances.size());
  EbvmFit fit;
  if (g < 3) {
    fit.passthrough = true;
    return fit;
  }
  if ((variances.array() <= 0.0).any() || (dofs.array() <= 0.0).any()) {
    throw ShapeError("ebvm requires positive variances and dofs");
  }

  // Zero dispersion: the common value is the prior, pooled with full weight.
  const double vmax = variances.maxCoeff();
  const double vmin = variances.minCoeff();
  if (vmax - vmin <= 1e-12 * std::max(1.0, vmax)) {
    fit.d0 = kD0Cap;
    fit.s02 = variances.mean();
    fit.capped = true;
    return fit;
  }

  // Moments of e_j = log s_j^2 - digamma(d_j/2) + log(d_j/2).
  Eigen::VectorXd e(g);
  double tri_mean = 0.0;
  for (int j = 0; j < g; ++j) {
    const double half = dofs[j] / 2.0;
    e[j] = std::log(variances[j]) - boost::math::digamma(half) +
           std::log(half);
    tri_mean += boost::math::trigamma(half);
  }
  tri_mean /= g;
  const double emean = e.mean();
  const double evar =
      (e.array() - emean).square().sum() / (g - 1);
  const double excess = evar - tri_mean;

  if (excess <= 0.0) {
    fit.d0 = kD0Cap;
    fit.s02 = std::exp(emean);
    fit.capped = true;
    return fit;
  }
  const double half_d0 = trigamma_inverse(excess);
  fit.d0 = std::min(2.0 * half_d0, kD0Cap);
  if (fit.d0 >= kD0Cap) fit.capped = true;
  fit.s02 = std::exp(emean + boost::math::digamma(fit.d0 / 2.0) -
                     std::log(fit.d0 / 2.0));
  if (fit.d0 < 1e-8) {
    fit.passthrough = true;
  }
  return fit;
}

EbvmResult ebvm_moderate(const Eigen::VectorXd& variances,
                         const Eigen::VectorXd& dofs, const EbvmFit& fit) {
  EbvmResult out;
  out.fit = fit;
  if (fit.passthrough) {
    out.variances = variances;
    out.dofs = dofs;
    return out;
  }
  const int g = static_cast<int>(variances.size());
  out.variances.resize(g);
  out.dofs.resize(g);
  for (int j = 0; j < g; ++j) {
    if (fit.capped) {
      // d0 effectively infinite; avoid loss of precision in the blend.
      out.variances[j] = fit.s02;
    } else {
      out.variances[j] =
          (fit.d0 * fit.s02 + dofs[j] * variances[j]) / (fit.d0 + dofs[j]);
    }
    out.dofs[j] = dofs[j] + fit.d0;
  }
  return out;
}

EbvmResult ebvm(const Eigen::VectorXd& variances, const Eigen::VectorXd& dofs) {
  return ebvm_moderate(variances, dofs, ebvm_fit(variances, dofs));
}

double lambda_mle_cate(const Eigen::MatrixXd& y2c, const Eigen::MatrixXd& z2hat,
                       const Eigen::MatrixXd& alphahat_c,
                       const Eigen::VectorXd& sigmahat_c, bool* flagged) {
  const int k2 = static_cast<int>(y2c.rows());
  const int m = static_cast<int>(y2c.cols());
  if (z2hat.rows() != k2 || alphahat_c.cols() != m ||
      z2hat.cols() != alphahat_c.rows() || sigmahat_c.size() != m) {
    throw ShapeError("lambda_mle_cate: nonconforming dimensions");
  }
  if ((sigmahat_c.array() <= 0.0).any()) {
    throw ShapeError("lambda_mle_cate: control variances must be positive");
  }
  const Eigen::MatrixXd resid = y2c - z2hat * alphahat_c;
  const double trace =
      (resid * sigmahat_c.cwiseInverse().asDiagonal() * resid.transpose())
          .trace();
  const double lambda = trace / (static_cast<double>(k2) * m);
  if (flagged) *flagged = lambda < 1e-12;
  return lambda;
}

EffectResult inflate_se(const EffectResult& e, double lambda, bool flagged,
                        CalibrationReport* report) {
  EffectResult out = e;
  if (!flagged) {
    out.se *= std::sqrt(lambda);
    out.tstat = out.beta2hat.cwiseQuotient(out.se);
  }
  if (report) {
    report->method = "lambda-mle";
    report->lambda = lambda;
    report->flagged = flagged;
  }
  return out;
}

}  // namespace ruvstar
