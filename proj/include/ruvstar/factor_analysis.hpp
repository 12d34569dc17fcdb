#ifndef RUVSTAR_FACTOR_ANALYSIS_HPP
#define RUVSTAR_FACTOR_ANALYSIS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <memory>

#include "ruvstar/types.hpp"

namespace ruvstar {

// Rank-q decomposition y ~ zhat * alphahat with positive per-column noise
// variances. Any estimator with this shape plugs into the RUV estimators.
struct FactorFit {
  Eigen::MatrixXd zhat;      // n' x q, rank q
  Eigen::MatrixXd alphahat;  // q x p', rank q
  Eigen::VectorXd sigmahat;  // p', strictly positive variances
};

struct FaConfig {
  int q = 1;
  // Exponent splitting the singular values between zhat and alphahat.
  // Only the value 1 (all of D into alphahat) is supported.
  double svd_exponent = 1.0;
  double variance_floor = 1e-12;
};

class FactorAnalysis {
 public:
  virtual ~FactorAnalysis() = default;
  virtual FactorFit fit(const Eigen::MatrixXd& y, int q) const = 0;
};

// zhat = first q left singular vectors, alphahat = D^(q) V^T, sigmahat from
// the discarded singular directions scaled by 1/(n' - q).
FactorFit truncated_svd_fa(const Eigen::MatrixXd& y, const FaConfig& cfg);

class TruncatedSvdFa final : public FactorAnalysis {
 public:
  explicit TruncatedSvdFa(double variance_floor = 1e-12)
      : variance_floor_(variance_floor) {}
  FactorFit fit(const Eigen::MatrixXd& y, int q) const override {
    FaConfig cfg;
    cfg.q = q;
    cfg.variance_floor = variance_floor_;
    return truncated_svd_fa(y, cfg);
  }

 private:
  double variance_floor_;
};

// Diagnostic for left orthogonal equivariance: the factor column space of
// q_orth^T y must equal q_orth^T applied to the factor column space of y
// (factors are only identified up to a nonsingular mixing matrix), and the
// noise variances must be unchanged.
bool check_equivariance(const FactorAnalysis& fa, const Eigen::MatrixXd& y,
                        int q, const Eigen::MatrixXd& q_orth);

// Permutation-based parallel analysis: the factor count is the number of
// leading singular values of the column-standardized matrix exceeding the
// 95th percentile of the matching singular value under independent
// column-wise permutations.
int estimate_num_factors(const Eigen::MatrixXd& y, int n_perms,
                         std::uint64_t seed);

}  // namespace ruvstar

#endif  // RUVSTAR_FACTOR_ANALYSIS_HPP
