#include "ruvstar/factor_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ruvstar/rng.hpp"

namespace ruvstar {

FactorFit truncated_svd_fa(const Eigen::MatrixXd& y, const FaConfig& cfg) {
  const int n = static_cast<int>(y.rows());
  const int p = static_cast<int>(y.cols());
  const int q = cfg.q;
  if (cfg.svd_exponent != 1.0) {
    throw RankError("only svd_exponent == 1 is supported");
  }
  if (q < 1 || q > std::min(n, p)) {
    throw RankError("truncated_svd_fa: q must satisfy 1 <= q <= min(n, p)");
  }
  if (n <= q) {
    throw ZeroDofError("truncated_svd_fa: n' > q required for variances");
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& d = svd.singularValues();
  if (d(q - 1) <= 1e-10 * d(0)) {
    // Definition of a rank-q factor analysis requires rank-q components;
    // refuse rather than silently reducing q.
    throw RankError("data rank below requested q");
  }

  FactorFit fit;
  fit.zhat = svd.matrixU().leftCols(q);
  fit.alphahat = d.head(q).asDiagonal() * svd.matrixV().leftCols(q).transpose();

  // Column variances from the discarded directions: the residual
  // cross-product is V (D - D^(q))^2 V^T, whose diagonal is the per-column
  // residual sum of squares.
  const int r = static_cast<int>(d.size());
  fit.sigmahat = Eigen::VectorXd::Zero(p);
  for (int i = q; i < r; ++i) {
    fit.sigmahat += (d(i) * d(i)) * svd.matrixV().col(i).cwiseAbs2();
  }
  fit.sigmahat /= static_cast<double>(n - q);
  fit.sigmahat = fit.sigmahat.cwiseMax(cfg.variance_floor);
  return fit;
}

namespace {

// Orthonormal basis of the column space via thin QR.
Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& m) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd thin_q = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  return qr.householderQ() * thin_q;
}

}  // namespace

bool check_equivariance(const FactorAnalysis& fa, const Eigen::MatrixXd& y,
                        int q, const Eigen::MatrixXd& q_orth) {
  const int n = static_cast<int>(y.rows());
  if (q_orth.rows() != n || q_orth.cols() != n) {
    throw ShapeError("check_equivariance: q_orth must be n x n");
  }
  const double orth_err =
      (q_orth.transpose() * q_orth - Eigen::MatrixXd::Identity(n, n)).norm();
  if (orth_err > 1e-10) {
    throw ShapeError("check_equivariance: q_orth is not orthogonal");
  }

  const FactorFit base = fa.fit(y, q);
  const FactorFit rotated = fa.fit(q_orth.transpose() * y, q);

  if ((rotated.sigmahat - base.sigmahat).cwiseAbs().maxCoeff() > 1e-8) {
    return false;
  }

  // Column-space comparison through principal angles: all cosines must be 1.
  const Eigen::MatrixXd b1 = orthonormal_basis(rotated.zhat);
  const Eigen::MatrixXd b2 = orthonormal_basis(q_orth.transpose() * base.zhat);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b1.transpose() * b2);
  const double min_cos = svd.singularValues().minCoeff();
  return min_cos > 1.0 - 1e-8;
}

int estimate_num_factors(const Eigen::MatrixXd& y, int n_perms,
                         std::uint64_t seed) {
  if (n_perms < 19) {
    throw ShapeError("estimate_num_factors: n_perms must be >= 19");
  }
  const int n = static_cast<int>(y.rows());
  const int p = static_cast<int>(y.cols());
  if (n < 2 || p < 1) {
    throw DegenerateInputError("estimate_num_factors: need at least 2 rows");
  }

  // Column standardization; constant columns are rejected.
  Eigen::MatrixXd std_y = y;
  for (int j = 0; j < p; ++j) {
    const double mean = std_y.col(j).mean();
    std_y.col(j).array() -= mean;
    const double sd = std::sqrt(std_y.col(j).squaredNorm() / (n - 1));
    if (sd < 1e-12) {
      throw DegenerateInputError("estimate_num_factors: constant column");
    }
    std_y.col(j) /= sd;
  }

  const int r = std::min(n, p);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(std_y);
  const Eigen::VectorXd observed = svd.singularValues();

  // Permutation nulls; one derived stream per permutation so the result is
  // independent of evaluation order.
  Eigen::MatrixXd null_sv(n_perms, r);
  for (int perm = 0; perm < n_perms; ++perm) {
    Rng rng = derive_rng(seed, static_cast<std::uint64_t>(perm));
    Eigen::MatrixXd shuffled = std_y;
    for (int j = 0; j < p; ++j) {
      for (int i = n - 1; i > 0; --i) {
        std::uniform_int_distribution<int> pick(0, i);
        const int other = pick(rng);
        std::swap(shuffled(i, j), shuffled(other, j));
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> perm_svd(shuffled);
    null_sv.row(perm) = perm_svd.singularValues().transpose();
  }

  const int idx95 =
      static_cast<int>(std::ceil(0.95 * n_perms)) - 1;  // order statistic
  int q = 0;
  for (int kidx = 0; kidx < r; ++kidx) {
    std::vector<double> col(null_sv.col(kidx).data(),
                            null_sv.col(kidx).data() + n_perms);
    std::nth_element(col.begin(), col.begin() + idx95, col.end());
    if (observed(kidx) > col[idx95]) {
      ++q;
    } else {
      break;  // only the leading run counts
    }
  }
  return q;
}

}  // namespace ruvstar
