#include "ruvstar/evaluation.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>

#include "ruvstar/rng.hpp"

namespace ruvstar {

double auc(const Eigen::VectorXd& scores, const std::vector<char>& labels) {
  const int n = static_cast<int>(scores.size());
  if (static_cast<int>(labels.size()) != n) {
    throw ShapeError("auc: scores and labels disagree in length");
  }
  long n1 = std::count(labels.begin(), labels.end(), char(1));
  long n0 = n - n1;
  if (n1 == 0 || n0 == 0) {
    throw DegenerateInputError("auc needs both null and non-null genes");
  }

  // Midranks handle ties; AUC = (rank sum of positives - n1(n1+1)/2)/(n1 n0).
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return scores[a] < scores[b]; });
  std::vector<double> rank(n);
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double mid = (i + j) / 2.0 + 1.0;
    for (int k = i; k <= j; ++k) rank[order[k]] = mid;
    i = j + 1;
  }
  double rank_sum = 0.0;
  for (int k = 0; k < n; ++k) {
    if (labels[k]) rank_sum += rank[k];
  }
  return (rank_sum - n1 * (n1 + 1.0) / 2.0) / (static_cast<double>(n1) * n0);
}

double coverage(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                const Eigen::VectorXd& truth) {
  const int n = static_cast<int>(truth.size());
  if (lo.size() != n || hi.size() != n) {
    throw ShapeError("coverage: interval and truth lengths disagree");
  }
  int hit = 0;
  for (int j = 0; j < n; ++j) {
    if (lo[j] <= truth[j] && truth[j] <= hi[j]) ++hit;
  }
  return static_cast<double>(hit) / n;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> t_intervals(
    const Eigen::VectorXd& beta, const Eigen::VectorXd& se,
    const Eigen::VectorXd& dof, double level) {
  const int n = static_cast<int>(beta.size());
  if (se.size() != n || dof.size() != n) {
    throw ShapeError("t_intervals: nonconforming inputs");
  }
  Eigen::VectorXd lo(n), hi(n);
  for (int j = 0; j < n; ++j) {
    boost::math::students_t dist(dof[j]);
    const double half = boost::math::quantile(dist, (1.0 + level) / 2.0) *
                        se[j];
    lo[j] = beta[j] - half;
    hi[j] = beta[j] + half;
  }
  return {lo, hi};
}

double t_pvalue(double tstat, double dof) {
  boost::math::students_t dist(dof);
  return 2.0 * boost::math::cdf(dist, -std::abs(tstat));
}

std::pair<double, double> loss_proportions(const std::vector<double>& covs) {
  if (covs.empty()) {
    throw ShapeError("loss_proportions needs at least one replicate");
  }
  double low = 0.0, high = 0.0;
  for (double c : covs) {
    if (c < 0.90) low += 1.0;
    if (c > 0.975) high += 1.0;
  }
  return {low / covs.size(), high / covs.size()};
}

std::pair<double, double> bootstrap_mean_ci(const std::vector<double>& x,
                                            int reps, std::uint64_t seed,
                                            double level) {
  const int n = static_cast<int>(x.size());
  if (n < 2 || reps < 10) {
    throw ShapeError("bootstrap_mean_ci needs n >= 2 and reps >= 10");
  }
  std::vector<double> means(reps);
  for (int r = 0; r < reps; ++r) {
    Rng rng = derive_rng(seed, static_cast<std::uint64_t>(r));
    std::uniform_int_distribution<int> pick(0, n - 1);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += x[pick(rng)];
    means[r] = s / n;
  }
  std::sort(means.begin(), means.end());
  const double alpha_half = (1.0 - level) / 2.0;
  const int lo_idx = static_cast<int>(std::floor(alpha_half * (reps - 1)));
  const int hi_idx =
      static_cast<int>(std::ceil((1.0 - alpha_half) * (reps - 1)));
  return {means[lo_idx], means[hi_idx]};
}

double ks_uniform_stat(std::vector<double> values) {
  const int n = static_cast<int>(values.size());
  if (n < 1) {
    throw ShapeError("ks_uniform_stat needs at least one value");
  }
  std::sort(values.begin(), values.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = values[i];
    d = std::max(d, (i + 1.0) / n - u);
    d = std::max(d, u - static_cast<double>(i) / n);
  }
  return d;
}

bool ks_uniform_reject(const std::vector<double>& values, double alpha) {
  double c;
  if (alpha == 0.05) {
    c = 1.358;
  } else if (alpha == 0.01) {
    c = 1.628;
  } else {
    throw ShapeError("ks_uniform_reject supports alpha 0.05 or 0.01 only");
  }
  const double n = static_cast<double>(values.size());
  const double d = ks_uniform_stat(values);
  return d * (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) > c;
}

double median_of_sorted_copy(std::vector<double> v) {
  if (v.empty()) {
    throw ShapeError("median of empty vector");
  }
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace ruvstar
