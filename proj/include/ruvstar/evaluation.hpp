#ifndef RUVSTAR_EVALUATION_HPP
#define RUVSTAR_EVALUATION_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "ruvstar/types.hpp"

namespace ruvstar {

// Tie-corrected rank AUC of `scores` against the 0/1 labels (1 = non-null).
// Tied pairs contribute one half.
double auc(const Eigen::VectorXd& scores, const std::vector<char>& labels);

// Fraction of genes whose true value lies inside [lo, hi].
double coverage(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                const Eigen::VectorXd& truth);

// Central t intervals beta +/- t_{dof,(1+level)/2} * se, per gene.
std::pair<Eigen::VectorXd, Eigen::VectorXd> t_intervals(
    const Eigen::VectorXd& beta, const Eigen::VectorXd& se,
    const Eigen::VectorXd& dof, double level);

// Two-sided p-value of a t statistic.
double t_pvalue(double tstat, double dof);

// Proportions of replicates with coverage below 0.90 and above 0.975.
std::pair<double, double> loss_proportions(const std::vector<double>& covs);

// Percentile bootstrap interval for the mean of `x`.
std::pair<double, double> bootstrap_mean_ci(const std::vector<double>& x,
                                            int reps, std::uint64_t seed,
                                            double level = 0.95);

// One-sample Kolmogorov-Smirnov statistic against Uniform(0, 1).
double ks_uniform_stat(std::vector<double> values);

// KS uniformity test at significance alpha (supported: 0.05, 0.01), using
// the asymptotic critical value with the standard finite-sample correction.
bool ks_uniform_reject(const std::vector<double>& values, double alpha);

double median_of_sorted_copy(std::vector<double> v);

}  // namespace ruvstar

#endif  // RUVSTAR_EVALUATION_HPP
