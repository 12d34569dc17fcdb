#ifndef RUVSTAR_RUVB_HPP
#define RUVSTAR_RUVB_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "ruvstar/model_core.hpp"
#include "ruvstar/rng.hpp"
#include "ruvstar/types.hpp"

namespace ruvstar {

// Hyperparameters of the conjugate Bayesian factor model. Small prior
// sample sizes keep the prior weakly informative.
struct BfaHyper {
  double rho0 = 0.1;   // prior dof for the column precisions
  double alpha0 = 0.1; // prior dof for the precision mean
  double beta0 = 1.0;  // prior scale for the precision mean
  double eta0 = 1.0;   // prior dof for the loading-column precisions
  double tau0 = 1.0;   // prior scale for the loading-column precisions
};

// Current state of one Gibbs chain for Y = L F + E, E columns N(0, 1/xi_j),
// L columns N(0, 1/zeta_i), F columns N(0, (1/xi_j) I).
struct BfaState {
  Eigen::MatrixXd l;    // n' x q
  Eigen::MatrixXd f;    // q x p'
  Eigen::VectorXd xi;   // p' column precisions
  double phi = 1.0;     // precision mean
  Eigen::VectorXd zeta; // q loading precisions

  void check() const;  // positivity guards
};

struct McmcSettings {
  int iters = 12500;
  int burnin = 2500;
  int thin = 10;
  std::uint64_t seed = 0;
};

// Retained draws of the interest-block effects. Each draw is a k2 x g
// matrix flattened column by column into one row of `draws`.
struct PosteriorDraws {
  Eigen::MatrixXd draws;    // t x (k2 * g)
  Eigen::VectorXd weights;  // t, positive
  int t = 0;
  int k2 = 0;
  int g = 0;
  std::uint64_t seed = 0;

  double at(int draw, int i, int j) const { return draws(draw, j * k2 + i); }
};

// One full sweep: impute the missing top-right block of y (rows < k2,
// columns >= m_observed) from its conditional, then redraw L, F, xi, phi,
// zeta from their conditionals.
void gibbs_step(BfaState& state, Eigen::MatrixXd& y, int k2, int m_observed,
                const BfaHyper& hyper, Rng& rng);

// Runs the chain on the composite matrix [[Y2C, missing], [Y3C, Y3nonC]]
// and converts each retained imputation into an effect draw through
// R22^{-1}(Y2nonC - imputed). Deterministic for a fixed seed.
PosteriorDraws run_ruvb(const RotatedModel& rm, int q,
                        const BfaHyper& hyper = BfaHyper{},
                        const McmcSettings& mcmc = McmcSettings{});

// Reweights the uniform-prior draws by a pointwise prior density over the
// flattened effect vector. Throws PriorSupportError when every weight is 0.
void apply_prior(PosteriorDraws& d,
                 const std::function<double(const Eigen::VectorXd&)>& g);

Eigen::MatrixXd posterior_mean(const PosteriorDraws& d);

// Weighted order-statistic interval: the lower endpoint is the largest draw
// with cumulative normalized weight at most (1-level)/2, mirrored above.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> credible_interval(
    const PosteriorDraws& d, double level);

// min(P(beta < 0), 1 - P(beta < 0)) under the weighted draw distribution.
Eigen::MatrixXd lfsr(const PosteriorDraws& d);

// Normal approximation Phi(-|mean|/sd) from the weighted moments; used when
// the count-based estimate is exactly zero.
Eigen::MatrixXd lfsr_normal(const PosteriorDraws& d);

enum class RuvbLikelihood { Sample, Normal, T };

// Draw summaries as an EffectResult: center and scale from the weighted
// moments, dof per likelihood mode; sample mode adds quantile intervals and
// lfsr values. dof_t is used by the T mode (n - k - q).
EffectResult summarize_effects(const PosteriorDraws& d, RuvbLikelihood mode,
                               int dof_t, double level = 0.95);

// Split-half potential scale reduction for one scalar series per column of
// `chains` (rows are sweeps). Values near 1 indicate mixing.
double split_rhat(const Eigen::MatrixXd& chains);

// Versioned binary serialization of draws.
void write_draws(const std::string& path, const PosteriorDraws& d);
PosteriorDraws read_draws(const std::string& path);

}  // namespace ruvstar

#endif  // RUVSTAR_RUVB_HPP
