#include "ruvstar/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ruvstar/rng.hpp"

namespace ruvstar {

namespace {

const double kMedianLog2Mean = std::log2(100.0);

int rbinom(Rng& rng, int trials, double prob) {
  if (trials == 0 || prob <= 0.0) return 0;
  if (prob >= 1.0) return trials;
  std::binomial_distribution<int> dist(trials, prob);
  return dist(rng);
}

}  // namespace

CountMatrix generate_null_counts(int n, int p, int q_latent,
                                 std::uint64_t seed, double loading_sd) {
  if (n < 2 || p < 2 || q_latent < 0) {
    throw ShapeError("generate_null_counts: need n, p >= 2 and q_latent >= 0");
  }
  Rng mu_rng = derive_rng(seed, 0);
  Rng z_rng = derive_rng(seed, 1);
  Rng a_rng = derive_rng(seed, 2);
  Rng count_rng = derive_rng(seed, 3);

  Eigen::VectorXd mu(p);
  for (int j = 0; j < p; ++j) mu[j] = kMedianLog2Mean + rnorm(mu_rng);

  Eigen::MatrixXd log2_lambda = mu.transpose().replicate(n, 1);
  if (q_latent > 0) {
    Eigen::MatrixXd z(n, q_latent);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < q_latent; ++k) z(i, k) = rnorm(z_rng);
    }
    Eigen::MatrixXd a(q_latent, p);
    for (int k = 0; k < q_latent; ++k) {
      for (int j = 0; j < p; ++j) a(k, j) = loading_sd * rnorm(a_rng);
    }
    log2_lambda += z * a;
  }

  CountMatrix out;
  out.counts.resize(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) {
      const double lambda = std::exp2(log2_lambda(i, j));
      std::poisson_distribution<int> pois(lambda);
      out.counts(i, j) = pois(count_rng);
    }
  }
  return out;
}

std::pair<CountMatrix, SimTruth> thin_signal(const CountMatrix& z,
                                             const SignalSpec& spec,
                                             const Eigen::VectorXi& group,
                                             std::uint64_t seed) {
  const int n = z.n();
  const int p = z.p();
  if (spec.pi0 < 0.0 || spec.pi0 > 1.0 || spec.effect_sd <= 0.0) {
    throw ShapeError("thin_signal: pi0 in [0,1], effect_sd > 0 required");
  }
  if (static_cast<int>(group.size()) != n) {
    throw ShapeError("thin_signal: group length must equal n");
  }
  if (n % 2 != 0 || group.sum() != n / 2 ||
      group.minCoeff() < 0 || group.maxCoeff() > 1) {
    throw ShapeError("thin_signal: group must be a balanced 0/1 assignment");
  }

  const int n_nonnull = static_cast<int>(std::lround((1.0 - spec.pi0) * p));
  SimTruth truth;
  truth.group = group;
  truth.effects = Eigen::VectorXd::Zero(p);

  Rng pick_rng = derive_rng(seed, 0);
  std::vector<int> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), pick_rng);
  truth.nonnull.assign(perm.begin(), perm.begin() + n_nonnull);
  std::sort(truth.nonnull.begin(), truth.nonnull.end());

  Rng eff_rng = derive_rng(seed, 1);
  for (int j : truth.nonnull) {
    double a = 0.0;
    while (a == 0.0) a = spec.effect_sd * rnorm(eff_rng);
    truth.effects[j] = a;
  }

  Rng thin_rng = derive_rng(seed, 2);
  CountMatrix w;
  w.counts = z.counts;
  for (int j : truth.nonnull) {
    const double a = truth.effects[j];
    for (int i = 0; i < n; ++i) {
      if (a < 0.0 && group[i] == 1) {
        w.counts(i, j) = rbinom(thin_rng, z.counts(i, j), std::exp2(a));
      } else if (a > 0.0 && group[i] == 0) {
        w.counts(i, j) = rbinom(thin_rng, z.counts(i, j), std::exp2(-a));
      }
    }
  }
  return {std::move(w), std::move(truth)};
}

SimulatedDataset make_dataset(int n, int p, int q_latent,
                              const SignalSpec& spec, int m_controls,
                              std::uint64_t seed) {
  if (m_controls < 1) {
    throw ShapeError("make_dataset: need at least one control gene");
  }
  if (n % 2 != 0) {
    throw ShapeError("make_dataset: balanced design requires even n");
  }
  const CountMatrix z =
      generate_null_counts(n, p, q_latent, mix64(seed) ^ 0x1ULL);

  Eigen::VectorXi group(n);
  for (int i = 0; i < n; ++i) group[i] = i < n / 2 ? 0 : 1;
  {
    Rng g_rng = derive_rng(seed, 100);
    std::shuffle(group.data(), group.data() + n, g_rng);
  }

  auto [w, truth] = thin_signal(z, spec, group, mix64(seed) ^ 0x2ULL);

  SimulatedDataset ds;
  ds.counts = w;
  ds.truth = std::move(truth);
  ds.y.values =
      ((w.counts.cast<double>().array() + 1.0).log() / std::log(2.0)).matrix();

  std::vector<int> nulls;
  nulls.reserve(p);
  {
    std::vector<char> is_nonnull(p, 0);
    for (int j : ds.truth.nonnull) is_nonnull[j] = 1;
    for (int j = 0; j < p; ++j) {
      if (!is_nonnull[j]) nulls.push_back(j);
    }
  }
  if (m_controls > static_cast<int>(nulls.size())) {
    throw ShapeError("make_dataset: more controls requested than null genes");
  }
  Rng c_rng = derive_rng(seed, 101);
  std::shuffle(nulls.begin(), nulls.end(), c_rng);
  std::vector<int> controls(nulls.begin(), nulls.begin() + m_controls);
  std::sort(controls.begin(), controls.end());

  ds.design.x.resize(n, 2);
  ds.design.x.col(0).setOnes();
  ds.design.x.col(1) = group.cast<double>();
  ds.design.k1 = 1;
  ds.design.k2 = 1;
  ds.design.controls = std::move(controls);
  return ds;
}

}  // namespace ruvstar
