#include "ruvstar/ruvb.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <vector>

#include "ruvstar/factor_analysis.hpp"

namespace ruvstar {

namespace {

constexpr char kDrawMagic[8] = {'R', 'U', 'V', 'B', 'D', 'R', 'A', 'W'};
constexpr std::uint32_t kDrawVersion = 1;
constexpr double kLargeDof = 1e6;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

Eigen::MatrixXd standard_normal(int rows, int cols, Rng& rng) {
  Eigen::MatrixXd g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      g(i, j) = rnorm(rng);
    }
  }
  return g;
}

void check_weights(const PosteriorDraws& d) {
  if (d.weights.size() != d.t) {
    throw ShapeError("draw weights do not match the draw count");
  }
  if ((d.weights.array() < 0.0).any() || !(d.weights.sum() > 0.0)) {
    throw PriorSupportError("prior weights vanish on every retained draw");
  }
}

// Weighted mean and standard deviation per coefficient; variance uses the
// reliability-weight correction so the uniform case reduces to the sample
// standard deviation.
void weighted_moments(const PosteriorDraws& d, Eigen::VectorXd& mean,
                      Eigen::VectorXd& sd) {
  const double wsum = d.weights.sum();
  const double wsq = d.weights.squaredNorm();
  const int cols = static_cast<int>(d.draws.cols());
  mean = (d.weights.transpose() * d.draws).transpose() / wsum;
  sd.resize(cols);
  const double denom = wsum - wsq / wsum;
  for (int c = 0; c < cols; ++c) {
    const Eigen::ArrayXd dev = d.draws.col(c).array() - mean[c];
    const double num = (d.weights.array() * dev.square()).sum();
    sd[c] = denom > 0.0 ? std::sqrt(std::max(0.0, num / denom)) : 0.0;
  }
}

Eigen::MatrixXd unflatten(const Eigen::VectorXd& v, int k2, int g) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), k2, g);
}

}  // namespace

void BfaState::check() const {
  if ((xi.array() <= 0.0).any() || (zeta.array() <= 0.0).any() ||
      !(phi > 0.0) || !xi.allFinite() || !zeta.allFinite() ||
      !l.allFinite() || !f.allFinite()) {
    throw NumericalError("factor-model chain state left its support");
  }
}

void gibbs_step(BfaState& state, Eigen::MatrixXd& y, int k2, int m_observed,
                const BfaHyper& hyper, Rng& rng) {
  const int nprime = static_cast<int>(y.rows());
  const int pprime = static_cast<int>(y.cols());
  const int q = static_cast<int>(state.l.cols());

  // Impute the latent top-right block from its conditional given (L, F, xi).
  for (int i = 0; i < k2; ++i) {
    for (int j = m_observed; j < pprime; ++j) {
      const double mean = state.l.row(i).dot(state.f.col(j));
      y(i, j) = mean + rnorm(rng) / std::sqrt(state.xi[j]);
    }
  }

  // Loadings: rows iid with covariance (F Xi F^T + diag(zeta))^{-1}.
  {
    Eigen::MatrixXd prec = state.f * state.xi.asDiagonal() *
                           state.f.transpose();
    prec.diagonal() += state.zeta;
    const Eigen::MatrixXd cov =
        prec.ldlt().solve(Eigen::MatrixXd::Identity(q, q));
    const Eigen::MatrixXd mean =
        y * state.xi.asDiagonal() * state.f.transpose() * cov;
    const Eigen::LLT<Eigen::MatrixXd> chol(
        0.5 * (cov + cov.transpose()));
    state.l = mean + standard_normal(nprime, q, rng) *
                         Eigen::MatrixXd(chol.matrixL()).transpose();
  }

  // Factors: column j has covariance (1/xi_j) (L^T L + I)^{-1}.
  {
    Eigen::MatrixXd prec = state.l.transpose() * state.l;
    prec.diagonal().array() += 1.0;
    const Eigen::MatrixXd cov =
        prec.ldlt().solve(Eigen::MatrixXd::Identity(q, q));
    const Eigen::MatrixXd mean = cov * state.l.transpose() * y;
    const Eigen::LLT<Eigen::MatrixXd> chol(0.5 * (cov + cov.transpose()));
    state.f = mean + Eigen::MatrixXd(chol.matrixL()) *
                         standard_normal(q, pprime, rng) *
                         state.xi.cwiseSqrt().cwiseInverse().asDiagonal();
  }

  // Column precisions.
  {
    const Eigen::MatrixXd resid = y - state.l * state.f;
    const double shape = (nprime + q + hyper.rho0) / 2.0;
    for (int j = 0; j < pprime; ++j) {
      const double rate = (resid.col(j).squaredNorm() +
                           state.f.col(j).squaredNorm() +
                           hyper.rho0 * state.phi) /
                          2.0;
      state.xi[j] = rgamma_rate(rng, shape, rate);
    }
  }

  // Precision mean.
  state.phi = rgamma_rate(
      rng, (pprime * hyper.rho0 + hyper.alpha0) / 2.0,
      (hyper.alpha0 * hyper.beta0 + hyper.rho0 * state.xi.sum()) / 2.0);

  // Loading-column precisions.
  {
    const double shape = (nprime + hyper.eta0) / 2.0;
    for (int i = 0; i < q; ++i) {
      const double rate =
          (state.l.col(i).squaredNorm() + hyper.eta0 * hyper.tau0) / 2.0;
      state.zeta[i] = rgamma_rate(rng, shape, rate);
    }
  }
  state.check();
}

PosteriorDraws run_ruvb(const RotatedModel& rm, int q, const BfaHyper& hyper,
                        const McmcSettings& mcmc) {
  if (mcmc.iters <= mcmc.burnin || mcmc.thin < 1) {
    throw ShapeError("need iters > burnin and thin >= 1");
  }
  const int nprime = rm.n - rm.k();
  if (nprime - q <= 0) {
    throw InsufficientSamplesError("sampler requires n - k - q > 0");
  }
  const int m = static_cast<int>(rm.controls.size());
  const std::vector<int> nonc = rm.noncontrols();
  const int g = static_cast<int>(nonc.size());
  const int rows = rm.k2 + nprime;

  // Composite matrix with control columns first; the top non-control block
  // is latent and refreshed every sweep.
  Eigen::MatrixXd y3 = Eigen::MatrixXd(nprime, rm.p);
  y3.leftCols(m) = select_cols(rm.y3, rm.controls);
  y3.rightCols(g) = select_cols(rm.y3, nonc);
  const Eigen::MatrixXd y2c = select_cols(rm.y2, rm.controls);
  const Eigen::MatrixXd y2n = select_cols(rm.y2, nonc);

  FaConfig cfg;
  cfg.q = q;
  const FactorFit init = truncated_svd_fa(y3, cfg);

  BfaState state;
  state.l.resize(rows, q);
  state.l.bottomRows(nprime) = init.zhat;
  const Eigen::MatrixXd alpha_c = init.alphahat.leftCols(m);
  state.l.topRows(rm.k2) =
      (alpha_c * alpha_c.transpose())
          .ldlt()
          .solve(alpha_c * y2c.transpose())
          .transpose();
  state.f = init.alphahat;
  state.xi = Eigen::VectorXd::Ones(rm.p);
  state.phi = 1.0;
  state.zeta = Eigen::VectorXd::Ones(q);

  Eigen::MatrixXd y(rows, rm.p);
  y.topLeftCorner(rm.k2, m) = y2c;
  y.topRightCorner(rm.k2, g) = state.l.topRows(rm.k2) * state.f.rightCols(g);
  y.bottomRows(nprime) = y3;

  const int t = (mcmc.iters - mcmc.burnin) / mcmc.thin;
  if (t < 1) {
    throw ShapeError("no draws retained; increase iters");
  }
  PosteriorDraws d;
  d.t = t;
  d.k2 = rm.k2;
  d.g = g;
  d.seed = mcmc.seed;
  d.draws.resize(t, rm.k2 * g);
  d.weights = Eigen::VectorXd::Ones(t);

  Rng rng = make_rng(mcmc.seed);
  int kept = 0;
  for (int s = 1; s <= mcmc.iters; ++s) {
    gibbs_step(state, y, rm.k2, m, hyper, rng);
    if (s > mcmc.burnin && (s - mcmc.burnin) % mcmc.thin == 0 && kept < t) {
      const Eigen::MatrixXd beta = rm.r22.triangularView<Eigen::Upper>().solve(
          y2n - y.topRightCorner(rm.k2, g));
      d.draws.row(kept) =
          Eigen::Map<const Eigen::VectorXd>(beta.data(), beta.size());
      ++kept;
    }
  }
  return d;
}

void apply_prior(PosteriorDraws& d,
                 const std::function<double(const Eigen::VectorXd&)>& g) {
  for (int i = 0; i < d.t; ++i) {
    const double w = g(d.draws.row(i).transpose());
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ShapeError("prior density must be finite and nonnegative");
    }
    d.weights[i] = w;
  }
  if (!(d.weights.sum() > 0.0)) {
    throw PriorSupportError("prior weights vanish on every retained draw");
  }
}

Eigen::MatrixXd posterior_mean(const PosteriorDraws& d) {
  check_weights(d);
  Eigen::VectorXd mean, sd;
  weighted_moments(d, mean, sd);
  return unflatten(mean, d.k2, d.g);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> credible_interval(
    const PosteriorDraws& d, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw ShapeError("interval level must lie in (0, 1)");
  }
  check_weights(d);
  const double alpha_half = (1.0 - level) / 2.0;
  const double wsum = d.weights.sum();
  const int cols = static_cast<int>(d.draws.cols());
  Eigen::MatrixXd lo(d.k2, d.g), hi(d.k2, d.g);
  std::vector<int> order(d.t);
  for (int c = 0; c < cols; ++c) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return d.draws(a, c) < d.draws(b, c);
    });
    // Largest order statistic whose cumulative weight stays below alpha/2.
    double cum = 0.0;
    double lo_v = d.draws(order.front(), c);
    for (int idx = 0; idx < d.t; ++idx) {
      cum += d.weights[order[idx]] / wsum;
      if (cum <= alpha_half) {
        lo_v = d.draws(order[idx], c);
      } else {
        break;
      }
    }
    cum = 0.0;
    double hi_v = d.draws(order.back(), c);
    for (int idx = d.t - 1; idx >= 0; --idx) {
      cum += d.weights[order[idx]] / wsum;
      if (cum <= alpha_half) {
        hi_v = d.draws(order[idx], c);
      } else {
        break;
      }
    }
    lo(c % d.k2, c / d.k2) = lo_v;
    hi(c % d.k2, c / d.k2) = hi_v;
  }
  return {lo, hi};
}

Eigen::MatrixXd lfsr(const PosteriorDraws& d) {
  check_weights(d);
  const double wsum = d.weights.sum();
  Eigen::MatrixXd out(d.k2, d.g);
  for (int c = 0; c < d.k2 * d.g; ++c) {
    double neg = 0.0;
    for (int i = 0; i < d.t; ++i) {
      if (d.draws(i, c) < 0.0) neg += d.weights[i];
    }
    const double p = neg / wsum;
    out(c % d.k2, c / d.k2) = std::min(p, 1.0 - p);
  }
  return out;
}

Eigen::MatrixXd lfsr_normal(const PosteriorDraws& d) {
  check_weights(d);
  Eigen::VectorXd mean, sd;
  weighted_moments(d, mean, sd);
  Eigen::MatrixXd out(d.k2, d.g);
  for (int c = 0; c < d.k2 * d.g; ++c) {
    if (sd[c] > 0.0) {
      out(c % d.k2, c / d.k2) = normal_cdf(-std::abs(mean[c]) / sd[c]);
    } else {
      out(c % d.k2, c / d.k2) = mean[c] == 0.0 ? 0.5 : 0.0;
    }
  }
  return out;
}

EffectResult summarize_effects(const PosteriorDraws& d, RuvbLikelihood mode,
                               int dof_t, double level) {
  if (d.t < 2) {
    throw ShapeError("need at least two retained draws");
  }
  check_weights(d);
  Eigen::VectorXd mean, sd;
  weighted_moments(d, mean, sd);

  EffectResult e;
  e.beta2hat = unflatten(mean, d.k2, d.g);
  e.se.resize(d.k2, d.g);
  for (int c = 0; c < d.k2 * d.g; ++c) {
    double s = sd[c];
    if (s < std::sqrt(kVarianceFloor)) {
      s = std::sqrt(kVarianceFloor);
      e.floored_columns.push_back(c / d.k2);
    }
    e.se(c % d.k2, c / d.k2) = s;
  }
  e.tstat = e.beta2hat.cwiseQuotient(e.se);
  const double dof =
      mode == RuvbLikelihood::T ? static_cast<double>(dof_t) : kLargeDof;
  e.dof = Eigen::VectorXd::Constant(d.g, dof);

  if (mode == RuvbLikelihood::Sample) {
    const auto ci = credible_interval(d, level);
    e.ci_lo = ci.first;
    e.ci_hi = ci.second;
    const Eigen::MatrixXd counted = lfsr(d);
    const Eigen::MatrixXd approx = lfsr_normal(d);
    e.lfsr = counted;
    for (int i = 0; i < e.lfsr.rows(); ++i) {
      for (int j = 0; j < e.lfsr.cols(); ++j) {
        // A zero count estimate understates the sign uncertainty; fall back
        // to the normal tail there.
        if (e.lfsr(i, j) == 0.0) e.lfsr(i, j) = approx(i, j);
      }
    }
  }
  return e;
}

double split_rhat(const Eigen::MatrixXd& chains) {
  const int t = static_cast<int>(chains.rows());
  const int c = static_cast<int>(chains.cols());
  if (t < 4 || c < 1) {
    throw ShapeError("split_rhat needs at least 4 sweeps per chain");
  }
  const int half = t / 2;
  const int nseq = 2 * c;
  Eigen::VectorXd means(nseq), vars(nseq);
  for (int j = 0; j < c; ++j) {
    for (int s = 0; s < 2; ++s) {
      const Eigen::VectorXd seg = chains.col(j).segment(s * half, half);
      const double m = seg.mean();
      means[2 * j + s] = m;
      vars[2 * j + s] = (seg.array() - m).square().sum() / (half - 1);
    }
  }
  const double w = vars.mean();
  const double grand = means.mean();
  const double b =
      half * (means.array() - grand).square().sum() / (nseq - 1);
  if (!(w > 0.0)) return 1.0;
  const double varplus = (half - 1.0) / half * w + b / half;
  return std::sqrt(varplus / w);
}

void write_draws(const std::string& path, const PosteriorDraws& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open draw file for writing");
  out.write(kDrawMagic, sizeof(kDrawMagic));
  const std::uint32_t version = kDrawVersion;
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  const std::int32_t dims[3] = {d.t, d.k2, d.g};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  out.write(reinterpret_cast<const char*>(&d.seed), sizeof(d.seed));
  for (int i = 0; i < d.t; ++i) {
    const Eigen::VectorXd row = d.draws.row(i).transpose();
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(sizeof(double) * row.size()));
  }
  out.write(reinterpret_cast<const char*>(d.weights.data()),
            static_cast<std::streamsize>(sizeof(double) * d.t));
  if (!out) throw std::runtime_error("failed writing draw file");
}

PosteriorDraws read_draws(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open draw file");
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kDrawMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("not a draw file (bad magic)");
  }
  std::uint32_t version = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  if (!in || version != kDrawVersion) {
    throw std::runtime_error("unsupported draw file version");
  }
  std::int32_t dims[3];
  in.read(reinterpret_cast<char*>(dims), sizeof(dims));
  PosteriorDraws d;
  d.t = dims[0];
  d.k2 = dims[1];
  d.g = dims[2];
  if (!in || d.t < 1 || d.k2 < 1 || d.g < 1) {
    throw std::runtime_error("corrupt draw file header");
  }
  in.read(reinterpret_cast<char*>(&d.seed), sizeof(d.seed));
  d.draws.resize(d.t, d.k2 * d.g);
  for (int i = 0; i < d.t; ++i) {
    Eigen::VectorXd row(d.k2 * d.g);
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(sizeof(double) * row.size()));
    d.draws.row(i) = row.transpose();
  }
  d.weights.resize(d.t);
  in.read(reinterpret_cast<char*>(d.weights.data()),
          static_cast<std::streamsize>(sizeof(double) * d.t));
  if (!in) throw std::runtime_error("truncated draw file");
  return d;
}

}  // namespace ruvstar
