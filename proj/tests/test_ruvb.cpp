#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "ruvstar/rng.hpp"
#include "ruvstar/ruvb.hpp"

using namespace ruvstar;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rnorm(rng);
  }
  return m;
}

RotatedModel planted_rm(Rng& rng, int n, int p, int m, int q, double noise,
                        Eigen::MatrixXd* beta_out) {
  RotatedModel rm;
  rm.n = n;
  rm.k1 = 1;
  rm.k2 = 1;
  rm.p = p;
  for (int j = 0; j < m; ++j) rm.controls.push_back(j);
  rm.r22 = Eigen::MatrixXd::Constant(1, 1, 2.0);
  const int nprime = n - 2;
  const Eigen::MatrixXd alpha = random_matrix(q, p, rng);
  const Eigen::MatrixXd z3 = random_matrix(nprime, q, rng);
  const Eigen::MatrixXd z2 = random_matrix(1, q, rng);
  Eigen::MatrixXd beta2 = random_matrix(1, p, rng);
  for (int j = 0; j < m; ++j) beta2(0, j) = 0.0;
  rm.y3 = z3 * alpha + noise * random_matrix(nprime, p, rng);
  rm.y2 = rm.r22 * beta2 + z2 * alpha + noise * random_matrix(1, p, rng);
  if (beta_out) *beta_out = beta2;
  return rm;
}

PosteriorDraws manual_draws(const Eigen::MatrixXd& draws, int k2, int g) {
  PosteriorDraws d;
  d.draws = draws;
  d.t = static_cast<int>(draws.rows());
  d.k2 = k2;
  d.g = g;
  d.weights = Eigen::VectorXd::Ones(d.t);
  return d;
}

}  // namespace

TEST_CASE("every gibbs conditional has the correct mean and scale") {
  // One sweep from a fixed start; each component is compared with its
  // analytic conditional given the realized values of its parents within
  // the sweep, as a standardized residual. Means over reps stay within
  // 4 / sqrt(reps) even under full correlation across entries.
  Rng rng = make_rng(201);
  const int rows = 6, cols = 5, q = 2, k2 = 1, m = 3;
  const BfaHyper hyper;

  BfaState start;
  start.l = random_matrix(rows, q, rng);
  start.f = random_matrix(q, cols, rng);
  start.xi = Eigen::VectorXd::NullaryExpr(
      cols, [&](Eigen::Index) { return 0.5 + std::abs(rnorm(rng)); });
  start.phi = 1.3;
  start.zeta = Eigen::VectorXd::NullaryExpr(
      q, [&](Eigen::Index) { return 0.5 + std::abs(rnorm(rng)); });
  const Eigen::MatrixXd y0 = random_matrix(rows, cols, rng);

  const int reps = 4000;
  const double tol = 4.0 / std::sqrt(static_cast<double>(reps));
  double imp_sum = 0.0, l_sum = 0.0, f_sum = 0.0, xi_sum = 0.0;
  double phi_sum = 0.0, zeta_sum = 0.0;
  long imp_n = 0, l_n = 0, f_n = 0, xi_n = 0, zeta_n = 0;

  Rng step_rng = make_rng(909);
  for (int rep = 0; rep < reps; ++rep) {
    BfaState s = start;
    Eigen::MatrixXd y = y0;
    gibbs_step(s, y, k2, m, hyper, step_rng);

    // Imputed block given the start state.
    for (int i = 0; i < k2; ++i) {
      for (int j = m; j < cols; ++j) {
        const double mean = start.l.row(i).dot(start.f.col(j));
        imp_sum += (y(i, j) - mean) * std::sqrt(start.xi[j]);
        ++imp_n;
      }
    }
    // Loadings given the imputed matrix and the start (f, xi, zeta).
    {
      Eigen::MatrixXd prec =
          start.f * start.xi.asDiagonal() * start.f.transpose();
      prec.diagonal() += start.zeta;
      const Eigen::MatrixXd cov =
          prec.ldlt().solve(Eigen::MatrixXd::Identity(q, q));
      const Eigen::MatrixXd mean =
          y * start.xi.asDiagonal() * start.f.transpose() * cov;
      for (int i = 0; i < rows; ++i) {
        for (int r = 0; r < q; ++r) {
          l_sum += (s.l(i, r) - mean(i, r)) / std::sqrt(cov(r, r));
          ++l_n;
        }
      }
    }
    // Factors given the fresh loadings and the start xi.
    {
      Eigen::MatrixXd prec = s.l.transpose() * s.l;
      prec.diagonal().array() += 1.0;
      const Eigen::MatrixXd b =
          prec.ldlt().solve(Eigen::MatrixXd::Identity(q, q));
      const Eigen::MatrixXd mean = b * s.l.transpose() * y;
      for (int r = 0; r < q; ++r) {
        for (int j = 0; j < cols; ++j) {
          const double sd = std::sqrt(b(r, r) / start.xi[j]);
          f_sum += (s.f(r, j) - mean(r, j)) / sd;
          ++f_n;
        }
      }
    }
    // Column precisions given the fresh loadings/factors and the start phi.
    {
      const Eigen::MatrixXd resid = y - s.l * s.f;
      const double shape = (rows + q + hyper.rho0) / 2.0;
      for (int j = 0; j < cols; ++j) {
        const double rate = (resid.col(j).squaredNorm() +
                             s.f.col(j).squaredNorm() +
                             hyper.rho0 * start.phi) /
                            2.0;
        const double mean = shape / rate;
        const double sd = std::sqrt(shape) / rate;
        xi_sum += (s.xi[j] - mean) / sd;
        ++xi_n;
      }
    }
    // Precision mean given the fresh column precisions.
    {
      const double shape = (cols * hyper.rho0 + hyper.alpha0) / 2.0;
      const double rate =
          (hyper.alpha0 * hyper.beta0 + hyper.rho0 * s.xi.sum()) / 2.0;
      phi_sum += (s.phi - shape / rate) / (std::sqrt(shape) / rate);
    }
    // Loading precisions given the fresh loadings.
    {
      const double shape = (rows + hyper.eta0) / 2.0;
      for (int r = 0; r < q; ++r) {
        const double rate =
            (s.l.col(r).squaredNorm() + hyper.eta0 * hyper.tau0) / 2.0;
        zeta_sum += (s.zeta[r] - shape / rate) / (std::sqrt(shape) / rate);
        ++zeta_n;
      }
    }
  }
  CHECK(std::abs(imp_sum / imp_n) < tol);
  CHECK(std::abs(l_sum / l_n) < tol);
  CHECK(std::abs(f_sum / f_n) < tol);
  CHECK(std::abs(xi_sum / xi_n) < tol);
  CHECK(std::abs(phi_sum / reps) < tol);
  CHECK(std::abs(zeta_sum / zeta_n) < tol);
}

TEST_CASE("loadings center at zero when the factors vanish") {
  Rng rng = make_rng(211);
  const int rows = 5, cols = 4, q = 2;
  BfaState start;
  start.l = random_matrix(rows, q, rng);
  start.f = Eigen::MatrixXd::Zero(q, cols);
  start.xi = Eigen::VectorXd::Ones(cols);
  start.phi = 1.0;
  start.zeta = Eigen::VectorXd::Ones(q);
  const Eigen::MatrixXd y0 = random_matrix(rows, cols, rng);

  Rng step_rng = make_rng(212);
  double sum = 0.0;
  const int reps = 2000;
  for (int rep = 0; rep < reps; ++rep) {
    BfaState s = start;
    Eigen::MatrixXd y = y0;
    // Record L right after its update by reusing the same start factors.
    gibbs_step(s, y, 0, cols, BfaHyper{}, step_rng);
    // F was zero during the L update, so E[L] = 0 there.
    sum += s.l.mean();
  }
  CHECK(std::abs(sum / reps) < 5.0 / std::sqrt(static_cast<double>(reps)));
}

TEST_CASE("the sampler is deterministic for a fixed seed") {
  Rng rng = make_rng(213);
  const RotatedModel rm = planted_rm(rng, 14, 20, 10, 1, 0.3, nullptr);
  McmcSettings mcmc;
  mcmc.iters = 300;
  mcmc.burnin = 100;
  mcmc.thin = 2;
  mcmc.seed = 77;
  const PosteriorDraws a = run_ruvb(rm, 1, BfaHyper{}, mcmc);
  const PosteriorDraws b = run_ruvb(rm, 1, BfaHyper{}, mcmc);
  CHECK(a.draws == b.draws);
  CHECK(a.weights == b.weights);
  CHECK((a.weights.array() == 1.0).all());
}

TEST_CASE("posterior means recover planted effects") {
  Rng rng = make_rng(216);
  Eigen::MatrixXd beta;
  const RotatedModel rm = planted_rm(rng, 20, 30, 15, 1, 0.02, &beta);
  McmcSettings mcmc;
  mcmc.iters = 2000;
  mcmc.burnin = 500;
  mcmc.thin = 5;
  mcmc.seed = 6;
  const PosteriorDraws d = run_ruvb(rm, 1, BfaHyper{}, mcmc);
  const Eigen::MatrixXd mean = posterior_mean(d);
  const std::vector<int> nonc = rm.noncontrols();
  for (std::size_t j = 0; j < nonc.size(); ++j) {
    CHECK(std::abs(mean(0, j) - beta(0, nonc[j])) < 0.1);
  }
}

TEST_CASE("permuting noise rows leaves the posterior mean unchanged") {
  // The model is exchangeable in the pure-noise rows, so a row permutation
  // must not move the posterior beyond Monte Carlo noise.
  Rng rng = make_rng(217);
  Eigen::MatrixXd beta;
  RotatedModel rm = planted_rm(rng, 20, 30, 15, 1, 0.05, &beta);
  McmcSettings mcmc;
  mcmc.iters = 2000;
  mcmc.burnin = 500;
  mcmc.thin = 5;
  mcmc.seed = 21;
  const PosteriorDraws a = run_ruvb(rm, 1, BfaHyper{}, mcmc);

  RotatedModel perm = rm;
  perm.y3 = rm.y3.colwise().reverse();
  mcmc.seed = 22;
  const PosteriorDraws b = run_ruvb(perm, 1, BfaHyper{}, mcmc);

  const Eigen::MatrixXd ma = posterior_mean(a);
  const Eigen::MatrixXd mb = posterior_mean(b);
  const EffectResult ea = summarize_effects(a, RuvbLikelihood::Normal, 0);
  for (int j = 0; j < ma.cols(); ++j) {
    CHECK(std::abs(ma(0, j) - mb(0, j)) < 1.0 * std::max(ea.se(0, j), 0.02));
  }
}

TEST_CASE("sign-rate worked example and bounds") {
  Eigen::MatrixXd draws(4, 1);
  draws << -1.0, 2.0, 3.0, 4.0;
  const PosteriorDraws d = manual_draws(draws, 1, 1);
  const Eigen::MatrixXd r = lfsr(d);
  CHECK(r(0, 0) == doctest::Approx(0.25).epsilon(1e-12));

  Rng rng = make_rng(219);
  Eigen::MatrixXd big(200, 6);
  for (int i = 0; i < 200; ++i)
    for (int j = 0; j < 6; ++j) big(i, j) = rnorm(rng) + 0.3 * j;
  PosteriorDraws bd = manual_draws(big, 2, 3);
  for (int i = 0; i < 200; ++i) bd.weights[i] = 0.1 + runif(rng);
  const Eigen::MatrixXd rb = lfsr(bd);
  const Eigen::MatrixXd rn = lfsr_normal(bd);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(rb(i, j) >= 0.0);
      CHECK(rb(i, j) <= 0.5);
      CHECK(rn(i, j) >= 0.0);
      CHECK(rn(i, j) <= 0.5);
    }
  }
}

TEST_CASE("credible intervals follow the cumulative-weight rule") {
  Eigen::MatrixXd draws(100, 1);
  for (int i = 0; i < 100; ++i) draws(i, 0) = i + 1;
  const PosteriorDraws d = manual_draws(draws, 1, 1);
  // alpha/2 = 0.055 sits strictly between cumulative weights, so the rule
  // keeps exactly five draws on each side.
  const auto ci = credible_interval(d, 0.89);
  CHECK(ci.first(0, 0) == doctest::Approx(5.0));
  CHECK(ci.second(0, 0) == doctest::Approx(96.0));

  // Integer weights behave like duplicated draws.
  Eigen::MatrixXd vals(4, 1);
  vals << 1.0, 2.0, 3.0, 4.0;
  PosteriorDraws w = manual_draws(vals, 1, 1);
  w.weights << 2.0, 1.0, 1.0, 2.0;
  Eigen::MatrixXd dup(6, 1);
  dup << 1.0, 1.0, 2.0, 3.0, 4.0, 4.0;
  const PosteriorDraws u = manual_draws(dup, 1, 1);
  const auto cw = credible_interval(w, 0.5);
  const auto cu = credible_interval(u, 0.5);
  CHECK(cw.first(0, 0) == cu.first(0, 0));
  CHECK(cw.second(0, 0) == cu.second(0, 0));
}

TEST_CASE("prior reweighting reproduces a conjugate normal posterior") {
  Rng rng = make_rng(223);
  const int t = 20000;
  Eigen::MatrixXd draws(t, 1);
  for (int i = 0; i < t; ++i) draws(i, 0) = rnorm(rng);
  PosteriorDraws d = manual_draws(draws, 1, 1);
  apply_prior(d, [](const Eigen::VectorXd& b) {
    const double z = (b[0] - 1.0) / 0.5;
    return std::exp(-0.5 * z * z);
  });
  // Likelihood N(0,1) times prior N(1, 0.25): mean 0.8, variance 0.2.
  const Eigen::MatrixXd mean = posterior_mean(d);
  CHECK(mean(0, 0) == doctest::Approx(0.8).epsilon(0.05));
  Eigen::VectorXd m, sd;
  const EffectResult e = summarize_effects(d, RuvbLikelihood::Normal, 0);
  CHECK(e.se(0, 0) == doctest::Approx(std::sqrt(0.2)).epsilon(0.1));
}

TEST_CASE("summary modes") {
  Rng rng = make_rng(227);
  Eigen::MatrixXd draws(400, 2);
  for (int i = 0; i < 400; ++i) {
    draws(i, 0) = 1.0 + rnorm(rng);
    draws(i, 1) = rnorm(rng);
  }
  const PosteriorDraws d = manual_draws(draws, 1, 2);

  const EffectResult en = summarize_effects(d, RuvbLikelihood::Normal, 0);
  CHECK(en.dof[0] == doctest::Approx(1e6));
  const EffectResult et = summarize_effects(d, RuvbLikelihood::T, 9);
  CHECK(et.dof[0] == doctest::Approx(9.0));
  CHECK((en.beta2hat - et.beta2hat).cwiseAbs().maxCoeff() == 0.0);

  const EffectResult es = summarize_effects(d, RuvbLikelihood::Sample, 0, 0.9);
  CHECK(es.ci_lo.size() == 2);
  CHECK(es.lfsr.size() == 2);
  CHECK(es.ci_lo(0, 0) < es.beta2hat(0, 0));
  CHECK(es.ci_hi(0, 0) > es.beta2hat(0, 0));
  CHECK(es.lfsr(0, 1) > 0.3);  // centered draws: maximal sign uncertainty

  // Constant draws floor the scale instead of emitting a zero se.
  const PosteriorDraws c = manual_draws(Eigen::MatrixXd::Ones(5, 1), 1, 1);
  const EffectResult ec = summarize_effects(c, RuvbLikelihood::Normal, 0);
  CHECK(ec.se(0, 0) == doctest::Approx(1e-6));
  CHECK(ec.floored_columns.size() == 1);
}

TEST_CASE("the chain state stays in its support over a long soak") {
  Rng rng = make_rng(229);
  const int rows = 8, cols = 6, q = 2;
  BfaState s;
  s.l = random_matrix(rows, q, rng);
  s.f = random_matrix(q, cols, rng);
  s.xi = Eigen::VectorXd::Ones(cols);
  s.phi = 1.0;
  s.zeta = Eigen::VectorXd::Ones(q);
  Eigen::MatrixXd y = random_matrix(rows, cols, rng);
  Rng step_rng = make_rng(230);
  for (int it = 0; it < 2000; ++it) {
    gibbs_step(s, y, 1, 4, BfaHyper{}, step_rng);
  }
  CHECK(s.xi.minCoeff() > 0.0);
  CHECK(s.phi > 0.0);
}

TEST_CASE("split potential scale reduction") {
  Rng rng = make_rng(231);
  Eigen::MatrixXd iid(400, 3);
  for (int i = 0; i < 400; ++i)
    for (int j = 0; j < 3; ++j) iid(i, j) = rnorm(rng);
  CHECK(split_rhat(iid) < 1.1);

  Eigen::MatrixXd trend(400, 1);
  for (int i = 0; i < 400; ++i) trend(i, 0) = (i < 200 ? 0.0 : 5.0) + rnorm(rng);
  CHECK(split_rhat(trend) > 1.5);

  CHECK_THROWS_AS(split_rhat(Eigen::MatrixXd::Zero(3, 1)), ShapeError);
}

TEST_CASE("draw files round-trip bit for bit") {
  Rng rng = make_rng(233);
  Eigen::MatrixXd draws(7, 6);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 6; ++j) draws(i, j) = rnorm(rng);
  PosteriorDraws d = manual_draws(draws, 2, 3);
  d.seed = 123456789ULL;
  d.weights[3] = 0.25;

  const std::string path = "test_draws.bin";
  write_draws(path, d);
  const PosteriorDraws r = read_draws(path);
  CHECK(r.t == d.t);
  CHECK(r.k2 == d.k2);
  CHECK(r.g == d.g);
  CHECK(r.seed == d.seed);
  CHECK(r.draws == d.draws);
  CHECK(r.weights == d.weights);

  std::ofstream bad(path, std::ios::binary);
  bad << "NOTADRAW00000000";
  bad.close();
  CHECK_THROWS_AS(read_draws(path), std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("sampler guards") {
  Rng rng = make_rng(237);
  const RotatedModel rm = planted_rm(rng, 10, 12, 6, 1, 0.3, nullptr);
  McmcSettings bad;
  bad.iters = 100;
  bad.burnin = 100;
  CHECK_THROWS_AS(run_ruvb(rm, 1, BfaHyper{}, bad), ShapeError);
  McmcSettings ok;
  ok.iters = 50;
  ok.burnin = 10;
  ok.thin = 1;
  CHECK_THROWS_AS(run_ruvb(rm, 8, BfaHyper{}, ok), InsufficientSamplesError);

  Eigen::MatrixXd draws(3, 1);
  draws << -1.0, 0.0, 1.0;
  PosteriorDraws d = manual_draws(draws, 1, 1);
  CHECK_THROWS_AS(apply_prior(d, [](const Eigen::VectorXd&) { return -1.0; }),
                  ShapeError);
  CHECK_THROWS_AS(apply_prior(d, [](const Eigen::VectorXd&) { return 0.0; }),
                  PriorSupportError);
}
