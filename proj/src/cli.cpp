#include "ruvstar/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "ruvstar/evaluation.hpp"
#include "ruvstar/pipeline.hpp"
#include "ruvstar/rng.hpp"
#include "ruvstar/simulation.hpp"
#include "ruvstar/tsv.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ruvstar {

namespace {

int parse_q(const std::string& s) {
  if (s == "auto") return -1;
  try {
    std::size_t used = 0;
    const int q = std::stoi(s, &used);
    if (used != s.size() || q < 1) throw std::invalid_argument("q");
    return q;
  } catch (const std::exception&) {
    throw InputError("--q must be a positive integer or 'auto'");
  }
}

int worker_count() {
  const char* env = std::getenv("RUVSTAR_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n >= 1 ? n : 1;
}

std::vector<int> map_gene_ids(const std::vector<std::string>& wanted,
                              const std::vector<std::string>& all) {
  std::map<std::string, int> index;
  for (std::size_t j = 0; j < all.size(); ++j) index[all[j]] = j;
  std::vector<int> out;
  for (const auto& id : wanted) {
    const auto it = index.find(id);
    if (it == index.end()) throw InputError("unknown gene id: " + id);
    out.push_back(it->second);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.size() != wanted.size()) {
    throw InputError("duplicate gene ids in control list");
  }
  return out;
}

// Effects table rows for the fitted non-control genes. One row per
// (gene, interest covariate).
void write_effects(const std::string& path, const FitOutput& fit,
                   const std::vector<std::string>& gene_names, double level,
                   std::uint64_t seed) {
  const EffectResult& e = fit.effect;
  const bool has_ci = e.ci_lo.size() > 0;
  const bool has_lfsr = e.lfsr.size() > 0;

  std::ofstream out(path);
  if (!out) throw InputError("cannot open " + path + " for writing");
  out << "# method=" << e.method_tag << '\n';
  out << "# q=" << fit.q_used << '\n';
  out << "# seed=" << seed << '\n';
  out << "gene\tcovariate\tbeta\tse\tt\tdof\tp\tci_lo\tci_hi\tlfsr\n";
  for (int j = 0; j < e.genes(); ++j) {
    for (int i = 0; i < e.k2(); ++i) {
      const double beta = e.beta2hat(i, j);
      const double se = e.se(i, j);
      const double t = e.tstat(i, j);
      const double dof = e.dof[j];
      double lo, hi;
      if (has_ci) {
        lo = e.ci_lo(i, j);
        hi = e.ci_hi(i, j);
      } else {
        Eigen::VectorXd b(1), s(1), d(1);
        b << beta;
        s << se;
        d << dof;
        const auto ci = t_intervals(b, s, d, level);
        lo = ci.first[0];
        hi = ci.second[0];
      }
      const double lfsr_val =
          has_lfsr ? e.lfsr(i, j) : std::numeric_limits<double>::quiet_NaN();
      out << gene_names[fit.gene_cols[j]] << '\t' << i << '\t'
          << fmt_double(beta) << '\t' << fmt_double(se) << '\t'
          << fmt_double(t) << '\t' << fmt_double(dof) << '\t'
          << fmt_double(t_pvalue(t, dof)) << '\t' << fmt_double(lo) << '\t'
          << fmt_double(hi) << '\t' << fmt_double(lfsr_val) << '\n';
    }
  }
  if (!out) throw InputError("failed writing " + path);
}

struct FitArgs {
  std::string y_path, x_path, controls_path, method, q = "auto", out_path;
  std::string draws_out, calibration_out;
  int k1 = -1;
  std::uint64_t seed = 0;
  double level = 0.95;
  McmcSettings mcmc;
};

void cmd_fit(const FitArgs& a) {
  const Table yt = read_table(a.y_path);
  const Table xt = read_table(a.x_path);
  if (yt.row_ids.size() != xt.row_ids.size()) {
    throw InputError("response and design have different sample counts");
  }

  ResponseMatrix y{yt.values};
  Design d;
  d.x = xt.values;
  const int k = static_cast<int>(d.x.cols());
  d.k1 = a.k1 >= 0 ? a.k1 : k - 1;
  d.k2 = k - d.k1;
  if (d.k1 < 0 || d.k2 < 1) throw InputError("invalid --k1 for this design");
  d.controls = map_gene_ids(read_id_list(a.controls_path), yt.col_names);

  FitOptions opt;
  opt.variant = parse_variant(a.method);
  opt.q = parse_q(a.q);
  opt.seed = a.seed;
  opt.mcmc = a.mcmc;
  opt.level = a.level;
  const FitOutput fit = run_fit(y, d, opt);

  write_effects(a.out_path, fit, yt.col_names, a.level, a.seed);
  if (!a.draws_out.empty()) {
    if (!fit.has_draws) {
      throw InputError("--draws-out is only valid for the sampler methods");
    }
    write_draws(a.draws_out, fit.draws);
  }
  if (!a.calibration_out.empty() && fit.has_calibration) {
    std::ofstream cal(a.calibration_out);
    if (!cal) throw InputError("cannot open " + a.calibration_out);
    cal << "key\tvalue\n";
    cal << "method\t" << fit.calibration.method << '\n';
    cal << "lambda\t" << fmt_double(fit.calibration.lambda) << '\n';
    if (fit.calibration.center.size() > 0) {
      cal << "center\t" << fmt_double(fit.calibration.center[0]) << '\n';
      cal << "scale\t" << fmt_double(fit.calibration.scale[0]) << '\n';
    }
    cal << "flagged\t" << (fit.calibration.flagged ? 1 : 0) << '\n';
  }
}

struct SimArgs {
  int n = 20, p = 500, q_latent = 3, m_controls = 50;
  double pi0 = 0.5, effect_sd = 0.8;
  std::uint64_t seed = 0;
  std::string prefix;
};

void cmd_simulate(const SimArgs& a) {
  const SimulatedDataset ds =
      make_dataset(a.n, a.p, a.q_latent, SignalSpec{a.pi0, a.effect_sd},
                   a.m_controls, a.seed);

  std::vector<std::string> genes(a.p), samples(a.n);
  for (int j = 0; j < a.p; ++j) genes[j] = "g" + std::to_string(j + 1);
  for (int i = 0; i < a.n; ++i) samples[i] = "s" + std::to_string(i + 1);

  Table yt{"sample", genes, samples, ds.y.values};
  write_table(a.prefix + ".y.tsv", yt);

  Table xt{"sample", {"intercept", "group"}, samples, ds.design.x};
  write_table(a.prefix + ".x.tsv", xt);

  std::vector<std::string> control_ids;
  for (int j : ds.design.controls) control_ids.push_back(genes[j]);
  write_id_list(a.prefix + ".controls.txt", control_ids);

  std::vector<char> is_control(a.p, 0);
  for (int j : ds.design.controls) is_control[j] = 1;
  Eigen::MatrixXd truth(a.p, 3);
  for (int j = 0; j < a.p; ++j) {
    truth(j, 0) = ds.truth.effects[j];
    truth(j, 1) = ds.truth.effects[j] != 0.0 ? 1.0 : 0.0;
    truth(j, 2) = is_control[j];
  }
  Table tt{"gene", {"effect", "nonnull", "control"}, genes, truth};
  write_table(a.prefix + ".truth.tsv", tt);
}

struct EvalArgs {
  std::string effects_path, truth_path, out_path;
  int covariate = 0;
};

void cmd_evaluate(const EvalArgs& a) {
  const Table et = read_table(a.effects_path);
  const auto meta = read_meta(a.effects_path);
  std::string method = "unknown";
  for (const auto& [k, v] : meta) {
    if (k == "method") method = v;
  }
  const Table tt = read_table(a.truth_path);

  auto col = [&](const Table& t, const std::string& name) {
    for (std::size_t j = 0; j < t.col_names.size(); ++j) {
      if (t.col_names[j] == name) return static_cast<int>(j);
    }
    throw InputError("missing column " + name);
  };
  const int c_cov = col(et, "covariate");
  const int c_t = col(et, "t");
  const int c_lo = col(et, "ci_lo");
  const int c_hi = col(et, "ci_hi");
  const int c_lfsr = col(et, "lfsr");
  const int t_eff = col(tt, "effect");
  const int t_nonnull = col(tt, "nonnull");

  std::map<std::string, int> truth_row;
  for (std::size_t i = 0; i < tt.row_ids.size(); ++i) {
    truth_row[tt.row_ids[i]] = static_cast<int>(i);
  }

  std::vector<double> score_v, lo_v, hi_v, truth_v;
  std::vector<char> labels;
  bool lfsr_complete = true;
  for (Eigen::Index i = 0; i < et.values.rows(); ++i) {
    if (static_cast<int>(et.values(i, c_cov)) != a.covariate) continue;
    const auto it = truth_row.find(et.row_ids[i]);
    if (it == truth_row.end()) {
      throw InputError("gene missing from truth table: " + et.row_ids[i]);
    }
    if (std::isnan(et.values(i, c_lfsr))) lfsr_complete = false;
    score_v.push_back(et.values(i, c_t));
    lo_v.push_back(et.values(i, c_lo));
    hi_v.push_back(et.values(i, c_hi));
    truth_v.push_back(tt.values(it->second, t_eff));
    labels.push_back(tt.values(it->second, t_nonnull) != 0.0 ? 1 : 0);
  }
  if (score_v.empty()) throw InputError("no rows for requested covariate");

  const int ng = static_cast<int>(score_v.size());
  Eigen::VectorXd scores(ng), lo(ng), hi(ng), truth(ng);
  for (int i = 0; i < ng; ++i) {
    lo[i] = lo_v[i];
    hi[i] = hi_v[i];
    truth[i] = truth_v[i];
    scores[i] = std::abs(score_v[i]);
  }
  if (lfsr_complete) {
    // Sample-mode fits rank by sign confidence instead of |t|.
    const Table& t2 = et;
    int idx = 0;
    for (Eigen::Index i = 0; i < t2.values.rows(); ++i) {
      if (static_cast<int>(t2.values(i, c_cov)) != a.covariate) continue;
      scores[idx++] = -t2.values(i, c_lfsr);
    }
  }

  const double auc_val = auc(scores, labels);
  const double cov_val = coverage(lo, hi, truth);

  std::ofstream out(a.out_path);
  if (!out) throw InputError("cannot open " + a.out_path + " for writing");
  out << "method\tauc\tcoverage\tn_genes\n";
  out << method << '\t' << fmt_double(auc_val) << '\t' << fmt_double(cov_val)
      << '\t' << ng << '\n';
}

struct BenchArgs {
  std::string out_dir;
  std::vector<int> n_list = {10, 20};
  std::vector<double> pi0_list = {0.5};
  int p = 300, m_controls = 30, q_latent = 3, reps = 5;
  std::string q = "auto";
  double effect_sd = 0.8;
  std::vector<std::string> methods = {"ols-l", "ruv2-l", "ruv3-l", "cate-l",
                                      "ruvb-nn"};
  std::uint64_t seed = 0;
  McmcSettings mcmc{2000, 500, 3, 0};
  int max_tasks = -1;
  double level = 0.95;
};

json bench_manifest(const BenchArgs& a) {
  json j;
  j["n_list"] = a.n_list;
  j["pi0_list"] = a.pi0_list;
  j["p"] = a.p;
  j["m_controls"] = a.m_controls;
  j["q_latent"] = a.q_latent;
  j["reps"] = a.reps;
  j["q"] = a.q;
  j["effect_sd"] = a.effect_sd;
  j["methods"] = a.methods;
  j["seed"] = a.seed;
  j["mcmc"] = {{"iters", a.mcmc.iters},
               {"burnin", a.mcmc.burnin},
               {"thin", a.mcmc.thin}};
  return j;
}

struct BenchTask {
  int scenario = 0;  // index into the n x pi0 cross product
  int n = 0;
  double pi0 = 0.0;
  int rep = 0;
};

std::string bench_task_block(const BenchArgs& a, const BenchTask& task) {
  const std::uint64_t ds_seed =
      mix64(mix64(a.seed) ^
            mix64(static_cast<std::uint64_t>(task.scenario) * 1000003ULL +
                  task.rep));
  const SimulatedDataset ds =
      make_dataset(task.n, a.p, a.q_latent, SignalSpec{task.pi0, a.effect_sd},
                   a.m_controls, ds_seed);

  std::vector<char> labels;
  Eigen::VectorXd truth(a.p - a.m_controls);
  {
    std::vector<char> is_control(a.p, 0);
    for (int j : ds.design.controls) is_control[j] = 1;
    int idx = 0;
    for (int j = 0; j < a.p; ++j) {
      if (is_control[j]) continue;
      truth[idx++] = ds.truth.effects[j];
      labels.push_back(ds.truth.effects[j] != 0.0 ? 1 : 0);
    }
  }

  std::ostringstream block;
  for (std::size_t mi = 0; mi < a.methods.size(); ++mi) {
    FitOptions opt;
    opt.variant = parse_variant(a.methods[mi]);
    opt.q = parse_q(a.q);
    opt.seed = mix64(ds_seed ^ mix64(mi + 1));
    opt.mcmc = a.mcmc;
    opt.level = a.level;
    const FitOutput fit = run_fit(ds.y, ds.design, opt);
    const EffectResult& e = fit.effect;

    const int ng = e.genes();
    Eigen::VectorXd scores(ng);
    for (int j = 0; j < ng; ++j) {
      scores[j] = e.lfsr.size() > 0 ? -e.lfsr(0, j) : std::abs(e.tstat(0, j));
    }
    double auc_val = std::numeric_limits<double>::quiet_NaN();
    const bool any_nonnull =
        std::count(labels.begin(), labels.end(), char(1)) > 0;
    if (any_nonnull) auc_val = auc(scores, labels);

    Eigen::VectorXd lo(ng), hi(ng);
    if (e.ci_lo.size() > 0) {
      lo = e.ci_lo.row(0).transpose();
      hi = e.ci_hi.row(0).transpose();
    } else {
      const auto ci = t_intervals(e.beta2hat.row(0).transpose(),
                                  e.se.row(0).transpose(), e.dof, a.level);
      lo = ci.first;
      hi = ci.second;
    }
    const double cov_val = coverage(lo, hi, truth);

    block << task.n << '\t' << fmt_double(task.pi0) << '\t' << a.p << '\t'
          << a.m_controls << '\t' << a.q_latent << '\t' << task.rep << '\t'
          << a.methods[mi] << '\t' << fmt_double(auc_val) << '\t'
          << fmt_double(cov_val) << '\n';
  }
  return block.str();
}

const char* kBenchHeader =
    "n\tpi0\tp\tm\tq_latent\trep\tmethod\tauc\tcoverage\n";

void cmd_bench(const BenchArgs& a) {
  fs::create_directories(a.out_dir);
  const fs::path manifest_path = fs::path(a.out_dir) / "manifest.json";
  const fs::path rows_path = fs::path(a.out_dir) / "bench_rows.tsv";
  const fs::path results_path = fs::path(a.out_dir) / "bench_results.tsv";

  const json manifest = bench_manifest(a);
  if (fs::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    json existing;
    in >> existing;
    if (existing != manifest) {
      throw InputError("bench directory was created with a different config");
    }
  } else {
    std::ofstream out(manifest_path);
    out << manifest.dump(2) << '\n';
  }

  // Task list in deterministic order.
  std::vector<BenchTask> tasks;
  int scenario = 0;
  for (int n : a.n_list) {
    for (double pi0 : a.pi0_list) {
      for (int rep = 0; rep < a.reps; ++rep) {
        tasks.push_back({scenario, n, pi0, rep});
      }
      ++scenario;
    }
  }

  // Resume: a task is done when the journal holds all its method rows.
  std::map<std::string, int> done_rows;
  if (fs::exists(rows_path)) {
    std::ifstream in(rows_path);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto cells = split_tsv_line(line);
      if (cells.size() < 7) throw InputError("corrupt bench journal");
      done_rows[cells[0] + "\t" + cells[1] + "\t" + cells[5]] += 1;
    }
  }
  auto task_key = [](const BenchTask& t) {
    return std::to_string(t.n) + "\t" + fmt_double(t.pi0) + "\t" +
           std::to_string(t.rep);
  };
  std::vector<int> pending;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto it = done_rows.find(task_key(tasks[i]));
    if (it == done_rows.end() ||
        it->second < static_cast<int>(a.methods.size())) {
      pending.push_back(static_cast<int>(i));
    }
  }
  if (a.max_tasks >= 0 &&
      static_cast<int>(pending.size()) > a.max_tasks) {
    pending.resize(a.max_tasks);
  }

  std::vector<std::string> blocks(pending.size());
  const int threads =
      std::min(worker_count(), std::max(1, static_cast<int>(pending.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < pending.size(); ++i) {
      blocks[i] = bench_task_block(a, tasks[pending[i]]);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= pending.size()) break;
          blocks[i] = bench_task_block(a, tasks[pending[i]]);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  {
    const bool fresh = !fs::exists(rows_path);
    std::ofstream out(rows_path, std::ios::app);
    if (!out) throw InputError("cannot append to bench journal");
    if (fresh) out << kBenchHeader;
    for (const auto& b : blocks) out << b;
  }

  // Regenerate the canonical sorted table when every task is journaled.
  std::map<std::string, int> rows_now;
  {
    std::ifstream in(rows_path);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> data;
    while (std::getline(in, line)) {
      if (!line.empty()) data.push_back(line);
    }
    for (const auto& l : data) {
      const auto cells = split_tsv_line(l);
      rows_now[cells[0] + "\t" + cells[1] + "\t" + cells[5]] += 1;
    }
    bool every = true;
    for (const auto& t : tasks) {
      const auto it = rows_now.find(task_key(t));
      if (it == rows_now.end() ||
          it->second < static_cast<int>(a.methods.size())) {
        every = false;
        break;
      }
    }
    if (every) {
      std::sort(data.begin(), data.end());
      std::ofstream out(results_path);
      out << kBenchHeader;
      for (const auto& l : data) out << l << '\n';
    }
  }
}

struct InspectArgs {
  std::string draws_path;
};

void cmd_inspect_draws(const InspectArgs& a) {
  const PosteriorDraws d = read_draws(a.draws_path);
  std::cout << "draws\t" << d.t << '\n';
  std::cout << "interest_covariates\t" << d.k2 << '\n';
  std::cout << "genes\t" << d.g << '\n';
  std::cout << "seed\t" << d.seed << '\n';
  std::cout << "weight_sum\t" << fmt_double(d.weights.sum()) << '\n';
  std::cout << "mean_abs_effect\t"
            << fmt_double(d.draws.cwiseAbs().mean()) << '\n';
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Confounder adjustment with negative-control genes"};
  app.require_subcommand(1);

  FitArgs fit_args;
  auto* fit = app.add_subcommand("fit", "Estimate effects on one dataset");
  fit->add_option("--y", fit_args.y_path, "Response TSV (samples x genes)")
      ->required();
  fit->add_option("--x", fit_args.x_path, "Design TSV (samples x covariates)")
      ->required();
  fit->add_option("--controls", fit_args.controls_path,
                  "File of control gene ids")
      ->required();
  fit->add_option("--method", fit_args.method, "Method name (family-token)")
      ->required();
  fit->add_option("--k1", fit_args.k1,
                  "Leading nuisance covariates (default: all but last)");
  fit->add_option("--q", fit_args.q, "Factor count or 'auto'");
  fit->add_option("--seed", fit_args.seed, "RNG seed");
  fit->add_option("--level", fit_args.level, "Interval level");
  fit->add_option("--out", fit_args.out_path, "Effects table path")
      ->required();
  fit->add_option("--draws-out", fit_args.draws_out,
                  "Binary draw file (sampler methods)");
  fit->add_option("--calibration-out", fit_args.calibration_out,
                  "Calibration report path");
  fit->add_option("--mcmc-iters", fit_args.mcmc.iters, "Sampler iterations");
  fit->add_option("--mcmc-burnin", fit_args.mcmc.burnin, "Burn-in sweeps");
  fit->add_option("--mcmc-thin", fit_args.mcmc.thin, "Thinning interval");

  SimArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Generate a synthetic dataset");
  sim->add_option("--n", sim_args.n, "Samples (even)");
  sim->add_option("--p", sim_args.p, "Genes");
  sim->add_option("--q-latent", sim_args.q_latent, "Latent factors");
  sim->add_option("--pi0", sim_args.pi0, "Null proportion");
  sim->add_option("--effect-sd", sim_args.effect_sd, "Effect size sd");
  sim->add_option("--m-controls", sim_args.m_controls, "Control genes");
  sim->add_option("--seed", sim_args.seed, "RNG seed");
  sim->add_option("--out-prefix", sim_args.prefix, "Output path prefix")
      ->required();

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("evaluate", "Score a fit against truth");
  eval->add_option("--effects", eval_args.effects_path, "Effects table")
      ->required();
  eval->add_option("--truth", eval_args.truth_path, "Truth table")
      ->required();
  eval->add_option("--covariate", eval_args.covariate, "Interest row index");
  eval->add_option("--out", eval_args.out_path, "Score table path")
      ->required();

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Factorial simulation sweep");
  bench->add_option("--out-dir", bench_args.out_dir, "Output directory")
      ->required();
  bench->add_option("--n-list", bench_args.n_list, "Sample sizes");
  bench->add_option("--pi0-list", bench_args.pi0_list, "Null proportions");
  bench->add_option("--p", bench_args.p, "Genes");
  bench->add_option("--m-controls", bench_args.m_controls, "Control genes");
  bench->add_option("--q-latent", bench_args.q_latent, "Latent factors");
  bench->add_option("--reps", bench_args.reps, "Replicates per scenario");
  bench->add_option("--q", bench_args.q, "Factor count or 'auto'");
  bench->add_option("--effect-sd", bench_args.effect_sd, "Effect size sd");
  bench->add_option("--methods", bench_args.methods, "Method names");
  bench->add_option("--seed", bench_args.seed, "RNG seed");
  bench->add_option("--mcmc-iters", bench_args.mcmc.iters, "Sampler sweeps");
  bench->add_option("--mcmc-burnin", bench_args.mcmc.burnin, "Burn-in");
  bench->add_option("--mcmc-thin", bench_args.mcmc.thin, "Thinning");
  bench->add_option("--max-tasks", bench_args.max_tasks, "Stop early")
      ->group("");

  InspectArgs inspect_args;
  auto* inspect = app.add_subcommand("inspect-draws", "Summarize a draw file");
  inspect->add_option("--draws", inspect_args.draws_path, "Draw file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (fit->parsed()) cmd_fit(fit_args);
    if (sim->parsed()) cmd_simulate(sim_args);
    if (eval->parsed()) cmd_evaluate(eval_args);
    if (bench->parsed()) cmd_bench(bench_args);
    if (inspect->parsed()) cmd_inspect_draws(inspect_args);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const RuvError& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace ruvstar
