#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ruvstar/pipeline.hpp"
#include "ruvstar/simulation.hpp"
#include "ruvstar/tsv.hpp"

using namespace ruvstar;
namespace fs = std::filesystem;

namespace {

std::string cli_binary() {
  const char* env = std::getenv("RUVSTAR_CLI");
  REQUIRE(env != nullptr);
  return env;
}

int run(const std::string& args) {
  const std::string cmd = cli_binary() + " " + args + " > cli_stdout.txt 2>&1";
  const int ret = std::system(cmd.c_str());
  return WEXITSTATUS(ret);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TmpDir {
  fs::path path;
  explicit TmpDir(const std::string& name) : path(name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TmpDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const {
    return (path / f).string();
  }
};

}  // namespace

TEST_CASE("simulate writes a deterministic dataset") {
  TmpDir tmp("cli_sim");
  CHECK(run("simulate --n 12 --p 60 --q-latent 2 --pi0 0.5 --m-controls 10 "
            "--seed 7 --out-prefix " +
            (tmp / "a")) == 0);
  CHECK(run("simulate --n 12 --p 60 --q-latent 2 --pi0 0.5 --m-controls 10 "
            "--seed 7 --out-prefix " +
            (tmp / "b")) == 0);
  for (const char* suffix : {".y.tsv", ".x.tsv", ".controls.txt", ".truth.tsv"}) {
    CHECK(slurp(tmp / ("a" + std::string(suffix))) ==
          slurp(tmp / ("b" + std::string(suffix))));
  }
  // The files line up with the library generator for the same seed.
  const SimulatedDataset ds =
      make_dataset(12, 60, 2, SignalSpec{0.5, 0.8}, 10, 7);
  const Table yt = read_table(tmp / "a.y.tsv");
  CHECK(yt.row_ids.size() == 12);
  CHECK(yt.col_names.size() == 60);
  CHECK((yt.values - ds.y.values).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("fit is deterministic and matches the library path") {
  TmpDir tmp("cli_fit");
  REQUIRE(run("simulate --n 12 --p 60 --q-latent 2 --pi0 0.5 --m-controls 10 "
              "--seed 3 --out-prefix " +
              (tmp / "d")) == 0);
  const std::string common = "fit --y " + (tmp / "d.y.tsv") + " --x " +
                             (tmp / "d.x.tsv") + " --controls " +
                             (tmp / "d.controls.txt");

  SUBCASE("auto q with moderation covers every non-control gene") {
    CHECK(run(common + " --method ruv3-l --seed 11 --out " +
              (tmp / "e1.tsv")) == 0);
    CHECK(run(common + " --method ruv3-l --seed 11 --out " +
              (tmp / "e2.tsv")) == 0);
    CHECK(slurp(tmp / "e1.tsv") == slurp(tmp / "e2.tsv"));

    const Table et = read_table(tmp / "e1.tsv");
    CHECK(et.row_ids.size() == 50);  // p - m rows, one interest covariate
    const auto meta = read_meta(tmp / "e1.tsv");
    bool saw_method = false;
    for (const auto& [k, v] : meta) {
      if (k == "method") {
        saw_method = true;
        CHECK(v == "ruv3-l");
      }
    }
    CHECK(saw_method);
  }

  SUBCASE("calibrated fit reproduces the in-process numbers") {
    CHECK(run(common + " --method cate-c --q 2 --seed 5 --out " +
              (tmp / "c.tsv") + " --calibration-out " + (tmp / "cal.tsv")) ==
          0);
    const SimulatedDataset ds =
        make_dataset(12, 60, 2, SignalSpec{0.5, 0.8}, 10, 3);
    FitOptions opt;
    opt.variant = parse_variant("cate-c");
    opt.q = 2;
    opt.seed = 5;
    const FitOutput fit = run_fit(ds.y, ds.design, opt);

    const Table et = read_table(tmp / "c.tsv");
    auto col = [&](const std::string& name) {
      for (std::size_t j = 0; j < et.col_names.size(); ++j) {
        if (et.col_names[j] == name) return static_cast<int>(j);
      }
      REQUIRE(false);
      return -1;
    };
    const int c_beta = col("beta"), c_se = col("se");
    REQUIRE(et.values.rows() == fit.effect.genes());
    for (int j = 0; j < fit.effect.genes(); ++j) {
      CHECK(et.values(j, c_beta) ==
            doctest::Approx(fit.effect.beta2hat(0, j)).epsilon(1e-8));
      CHECK(et.values(j, c_se) ==
            doctest::Approx(fit.effect.se(0, j)).epsilon(1e-8));
    }
    const std::string cal = slurp(tmp / "cal.tsv");
    CHECK(cal.find("lambda") != std::string::npos);
  }

  SUBCASE("sampler fit writes draws and inspect reads them back") {
    const std::string fit_cmd = common +
                                " --method ruvb-nn --q 2 --seed 9 "
                                "--mcmc-iters 200 --mcmc-burnin 50 "
                                "--mcmc-thin 2 --out ";
    CHECK(run(fit_cmd + (tmp / "r1.tsv") + " --draws-out " +
              (tmp / "r1.draws")) == 0);
    CHECK(run(fit_cmd + (tmp / "r2.tsv") + " --draws-out " +
              (tmp / "r2.draws")) == 0);
    CHECK(slurp(tmp / "r1.tsv") == slurp(tmp / "r2.tsv"));
    CHECK(slurp(tmp / "r1.draws") == slurp(tmp / "r2.draws"));

    CHECK(run("inspect-draws --draws " + (tmp / "r1.draws")) == 0);
    const std::string info = slurp("cli_stdout.txt");
    CHECK(info.find("draws\t75") != std::string::npos);
    CHECK(info.find("genes\t50") != std::string::npos);
    CHECK(info.find("interest_covariates\t1") != std::string::npos);
  }

  SUBCASE("evaluate scores a fit against the truth table") {
    REQUIRE(run(common + " --method ruv2-l --q 2 --seed 2 --out " +
                (tmp / "f.tsv")) == 0);
    CHECK(run("evaluate --effects " + (tmp / "f.tsv") + " --truth " +
              (tmp / "d.truth.tsv") + " --out " + (tmp / "score.tsv")) == 0);
    const std::string score = slurp(tmp / "score.tsv");
    CHECK(score.find("method\tauc\tcoverage\tn_genes") != std::string::npos);
    CHECK(score.find("ruv2-l") != std::string::npos);
    const Table st = read_table(tmp / "score.tsv");
    CHECK(st.values(0, 0) >= 0.0);
    CHECK(st.values(0, 0) <= 1.0);
    CHECK(st.values(0, 1) >= 0.0);
    CHECK(st.values(0, 1) <= 1.0);
    CHECK(st.values(0, 2) == doctest::Approx(50.0));
  }
}

TEST_CASE("an interrupted bench resumes to an identical result table") {
  TmpDir tmp("cli_bench");
  const std::string config =
      " --n-list 8 --pi0-list 0.5 --p 40 --m-controls 8 --q-latent 1 "
      "--reps 2 --q 1 --seed 13 --methods ols-l ruv3-l";

  CHECK(run("bench --out-dir " + (tmp / "full") + config) == 0);
  CHECK(fs::exists(tmp / "full/bench_results.tsv"));

  CHECK(run("bench --out-dir " + (tmp / "resumed") + config +
            " --max-tasks 1") == 0);
  CHECK_FALSE(fs::exists(tmp / "resumed/bench_results.tsv"));
  CHECK(run("bench --out-dir " + (tmp / "resumed") + config) == 0);
  CHECK(slurp(tmp / "resumed/bench_results.tsv") ==
        slurp(tmp / "full/bench_results.tsv"));

  // A different configuration cannot reuse the directory.
  CHECK(run("bench --out-dir " + (tmp / "full") + config + " --reps 3") == 2);
}

TEST_CASE("error exit codes") {
  TmpDir tmp("cli_err");
  REQUIRE(run("simulate --n 8 --p 30 --q-latent 1 --pi0 0.5 --m-controls 6 "
              "--seed 1 --out-prefix " +
              (tmp / "d")) == 0);
  const std::string common = "fit --y " + (tmp / "d.y.tsv") + " --x " +
                             (tmp / "d.x.tsv") + " --controls " +
                             (tmp / "d.controls.txt");
  // Unknown method name: input error.
  CHECK(run(common + " --method ruv9-o --out " + (tmp / "o.tsv")) == 2);
  // Missing required flag: parser error.
  CHECK(run("fit --y " + (tmp / "d.y.tsv")) == 2);
  // Statistically impossible request (more factors than controls).
  CHECK(run(common + " --method ruv4-o --q 20 --out " + (tmp / "o.tsv")) == 3);
  // Unreadable input file.
  CHECK(run("fit --y missing.tsv --x " + (tmp / "d.x.tsv") + " --controls " +
            (tmp / "d.controls.txt") + " --method ols-o --out " +
            (tmp / "o.tsv")) == 2);
  // inspect-draws on a non-draw file.
  CHECK(run("inspect-draws --draws " + (tmp / "d.y.tsv")) == 2);
}
