#ifndef RUVSTAR_PIPELINE_HPP
#define RUVSTAR_PIPELINE_HPP

#include <cstdint>
#include <vector>

#include "ruvstar/calibration.hpp"
#include "ruvstar/ruvb.hpp"
#include "ruvstar/types.hpp"
#include "ruvstar/variants.hpp"

namespace ruvstar {

struct FitOptions {
  MethodVariant variant;
  int q = -1;              // -1 selects q by parallel analysis of Y3
  int pa_perms = 99;       // permutations for the automatic choice
  std::uint64_t seed = 0;
  McmcSettings mcmc;       // sampler settings; seed is taken from `seed`
  double level = 0.95;     // interval level for the sample mode
};

struct FitOutput {
  EffectResult effect;         // non-control genes, method_tag = variant
  std::vector<int> gene_cols;  // column indices of Y covered by `effect`
  int q_used = 0;
  CalibrationReport calibration;
  bool has_calibration = false;
  PosteriorDraws draws;        // sampler families only
  bool has_draws = false;
};

// Full dispatch from a method name to an estimate: rotation, factor-count
// choice, estimator, and any calibration the variant token asks for.
FitOutput run_fit(const ResponseMatrix& y, const Design& d,
                  const FitOptions& opt);

}  // namespace ruvstar

#endif  // RUVSTAR_PIPELINE_HPP
