#ifndef RUVSTAR_SIMULATION_HPP
#define RUVSTAR_SIMULATION_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ruvstar/types.hpp"

namespace ruvstar {

struct CountMatrix {
  Eigen::MatrixXi counts;  // n x p, nonnegative

  int n() const { return static_cast<int>(counts.rows()); }
  int p() const { return static_cast<int>(counts.cols()); }
};

struct SignalSpec {
  double pi0 = 1.0;        // null proportion
  double effect_sd = 0.8;  // sd of the log2-fold effects
};

struct SimTruth {
  std::vector<int> nonnull;  // gene indices with a planted effect
  Eigen::VectorXd effects;   // length p, log2-fold effect (0 on nulls)
  Eigen::VectorXi group;     // length n, 0/1 assignment
};

// Poisson counts with gene-specific log2 means (median around 100) plus
// q_latent latent factor contributions on the log2 scale. The latent
// loadings stand in for batch-style structure.
CountMatrix generate_null_counts(int n, int p, int q_latent,
                                 std::uint64_t seed, double loading_sd = 0.4);

// Injects known log2-fold effects by binomial thinning: the higher group
// keeps each count with probability 2^a for a < 0 (mirrored for a > 0 by
// thinning the other group), so a is approximately the log2-fold change.
// The group must be balanced.
std::pair<CountMatrix, SimTruth> thin_signal(const CountMatrix& z,
                                             const SignalSpec& spec,
                                             const Eigen::VectorXi& group,
                                             std::uint64_t seed);

struct SimulatedDataset {
  ResponseMatrix y;  // log2(counts + 1)
  Design design;     // [intercept, group], controls drawn from true nulls
  SimTruth truth;
  CountMatrix counts;
};

// Full pipeline: null counts, random balanced group, thinning, log2
// transform, and a uniform draw of m_controls control genes from the true
// nulls. Deterministic per seed.
SimulatedDataset make_dataset(int n, int p, int q_latent,
                              const SignalSpec& spec, int m_controls,
                              std::uint64_t seed);

}  // namespace ruvstar

#endif  // RUVSTAR_SIMULATION_HPP
