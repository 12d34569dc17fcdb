#ifndef RUVSTAR_TYPES_HPP
#define RUVSTAR_TYPES_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ruvstar/errors.hpp"

namespace ruvstar {

// n x p matrix of responses (log2 counts). Rows are samples, columns genes.
struct ResponseMatrix {
  Eigen::MatrixXd values;

  int n() const { return static_cast<int>(values.rows()); }
  int p() const { return static_cast<int>(values.cols()); }

  // Throws on non-finite entries or degenerate dimensions.
  void validate() const;
};

// Covariate matrix with a nuisance/interest split and a control-column set.
// Control indices are 0-based into the columns of Y, strictly increasing.
struct Design {
  Eigen::MatrixXd x;  // n x k, k = k1 + k2
  int k1 = 0;
  int k2 = 0;
  std::vector<int> controls;

  int n() const { return static_cast<int>(x.rows()); }
  int k() const { return static_cast<int>(x.cols()); }
  int m() const { return static_cast<int>(controls.size()); }

  // Checks shape consistency and the control index set against p columns of
  // the response. Full-rank of x is checked at rotation time.
  void validate(int p) const;
};

// Estimated interest-covariate effects for a set of genes, with standard
// errors and t statistics. Usually covers the non-control columns only.
struct EffectResult {
  Eigen::MatrixXd beta2hat;  // k2 x g
  Eigen::MatrixXd se;        // k2 x g, strictly positive
  Eigen::MatrixXd tstat;     // k2 x g
  Eigen::VectorXd dof;       // per gene
  std::string method_tag;
  // Columns whose residual variance hit the floor before forming se.
  std::vector<int> floored_columns;
  // Local false sign rates; only populated by the posterior-draw methods.
  Eigen::MatrixXd lfsr;
  // Optional interval endpoints (k2 x g). Populated by the posterior-draw
  // sample mode; other methods derive t intervals downstream.
  Eigen::MatrixXd ci_lo;
  Eigen::MatrixXd ci_hi;

  int k2() const { return static_cast<int>(beta2hat.rows()); }
  int genes() const { return static_cast<int>(beta2hat.cols()); }
};

// --- column-index helpers -------------------------------------------------

// Sorted complement of `idx` in {0, ..., p-1}.
std::vector<int> complement_indices(const std::vector<int>& idx, int p);

Eigen::MatrixXd select_cols(const Eigen::MatrixXd& m,
                            const std::vector<int>& idx);
Eigen::VectorXd select_elems(const Eigen::VectorXd& v,
                             const std::vector<int>& idx);

// Writes `block` into the columns of `dest` named by `idx`.
void scatter_cols(Eigen::MatrixXd& dest, const std::vector<int>& idx,
                  const Eigen::MatrixXd& block);
void scatter_elems(Eigen::VectorXd& dest, const std::vector<int>& idx,
                   const Eigen::VectorXd& block);

}  // namespace ruvstar

#endif  // RUVSTAR_TYPES_HPP
