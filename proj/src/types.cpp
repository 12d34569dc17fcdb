#include "ruvstar/types.hpp"

#include <algorithm>

namespace ruvstar {

void ResponseMatrix::validate() const {
  if (n() < 2 || p() < 2) {
    throw ShapeError("ResponseMatrix requires n >= 2 and p >= 2");
  }
  if (!values.allFinite()) {
    throw ShapeError("ResponseMatrix contains non-finite entries");
  }
}

void Design::validate(int p) const {
  if (k1 < 0 || k2 < 1) {
    throw ShapeError("Design requires k1 >= 0 and k2 >= 1");
  }
  if (k1 + k2 != k()) {
    throw ShapeError("Design k1 + k2 must equal the number of columns of x");
  }
  if (k() >= n()) {
    throw InsufficientSamplesError("Design requires k < n");
  }
  if (controls.empty()) {
    throw ShapeError("Design requires at least one control column");
  }
  for (std::size_t i = 0; i < controls.size(); ++i) {
    if (controls[i] < 0 || controls[i] >= p) {
      throw ShapeError("control index out of range");
    }
    if (i > 0 && controls[i] <= controls[i - 1]) {
      // Duplicated or unordered indices are rejected rather than deduplicated.
      throw ShapeError("control indices must be strictly increasing");
    }
  }
  if (static_cast<int>(controls.size()) >= p) {
    throw ShapeError("all columns marked as controls; nothing left to test");
  }
}

std::vector<int> complement_indices(const std::vector<int>& idx, int p) {
  std::vector<char> in(p, 0);
  for (int i : idx) in[i] = 1;
  std::vector<int> out;
  out.reserve(p - idx.size());
  for (int j = 0; j < p; ++j) {
    if (!in[j]) out.push_back(j);
  }
  return out;
}

Eigen::MatrixXd select_cols(const Eigen::MatrixXd& m,
                            const std::vector<int>& idx) {
  Eigen::MatrixXd out(m.rows(), idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    out.col(j) = m.col(idx[j]);
  }
  return out;
}

Eigen::VectorXd select_elems(const Eigen::VectorXd& v,
                             const std::vector<int>& idx) {
  Eigen::VectorXd out(idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    out[j] = v[idx[j]];
  }
  return out;
}

void scatter_cols(Eigen::MatrixXd& dest, const std::vector<int>& idx,
                  const Eigen::MatrixXd& block) {
  for (std::size_t j = 0; j < idx.size(); ++j) {
    dest.col(idx[j]) = block.col(j);
  }
}

void scatter_elems(Eigen::VectorXd& dest, const std::vector<int>& idx,
                   const Eigen::VectorXd& block) {
  for (std::size_t j = 0; j < idx.size(); ++j) {
    dest[idx[j]] = block[j];
  }
}

}  // namespace ruvstar
