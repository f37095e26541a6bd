#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "simperm/chains.hpp"

namespace simperm {

// Row-stochastic matrix in CSR form over an enumerated state list.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  TransitionMatrix(std::vector<std::uint64_t> states, std::vector<std::size_t> row_ptr,
                   std::vector<std::uint32_t> cols, std::vector<double> vals);

  static TransitionMatrix from_dense(const std::vector<double>& dense, std::size_t size);
  static TransitionMatrix identity(std::size_t size);

  std::size_t size() const { return states_.size(); }
  std::size_t nonzeros() const { return vals_.size(); }
  const std::vector<std::uint64_t>& states() const { return states_; }
  std::size_t index_of(std::uint64_t state) const;  // throws if absent

  double at(std::size_t i, std::size_t j) const;
  std::vector<double> dense() const;  // row-major

  // p -> p P
  void left_multiply(const std::vector<double>& p, std::vector<double>& out) const;

  double max_row_sum_error() const;
  double max_asymmetry() const;
  double min_diagonal() const;

  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::uint32_t>& cols() const { return cols_; }
  const std::vector<double>& vals() const { return vals_; }

 private:
  std::vector<std::uint64_t> states_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> cols_;
  std::vector<double> vals_;
};

TransitionMatrix transition_matrix(const Chain& chain, std::size_t limit = kMaxStates);
inline TransitionMatrix transition_matrix(const ChainSpec& spec, std::size_t limit = kMaxStates) {
  return transition_matrix(Chain(spec), limit);
}

struct Spectrum {
  std::vector<double> eigenvalues;  // descending
  double gap = 0;                   // 1 - eigenvalues[1]
  double max_residual = 0;          // max |P v - lambda v|_inf, if vectors were computed
  bool residuals_checked = false;

  double second() const { return eigenvalues.size() > 1 ? eigenvalues[1] : eigenvalues.front(); }
  double smallest() const { return eigenvalues.back(); }
};

struct EigOptions {
  bool vectors = true;          // also compute eigenvectors and residuals
  double symmetry_tol = 1e-10;
};

// Dense symmetric eigensolve (LAPACK dsyevd). Throws ContractError if the
// matrix is not symmetric within tolerance.
Spectrum eig_symmetric(const TransitionMatrix& m, const EigOptions& opt = {});

double spectral_gap(const ChainSpec& spec, const EigOptions& opt = {});

struct LiftReport {
  bool contained = false;
  double max_mismatch = 0;
  std::size_t small_size = 0;
  std::size_t big_size = 0;
};

// Greedy containment of one sorted multiset in another.
LiftReport multiset_contained(const std::vector<double>& small, const std::vector<double>& big, double tol);
LiftReport lift_check(const ChainSpec& small, const ChainSpec& big, double tol);

// Character formula for Schreier(n, k = 1): 1 - |S|/n over subsets S of
// [n], descending.
std::vector<double> schreier_k1_spectrum(int n);

}  // namespace simperm
