#include <algorithm>
#include <cmath>
#include <lapacke.h>

#include "simperm/errors.hpp"
#include "simperm/spectral.hpp"

namespace simperm {

TransitionMatrix::TransitionMatrix(std::vector<std::uint64_t> states, std::vector<std::size_t> row_ptr,
                                   std::vector<std::uint32_t> cols, std::vector<double> vals)
    : states_(std::move(states)), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)), vals_(std::move(vals)) {
  if (row_ptr_.size() != states_.size() + 1 || cols_.size() != vals_.size() || row_ptr_.back() != vals_.size()) {
    throw ContractError("malformed sparse transition matrix");
  }
  for (double v : vals_) {
    if (v < 0) throw ContractError("negative transition probability");
  }
  // Normalize every row to strictly increasing columns.
  std::vector<std::size_t> rp{0};
  std::vector<std::uint32_t> ncols;
  std::vector<double> nvals;
  ncols.reserve(cols_.size());
  nvals.reserve(vals_.size());
  std::vector<std::pair<std::uint32_t, double>> row;
  for (std::size_t i = 0; i < states_.size(); ++i) {
    row.clear();
    for (std::size_t q = row_ptr_[i]; q < row_ptr_[i + 1]; ++q) {
      if (cols_[q] >= states_.size()) throw ContractError("column index out of range");
      row.emplace_back(cols_[q], vals_[q]);
    }
    std::sort(row.begin(), row.end());
    for (const auto& [c, v] : row) {
      if (nvals.size() > rp.back() && ncols.back() == c) {
        nvals.back() += v;
      } else {
        ncols.push_back(c);
        nvals.push_back(v);
      }
    }
    rp.push_back(nvals.size());
  }
  row_ptr_ = std::move(rp);
  cols_ = std::move(ncols);
  vals_ = std::move(nvals);
}

TransitionMatrix TransitionMatrix::from_dense(const std::vector<double>& dense, std::size_t size) {
  if (dense.size() != size * size) throw ContractError("dense matrix has wrong size");
  std::vector<std::uint64_t> states(size);
  std::vector<std::size_t> rp{0};
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;
  for (std::size_t i = 0; i < size; ++i) {
    states[i] = i;
    for (std::size_t j = 0; j < size; ++j) {
      if (dense[i * size + j] != 0.0) {
        cols.push_back(static_cast<std::uint32_t>(j));
        vals.push_back(dense[i * size + j]);
      }
    }
    rp.push_back(vals.size());
  }
  return TransitionMatrix(std::move(states), std::move(rp), std::move(cols), std::move(vals));
}

TransitionMatrix TransitionMatrix::identity(std::size_t size) {
  std::vector<double> d(size * size, 0.0);
  for (std::size_t i = 0; i < size; ++i) d[i * size + i] = 1.0;
  return from_dense(d, size);
}

std::size_t TransitionMatrix::index_of(std::uint64_t state) const {
  const auto it = std::lower_bound(states_.begin(), states_.end(), state);
  if (it == states_.end() || *it != state) throw ContractError("state not in the enumerated space");
  return static_cast<std::size_t>(it - states_.begin());
}

double TransitionMatrix::at(std::size_t i, std::size_t j) const {
  const auto b = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto e = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(b, e, static_cast<std::uint32_t>(j));
  return (it != e && *it == j) ? vals_[static_cast<std::size_t>(it - cols_.begin())] : 0.0;
}

std::vector<double> TransitionMatrix::dense() const {
  const std::size_t n = size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t q = row_ptr_[i]; q < row_ptr_[i + 1]; ++q) d[i * n + cols_[q]] += vals_[q];
  }
  return d;
}

void TransitionMatrix::left_multiply(const std::vector<double>& p, std::vector<double>& out) const {
  out.assign(size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    const double pi = p[i];
    if (pi == 0.0) continue;
    for (std::size_t q = row_ptr_[i]; q < row_ptr_[i + 1]; ++q) out[cols_[q]] += pi * vals_[q];
  }
}

double TransitionMatrix::max_row_sum_error() const {
  double worst = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    double s = 0;
    for (std::size_t q = row_ptr_[i]; q < row_ptr_[i + 1]; ++q) s += vals_[q];
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

double TransitionMatrix::max_asymmetry() const {
  double worst = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t q = row_ptr_[i]; q < row_ptr_[i + 1]; ++q) {
      worst = std::max(worst, std::abs(vals_[q] - at(cols_[q], i)));
    }
  }
  return worst;
}

double TransitionMatrix::min_diagonal() const {
  double m = 1.0;
  for (std::size_t i = 0; i < size(); ++i) m = std::min(m, at(i, i));
  return m;
}

TransitionMatrix transition_matrix(const Chain& chain, std::size_t limit) {
  auto states = chain.states(limit);
  std::vector<std::size_t> rp{0};
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;
  for (auto s : states) {
    for (const auto& t : chain.transitions(s)) {
      const auto it = std::lower_bound(states.begin(), states.end(), t.to);
      if (it == states.end() || *it != t.to) {
        throw VerificationError(chain.name() + ": transition leaves the enumerated state space");
      }
      cols.push_back(static_cast<std::uint32_t>(it - states.begin()));
      vals.push_back(t.prob);
    }
    rp.push_back(vals.size());
  }
  return TransitionMatrix(std::move(states), std::move(rp), std::move(cols), std::move(vals));
}

Spectrum eig_symmetric(const TransitionMatrix& m, const EigOptions& opt) {
  const std::size_t n = m.size();
  if (n == 0) throw ContractError("empty matrix");
  const double asym = m.max_asymmetry();
  if (asym > opt.symmetry_tol) {
    throw ContractError("matrix is not symmetric (max |P_ij - P_ji| = " + std::to_string(asym) +
                        "); symmetrize or use a reversible chain");
  }
  std::vector<double> a = m.dense();
  std::vector<double> w(n);
  const auto ln = static_cast<lapack_int>(n);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_ROW_MAJOR, opt.vectors ? 'V' : 'N', 'U', ln, a.data(), ln, w.data());
  if (info != 0) throw VerificationError("dsyevd failed with info " + std::to_string(info));

  Spectrum s;
  if (opt.vectors) {
    // Column j of a is the eigenvector for w[j].
    std::vector<double> v(n), pv(n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) v[i] = a[i * n + j];
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0;
        for (std::size_t q = m.row_ptr()[i]; q < m.row_ptr()[i + 1]; ++q) acc += m.vals()[q] * v[m.cols()[q]];
        s.max_residual = std::max(s.max_residual, std::abs(acc - w[j] * v[i]));
      }
    }
    s.residuals_checked = true;
  }
  std::sort(w.begin(), w.end(), std::greater<>());
  s.eigenvalues = std::move(w);
  s.gap = 1.0 - s.second();
  return s;
}

double spectral_gap(const ChainSpec& spec, const EigOptions& opt) {
  return eig_symmetric(transition_matrix(spec), opt).gap;
}

LiftReport multiset_contained(const std::vector<double>& small, const std::vector<double>& big, double tol) {
  LiftReport r;
  r.small_size = small.size();
  r.big_size = big.size();
  auto a = small;
  auto b = big;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  r.contained = true;
  std::size_t j = 0;
  for (double x : a) {
    while (j < b.size() && b[j] < x - tol) ++j;
    if (j == b.size() || b[j] > x + tol) {
      r.contained = false;
      const auto it = std::lower_bound(b.begin(), b.end(), x);
      double d = std::numeric_limits<double>::infinity();
      if (it != b.end()) d = std::min(d, *it - x);
      if (it != b.begin()) d = std::min(d, x - *(it - 1));
      r.max_mismatch = std::max(r.max_mismatch, d);
      continue;
    }
    r.max_mismatch = std::max(r.max_mismatch, std::abs(b[j] - x));
    ++j;
  }
  return r;
}

LiftReport lift_check(const ChainSpec& small, const ChainSpec& big, double tol) {
  EigOptions opt;
  opt.vectors = false;
  const auto s = eig_symmetric(transition_matrix(small), opt);
  const auto b = eig_symmetric(transition_matrix(big), opt);
  return multiset_contained(s.eigenvalues, b.eigenvalues, tol);
}

std::vector<double> schreier_k1_spectrum(int n) {
  std::vector<double> out;
  double binom = 1;
  for (int s = 0; s <= n; ++s) {
    for (int c = 0; c < static_cast<int>(std::lround(binom)); ++c) out.push_back(1.0 - static_cast<double>(s) / n);
    binom = binom * (n - s) / (s + 1);
  }
  return out;
}

}  // namespace simperm
