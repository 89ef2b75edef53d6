#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace slowlight {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Small (4x4 density matrices, 16x16
// superoperators, a few hundred rows for dense reference solves).
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static CMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  cplx& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[r * cols_ + c];
  }

  std::span<cplx> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const cplx> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  cplx* data() noexcept { return data_.data(); }
  const cplx* data() const noexcept { return data_.data(); }
  std::span<cplx> flat() noexcept { return data_; }
  std::span<const cplx> flat() const noexcept { return data_; }

  CMatrix adjoint() const;
  cplx trace() const;
  double max_abs() const noexcept;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(cplx s);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
  friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

  bool operator==(const CMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

std::vector<cplx> matvec(const CMatrix& a, std::span<const cplx> x);

// Max-abs difference; shapes must agree.
double max_abs_diff(const CMatrix& a, const CMatrix& b);

// Eigenvalues of a Hermitian matrix, ascending.
std::vector<double> hermitian_eigenvalues(const CMatrix& h);

// LU factorisation with partial pivoting.
class DenseLU {
 public:
  // Throws RankDeficiencyError if a pivot falls below rel_pivot_tol * scale,
  // where scale defaults to max|A|.
  explicit DenseLU(CMatrix a, double rel_pivot_tol = 1e-13, double scale = 0.0);

  std::vector<cplx> solve(std::span<const cplx> b) const;
  // Solves for every column of B in place.
  void solve_in_place(CMatrix& b) const;

  std::size_t size() const noexcept { return lu_.rows(); }

 private:
  CMatrix lu_;
  std::vector<std::size_t> perm_;
};

std::vector<cplx> solve_dense(const CMatrix& a, std::span<const cplx> b);

// Block tridiagonal system with square blocks of equal size:
//   lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]
// lower[0] and upper[n-1] are ignored. Block Thomas elimination; each
// Schur complement is factored with partial pivoting.
struct BlockTridiagonal {
  std::vector<CMatrix> lower;
  std::vector<CMatrix> diag;
  std::vector<CMatrix> upper;

  std::size_t blocks() const noexcept { return diag.size(); }
  std::size_t block_size() const noexcept { return diag.empty() ? 0 : diag.front().rows(); }

  CMatrix to_dense() const;
};

// Block Thomas factorisation, reusable across right-hand sides.
class BlockTridiagonalLU {
 public:
  explicit BlockTridiagonalLU(const BlockTridiagonal& sys, double rel_pivot_tol = 1e-13);

  std::vector<cplx> solve(std::span<const cplx> rhs) const;

 private:
  std::size_t bs_ = 0;
  std::vector<CMatrix> lower_;
  std::vector<DenseLU> schur_;  // factored S_i
  std::vector<CMatrix> w_;      // S_i^{-1} U_i
};

std::vector<cplx> solve_block_tridiagonal(const BlockTridiagonal& sys,
                                          std::span<const cplx> rhs,
                                          double rel_pivot_tol = 1e-13);

}  // namespace slowlight
