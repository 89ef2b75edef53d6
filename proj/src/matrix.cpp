#include "slowlight/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "slowlight/errors.hpp"
#include "slowlight/kernels.hpp"

namespace slowlight {

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

cplx CMatrix::trace() const {
  cplx t{};
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::norm(v));
  return std::sqrt(m);
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidArgument("CMatrix +=: shape mismatch");
  kernels::axpy(1.0, o.data_, data_);
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InvalidArgument("CMatrix -=: shape mismatch");
  kernels::axpy(-1.0, o.data_, data_);
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& v : data_) v *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw InvalidArgument("CMatrix *: shape mismatch");
  CMatrix c(a.rows(), b.cols());
  kernels::gemm_acc(a.rows(), b.cols(), a.cols(), a.data(), b.data(), c.data());
  return c;
}

std::vector<cplx> matvec(const CMatrix& a, std::span<const cplx> x) {
  if (a.cols() != x.size()) throw InvalidArgument("matvec: shape mismatch");
  std::vector<cplx> y(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) y[r] = kernels::dotu(a.row(r), x);
  return y;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InvalidArgument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.flat().size(); ++i)
    m = std::max(m, std::abs(a.flat()[i] - b.flat()[i]));
  return m;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& h) {
  if (h.rows() != h.cols()) throw InvalidArgument("hermitian_eigenvalues: not square");
  const auto n = static_cast<Eigen::Index>(h.rows());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = h(r, c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> ev(h.rows());
  for (Eigen::Index i = 0; i < n; ++i) ev[i] = es.eigenvalues()(i);
  return ev;
}

DenseLU::DenseLU(CMatrix a, double rel_pivot_tol, double scale)
    : lu_(std::move(a)), perm_(lu_.rows()) {
  const std::size_t n = lu_.rows();
  if (n != lu_.cols()) throw InvalidArgument("DenseLU: matrix not square");
  if (scale <= 0.0) scale = lu_.max_abs();
  const double floor = rel_pivot_tol * scale;
  const double floor_sq = floor * floor;
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::norm(lu_(k, k));
    for (std::size_t r = k + 1; r < n; ++r) {
      const double v = std::norm(lu_(r, k));
      if (v > best) best = v, piv = r;
    }
    if (!(best > floor_sq))
      throw RankDeficiencyError("singular matrix: pivot " + std::to_string(k) + " of " +
                                std::to_string(n) + " below tolerance");
    if (piv != k) {
      std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(piv).begin());
      std::swap(perm_[k], perm_[piv]);
    }
    const cplx inv = 1.0 / lu_(k, k);
    const auto tail = lu_.row(k).subspan(k + 1);
    for (std::size_t r = k + 1; r < n; ++r) {
      const cplx f = lu_(r, k) * inv;
      lu_(r, k) = f;
      if (f != cplx{}) kernels::axpy(-f, tail, lu_.row(r).subspan(k + 1));
    }
  }
}

std::vector<cplx> DenseLU::solve(std::span<const cplx> b) const {
  const std::size_t n = size();
  if (b.size() != n) throw InvalidArgument("DenseLU::solve: size mismatch");
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 0; i < n; ++i) {
    const auto li = lu_.row(i).first(i);
    x[i] -= kernels::dotu(li, std::span<const cplx>(x).first(i));
  }
  for (std::size_t i = n; i-- > 0;) {
    const auto ui = lu_.row(i).subspan(i + 1);
    x[i] = (x[i] - kernels::dotu(ui, std::span<const cplx>(x).subspan(i + 1))) / lu_(i, i);
  }
  return x;
}

void DenseLU::solve_in_place(CMatrix& b) const {
  const std::size_t n = size();
  if (b.rows() != n) throw InvalidArgument("DenseLU::solve_in_place: size mismatch");
  CMatrix x(n, b.cols());
  for (std::size_t i = 0; i < n; ++i) std::copy(b.row(perm_[i]).begin(), b.row(perm_[i]).end(), x.row(i).begin());
  // Row-oriented substitution so the inner update is a contiguous axpy.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = i + 1; r < n; ++r)
      if (lu_(r, i) != cplx{}) kernels::axpy(-lu_(r, i), x.row(i), x.row(r));
  for (std::size_t i = n; i-- > 0;) {
    const cplx inv = 1.0 / lu_(i, i);
    for (auto& v : x.row(i)) v *= inv;
    for (std::size_t r = 0; r < i; ++r)
      if (lu_(r, i) != cplx{}) kernels::axpy(-lu_(r, i), x.row(i), x.row(r));
  }
  b = std::move(x);
}

std::vector<cplx> solve_dense(const CMatrix& a, std::span<const cplx> b) {
  return DenseLU(a).solve(b);
}

CMatrix BlockTridiagonal::to_dense() const {
  const std::size_t nb = blocks(), bs = block_size();
  CMatrix out(nb * bs, nb * bs);
  auto place = [&](const CMatrix& blk, std::size_t bi, std::size_t bj) {
    for (std::size_t r = 0; r < bs; ++r)
      for (std::size_t c = 0; c < bs; ++c) out(bi * bs + r, bj * bs + c) = blk(r, c);
  };
  for (std::size_t i = 0; i < nb; ++i) {
    place(diag[i], i, i);
    if (i > 0) place(lower[i], i, i - 1);
    if (i + 1 < nb) place(upper[i], i, i + 1);
  }
  return out;
}

BlockTridiagonalLU::BlockTridiagonalLU(const BlockTridiagonal& sys, double rel_pivot_tol) {
  const std::size_t nb = sys.blocks();
  bs_ = sys.block_size();
  if (nb == 0) throw InvalidArgument("block system is empty");
  if (sys.lower.size() != nb || sys.upper.size() != nb)
    throw InvalidArgument("block system: lower/diag/upper length mismatch");

  double scale = 0.0;
  for (std::size_t i = 0; i < nb; ++i) {
    scale = std::max(scale, sys.diag[i].max_abs());
    if (i > 0) scale = std::max(scale, sys.lower[i].max_abs());
    if (i + 1 < nb) scale = std::max(scale, sys.upper[i].max_abs());
  }

  lower_.reserve(nb);
  for (std::size_t i = 0; i < nb; ++i) lower_.push_back(i > 0 ? sys.lower[i] * -1.0 : CMatrix());
  schur_.reserve(nb);
  w_.resize(nb > 0 ? nb - 1 : 0);
  schur_.emplace_back(sys.diag[0], rel_pivot_tol, scale);
  for (std::size_t i = 0; i + 1 < nb; ++i) {
    w_[i] = sys.upper[i];
    schur_[i].solve_in_place(w_[i]);
    CMatrix next = sys.diag[i + 1];
    kernels::gemm_acc(bs_, bs_, bs_, lower_[i + 1].data(), w_[i].data(), next.data());
    schur_.emplace_back(std::move(next), rel_pivot_tol, scale);
  }
}

std::vector<cplx> BlockTridiagonalLU::solve(std::span<const cplx> rhs) const {
  const std::size_t nb = schur_.size();
  if (rhs.size() != nb * bs_) throw InvalidArgument("block system: rhs size mismatch");
  std::vector<cplx> x(nb * bs_);
  std::vector<cplx> y(bs_);
  // forward: z_i = S_i^{-1} (rhs_i - L_i z_{i-1}), stored in x
  for (std::size_t i = 0; i < nb; ++i) {
    std::copy_n(rhs.begin() + static_cast<std::ptrdiff_t>(i * bs_), bs_, y.begin());
    if (i > 0) {
      const auto prev = std::span<const cplx>(x).subspan((i - 1) * bs_, bs_);
      for (std::size_t r = 0; r < bs_; ++r) y[r] += kernels::dotu(lower_[i].row(r), prev);
    }
    const auto z = schur_[i].solve(y);
    std::copy(z.begin(), z.end(), x.begin() + static_cast<std::ptrdiff_t>(i * bs_));
  }
  // back: x_i = z_i - W_i x_{i+1}
  for (std::size_t i = nb - 1; i-- > 0;) {
    const auto next = std::span<const cplx>(x).subspan((i + 1) * bs_, bs_);
    for (std::size_t r = 0; r < bs_; ++r) x[i * bs_ + r] -= kernels::dotu(w_[i].row(r), next);
  }
  return x;
}

std::vector<cplx> solve_block_tridiagonal(const BlockTridiagonal& sys, std::span<const cplx> rhs,
                                          double rel_pivot_tol) {
  if (rhs.size() != sys.blocks() * sys.block_size())
    throw InvalidArgument("block system: rhs size mismatch");
  return BlockTridiagonalLU(sys, rel_pivot_tol).solve(rhs);
}

}  // namespace slowlight
