#include "pdm/numcore.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pdm {

namespace {

const char* kModule = "numcore";

struct Block {
  int offset = 0;
  int n = 0;
};

// Eigenpairs of a symmetric tridiagonal matrix by bisection plus inverse iteration.
void tridiagonal_pairs(const RVec& diag, const RVec& off, int k, RVec& w, Eigen::MatrixXd& z) {
  const lapack_int n = static_cast<lapack_int>(diag.size());
  std::vector<double> d(diag.data(), diag.data() + n);
  std::vector<double> e(std::max<lapack_int>(n - 1, 1), 0.0);
  for (lapack_int i = 0; i + 1 < n; ++i) e[i] = off[i];
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  lapack_int m = 0, nsplit = 0;
  std::vector<double> wv(n);
  std::vector<lapack_int> iblock(n), isplit(n);
  lapack_int info = LAPACKE_dstebz('I', 'B', n, 0.0, 0.0, 1, k, abstol, d.data(), e.data(), &m, &nsplit,
                                   wv.data(), iblock.data(), isplit.data());
  if (info != 0 || m != k) {
    std::ostringstream os;
    os << "bisection failed (dstebz info=" << info << ", found " << m << " of " << k << " eigenvalues)";
    throw Error(ErrorKind::eig_failure, kModule, os.str());
  }
  z.resize(n, m);
  std::vector<lapack_int> ifail(m);
  info = LAPACKE_dstein(LAPACK_COL_MAJOR, n, d.data(), e.data(), m, wv.data(), iblock.data(), isplit.data(),
                        z.data(), n, ifail.data());
  if (info != 0) {
    std::ostringstream os;
    os << "inverse iteration failed to converge for " << info << " eigenvector(s) (dstein), first index "
       << (info > 0 ? ifail[0] : -1);
    throw Error(ErrorKind::eig_failure, kModule, os.str());
  }
  w = Eigen::Map<RVec>(wv.data(), m);
}

// Eigenvalues of a symmetric pentadiagonal matrix by band reduction; vectors by shifted inverse iteration.
void pentadiagonal_pairs(const Eigen::MatrixXd& upper, int k, double anorm, RVec& w, Eigen::MatrixXd& z) {
  const lapack_int n = static_cast<lapack_int>(upper.cols());
  const lapack_int kd = 2;
  std::vector<double> ab(upper.data(), upper.data() + upper.size());
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  lapack_int m = 0;
  std::vector<double> wv(n);
  double qdummy = 0.0, zdummy = 0.0;
  std::vector<lapack_int> ifail(n);
  lapack_int info = LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'N', 'I', 'U', n, kd, ab.data(), kd + 1, &qdummy, 1, 0.0,
                                   0.0, 1, k, abstol, &m, wv.data(), &zdummy, 1, ifail.data());
  if (info != 0 || m != k) {
    std::ostringstream os;
    os << "band eigenvalue solve failed (dsbevx info=" << info << ", found " << m << " of " << k << ")";
    throw Error(ErrorKind::eig_failure, kModule, os.str());
  }
  w = Eigen::Map<RVec>(wv.data(), m);
  z.resize(n, m);

  // general band storage for LU: row kl+ku+i-j of column j holds A(i,j)
  const lapack_int kl = 2, ku = 2, ldab = 2 * kl + ku + 1;
  auto a_entry = [&](lapack_int i, lapack_int j) -> double {
    if (i > j) std::swap(i, j);
    if (j - i > kd) return 0.0;
    return upper(kd + i - j, j);
  };
  for (lapack_int p = 0; p < m; ++p) {
    double shift = w[p] + 1e-13 * anorm;
    Eigen::VectorXd v(n);
    for (lapack_int i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(0.7 * i + 0.3 * p);
    bool ok = false;
    for (int attempt = 0; attempt < 4 && !ok; ++attempt) {
      std::vector<double> lu(static_cast<size_t>(ldab) * n, 0.0);
      for (lapack_int j = 0; j < n; ++j)
        for (lapack_int i = std::max<lapack_int>(0, j - ku); i <= std::min<lapack_int>(n - 1, j + kl); ++i)
          lu[(kl + ku + i - j) + j * ldab] = a_entry(i, j) - (i == j ? shift : 0.0);
      std::vector<lapack_int> ipiv(n);
      info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kl, ku, lu.data(), ldab, ipiv.data());
      if (info > 0) {
        shift += 1e-12 * anorm * (attempt + 1);
        continue;
      }
      for (int it = 0; it < 3; ++it) {
        LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, kl, ku, 1, lu.data(), ldab, ipiv.data(), v.data(), n);
        for (lapack_int q = 0; q < p; ++q)
          if (std::abs(w[q] - w[p]) < 1e-8 * std::max(1.0, anorm)) v -= z.col(q).dot(v) * z.col(q);
        v /= v.norm();
      }
      ok = true;
    }
    if (!ok) throw Error(ErrorKind::eig_failure, kModule, "band LU factorization failed during inverse iteration");
    z.col(p) = v;
  }
}

}  // namespace

SpectralResult solve_eig(const LinearDifferentialOperator& op, int k) {
  if (!op.is_real() || !op.symmetry_flag()) {
    throw Error(ErrorKind::non_symmetric, kModule, "eigensolver requires a real symmetric operator");
  }
  const int n = op.size();
  Block blk;
  blk.offset = op.dirichlet() ? 1 : 0;
  blk.n = op.dirichlet() ? n - 2 : n;
  if (k < 1 || k > blk.n || k > n - 2) {
    throw Error(ErrorKind::invalid_argument, kModule,
                "requested " + std::to_string(k) + " eigenpairs; allowed range is 1.." +
                    std::to_string(std::min(blk.n, n - 2)));
  }
  const int bw = op.bandwidth();
  bool has_second_band = false;
  for (int i = 0; i + 2 < blk.n && bw >= 2; ++i) {
    if (op.entry(blk.offset + i, blk.offset + i + 2) != cplx(0.0)) {
      has_second_band = true;
      break;
    }
  }

  double anorm = 0.0;
  for (int i = 0; i < blk.n; ++i) {
    double s = 0.0;
    for (int j = std::max(0, i - bw); j <= std::min(blk.n - 1, i + bw); ++j)
      s += std::abs(op.entry(blk.offset + i, blk.offset + j).real());
    anorm = std::max(anorm, s);
  }

  RVec w;
  Eigen::MatrixXd z;
  if (!has_second_band) {
    RVec d(blk.n), e(std::max(blk.n - 1, 0));
    for (int i = 0; i < blk.n; ++i) d[i] = op.entry(blk.offset + i, blk.offset + i).real();
    for (int i = 0; i + 1 < blk.n; ++i) e[i] = op.entry(blk.offset + i, blk.offset + i + 1).real();
    tridiagonal_pairs(d, e, k, w, z);
  } else {
    Eigen::MatrixXd upper = Eigen::MatrixXd::Zero(3, blk.n);
    for (int j = 0; j < blk.n; ++j)
      for (int i = std::max(0, j - 2); i <= j; ++i) upper(2 + i - j, j) = op.entry(blk.offset + i, blk.offset + j).real();
    pentadiagonal_pairs(upper, k, anorm, w, z);
  }

  SpectralResult res;
  res.k = k;
  res.eigenvalues = w;
  const double scale = std::max(anorm, 1e-300);
  for (int p = 0; p < k; ++p) {
    RVec v = z.col(p);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0) v = -v;
    CVec full = CVec::Zero(n);
    for (int i = 0; i < blk.n; ++i) full[blk.offset + i] = v[i];
    CVec r = op.apply(full) - w[p] * full;
    if (op.dirichlet()) {
      r[0] = 0.0;
      r[n - 1] = 0.0;
    }
    double rel = r.norm() / scale;
    res.max_residual = std::max(res.max_residual, rel);
    if (rel > 1e-10) {
      std::ostringstream os;
      os << "eigenpair " << p << " residual " << rel << " exceeds 1e-10 * ||A|| (||A|| = " << anorm << ")";
      throw Error(ErrorKind::eig_failure, kModule, os.str());
    }
    res.eigenvectors.emplace_back(op.grid(), full / std::sqrt(op.grid().h));
  }
  return res;
}

}  // namespace pdm
