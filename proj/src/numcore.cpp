#include "pdm/numcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pdm {

namespace {
const char* kModule = "numcore";
}

RVec Grid::nodes() const {
  RVec x(n);
  for (int i = 0; i < n; ++i) x[i] = x_min + h * i;
  return x;
}

Grid make_grid(double x_min, double x_max, int n) {
  if (!(x_min < x_max)) {
    throw Error(ErrorKind::domain_order, kModule,
                "x_min must be smaller than x_max (got " + std::to_string(x_min) + ", " +
                    std::to_string(x_max) + ")");
  }
  if (n < 5) {
    throw Error(ErrorKind::undersized_grid, kModule,
                "grid needs at least 5 samples (got " + std::to_string(n) + ")");
  }
  Grid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.n = n;
  g.h = (x_max - x_min) / (n - 1);
  return g;
}

Grid midpoint_grid(const Grid& g) {
  Grid m;
  m.h = g.h;
  m.n = g.n - 1;
  m.x_min = g.x_min + 0.5 * g.h;
  m.x_max = g.x_max - 0.5 * g.h;
  return m;
}

Grid doubled_grid(const Grid& g) {
  double c = 0.5 * (g.x_min + g.x_max);
  double L = g.x_max - g.x_min;
  Grid d;
  d.n = 2 * g.n - 1;
  d.h = g.h;
  d.x_min = c - L;
  d.x_max = c + L;
  return d;
}

GridFunction::GridFunction(const Grid& g, CVec v) : grid(g), values(std::move(v)) {
  if (values.size() != g.n) {
    throw Error(ErrorKind::grid_mismatch, kModule, "value count does not match grid size");
  }
}

GridFunction GridFunction::from_real(const Grid& g, const RVec& v) {
  return GridFunction(g, v.cast<cplx>());
}

GridFunction GridFunction::zeros(const Grid& g) { return GridFunction(g, CVec::Zero(g.n)); }

bool GridFunction::finite() const { return values.allFinite(); }

void require_finite(const GridFunction& f, const std::string& module, const std::string& what) {
  if (!f.finite()) throw Error(ErrorKind::invalid_argument, module, what + " has non-finite entries");
}

void require_same_grid(const Grid& a, const Grid& b, const std::string& module) {
  if (!(a == b)) throw Error(ErrorKind::grid_mismatch, module, "operands live on different grids");
}

namespace {

template <class V>
typename V::Scalar simpson_or_trapezoid(double h, const V& f) {
  using S = typename V::Scalar;
  const Eigen::Index n = f.size();
  S s = S(0);
  if (n % 2 == 1) {
    s = f[0] + f[n - 1];
    for (Eigen::Index i = 1; i < n - 1; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
    return s * (h / 3.0);
  }
  s = 0.5 * (f[0] + f[n - 1]);
  for (Eigen::Index i = 1; i < n - 1; ++i) s += f[i];
  return s * h;
}

}  // namespace

cplx integrate(const GridFunction& f) { return simpson_or_trapezoid(f.grid.h, f.values); }

double integrate(const Grid& g, const RVec& f) { return simpson_or_trapezoid(g.h, f); }

RVec cumulative_integral(const Grid& g, const RVec& f) {
  const int n = static_cast<int>(f.size());
  RVec out = RVec::Zero(n);
  if (n < 4) {
    for (int j = 0; j + 1 < n; ++j) out[j + 1] = out[j] + 0.5 * g.h * (f[j] + f[j + 1]);
    return out;
  }
  const double w = g.h / 24.0;
  for (int j = 0; j + 1 < n; ++j) {
    double cell;
    if (j == 0) {
      cell = w * (9 * f[0] + 19 * f[1] - 5 * f[2] + f[3]);
    } else if (j == n - 2) {
      cell = w * (f[n - 4] - 5 * f[n - 3] + 19 * f[n - 2] + 9 * f[n - 1]);
    } else {
      cell = w * (-f[j - 1] + 13 * f[j] + 13 * f[j + 1] - f[j + 2]);
    }
    out[j + 1] = out[j] + cell;
  }
  return out;
}

namespace {

template <class V>
V diff_impl(const Grid& g, const V& f, int order) {
  const int n = static_cast<int>(f.size());
  V d(n);
  const double h = g.h;
  if (order == 1) {
    const double c = 1.0 / (12.0 * h);
    for (int i = 2; i < n - 2; ++i) d[i] = c * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
    d[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    d[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    d[n - 1] = -c * (-25.0 * f[n - 1] + 48.0 * f[n - 2] - 36.0 * f[n - 3] + 16.0 * f[n - 4] - 3.0 * f[n - 5]);
    d[n - 2] = -c * (-3.0 * f[n - 1] - 10.0 * f[n - 2] + 18.0 * f[n - 3] - 6.0 * f[n - 4] + f[n - 5]);
    return d;
  }
  const double c = 1.0 / (12.0 * h * h);
  for (int i = 2; i < n - 2; ++i)
    d[i] = c * (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]);
  if (n >= 6) {
    d[0] = c * (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] + 61.0 * f[4] - 10.0 * f[5]);
    d[1] = c * (10.0 * f[0] - 15.0 * f[1] - 4.0 * f[2] + 14.0 * f[3] - 6.0 * f[4] + f[5]);
    d[n - 1] = c * (45.0 * f[n - 1] - 154.0 * f[n - 2] + 214.0 * f[n - 3] - 156.0 * f[n - 4] +
                    61.0 * f[n - 5] - 10.0 * f[n - 6]);
    d[n - 2] = c * (10.0 * f[n - 1] - 15.0 * f[n - 2] - 4.0 * f[n - 3] + 14.0 * f[n - 4] -
                    6.0 * f[n - 5] + f[n - 6]);
  } else {
    d[0] = c * (35.0 * f[0] - 104.0 * f[1] + 114.0 * f[2] - 56.0 * f[3] + 11.0 * f[4]);
    d[1] = c * (11.0 * f[0] - 20.0 * f[1] + 6.0 * f[2] + 4.0 * f[3] - f[4]);
    d[n - 1] = c * (35.0 * f[n - 1] - 104.0 * f[n - 2] + 114.0 * f[n - 3] - 56.0 * f[n - 4] + 11.0 * f[n - 5]);
    d[n - 2] = c * (11.0 * f[n - 1] - 20.0 * f[n - 2] + 6.0 * f[n - 3] + 4.0 * f[n - 4] - f[n - 5]);
  }
  return d;
}

}  // namespace

RVec differentiate(const Grid& g, const RVec& f, int order) {
  if (order != 1 && order != 2) {
    throw Error(ErrorKind::unsupported_order, kModule,
                "derivative order must be 1 or 2 (got " + std::to_string(order) + ")");
  }
  if (f.size() < 5) throw Error(ErrorKind::undersized_grid, kModule, "differentiation needs 5 samples");
  return diff_impl(g, f, order);
}

GridFunction differentiate(const GridFunction& f, int order) {
  if (order != 1 && order != 2) {
    throw Error(ErrorKind::unsupported_order, kModule,
                "derivative order must be 1 or 2 (got " + std::to_string(order) + ")");
  }
  if (f.size() < 5) throw Error(ErrorKind::undersized_grid, kModule, "differentiation needs 5 samples");
  return GridFunction(f.grid, diff_impl(f.grid, f.values, order));
}

cplx inner_product(const GridFunction& f, const GridFunction& g) {
  require_same_grid(f.grid, g.grid, kModule);
  return f.grid.h * f.values.dot(g.values);  // Eigen's dot conjugates the first argument
}

double l2_norm(const GridFunction& f) { return std::sqrt(f.grid.h) * f.values.norm(); }

double l2_norm(const Grid& g, const CVec& f) { return std::sqrt(g.h) * f.norm(); }

GridFunction normalized(const GridFunction& f) {
  double nrm = l2_norm(f);
  if (!(nrm > 0.0) || !std::isfinite(nrm)) {
    throw Error(ErrorKind::non_normalizable, kModule, "cannot normalize a zero or non-finite function");
  }
  return GridFunction(f.grid, f.values / nrm);
}

double doubling_ratio(const Grid& g, const std::function<RVec(const Grid&)>& log_density) {
  const Grid big = doubled_grid(g);
  RVec ld = log_density(big);
  if (ld.size() != big.n) throw Error(ErrorKind::grid_mismatch, kModule, "log density has the wrong length");
  const double c = 0.5 * (g.x_min + g.x_max);
  const double half = 0.5 * (g.x_max - g.x_min) + 1e-9 * g.h;
  double peak = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < ld.size(); ++i) {
    if (std::isnan(ld[i])) return std::numeric_limits<double>::infinity();
    peak = std::max(peak, ld[i]);
  }
  if (!std::isfinite(peak)) return std::numeric_limits<double>::infinity();
  double inner = 0.0, total = 0.0;
  for (int i = 0; i < big.n; ++i) {
    const double v = std::exp(ld[i] - peak);
    total += v;
    if (std::abs(big.x(i) - c) <= half) inner += v;
  }
  if (!(inner > 0.0)) return std::numeric_limits<double>::infinity();
  return total / inner;
}

// ---------------------------------------------------------------------------
// LinearDifferentialOperator

LinearDifferentialOperator::LinearDifferentialOperator(const Grid& g, int bandwidth) : grid_(g), bw_(bandwidth) {
  if (bandwidth < 0 || bandwidth > max_bandwidth) {
    throw Error(ErrorKind::invalid_argument, kModule,
                "operator bandwidth must lie in [0, 2] (got " + std::to_string(bandwidth) + ")");
  }
  bands_ = Eigen::MatrixXcd::Zero(2 * bw_ + 1, g.n);
}

LinearDifferentialOperator LinearDifferentialOperator::diagonal(const Grid& g, const CVec& d) {
  if (d.size() != g.n) throw Error(ErrorKind::grid_mismatch, kModule, "diagonal length does not match grid");
  LinearDifferentialOperator op(g, 0);
  op.bands_.row(0) = d.transpose();
  return op;
}

LinearDifferentialOperator LinearDifferentialOperator::diagonal(const Grid& g, const RVec& d) {
  return diagonal(g, CVec(d.cast<cplx>()));
}

cplx LinearDifferentialOperator::entry(int i, int j) const {
  int d = j - i + bw_;
  if (i < 0 || j < 0 || i >= grid_.n || j >= grid_.n || d < 0 || d > 2 * bw_) return cplx(0.0);
  return bands_(d, i);
}

void LinearDifferentialOperator::set(int i, int j, cplx v) {
  int d = j - i + bw_;
  if (i < 0 || j < 0 || i >= grid_.n || j >= grid_.n || d < 0 || d > 2 * bw_) {
    throw Error(ErrorKind::invalid_argument, kModule, "entry outside the band");
  }
  bands_(d, i) = v;
}

void LinearDifferentialOperator::add(int i, int j, cplx v) { set(i, j, entry(i, j) + v); }

CVec LinearDifferentialOperator::apply(const CVec& f) const {
  const int n = grid_.n;
  if (f.size() != n) throw Error(ErrorKind::grid_mismatch, kModule, "vector length does not match operator");
  CVec out = CVec::Zero(n);
  for (int i = 0; i < n; ++i) {
    cplx s = 0.0;
    const int lo = std::max(0, i - bw_);
    const int hi = std::min(n - 1, i + bw_);
    for (int j = lo; j <= hi; ++j) s += bands_(j - i + bw_, i) * f[j];
    out[i] = s;
  }
  return out;
}

GridFunction LinearDifferentialOperator::apply(const GridFunction& f) const {
  require_same_grid(grid_, f.grid, kModule);
  return GridFunction(grid_, apply(f.values));
}

LinearDifferentialOperator LinearDifferentialOperator::transpose() const {
  LinearDifferentialOperator t(grid_, bw_);
  t.dirichlet_ = dirichlet_;
  for (int i = 0; i < grid_.n; ++i)
    for (int j = std::max(0, i - bw_); j <= std::min(grid_.n - 1, i + bw_); ++j) t.set(j, i, entry(i, j));
  return t;
}

LinearDifferentialOperator LinearDifferentialOperator::adjoint() const {
  LinearDifferentialOperator t = transpose();
  t.bands_ = t.bands_.conjugate();
  return t;
}

LinearDifferentialOperator widen(const LinearDifferentialOperator& a, int bandwidth) {
  if (bandwidth <= a.bandwidth()) return a;
  LinearDifferentialOperator w(a.grid(), bandwidth);
  w.set_dirichlet(a.dirichlet());
  const int n = a.size();
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - a.bandwidth()); j <= std::min(n - 1, i + a.bandwidth()); ++j)
      w.set(i, j, a.entry(i, j));
  return w;
}

LinearDifferentialOperator LinearDifferentialOperator::operator+(const LinearDifferentialOperator& o) const {
  require_same_grid(grid_, o.grid_, kModule);
  const int bw = std::max(bw_, o.bw_);
  LinearDifferentialOperator a = widen(*this, bw);
  LinearDifferentialOperator b = widen(o, bw);
  a.bands_ += b.bands_;
  a.dirichlet_ = dirichlet_ || o.dirichlet_;
  return a;
}

LinearDifferentialOperator LinearDifferentialOperator::operator-(const LinearDifferentialOperator& o) const {
  return *this + o * cplx(-1.0);
}

LinearDifferentialOperator LinearDifferentialOperator::operator*(cplx s) const {
  LinearDifferentialOperator r = *this;
  r.bands_ *= s;
  return r;
}

bool LinearDifferentialOperator::symmetry_flag() const {
  const int n = grid_.n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j <= std::min(n - 1, i + bw_); ++j)
      if (entry(i, j) != entry(j, i)) return false;
  return true;
}

bool LinearDifferentialOperator::hermitian() const {
  const int n = grid_.n;
  for (int i = 0; i < n; ++i) {
    if (entry(i, i).imag() != 0.0) return false;
    for (int j = i + 1; j <= std::min(n - 1, i + bw_); ++j)
      if (entry(i, j) != std::conj(entry(j, i))) return false;
  }
  return true;
}

bool LinearDifferentialOperator::is_real() const { return bands_.imag().isZero(0.0); }

double LinearDifferentialOperator::norm_inf() const {
  double m = 0.0;
  const int n = grid_.n;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = std::max(0, i - bw_); j <= std::min(n - 1, i + bw_); ++j) s += std::abs(entry(i, j));
    m = std::max(m, s);
  }
  return m;
}

Eigen::MatrixXcd LinearDifferentialOperator::dense() const {
  const int n = grid_.n;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - bw_); j <= std::min(n - 1, i + bw_); ++j) a(i, j) = entry(i, j);
  return a;
}

LinearDifferentialOperator central_d1(const Grid& g) {
  LinearDifferentialOperator d(g, 2);
  const double c1 = 8.0 / (12.0 * g.h);
  const double c2 = 1.0 / (12.0 * g.h);
  for (int i = 0; i < g.n; ++i) {
    if (i + 1 < g.n) d.set(i, i + 1, c1);
    if (i - 1 >= 0) d.set(i, i - 1, -c1);
    if (i + 2 < g.n) d.set(i, i + 2, -c2);
    if (i - 2 >= 0) d.set(i, i - 2, c2);
  }
  return d;
}

}  // namespace pdm
