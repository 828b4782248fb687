#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdm {

using cplx = std::complex<double>;
using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;

enum class ErrorKind {
  domain_order,
  undersized_grid,
  unsupported_order,
  grid_mismatch,
  non_symmetric,
  eig_failure,
  nonpositive_mass,
  rejected_profile,
  alpha_range,
  non_normalizable,
  pole,
  degenerate_energy,
  nonzero_real_part,
  overflow,
  unknown_variant,
  singular_system,
  invalid_argument
};

// Library error carrying a machine-readable kind and the module that raised it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& message)
      : std::runtime_error(module + ": " + message), kind_(kind), module_(std::move(module)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& module() const { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

struct Grid {
  double x_min = 0.0;
  double x_max = 1.0;
  int n = 5;
  double h = 0.25;

  double x(int i) const { return x_min + h * i; }
  RVec nodes() const;
  bool operator==(const Grid& other) const {
    return x_min == other.x_min && x_max == other.x_max && n == other.n;
  }
};

Grid make_grid(double x_min, double x_max, int n);

// Grid of the n-1 cell midpoints of g. Not subject to the n >= 5 rule.
Grid midpoint_grid(const Grid& g);

// Same spacing as g, twice the length, same centre. Contains every node of g when g.n is odd.
Grid doubled_grid(const Grid& g);

struct GridFunction {
  Grid grid;
  CVec values;

  GridFunction() = default;
  GridFunction(const Grid& g, CVec v);
  static GridFunction from_real(const Grid& g, const RVec& v);
  static GridFunction zeros(const Grid& g);

  RVec real() const { return values.real(); }
  int size() const { return static_cast<int>(values.size()); }
  bool finite() const;
};

void require_finite(const GridFunction& f, const std::string& module, const std::string& what);
void require_same_grid(const Grid& a, const Grid& b, const std::string& module);

// Composite Simpson for odd n, trapezoid for even n.
cplx integrate(const GridFunction& f);
double integrate(const Grid& g, const RVec& f);

// Running integral from x_min using a fourth-order cubic rule on each cell.
RVec cumulative_integral(const Grid& g, const RVec& f);

// Fourth-order central differences with one-sided fourth-order boundary stencils.
GridFunction differentiate(const GridFunction& f, int order);
RVec differentiate(const Grid& g, const RVec& f, int order);

// Uniform-weight discrete inner product h * sum conj(f) g.
cplx inner_product(const GridFunction& f, const GridFunction& g);
double l2_norm(const GridFunction& f);
double l2_norm(const Grid& g, const CVec& f);
GridFunction normalized(const GridFunction& f);

// Domain-doubling test for square integrability. log_density(g) returns log|psi|^2 on the nodes of g.
// The result is the norm on the doubled box divided by the norm on the original box.
double doubling_ratio(const Grid& g, const std::function<RVec(const Grid&)>& log_density);

// Banded n x n matrix with at most two super- and sub-diagonals.
class LinearDifferentialOperator {
 public:
  static constexpr int max_bandwidth = 2;

  LinearDifferentialOperator() = default;
  LinearDifferentialOperator(const Grid& g, int bandwidth);

  static LinearDifferentialOperator diagonal(const Grid& g, const CVec& d);
  static LinearDifferentialOperator diagonal(const Grid& g, const RVec& d);

  const Grid& grid() const { return grid_; }
  int size() const { return grid_.n; }
  int bandwidth() const { return bw_; }

  // Dirichlet operators are solved on the interior block (nodes 1..n-2).
  bool dirichlet() const { return dirichlet_; }
  void set_dirichlet(bool d) { dirichlet_ = d; }

  cplx entry(int i, int j) const;
  void set(int i, int j, cplx v);
  void add(int i, int j, cplx v);

  CVec apply(const CVec& f) const;
  GridFunction apply(const GridFunction& f) const;

  LinearDifferentialOperator transpose() const;
  LinearDifferentialOperator adjoint() const;
  LinearDifferentialOperator operator+(const LinearDifferentialOperator& o) const;
  LinearDifferentialOperator operator-(const LinearDifferentialOperator& o) const;
  LinearDifferentialOperator operator*(cplx s) const;

  // Exact entrywise equality with the transpose.
  bool symmetry_flag() const;
  bool hermitian() const;
  bool is_real() const;
  double norm_inf() const;
  Eigen::MatrixXcd dense() const;

 private:
  Grid grid_{};
  int bw_ = 0;
  bool dirichlet_ = false;
  // bands_(d, i) holds A(i, i + d - bw_)
  Eigen::MatrixXcd bands_;
};

LinearDifferentialOperator widen(const LinearDifferentialOperator& a, int bandwidth);

// Antisymmetric fourth-order first-derivative matrix with zero extension outside the grid.
LinearDifferentialOperator central_d1(const Grid& g);

struct SpectralResult {
  RVec eigenvalues;
  std::vector<GridFunction> eigenvectors;
  int k = 0;
  double max_residual = 0.0;  // max ||Av - lambda v|| / ||A|| over returned pairs
};

SpectralResult solve_eig(const LinearDifferentialOperator& op, int k);

}  // namespace pdm
