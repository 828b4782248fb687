#include "catch_amalgamated.hpp"

#include "pdm/numcore.hpp"

#include <cmath>

using namespace pdm;
using Catch::Matchers::WithinAbs;

namespace {

RVec sample(const Grid& g, double (*f)(double)) {
  RVec v(g.n);
  for (int i = 0; i < g.n; ++i) v[i] = f(g.x(i));
  return v;
}

}  // namespace

TEST_CASE("grid construction validates its arguments", "[numcore]") {
  const Grid g = make_grid(-1.0, 1.0, 5);
  CHECK(g.h == 0.5);
  CHECK(g.x(4) == 1.0);

  CHECK_THROWS_MATCHES(make_grid(1.0, -1.0, 11), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.kind() == ErrorKind::domain_order; }));
  CHECK_THROWS_MATCHES(make_grid(0.0, 1.0, 4), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.kind() == ErrorKind::undersized_grid; }));
}

TEST_CASE("midpoint and doubled grids keep the spacing", "[numcore]") {
  const Grid g = make_grid(-2.0, 2.0, 41);
  const Grid m = midpoint_grid(g);
  CHECK(m.n == 40);
  CHECK_THAT(m.x(0), WithinAbs(-2.0 + 0.05, 1e-15));
  const Grid d = doubled_grid(g);
  CHECK_THAT(d.h, WithinAbs(g.h, 1e-15));
  CHECK_THAT(d.x_max - d.x_min, WithinAbs(8.0, 1e-12));
  CHECK_THAT(0.5 * (d.x_min + d.x_max), WithinAbs(0.0, 1e-12));
}

TEST_CASE("quadrature integrates polynomials and smooth functions", "[numcore]") {
  // Simpson is exact for cubics: int_0^1 x^3 + x^2 dx = 1/4 + 1/3
  const Grid g = make_grid(0.0, 1.0, 11);
  const RVec f = sample(g, [](double x) { return x * x * x + x * x; });
  CHECK_THAT(integrate(g, f), WithinAbs(0.25 + 1.0 / 3.0, 1e-14));

  // int_{-8}^{8} exp(-x^2) dx = sqrt(pi) up to erfc(8) ~ 1e-29
  const Grid wide = make_grid(-8.0, 8.0, 801);
  CHECK_THAT(integrate(wide, sample(wide, [](double x) { return std::exp(-x * x); })), WithinAbs(std::sqrt(M_PI), 1e-12));

  const GridFunction gf = GridFunction::from_real(g, f);
  CHECK_THAT(integrate(gf).real(), WithinAbs(0.25 + 1.0 / 3.0, 1e-14));
}

TEST_CASE("running integral of cos reproduces sin", "[numcore]") {
  const Grid g = make_grid(0.0, 3.0, 301);
  const RVec c = cumulative_integral(g, sample(g, [](double x) { return std::cos(x); }));
  double err = 0.0;
  for (int i = 0; i < g.n; ++i) err = std::max(err, std::abs(c[i] - std::sin(g.x(i))));
  CHECK(c[0] == 0.0);
  CHECK(err < 1e-9);
}

TEST_CASE("fourth-order differences converge at fourth order", "[numcore]") {
  auto max_err = [](int n, int order) {
    const Grid g = make_grid(0.0, 2.0, n);
    const RVec d = differentiate(g, sample(g, [](double x) { return std::sin(x); }), order);
    double e = 0.0;
    for (int i = 0; i < g.n; ++i) {
      const double exact = order == 1 ? std::cos(g.x(i)) : -std::sin(g.x(i));
      e = std::max(e, std::abs(d[i] - exact));
    }
    return e;
  };
  const double e1 = max_err(41, 1), e1f = max_err(81, 1);
  CHECK(e1 < 1e-5);
  CHECK(e1 / e1f > 12.0);
  CHECK(max_err(81, 2) < 1e-4);
  CHECK_THROWS_AS(differentiate(make_grid(0.0, 1.0, 11), RVec::Zero(11), 3), Error);
}

TEST_CASE("central first-derivative matrix is antisymmetric", "[numcore]") {
  const Grid g = make_grid(-1.0, 1.0, 21);
  const LinearDifferentialOperator d = central_d1(g);
  CHECK(d.bandwidth() == 2);
  const LinearDifferentialOperator sum = d + d.transpose();
  CHECK(sum.norm_inf() == 0.0);
  // interior rows differentiate x^3 exactly
  RVec x3(g.n);
  for (int i = 0; i < g.n; ++i) x3[i] = std::pow(g.x(i), 3);
  const CVec dx3 = d.apply(CVec(x3.cast<cplx>()));
  for (int i = 2; i < g.n - 2; ++i) CHECK_THAT(dx3[i].real(), WithinAbs(3.0 * g.x(i) * g.x(i), 1e-12));
}

TEST_CASE("banded operator algebra and symmetry flags", "[numcore]") {
  const Grid g = make_grid(0.0, 1.0, 9);
  LinearDifferentialOperator a(g, 1);
  for (int i = 0; i < g.n; ++i) a.set(i, i, 2.0);
  for (int i = 0; i + 1 < g.n; ++i) {
    a.set(i, i + 1, -1.0);
    a.set(i + 1, i, -1.0);
  }
  CHECK(a.symmetry_flag());
  CHECK(a.is_real());
  a.set(0, 1, cplx(-1.0, 1e-3));
  CHECK_FALSE(a.symmetry_flag());
  CHECK_THROWS_AS(a.set(0, 3, 1.0), Error);
  CHECK_THROWS_AS(a.apply(CVec::Zero(4)), Error);
  const LinearDifferentialOperator w = widen(a, 2);
  CHECK(w.bandwidth() == 2);
  CHECK(w.entry(0, 1) == a.entry(0, 1));
}

TEST_CASE("eigensolver reproduces the discrete Dirichlet Laplacian", "[numcore]") {
  // tridiag(-1, 2, -1) on m interior nodes has eigenvalues 2 - 2 cos(k pi / (m + 1))
  const int n = 202;
  const int m = n - 2;
  const Grid g = make_grid(0.0, 1.0, n);
  LinearDifferentialOperator a(g, 1);
  for (int i = 1; i < n - 1; ++i) a.set(i, i, 2.0);
  for (int i = 1; i + 1 < n - 1; ++i) {
    a.set(i, i + 1, -1.0);
    a.set(i + 1, i, -1.0);
  }
  a.set_dirichlet(true);
  const SpectralResult s = solve_eig(a, 4);
  REQUIRE(s.k == 4);
  for (int k = 1; k <= 4; ++k) {
    CHECK_THAT(s.eigenvalues[k - 1], WithinAbs(2.0 - 2.0 * std::cos(k * M_PI / (m + 1)), 1e-12));
  }
  CHECK(s.max_residual < 1e-10);
  CHECK_THAT(l2_norm(s.eigenvectors[0]), WithinAbs(1.0, 1e-12));
}

TEST_CASE("eigensolver rejects non-symmetric operators", "[numcore]") {
  const Grid g = make_grid(0.0, 1.0, 11);
  LinearDifferentialOperator a = central_d1(g);
  CHECK_THROWS_MATCHES(solve_eig(a, 2), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.kind() == ErrorKind::non_symmetric; }));
}

TEST_CASE("inner products and normalization", "[numcore]") {
  const Grid g = make_grid(-6.0, 6.0, 601);
  const GridFunction f = GridFunction::from_real(g, sample(g, [](double x) { return std::exp(-x * x / 2); }));
  // int exp(-x^2) dx = sqrt(pi)
  CHECK_THAT(inner_product(f, f).real(), WithinAbs(std::sqrt(M_PI), 1e-6));
  CHECK_THAT(l2_norm(normalized(f)), WithinAbs(1.0, 1e-14));
  CHECK_THROWS_AS(normalized(GridFunction::zeros(g)), Error);
  CHECK_THROWS_AS(inner_product(f, GridFunction::zeros(make_grid(-6.0, 6.0, 11))), Error);
}

TEST_CASE("domain doubling separates decaying and flat densities", "[numcore]") {
  const Grid g = make_grid(-10.0, 10.0, 401);
  const double gauss = doubling_ratio(g, [](const Grid& gg) {
    RVec v(gg.n);
    for (int i = 0; i < gg.n; ++i) v[i] = -gg.x(i) * gg.x(i);
    return v;
  });
  const double flat = doubling_ratio(g, [](const Grid& gg) { return RVec(RVec::Zero(gg.n)); });
  CHECK_THAT(gauss, WithinAbs(1.0, 1e-12));
  CHECK_THAT(flat, WithinAbs(2.0, 1e-2));
}
