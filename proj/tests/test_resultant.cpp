#include <doctest.h>

#include <set>

#include "sdr/bounds.hpp"
#include "sdr/parse.hpp"
#include "sdr/resultant.hpp"

using namespace sdr;

namespace {

const char* kDeterminant = "vars y1 y2; P0: y1'', y1''', y2'''; P1: y1'', y1''', y2'''; P2: y1'', y1''', y2''';";
// P2 carries its own coefficients u20, u21, not those of P1.
const char* kFreeOfP2 = "vars y1 y2; P0: 1, y1*y1'; P1: 1, y1; P2: 1, y2';";
const char* kLaurentTriple = "vars y1 y2; P0: 1, y1*y2; P1: 1, y1*y2'; P2: 1, y1'*y2';";
const char* kQuadraticPair = "vars y1; P0: y1, y1', y1^2; P1: y1, y1', y1^2;";
const char* kNegInfBlock = "vars y1 y2; P0: 1, y1; P1: 1, y1; P2: 1, y2;";

DiffPoly u(int i, int k, int order = 0) { return DiffPoly::var(DerivVar::u(i, k, order)); }

DiffPoly det(const std::vector<std::vector<DiffPoly>>& a) {
  std::size_t n = a.size();
  if (n == 1) return a[0][0];
  DiffPoly out;
  for (std::size_t c = 0; c < n; ++c) {
    if (a[0][c].is_zero()) continue;
    std::vector<std::vector<DiffPoly>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<DiffPoly> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(row);
    }
    DiffPoly t = a[0][c] * det(minor);
    out += c % 2 == 0 ? t : -t;
  }
  return out;
}

DiffPoly primitive(DiffPoly p) {
  p.make_primitive();
  return p;
}

bool same_up_to_sign(const DiffPoly& a, const DiffPoly& b) { return a == b || a == -b; }

void check_block_homogeneous(const DiffPoly& p, int blocks) {
  REQUIRE_FALSE(p.is_zero());
  const Monomial& first = p.terms().begin()->first;
  for (const auto& [m, c] : p.terms())
    for (int i = 0; i < blocks; ++i) CHECK(m.degree_in_block(i) == first.degree_in_block(i));
}

std::vector<int> realized_orders(const DiffPoly& p, int blocks) {
  std::vector<int> h(blocks, kNegInf);
  for (const auto& [m, c] : p.terms())
    for (const auto& [v, e] : m.entries()) h[v.base.a] = std::max(h[v.base.a], v.order);
  return h;
}

}  // namespace

TEST_CASE("determinant system gives the coefficient determinant") {
  auto sys = parse_system(kDeterminant);
  auto cert = sdresultant(sys);
  std::vector<std::vector<DiffPoly>> m(3, std::vector<DiffPoly>(3));
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) m[i][k] = u(i, k);
  CHECK(cert.sr == primitive(det(m)));
  CHECK(cert.h == std::vector<int>{0, 0, 0});
  CHECK(cert.d == 3);
  CHECK(cert.verified);
  CHECK(check_certificate(sys, cert));
  CHECK(cert.c0_dimension == 1);
}

TEST_CASE("system whose resultant is free of one polynomial") {
  auto sys = parse_system(kFreeOfP2);
  auto cert = sdresultant(sys);
  auto expect = parse_poly("u00*u11^3 - u01*u10^2*u11' + u01*u10*u10'*u11");
  CHECK(same_up_to_sign(cert.sr, expect));
  CHECK(cert.h[0] == 0);
  CHECK(cert.h[1] == 1);
  CHECK(cert.h[2] == kNegInf);
  CHECK(cert.d == 4);
  CHECK(check_certificate(sys, cert));
  for (const auto& [m, c] : cert.sr.terms()) CHECK(m.degree_in_block(2) == 0);
}

TEST_CASE("Laurent triple") {
  auto sys = parse_system(kLaurentTriple);
  auto cert = sdresultant(sys);
  auto expect = parse_poly(
      "u00*u01*u11^2*u20 + u00*u01'*u10*u11*u21 - u00'*u01*u10*u11*u21 + u01^2*u10^2*u21");
  CHECK(same_up_to_sign(cert.sr, expect));
  CHECK(cert.h == std::vector<int>{1, 0, 0});
  CHECK(cert.d == 5);
  CHECK(check_certificate(sys, cert));
}

TEST_CASE("quadratic pair in one variable") {
  auto sys = parse_system(kQuadraticPair);
  auto cert = sdresultant(sys);
  auto expect = parse_poly(
      "-u12*u01*u00*u10 - u12*u01^2*u10' + u12*u01*u11'*u00 + u12*u01*u11*u00' - u11*u02*u00*u10"
      " + u11*u02*u10'*u01 + u02*u01*u10^2 - u11^2*u02*u00' + u11*u02*u01'*u10 + u11*u00^2*u12"
      " + u11^2*u02'*u00 - u11*u02'*u01*u10 - u11*u01*u12'*u00 + u01^2*u12'*u10 - u11*u01'*u12*u00"
      " - u11'*u02*u01*u10");
  CHECK(expect.size() == 16);
  CHECK(same_up_to_sign(cert.sr, expect));
  CHECK(cert.h == std::vector<int>{1, 1});
  CHECK(cert.d == 4);
  CHECK(check_certificate(sys, cert));
}

TEST_CASE("block with no admissible order") {
  auto sys = parse_system(kNegInfBlock);
  auto cert = sdresultant(sys);
  CHECK(same_up_to_sign(cert.sr, u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0)));
  CHECK(cert.h[2] == kNegInf);
}

TEST_CASE("certificate identity and perturbation") {
  auto sys = parse_system(kFreeOfP2);
  auto cert = sdresultant(sys);
  CHECK(certificate_residual(sys, cert).is_zero());
  auto bad = cert;
  bad.sr += u(0, 0);
  CHECK_FALSE(check_certificate(sys, bad));
  bad = cert;
  bad.cofactors[1][0] += DiffPoly(Rational(1));
  CHECK_FALSE(check_certificate(sys, bad));
}

TEST_CASE("linear system solutions at fixed order and degree") {
  auto sys = parse_system(kFreeOfP2);
  std::vector<int> h{0, 1, kNegInf};
  auto ls = build_linear_system(sys, h, 4, 12);
  auto sols = ansatz_solutions(ls);
  REQUIRE(sols.size() == 1);
  CHECK(sols[0] == sdresultant(sys).sr);
  CHECK(ls.matrix.ncols == static_cast<int>(ls.c0.size() + ls.cofactor_unknowns));

  auto det_sys = parse_system(kDeterminant);
  for (int d = 1; d <= 3; ++d) {
    auto cap = cofactor_degree_bound(det_sys, {0, 0, 0}, d)[0][0];
    auto sols = ansatz_solutions(build_linear_system(det_sys, {0, 0, 0}, d, static_cast<int>(cap)));
    CHECK(sols.size() == (d == 3 ? 1u : 0u));
  }
}

TEST_CASE("dense resultants agree with classical determinants") {
  SUBCASE("two linear polynomials of order zero") {
    auto sys = parse_system("vars y1; P0: 1, y1; P1: 1, y1;");
    auto cert = dresultant(sys);
    CHECK(same_up_to_sign(cert.sr, u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0)));
    CHECK(cert.sr == sdresultant(sys).sr);
  }
  SUBCASE("two quadratics of order zero") {
    auto sys = parse_system("vars y1; P0: 1, y1, y1^2; P1: 1, y1, y1^2;");
    DiffPoly z;
    std::vector<std::vector<DiffPoly>> syl{{u(0, 2), u(0, 1), u(0, 0), z},
                                           {z, u(0, 2), u(0, 1), u(0, 0)},
                                           {u(1, 2), u(1, 1), u(1, 0), z},
                                           {z, u(1, 2), u(1, 1), u(1, 0)}};
    auto cert = dresultant(sys);
    CHECK(same_up_to_sign(cert.sr, primitive(det(syl))));
    CHECK(cert.sr == sdresultant(sys).sr);
    CHECK(cert.d == 4);
  }
  SUBCASE("two linear polynomials of order one") {
    auto sys = parse_system("vars y1; P0: 1, y1, y1'; P1: 1, y1, y1';");
    DiffPoly z;
    // Columns 1, y, y', y'' for P0, P0', P1, P1'.
    std::vector<std::vector<DiffPoly>> m{{u(0, 0), u(0, 1), u(0, 2), z},
                                         {u(0, 0, 1), u(0, 1, 1), u(0, 1) + u(0, 2, 1), u(0, 2)},
                                         {u(1, 0), u(1, 1), u(1, 2), z},
                                         {u(1, 0, 1), u(1, 1, 1), u(1, 1) + u(1, 2, 1), u(1, 2)}};
    auto cert = dresultant(sys);
    CHECK(same_up_to_sign(cert.sr, primitive(det(m))));
    CHECK(cert.sr == sdresultant(sys).sr);
    CHECK(cert.h == std::vector<int>{1, 1});
  }
  CHECK_THROWS_AS(dresultant(parse_system(kFreeOfP2)), std::invalid_argument);
}

TEST_CASE("non-essential systems are refused") {
  auto sys = parse_system("vars y1 y2; P0: 1, y1; P1: 1, y1; P2: 1, y1;");
  CHECK_THROWS_AS(sdresultant(sys), std::domain_error);
}

TEST_CASE("resource cap") {
  SolverOptions opt;
  opt.max_columns = 3;
  CHECK_THROWS_AS(sdresultant(parse_system(kQuadraticPair), opt), ResourceError);
}

TEST_CASE("results do not depend on backend, threads or filters") {
  for (const char* text : {kDeterminant, kFreeOfP2, kLaurentTriple, kQuadraticPair}) {
    CAPTURE(text);
    auto sys = parse_system(text);
    auto base = sdresultant(sys);
    std::vector<SolverOptions> variants(5);
    variants[4].cofactor_start = 3;
    variants[0].threads = 2;
    variants[1].jacobian_filter = false;
    variants[1].max_degree = base.d;
    variants[2].exact = true;
    variants[3].seed = 99;
    for (const auto& opt : variants) {
      auto c = sdresultant(sys, opt);
      CHECK(c.sr == base.sr);
      CHECK(c.h == base.h);
      CHECK(c.d == base.d);
      CHECK(c.lhs == base.lhs);
      CHECK(check_certificate(sys, c));
    }
  }
}

TEST_CASE("resultants respect the order and degree bounds") {
  for (const char* text : {kDeterminant, kFreeOfP2, kLaurentTriple, kQuadraticPair, kNegInfBlock}) {
    CAPTURE(text);
    auto sys = parse_system(text);
    auto cert = sdresultant(sys);
    auto bounds = order_bounds(sys);
    auto realized = realized_orders(cert.sr, sys.size());
    for (int i = 0; i < sys.size(); ++i) {
      CHECK(realized[i] <= cert.h[i]);
      CHECK(cert.h[i] <= bounds.bound[i]);
    }
    CHECK(Integer(cert.d) <= degree_bound(sys, cert.h));
    check_block_homogeneous(cert.sr, sys.size());
    CHECK(cert.sr.only_u());
    CHECK(cert.sr.is_homogeneous());
    CHECK(cert.sr.total_degree() == cert.d);
    CHECK(cert.c0_dimension == 1);
    CHECK(cert.warnings.empty());
    Integer g = 0;
    for (const auto& [m, c] : cert.sr.terms()) {
      CHECK(c.get_den() == 1);
      g = gcd(g, c.get_num());
    }
    CHECK(g == 1);
    CHECK(sgn(cert.sr.leading_coeff()) > 0);
  }
}

TEST_CASE("prolongation shape") {
  auto sys = parse_system(kFreeOfP2);
  auto pro = prolong(sys, {0, 1, kNegInf});
  REQUIRE(pro.polys.size() == 3);
  CHECK(pro.polys[0].size() == 1);
  CHECK(pro.polys[1].size() == 2);
  CHECK(pro.polys[2].empty());
  CHECK(pro.polys[1][1] == differentiate(pro.polys[1][0]));
  std::set<DerivVar> ys(pro.yvars.begin(), pro.yvars.end());
  CHECK(ys.size() == pro.yvars.size());
}
