#include <doctest.h>

#include <map>
#include <random>

#include "sdr/diffpoly.hpp"
#include "sdr/parse.hpp"
#include "sdr/system.hpp"

using namespace sdr;

namespace {

DiffPoly P(const char* s) { return parse_poly(s); }

// Truncated power series used to evaluate polynomials independently of the symbolic derivative.
using Series = std::vector<Rational>;
constexpr int kLen = 10;

Series ser_mul(const Series& a, const Series& b) {
  Series c(kLen, 0);
  for (int i = 0; i < kLen; ++i)
    for (int j = 0; i + j < kLen; ++j) c[i + j] += a[i] * b[j];
  return c;
}

Series ser_deriv(const Series& a, int times) {
  Series c = a;
  for (int t = 0; t < times; ++t) {
    Series d(kLen, 0);
    for (int i = 0; i + 1 < kLen; ++i) d[i] = c[i + 1] * (i + 1);
    c = d;
  }
  return c;
}

Series eval(const DiffPoly& p, const std::map<DiffIndex, Series>& env) {
  Series acc(kLen, 0);
  for (const auto& [m, c] : p.terms()) {
    Series t(kLen, 0);
    t[0] = c;
    for (const auto& [v, e] : m.entries()) {
      Series base = ser_deriv(env.at(v.base), v.order);
      for (int k = 0; k < e; ++k) t = ser_mul(t, base);
    }
    for (int i = 0; i < kLen; ++i) acc[i] += t[i];
  }
  return acc;
}

DiffPoly random_poly(std::mt19937& rng, bool laurent = false) {
  std::uniform_int_distribution<int> nt(1, 4), var(0, 3), ord(0, 2), ex(laurent ? -2 : 0, 3), cf(-5, 5);
  DiffPoly p;
  int terms = nt(rng);
  for (int t = 0; t < terms; ++t) {
    std::vector<Monomial::Entry> es;
    int nv = 1 + var(rng) % 3;
    for (int k = 0; k < nv; ++k) {
      int which = var(rng);
      DerivVar v = which < 2 ? DerivVar::y(which + 1, ord(rng)) : DerivVar::u(which - 2, 1, ord(rng));
      es.emplace_back(v, ex(rng));
    }
    int c = cf(rng);
    p.add_term(Monomial::from_entries(es), c == 0 ? 1 : c);
  }
  return p;
}

std::map<DiffIndex, Series> random_env(std::mt19937& rng) {
  std::uniform_int_distribution<int> d(-4, 4);
  std::map<DiffIndex, Series> env;
  for (DiffIndex b : {DiffIndex::y(1), DiffIndex::y(2), DiffIndex::u(0, 1), DiffIndex::u(1, 1)}) {
    Series s(kLen);
    for (auto& c : s) c = d(rng);
    env[b] = s;
  }
  return env;
}

}  // namespace

TEST_CASE("monomial arithmetic and printing") {
  Monomial a = parse_monomial("y1*y2'^2");
  Monomial b = parse_monomial("y1^-1*y2^(5)");
  CHECK(a.degree() == 3);
  CHECK(b.degree() == 0);
  CHECK((a * b).str() == "y2'^2*y2^(5)");
  CHECK(b.has_negative_exponent());
  CHECK(a.weight() == 2);
  CHECK((a / a).is_one());
  CHECK(parse_monomial("u12'").str() == "u12'");
  CHECK(parse_monomial("u12_3").str() == "u12_3");
  CHECK_THROWS_AS(parse_monomial("u123"), ParseError);
}

TEST_CASE("term order is graded lex with larger variables first") {
  DiffPoly p = P("y1 + y2^2 + u00*y1 + 1");
  std::vector<std::string> order;
  for (const auto& [m, c] : p.terms()) order.push_back(m.str());
  REQUIRE(order.size() == 4);
  CHECK(order[0] == "u00*y1");
  CHECK(order[1] == "y2^2");
  CHECK(order[2] == "y1");
  CHECK(order[3] == "1");
}

TEST_CASE("differentiation of known polynomials") {
  CHECK(differentiate(P("y1^2")) == P("2*y1*y1'"));
  CHECK(differentiate(P("u00*y1'")) == P("u00'*y1' + u00*y1''"));
  CHECK(differentiate(P("y1^-1")) == P("-y1^-2*y1'"));
  CHECK(differentiate(P("3")) == DiffPoly());
  CHECK(differentiate(P("y1"), 5) == P("y1^(5)"));
  CHECK(differentiate(P("y1*y1'"), 2) == P("3*y1'*y1'' + y1*y1'''"));
}

TEST_CASE("differentiation matches series evaluation") {
  std::mt19937 rng(7);
  for (int it = 0; it < 150; ++it) {
    DiffPoly p = random_poly(rng);
    auto env = random_env(rng);
    Series lhs = eval(differentiate(p), env);
    Series rhs = ser_deriv(eval(p, env), 1);
    // The last coefficients lose precision through repeated derivatives.
    for (int i = 0; i < kLen - 4; ++i) CHECK(lhs[i] == rhs[i]);
  }
}

TEST_CASE("derivation is linear and satisfies the product rule") {
  std::mt19937 rng(11);
  for (int it = 0; it < 120; ++it) {
    DiffPoly f = random_poly(rng, true), g = random_poly(rng, true);
    Rational a(it % 7 - 3, 2);
    CHECK(differentiate(f * a + g) == differentiate(f) * a + differentiate(g));
    CHECK(differentiate(f * g) == differentiate(f) * g + f * differentiate(g));
  }
}

TEST_CASE("norm form examples") {
  NormForm nf = norm_form(P("u00*y1^-1*y2 + u01*y1*y2"));
  CHECK(nf.poly == P("u00 + u01*y1^2"));
  CHECK(nf.shift == parse_monomial("y1*y2^-1"));

  // A common positive factor is removed as well.
  nf = norm_form(P("y1^2*y2' + y1^3"));
  CHECK(nf.poly == P("y2' + y1"));
  CHECK(nf.shift == parse_monomial("y1^-2"));

  nf = norm_form(P("u00*y1'' + u01*y1''' + u02*y2'''"));
  CHECK(nf.shift.is_one());
  CHECK(order_in_y(nf.poly) == 3);

  CHECK_THROWS_WITH_AS(norm_form(DiffPoly()), "norm form undefined for 0", std::invalid_argument);
}

TEST_CASE("norm form agrees with brute-force minimal multiplier") {
  std::mt19937 rng(3);
  for (int it = 0; it < 100; ++it) {
    DiffPoly f = random_poly(rng, true);
    if (f.is_zero()) continue;
    NormForm nf = norm_form(f);
    // Oracle: among multipliers in a box, the norm form divides every polynomial multiple.
    std::vector<DerivVar> vars = f.variables();
    for (const auto& [m, c] : nf.poly.terms()) CHECK_FALSE(m.has_negative_exponent());
    for (const auto& v : vars) {
      bool all_have = true;
      bool any = false;
      for (const auto& [m, c] : nf.poly.terms()) {
        if (m.exponent(v) < 0) any = true;
        if (m.exponent(v) == 0) all_have = false;
      }
      CHECK_FALSE(any);
      CHECK_FALSE(all_have);
    }
    // Any multiplier making f polynomial is a monomial multiple of the shift.
    std::uniform_int_distribution<int> ex(0, 2);
    std::vector<Monomial::Entry> extra;
    for (const auto& v : vars) extra.emplace_back(v, ex(rng));
    Monomial t = nf.shift * Monomial::from_entries(extra);
    DiffPoly tf = f * t;
    for (const auto& [m, c] : tf.terms()) CHECK_FALSE(m.has_negative_exponent());
    CHECK(norm_form(tf).poly == nf.poly);
  }
}

TEST_CASE("order and degree queries") {
  DiffPoly p = P("u01*u10'' - u00*y1*y2''' + u12^(4)");
  CHECK(order_in(p, DiffIndex::u(1, 0)) == 2);
  CHECK(order_in(p, DiffIndex::u(0, 0)) == 0);
  CHECK(is_neg_inf(order_in(p, DiffIndex::u(2, 0))));
  CHECK(order_in_block(p, 1) == 4);
  CHECK(order_in_y(p) == 3);
  CHECK(lowest_order_in(p, DiffIndex::u(1, 2)) == 4);
  CHECK(degree_in_block(p, 0) == 1);
  CHECK(degree_in_y(p) == 2);
  CHECK(has_block(p, 1));
  CHECK_FALSE(has_block(p, 2));
}

TEST_CASE("Euler operators on homogeneous polynomials") {
  DiffPoly det = P("u00*u11*u22 - u00*u12*u21 - u01*u10*u22 + u01*u12*u20 + u02*u10*u21 - u02*u11*u20");
  for (int i = 0; i < 3; ++i) {
    CHECK(euler_apply(det, i, 0) == det);
    CHECK(euler_apply(det, i, 1).is_zero());
  }
  CHECK(euler_apply(P("u00^2"), 0, 0) == P("2*u00^2"));

  DiffPoly sr = P("u01*u10*u11*u10' - u01*u10^2*u11' + u00*u11^3");
  CHECK(euler_apply(sr, 0, 0) == sr);
  CHECK(euler_apply(sr, 1, 0) == sr * Rational(3));
  for (int r = 1; r <= 2; ++r) {
    CHECK(euler_apply(sr, 0, r).is_zero());
    CHECK(euler_apply(sr, 1, r).is_zero());
  }
  // Not homogeneous of the differential kind.
  CHECK_FALSE(euler_apply(P("u00*u00'"), 0, 1).is_zero());
}

TEST_CASE("substitution and primitive normalization") {
  DiffPoly p = P("y1^2 + y1*y2");
  CHECK(substitute(p, DerivVar::y(1), P("y2 + 1")) == P("2*y2^2 + 3*y2 + 1"));
  DiffPoly q = P("-2/3*u00 + 4/9*u01");
  Rational f = q.make_primitive();
  CHECK(q == P("3*u00 - 2*u01"));
  CHECK(f == Rational(-9, 2));
  CHECK(q.is_primitive());
}

TEST_CASE("system parsing reports positions") {
  const char* text =
      "# two unknowns\n"
      "vars y1 y2;\n"
      "P0: 1, y1*y1';\n"
      "P1: 1, y1;\n"
      "P2: 1, y2';\n";
  DiffSystem sys = parse_system(text);
  CHECK(sys.n == 2);
  CHECK(sys.l(0) == 1);
  CHECK(sys.supports[0][1].str() == "y1*y1'");
  CHECK(parse_system(print_system(sys)).supports == sys.supports);

  try {
    parse_system("vars y1;\nP0: 1, y1,\n   y1;\nP1: 1, y1';\n");
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 4);
  }
  CHECK_THROWS_AS(parse_system("vars y1;\nP0: 1, y3;\nP1: 1, y1;\n"), ParseError);
  CHECK_THROWS_AS(parse_system("vars y1;\nP0: 1, y1'';\n"), ParseError);
  CHECK_THROWS_AS(parse_system("vars y1;\nP0: 1, y1^(;\nP1: 1, y1;\n"), ParseError);
}

TEST_CASE("system norm forms and orders") {
  DiffSystem sys = parse_system("vars y1 y2; P0: y1'', y1''', y2'''; P1: y1'', y1''', y2'''; P2: y1'', y1''', y2''';");
  CHECK(sys.order(0) == 3);
  CHECK(sys.shift(0).is_one());
  DiffSystem lau = parse_system("vars y1; P0: y1^2, y1*y1'; P1: y1^-1, y1';");
  CHECK(lau.norm_monomial(0, 0).str() == "y1");
  CHECK(lau.norm_monomial(0, 1).str() == "y1'");
  CHECK(lau.norm_monomial(1, 1).str() == "y1*y1'");
  CHECK(lau.order(1) == 1);
  CHECK(lau.degree(1) == 2);
}

TEST_CASE("dense supports") {
  auto s = dense_support(1, 1, 2);
  REQUIRE(s.size() == 6);
  CHECK(s[0].is_one());
  DiffSystem sys;
  sys.n = 1;
  sys.supports = {dense_support(1, 1, 1), dense_support(1, 0, 2)};
  CHECK(is_dense(sys));
  sys.supports[1].erase(sys.supports[1].begin() + 1);
  CHECK_FALSE(is_dense(sys));
}
