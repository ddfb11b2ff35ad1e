#ifndef SDR_DIFFPOLY_HPP
#define SDR_DIFFPOLY_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sdr/rational.hpp"

namespace sdr {

enum class Family : std::uint8_t { U = 0, Y = 1 };

// y_j is (Y, j, 0); u_{ik} is (U, i, k).
struct DiffIndex {
  Family kind = Family::Y;
  int a = 0;
  int b = 0;

  static DiffIndex y(int j) { return {Family::Y, j, 0}; }
  static DiffIndex u(int i, int k) { return {Family::U, i, k}; }

  auto operator<=>(const DiffIndex&) const = default;
};

// Global variable order: U family first, then by index tuple, then by order.
struct DerivVar {
  DiffIndex base;
  int order = 0;

  static DerivVar y(int j, int order = 0) { return {DiffIndex::y(j), order}; }
  static DerivVar u(int i, int k, int order = 0) { return {DiffIndex::u(i, k), order}; }

  bool is_y() const { return base.kind == Family::Y; }
  bool is_u() const { return base.kind == Family::U; }
  DerivVar prime(int times = 1) const { return {base, order + times}; }

  auto operator<=>(const DerivVar&) const = default;
};

std::string var_name(const DerivVar& v);

class Monomial {
 public:
  using Entry = std::pair<DerivVar, std::int64_t>;

  Monomial() = default;
  explicit Monomial(const DerivVar& v, std::int64_t e = 1);
  // Entries may be unsorted and may repeat; zero exponents are dropped.
  static Monomial from_entries(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return exps_; }
  bool is_one() const { return exps_.empty(); }
  std::int64_t degree() const { return degree_; }
  std::int64_t exponent(const DerivVar& v) const;
  std::int64_t degree_in_family(Family f) const;
  std::int64_t degree_in_y(int j) const;
  std::int64_t degree_in_block(int i) const;
  // Sum of derivative orders weighted by exponents.
  std::int64_t weight() const;
  bool has_negative_exponent() const;
  bool only_y() const;
  bool only_u() const;

  Monomial operator*(const Monomial& o) const;
  Monomial inverse() const;
  Monomial pow(std::int64_t e) const;
  Monomial operator/(const Monomial& o) const { return *this * o.inverse(); }
  Monomial without(const DerivVar& v) const;

  bool operator==(const Monomial& o) const { return exps_ == o.exps_; }
  bool operator!=(const Monomial& o) const { return !(*this == o); }

  std::string str() const;

 private:
  std::vector<Entry> exps_;
  std::int64_t degree_ = 0;

  void recompute_degree();
};

// Lexicographic comparison under the global variable order, ignoring degree.
int lex_compare(const Monomial& a, const Monomial& b);

// Graded lexicographic order, leading (largest) term first.
struct TermOrder {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const;
};

class DiffPoly {
 public:
  using Terms = std::map<Monomial, Rational, TermOrder>;

  DiffPoly() = default;
  DiffPoly(const Rational& c);
  DiffPoly(const Monomial& m, const Rational& c = 1);
  static DiffPoly var(const DerivVar& v) { return DiffPoly(Monomial(v)); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Rational coeff(const Monomial& m) const;
  const Monomial& leading_monomial() const;
  const Rational& leading_coeff() const;

  void add_term(const Monomial& m, const Rational& c);

  DiffPoly operator+(const DiffPoly& o) const;
  DiffPoly operator-(const DiffPoly& o) const;
  DiffPoly operator-() const;
  DiffPoly operator*(const DiffPoly& o) const;
  DiffPoly operator*(const Rational& c) const;
  DiffPoly operator*(const Monomial& m) const;
  DiffPoly& operator+=(const DiffPoly& o);
  DiffPoly& operator-=(const DiffPoly& o);
  DiffPoly pow(unsigned e) const;

  bool operator==(const DiffPoly& o) const { return terms_ == o.terms_; }
  bool operator!=(const DiffPoly& o) const { return !(*this == o); }

  std::vector<DerivVar> variables() const;
  std::int64_t total_degree() const;
  bool only_u() const;
  bool only_y() const;
  bool is_homogeneous() const;

  // Multiplies by the lcm of denominators and divides by the integer content;
  // makes the leading coefficient positive. Returns the applied factor.
  Rational make_primitive();
  bool is_primitive() const;

  std::string str() const;

 private:
  Terms terms_;
};

DiffPoly operator*(const Rational& c, const DiffPoly& p);

DiffPoly differentiate(const DiffPoly& p);
DiffPoly differentiate(const DiffPoly& p, int times);
DiffPoly partial(const DiffPoly& p, const DerivVar& v);

struct NormForm {
  DiffPoly poly;
  Monomial shift;
};

NormForm norm_form(const DiffPoly& f);

// Highest derivative order of the given base in p, or kNegInf.
int order_in(const DiffPoly& p, const DiffIndex& base);
// Highest derivative order over all u_{ik} of block i, or kNegInf.
int order_in_block(const DiffPoly& p, int block);
// Highest derivative order over all Y variables, or kNegInf.
int order_in_y(const DiffPoly& p);
// Lowest derivative order of the given base present in p, or kNegInf.
int lowest_order_in(const DiffPoly& p, const DiffIndex& base);

std::int64_t degree_in_block(const DiffPoly& p, int block);
std::int64_t degree_in_y(const DiffPoly& p);
bool has_block(const DiffPoly& p, int block);

// Sum over k, j of C(k+r, r) u_{ij}^{(k)} * d p / d u_{ij}^{(k+r)}.
DiffPoly euler_apply(const DiffPoly& p, int block, int r);

// Substitutes a polynomial for every occurrence of one variable (nonnegative exponents only).
DiffPoly substitute(const DiffPoly& p, const DerivVar& v, const DiffPoly& value);

}  // namespace sdr

#endif
