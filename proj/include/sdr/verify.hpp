#ifndef SDR_VERIFY_HPP
#define SDR_VERIFY_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sdr/diffpoly.hpp"
#include "sdr/rational.hpp"
#include "sdr/system.hpp"

namespace sdr {

// sum_k c_k t^k mod t^K.
class Series {
 public:
  explicit Series(std::size_t K = 0) : c_(K) {}
  Series(std::vector<Rational> coeffs, std::size_t K);
  static Series constant(const Rational& c, std::size_t K);

  std::size_t K() const { return c_.size(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  const Rational& operator[](std::size_t k) const { return c_[k]; }
  bool is_unit() const { return !c_.empty() && sgn(c_[0]) != 0; }
  bool is_zero() const;
  // True when every coefficient below `prec` vanishes.
  bool vanishes_below(std::size_t prec) const;
  // Index of the first nonzero coefficient, or K.
  std::size_t valuation() const;

  Series operator+(const Series& o) const;
  Series operator-(const Series& o) const;
  Series operator-() const;
  Series operator*(const Series& o) const;
  Series operator*(const Rational& q) const;
  bool operator==(const Series& o) const { return c_ == o.c_; }

  Series derivative() const;
  // Throws std::domain_error when the constant term vanishes.
  Series reciprocal() const;
  Series pow(std::int64_t e) const;

  std::string str() const;

 private:
  std::vector<Rational> c_;
};

// Values of the base indeterminates; derivatives are taken by d/dt.
using SeriesPoint = std::map<DiffIndex, Series>;

// Throws std::invalid_argument for unassigned variables and std::domain_error
// naming the variable when a negative power meets a non-unit.
Series series_eval(const DiffPoly& p, const SeriesPoint& pt, std::size_t K);
Series series_eval(const Monomial& m, const SeriesPoint& pt, std::size_t K);

// max_i h_i + max_i s_i + 2 with h_i the order of sr in block i and s_i the order of P_i.
int verification_margin(const DiffPoly& sr, const DiffSystem& sys);

struct MembershipReport {
  bool pass = false;
  std::size_t K = 0;
  int margin = 0;
  std::vector<bool> trials;
  // Per trial, lowest t-power with a nonzero coefficient (K when none).
  std::vector<std::size_t> valuations;
};

// Evaluates sr at a random series point of the generic zero: u_{i0} -> zeta_i.
// Throws std::invalid_argument when K <= margin or sr is zero.
MembershipReport membership_check(const DiffPoly& sr, const DiffSystem& sys, std::size_t K = 12,
                                  int trials = 5, std::uint64_t seed = 1, int threads = 1);

struct HomogeneityReport {
  std::int64_t degree = 0;
  int order = 0;
  bool pass = false;
};

// Throws std::invalid_argument when block i does not occur in sr.
HomogeneityReport homogeneity_check(const DiffPoly& sr, int block);

struct SpanReport {
  // Columns alpha_{ik} - alpha_{i0}, k >= 1, as (i, k).
  std::vector<std::pair<int, int>> columns;
  std::vector<bool> in_span;  // per j = 1..n, stored at j - 1
  std::vector<std::optional<std::vector<Integer>>> witness;  // t_{jik} per column

  bool all() const;
};

SpanReport span_check(const DiffSystem& sys);

struct Recovery {
  bool ok = false;
  std::string hypothesis;  // failed hypothesis when refused
  std::string reason;
  std::size_t K = 0;
  int margin = 0;
  std::vector<Series> y;       // y_1..y_n
  std::vector<Series> ratios;  // M_{0k}/M_{00} for k = 1..l_0
  std::vector<Series> residuals;  // specialized P_i at y
};

// Candidate common solution from the values in sys.values; every u_{ik} must be assigned.
// Refusal hypotheses: "span", "order", "values", "vanishing", "nonvanishing", "unit";
// "residual" when the recovered point fails the specialized system.
Recovery recover_solution(const DiffPoly& sr, const DiffSystem& sys, std::size_t K = 12);

}  // namespace sdr

#endif
