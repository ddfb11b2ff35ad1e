#ifndef SDR_SYSTEM_HPP
#define SDR_SYSTEM_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "sdr/diffpoly.hpp"

namespace sdr {

// n+1 supports in y_1..y_n; P_i = sum_k u_{ik} M_{ik}.
struct DiffSystem {
  int n = 0;
  std::vector<std::vector<Monomial>> supports;
  // Concrete values for selected u_{ik}, as truncated series coefficients (a constant is one entry).
  std::map<std::pair<int, int>, std::vector<Rational>> values;

  int size() const { return static_cast<int>(supports.size()); }
  int l(int i) const { return static_cast<int>(supports.at(i).size()) - 1; }

  // Throws std::invalid_argument describing the first violated invariant.
  void validate() const;

  DiffPoly generic(int i) const;
  // Norm form of P_i; the u-coefficients are never shifted.
  DiffPoly norm(int i) const;
  // Norm-form monomial N_{ik} = shift_i * M_{ik}.
  Monomial norm_monomial(int i, int k) const;
  Monomial shift(int i) const;
  Monomial quotient(int i, int k) const;

  // Effective order of P_i (order of its norm form), or kNegInf.
  int order(int i) const;
  // Total degree of P_i^N in Y.
  std::int64_t degree(int i) const;

  // The subsystem on the given indices, renumbered 0..|T|-1.
  DiffSystem restrict_to(const std::vector<int>& idx) const;
};

// Full support of all monomials in y_1..y_n of orders <= s and total degree <= m,
// ordered with the unit monomial first.
std::vector<Monomial> dense_support(int n, int s, int m);

// True when every support is dense for its own order and degree.
bool is_dense(const DiffSystem& sys);

}  // namespace sdr

#endif
