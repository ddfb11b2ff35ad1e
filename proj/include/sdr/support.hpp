#ifndef SDR_SUPPORT_HPP
#define SDR_SUPPORT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sdr/diffpoly.hpp"

namespace sdr {

// Coefficients of d_ij = sum_k c_k x_j^k, trailing zeros trimmed.
using SupportEntry = std::vector<Rational>;

int entry_degree(const SupportEntry& e);
std::string entry_str(const SupportEntry& e, int var);

// Monomial with rational exponents, used as a row label.
using RowLabel = std::map<DerivVar, Rational>;

struct SupportMatrix {
  int m = 0;
  int n = 0;
  std::vector<std::vector<SupportEntry>> entries;
  // cols[c] is the index j of the variable y_j held by column c.
  std::vector<int> cols;
  std::vector<RowLabel> rows;

  const SupportEntry& at(int r, int c) const { return entries[r][c]; }
  bool operator==(const SupportMatrix& o) const { return entries == o.entries && cols == o.cols; }
};

// Throws std::invalid_argument on U-family variables or indices above n.
SupportMatrix support_matrix(const std::vector<Monomial>& monomials, int n);
// Builds a matrix from raw entries (rows x cols); labels are derived from the entries.
SupportMatrix support_matrix_from_entries(const std::vector<std::vector<SupportEntry>>& entries);
// Entries regenerated from the row labels and column variables.
std::vector<std::vector<SupportEntry>> entries_from_labels(const SupportMatrix& a);

bool is_reduced(const SupportMatrix& a);

struct ElementaryOp {
  enum Kind { RowSwap, RowAdd, ColSwap };
  Kind kind;
  int a;
  int b;
  Rational q;  // RowAdd: row b += q * row a
};

void apply_op(SupportMatrix& a, const ElementaryOp& op);

// T-shape index (i, j) of the whole matrix: largest rank, then largest i.
std::optional<std::pair<int, int>> tshape_index(const SupportMatrix& a);

struct TShapeResult {
  SupportMatrix matrix;
  int i = 0;
  int j = 0;
  std::vector<ElementaryOp> trace;

  int rank() const { return i + j; }
};

TShapeResult rdm(const SupportMatrix& a);

int dtrdeg_monomials(const std::vector<Monomial>& monomials, int n);

// Rank after substituting random integers from [-2^16, 2^16] for x_1..x_n.
std::size_t random_rank(const SupportMatrix& a, std::uint64_t seed);

std::string matrix_str(const SupportMatrix& a);

}  // namespace sdr

#endif
