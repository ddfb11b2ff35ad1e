#ifndef SDR_BOUNDS_HPP
#define SDR_BOUNDS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "sdr/essential.hpp"
#include "sdr/rational.hpp"
#include "sdr/system.hpp"

namespace sdr {

// Entries are orders or kNegInf.
using OrderMatrix = std::vector<std::vector<int>>;

OrderMatrix order_matrix(const DiffSystem& sys);
OrderMatrix delete_row(const OrderMatrix& a, int row);

// Maximal diagonal sum over min(m, n) entries in distinct rows and columns,
// kNegInf entries forbidden. kNegInf when no admissible selection exists.
int jacobi_number(const OrderMatrix& a);

// J_i = Jac(A with row i deleted), for every row i.
std::vector<int> jacobi_numbers(const OrderMatrix& a);

// Smallest k such that y_j^{(k)} occurs in some norm form; 0 for absent variables.
std::vector<int> lowest_orders(const DiffSystem& sys);

struct BoundReport {
  std::vector<int> jacobi;
  std::vector<int> modified;
  std::vector<int> alt_L;
  std::vector<int> alt_E;
  int gamma = 0;
  std::vector<int> subset;               // rank-essential subset
  std::optional<std::vector<int>> refined;  // from A_T when T is proper
  std::vector<int> bound;                // order bound per block
};

// Bounds readable from the order matrix alone; `low` defaults to all zeros.
BoundReport matrix_bounds(const OrderMatrix& a, std::vector<int> low = {});

// Throws std::domain_error for a non-essential system.
BoundReport order_bounds(const DiffSystem& sys, const EssentialOptions& opt = {});

// prod_i (m_i + 1)^{h_i + 1}.
Integer degree_bound(const DiffSystem& sys, const std::vector<int>& h);

// [m + 1 + sum_i (h_i + 1) deg(N_{i0})] d - m_i - 1 for each cofactor H_ij, j = 0..h_i.
std::vector<std::vector<std::int64_t>> cofactor_degree_bound(const DiffSystem& sys, const std::vector<int>& h,
                                                             int d);

// (s - s_i + 1) / m_i * prod_j m_j^{s - s_j + 1}; nullopt when some m_j is 0.
std::optional<Integer> bezout_block_bound(const DiffSystem& sys, int i);

}  // namespace sdr

#endif
