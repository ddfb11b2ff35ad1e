#ifndef SDR_RESULTANT_HPP
#define SDR_RESULTANT_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdr/diffpoly.hpp"
#include "sdr/linalg.hpp"
#include "sdr/system.hpp"

namespace sdr {

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Derivatives (P_i^N)^{(l)}, l = 0..h_i, for the blocks with h_i >= 0.
struct Prolongation {
  std::vector<int> h;      // kNegInf for unused blocks
  std::vector<int> pivot;  // index k of the lowest-degree N_{ik}
  int top = 0;             // largest Y order needed: max_i (h_i + e_i)
  std::vector<std::vector<DiffPoly>> polys;
  std::vector<DerivVar> yvars;
  std::vector<DerivVar> uvars;
};

Prolongation prolong(const DiffSystem& sys, const std::vector<int>& h);

struct SolverOptions {
  int max_order = -1;   // cap on sum h_i; -1 follows the bounds
  int max_degree = -1;  // cap on d; -1 follows the degree bound
  int cofactor_start = 0;
  int threads = 1;
  std::uint64_t seed = 1;
  std::size_t budget = 10000;  // selection budget for the essentiality checks
  std::size_t max_columns = 4000000;
  bool rank_essential = true;
  bool jacobian_filter = true;
  bool exact = false;  // skip the modular backend
};

struct ResultantCertificate {
  DiffPoly sr;
  std::vector<int> h;  // per block of the input system
  int d = 0;
  std::vector<int> pivot;
  Monomial lhs;
  std::vector<std::vector<DiffPoly>> cofactors;  // H_ij per block, j = 0..h_i
  std::size_t c0_dimension = 0;
  std::vector<std::string> warnings;
  std::size_t columns = 0;
  std::size_t rows = 0;
  bool verified = false;
};

// Recomputes lhs * sr - sum H_ij (P_i^N)^{(j)} by full expansion.
DiffPoly certificate_residual(const DiffSystem& sys, const ResultantCertificate& cert);
bool check_certificate(const DiffSystem& sys, const ResultantCertificate& cert);

struct LinearSystem {
  SparseMatrix matrix;
  std::vector<Monomial> c0;  // unknowns 0..c0.size()-1
  std::size_t cofactor_unknowns = 0;
};

// The homogeneous system lhs * SR_0 - sum H_ij (P_i^N)^{(j)} = 0 with SR_0 of degree d
// over U^{[h]} and cofactors of degree <= cofdeg. Cofactor monomials whose grade
// cannot meet any ansatz monomial are left out.
LinearSystem build_linear_system(const DiffSystem& sys, const std::vector<int>& h, int d, int cofdeg);

// Dimension of the projection of the solution space onto the c_0 unknowns, with a basis.
std::vector<DiffPoly> ansatz_solutions(const LinearSystem& ls);

// Throws std::domain_error when the system is not essential.
ResultantCertificate sdresultant(const DiffSystem& sys, const SolverOptions& opt = {});

// Dense generic systems only; throws std::invalid_argument otherwise.
ResultantCertificate dresultant(const DiffSystem& sys, const SolverOptions& opt = {});

}  // namespace sdr

#endif
