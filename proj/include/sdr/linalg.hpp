#ifndef SDR_LINALG_HPP
#define SDR_LINALG_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sdr/rational.hpp"

namespace sdr {

// Arithmetic modulo a prime below 2^63.
struct ModField {
  using Elem = std::uint64_t;
  std::uint64_t p;

  explicit ModField(std::uint64_t prime) : p(prime) {}

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  bool is_zero(Elem a) const { return a == 0; }
  Elem add(Elem a, Elem b) const {
    Elem s = a + b;
    return s >= p ? s - p : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p - b; }
  Elem neg(Elem a) const { return a == 0 ? 0 : p - a; }
  Elem mul(Elem a, Elem b) const {
    return static_cast<Elem>(static_cast<unsigned __int128>(a) * b % p);
  }
  Elem inv(Elem a) const;
  Elem pow(Elem a, std::uint64_t e) const;
  Elem from_int(std::int64_t v) const;
  // Throws std::domain_error when the denominator vanishes mod p.
  Elem from_rational(const Rational& q) const;
};

struct RationalField {
  using Elem = Rational;

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  bool is_zero(const Elem& a) const { return sgn(a) == 0; }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem inv(const Elem& a) const { return 1 / a; }
  Elem from_int(std::int64_t v) const { return Rational(static_cast<long>(v)); }
  Elem from_rational(const Rational& q) const { return q; }
};

// The k-th prime below 2^62 counting downwards (k = 0 is the largest).
std::uint64_t large_prime(std::size_t k);

// Symmetric rational reconstruction of a modulo m; nullopt when no fraction
// with |num|, den below sqrt(m/2) exists.
std::optional<Rational> rational_reconstruct(const Integer& a, const Integer& m);

// Incremental CRT: combines (r mod m) with (r2 mod p) in place.
void crt_accumulate(Integer& r, Integer& m, std::uint64_t r2, std::uint64_t p);

template <class F>
using SparseVec = std::vector<std::pair<int, typename F::Elem>>;

// Column echelon form built one column at a time. Each stored vector has its
// smallest row index as pivot, normalized to 1. Every reduction is recorded so
// that dependencies can be expressed through the original columns.
template <class F>
class ColumnEchelon {
 public:
  using Elem = typename F::Elem;
  using Vec = SparseVec<F>;

  ColumnEchelon(const F& field, int nrows);

  // Adds column `id`; returns true when it is independent of the previous ones.
  // When dependent, the relation col_id = sum coef * col_j is available via last_relation().
  bool add(int id, const Vec& column);

  // Relation from the last dependent add, over original column ids.
  const std::vector<std::pair<int, Elem>>& last_relation() const { return relation_; }

  std::size_t rank() const { return basis_.size(); }
  std::size_t checkpoint() const { return basis_.size(); }
  void rollback(std::size_t mark);

 private:
  struct Stored {
    int id;
    Elem lead;  // scale applied before normalization
    Vec vec;    // normalized, vec[0] is the pivot with value 1
    std::vector<std::pair<int, Elem>> mult;  // (earlier stored index, factor)
  };

  F field_;
  int nrows_;
  std::vector<Stored> basis_;
  std::vector<int> pivot_of_row_;
  std::vector<std::pair<int, Elem>> relation_;

  // Reduces `column`; returns leftover and records the multipliers used.
  Vec reduce(const Vec& column, std::vector<std::pair<int, Elem>>& mult) const;
  void unwind(std::vector<Elem>& beta, std::vector<std::pair<int, Elem>>& out) const;
};

// Dense helpers.
template <class F>
using DenseMatrix = std::vector<std::vector<typename F::Elem>>;

template <class F>
std::size_t dense_rank(const F& field, DenseMatrix<F> a);

// Basis of the right kernel {x : A x = 0}; each vector has a 1 at its free column.
template <class F>
std::vector<std::vector<typename F::Elem>> dense_nullspace(const F& field, DenseMatrix<F> a, std::size_t ncols);

// Exact rank by fraction-free elimination.
std::size_t integer_rank(std::vector<std::vector<Integer>> a);
std::size_t rational_rank(const std::vector<std::vector<Rational>>& a);

// Sparse rational matrix in coordinate form: rows of (column, value).
struct SparseMatrix {
  int nrows = 0;
  int ncols = 0;
  std::vector<std::vector<std::pair<int, Rational>>> rows;
};

// Exact nullspace basis over Q. Tries several primes with rational
// reconstruction and exact verification, then falls back to elimination over Q.
// Each basis vector has coefficient 1 at its free column and 0 at the other free columns.
std::vector<std::vector<Rational>> nullspace(const SparseMatrix& a);

// A x for a sparse matrix.
std::vector<Rational> multiply(const SparseMatrix& a, const std::vector<Rational>& x);

}  // namespace sdr

#endif
