#include "sdr/linalg.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace sdr {

ModField::Elem ModField::pow(Elem a, std::uint64_t e) const {
  Elem r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

ModField::Elem ModField::inv(Elem a) const {
  if (a == 0) throw std::domain_error("inverse of zero mod p");
  return pow(a, p - 2);
}

ModField::Elem ModField::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p);
  if (r < 0) r += static_cast<std::int64_t>(p);
  return static_cast<Elem>(r);
}

ModField::Elem ModField::from_rational(const Rational& q) const {
  Integer pp;
  mpz_set_ui(pp.get_mpz_t(), p);
  Integer n = q.get_num() % pp, d = q.get_den() % pp;
  if (n < 0) n += pp;
  if (d == 0) throw std::domain_error("denominator vanishes mod p");
  Elem ne = mpz_get_ui(n.get_mpz_t()), de = mpz_get_ui(d.get_mpz_t());
  return mul(ne, inv(de));
}

std::uint64_t large_prime(std::size_t k) {
  static std::mutex mu;
  static std::vector<std::uint64_t> primes;
  std::lock_guard<std::mutex> lock(mu);
  Integer c;
  std::uint64_t start = primes.empty() ? (std::uint64_t{1} << 62) - 1 : primes.back() - 2;
  while (primes.size() <= k) {
    mpz_set_ui(c.get_mpz_t(), start);
    if (mpz_probab_prime_p(c.get_mpz_t(), 30)) primes.push_back(start);
    start -= 2;
  }
  return primes[k];
}

std::optional<Rational> rational_reconstruct(const Integer& a, const Integer& m) {
  Integer bound;
  Integer half = m / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  Integer r0 = m, r1 = a % m;
  if (r1 < 0) r1 += m;
  Integer t0 = 0, t1 = 1;
  while (r1 > bound) {
    Integer q = r0 / r1;
    Integer r2 = r0 - q * r1;
    Integer t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  Integer g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
  if (g != 1) return std::nullopt;
  Rational out(r1, t1);
  out.canonicalize();
  return out;
}

void crt_accumulate(Integer& r, Integer& m, std::uint64_t r2, std::uint64_t p) {
  Integer pp, rr;
  mpz_set_ui(pp.get_mpz_t(), p);
  mpz_set_ui(rr.get_mpz_t(), r2);
  if (m == 0 || m == 1) {
    r = rr;
    m = pp;
    return;
  }
  // r + m * ((r2 - r) * m^{-1} mod p)
  Integer minv, diff = (rr - r) % pp;
  if (diff < 0) diff += pp;
  mpz_invert(minv.get_mpz_t(), m.get_mpz_t(), pp.get_mpz_t());
  Integer t = diff * minv % pp;
  r += m * t;
  m *= pp;
}

// ---------------------------------------------------------------- ColumnEchelon

template <class F>
ColumnEchelon<F>::ColumnEchelon(const F& field, int nrows) : field_(field), nrows_(nrows), pivot_of_row_(nrows, -1) {}

template <class F>
typename ColumnEchelon<F>::Vec ColumnEchelon<F>::reduce(const Vec& column,
                                                        std::vector<std::pair<int, Elem>>& mult) const {
  std::map<int, Elem> acc;
  for (const auto& [r, v] : column) {
    if (r < 0 || r >= nrows_) throw std::out_of_range("row index outside echelon");
    if (!field_.is_zero(v)) acc[r] = v;
  }
  auto it = acc.begin();
  while (it != acc.end()) {
    int r = it->first;
    int s = pivot_of_row_[r];
    if (s < 0) {
      ++it;
      continue;
    }
    Elem f = it->second;
    mult.emplace_back(s, f);
    for (const auto& [row, val] : basis_[s].vec) {
      auto jt = acc.find(row);
      Elem nv = field_.neg(field_.mul(f, val));
      if (jt == acc.end()) {
        acc.emplace(row, nv);
      } else {
        jt->second = field_.add(jt->second, nv);
        if (field_.is_zero(jt->second)) acc.erase(jt);
      }
    }
    it = acc.lower_bound(r);
  }
  return Vec(acc.begin(), acc.end());
}

template <class F>
void ColumnEchelon<F>::unwind(std::vector<Elem>& beta, std::vector<std::pair<int, Elem>>& out) const {
  out.clear();
  for (int s = static_cast<int>(basis_.size()) - 1; s >= 0; --s) {
    if (field_.is_zero(beta[s])) continue;
    Elem c = field_.mul(beta[s], field_.inv(basis_[s].lead));
    out.emplace_back(basis_[s].id, c);
    for (const auto& [t, f] : basis_[s].mult) beta[t] = field_.sub(beta[t], field_.mul(c, f));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
}

template <class F>
bool ColumnEchelon<F>::add(int id, const Vec& column) {
  std::vector<std::pair<int, Elem>> mult;
  Vec left = reduce(column, mult);
  if (left.empty()) {
    std::vector<Elem> beta(basis_.size(), field_.zero());
    for (const auto& [s, f] : mult) beta[s] = field_.add(beta[s], f);
    unwind(beta, relation_);
    return false;
  }
  Elem lead = left.front().second;
  Elem li = field_.inv(lead);
  for (auto& [r, v] : left) v = field_.mul(v, li);
  pivot_of_row_[left.front().first] = static_cast<int>(basis_.size());
  basis_.push_back(Stored{id, lead, std::move(left), std::move(mult)});
  return true;
}

template <class F>
void ColumnEchelon<F>::rollback(std::size_t mark) {
  while (basis_.size() > mark) {
    pivot_of_row_[basis_.back().vec.front().first] = -1;
    basis_.pop_back();
  }
}

template class ColumnEchelon<ModField>;
template class ColumnEchelon<RationalField>;

// ---------------------------------------------------------------- dense

template <class F>
std::size_t dense_rank(const F& field, DenseMatrix<F> a) {
  std::size_t rank = 0;
  if (a.empty()) return 0;
  std::size_t cols = a[0].size();
  for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
    std::size_t piv = rank;
    while (piv < a.size() && field.is_zero(a[piv][c])) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[rank]);
    auto inv = field.inv(a[rank][c]);
    for (std::size_t r = rank + 1; r < a.size(); ++r) {
      if (field.is_zero(a[r][c])) continue;
      auto f = field.mul(a[r][c], inv);
      for (std::size_t k = c; k < cols; ++k) a[r][k] = field.sub(a[r][k], field.mul(f, a[rank][k]));
    }
    ++rank;
  }
  return rank;
}

template <class F>
std::vector<std::vector<typename F::Elem>> dense_nullspace(const F& field, DenseMatrix<F> a, std::size_t ncols) {
  std::vector<std::size_t> pivcol;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < ncols && rank < a.size(); ++c) {
    std::size_t piv = rank;
    while (piv < a.size() && field.is_zero(a[piv][c])) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[rank]);
    auto inv = field.inv(a[rank][c]);
    for (std::size_t k = c; k < ncols; ++k) a[rank][k] = field.mul(a[rank][k], inv);
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == rank || field.is_zero(a[r][c])) continue;
      auto f = a[r][c];
      for (std::size_t k = c; k < ncols; ++k) a[r][k] = field.sub(a[r][k], field.mul(f, a[rank][k]));
    }
    pivcol.push_back(c);
    ++rank;
  }
  std::vector<bool> is_piv(ncols, false);
  for (auto c : pivcol) is_piv[c] = true;
  std::vector<std::vector<typename F::Elem>> out;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_piv[f]) continue;
    std::vector<typename F::Elem> v(ncols, field.zero());
    v[f] = field.one();
    for (std::size_t r = 0; r < pivcol.size(); ++r) v[pivcol[r]] = field.neg(a[r][f]);
    out.push_back(std::move(v));
  }
  return out;
}

template std::size_t dense_rank<ModField>(const ModField&, DenseMatrix<ModField>);
template std::size_t dense_rank<RationalField>(const RationalField&, DenseMatrix<RationalField>);
template std::vector<std::vector<ModField::Elem>> dense_nullspace<ModField>(const ModField&, DenseMatrix<ModField>,
                                                                            std::size_t);
template std::vector<std::vector<Rational>> dense_nullspace<RationalField>(const RationalField&,
                                                                           DenseMatrix<RationalField>, std::size_t);

std::size_t integer_rank(std::vector<std::vector<Integer>> a) {
  if (a.empty()) return 0;
  std::size_t m = a.size(), n = a[0].size();
  std::size_t rank = 0;
  Integer prev = 1;
  for (std::size_t c = 0; c < n && rank < m; ++c) {
    std::size_t piv = rank;
    while (piv < m && a[piv][c] == 0) ++piv;
    if (piv == m) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t r = rank + 1; r < m; ++r) {
      for (std::size_t k = c + 1; k < n; ++k) {
        a[r][k] = a[rank][c] * a[r][k] - a[r][c] * a[rank][k];
        mpz_divexact(a[r][k].get_mpz_t(), a[r][k].get_mpz_t(), prev.get_mpz_t());
      }
      a[r][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

std::size_t rational_rank(const std::vector<std::vector<Rational>>& a) {
  std::vector<std::vector<Integer>> z;
  for (const auto& row : a) {
    Integer l = 1;
    for (const auto& q : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    std::vector<Integer> zr;
    for (const auto& q : row) zr.push_back(q.get_num() * (l / q.get_den()));
    z.push_back(std::move(zr));
  }
  return integer_rank(std::move(z));
}

// ---------------------------------------------------------------- nullspace

std::vector<Rational> multiply(const SparseMatrix& a, const std::vector<Rational>& x) {
  std::vector<Rational> y(a.nrows);
  for (int r = 0; r < a.nrows; ++r)
    for (const auto& [c, v] : a.rows[r]) y[r] += v * x.at(c);
  return y;
}

namespace {

template <class F>
std::vector<std::vector<std::pair<int, typename F::Elem>>> columns_of(const F& field, const SparseMatrix& a) {
  std::vector<std::vector<std::pair<int, typename F::Elem>>> cols(a.ncols);
  for (int r = 0; r < a.nrows; ++r)
    for (const auto& [c, v] : a.rows[r]) {
      auto e = field.from_rational(v);
      if (!field.is_zero(e)) cols[c].emplace_back(r, e);
    }
  return cols;
}

// Free column ids and their relations col_f = sum coef * col_j.
template <class F>
std::vector<std::pair<int, std::vector<std::pair<int, typename F::Elem>>>> relations(const F& field,
                                                                                      const SparseMatrix& a) {
  auto cols = columns_of(field, a);
  ColumnEchelon<F> ech(field, a.nrows);
  std::vector<std::pair<int, std::vector<std::pair<int, typename F::Elem>>>> out;
  for (int c = 0; c < a.ncols; ++c)
    if (!ech.add(c, cols[c])) out.emplace_back(c, ech.last_relation());
  return out;
}

std::vector<std::vector<Rational>> nullspace_exact(const SparseMatrix& a) {
  RationalField q;
  std::vector<std::vector<Rational>> out;
  for (auto& [f, rel] : relations(q, a)) {
    std::vector<Rational> v(a.ncols);
    v[f] = 1;
    for (const auto& [j, c] : rel) v[j] = -c;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

std::vector<std::vector<Rational>> nullspace(const SparseMatrix& a) {
  const std::size_t max_primes = 24;
  std::vector<int> free_cols;
  std::vector<std::vector<Integer>> residues;  // per (free index, column)
  Integer modulus = 1;
  std::optional<std::vector<std::vector<Rational>>> previous;
  for (std::size_t k = 0; k < max_primes; ++k) {
    ModField fp(large_prime(k));
    std::vector<std::pair<int, std::vector<std::pair<int, std::uint64_t>>>> rel;
    try {
      rel = relations(fp, a);
    } catch (const std::domain_error&) {
      continue;
    }
    std::vector<int> fc;
    for (const auto& r : rel) fc.push_back(r.first);
    if (modulus == 1 || fc.size() < free_cols.size()) {
      free_cols = fc;
      residues.assign(fc.size(), std::vector<Integer>(a.ncols, 0));
      modulus = 1;
      previous.reset();
    } else if (fc != free_cols) {
      continue;  // unlucky prime
    }
    for (std::size_t t = 0; t < rel.size(); ++t) {
      std::vector<std::uint64_t> v(a.ncols, 0);
      v[rel[t].first] = 1;
      for (const auto& [j, c] : rel[t].second) v[j] = fp.neg(c);
      for (int j = 0; j < a.ncols; ++j) {
        Integer m = modulus;
        crt_accumulate(residues[t][j], m, v[j], fp.p);
      }
    }
    Integer pp;
    mpz_set_ui(pp.get_mpz_t(), fp.p);
    modulus = modulus == 1 ? pp : Integer(modulus * pp);
    std::vector<std::vector<Rational>> cand;
    bool ok = true;
    for (std::size_t t = 0; t < residues.size() && ok; ++t) {
      std::vector<Rational> v(a.ncols);
      for (int j = 0; j < a.ncols && ok; ++j) {
        auto q = rational_reconstruct(residues[t][j], modulus);
        if (!q) ok = false;
        else v[j] = *q;
      }
      cand.push_back(std::move(v));
    }
    if (!ok) continue;
    if (previous && *previous == cand) {
      bool verified = true;
      for (const auto& v : cand) {
        for (const auto& y : multiply(a, v))
          if (y != 0) verified = false;
      }
      if (verified) return cand;
    }
    previous = std::move(cand);
  }
  return nullspace_exact(a);
}

}  // namespace sdr
