#include "sdr/verify.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace sdr {

Series::Series(std::vector<Rational> coeffs, std::size_t K) : c_(std::move(coeffs)) { c_.resize(K); }

Series Series::constant(const Rational& c, std::size_t K) {
  Series s(K);
  if (K > 0) s.c_[0] = c;
  return s;
}

bool Series::is_zero() const { return vanishes_below(c_.size()); }

bool Series::vanishes_below(std::size_t prec) const {
  prec = std::min(prec, c_.size());
  for (std::size_t k = 0; k < prec; ++k)
    if (sgn(c_[k]) != 0) return false;
  return true;
}

std::size_t Series::valuation() const {
  for (std::size_t k = 0; k < c_.size(); ++k)
    if (sgn(c_[k]) != 0) return k;
  return c_.size();
}

Series Series::operator+(const Series& o) const {
  if (K() != o.K()) throw std::logic_error("series: truncation mismatch");
  Series s(*this);
  for (std::size_t k = 0; k < K(); ++k) s.c_[k] += o.c_[k];
  return s;
}

Series Series::operator-(const Series& o) const { return *this + (-o); }

Series Series::operator-() const {
  Series s(*this);
  for (auto& c : s.c_) c = -c;
  return s;
}

Series Series::operator*(const Series& o) const {
  if (K() != o.K()) throw std::logic_error("series: truncation mismatch");
  Series s(K());
  for (std::size_t a = 0; a < K(); ++a) {
    if (sgn(c_[a]) == 0) continue;
    for (std::size_t b = 0; a + b < K(); ++b)
      if (sgn(o.c_[b]) != 0) s.c_[a + b] += c_[a] * o.c_[b];
  }
  return s;
}

Series Series::operator*(const Rational& q) const {
  Series s(*this);
  for (auto& c : s.c_) c *= q;
  return s;
}

Series Series::derivative() const {
  Series s(K());
  for (std::size_t k = 1; k < K(); ++k) s.c_[k - 1] = c_[k] * static_cast<long>(k);
  return s;
}

Series Series::reciprocal() const {
  if (!is_unit()) throw std::domain_error("series: reciprocal of a non-unit");
  Series r(K());
  r.c_[0] = 1 / c_[0];
  for (std::size_t k = 1; k < K(); ++k) {
    Rational acc = 0;
    for (std::size_t a = 1; a <= k; ++a) acc += c_[a] * r.c_[k - a];
    r.c_[k] = -acc * r.c_[0];
  }
  return r;
}

Series Series::pow(std::int64_t e) const {
  Series base = e < 0 ? reciprocal() : *this;
  std::uint64_t n = e < 0 ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
  Series out = constant(1, K());
  while (n) {
    if (n & 1) out = out * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return out;
}

std::string Series::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < K(); ++k) {
    if (sgn(c_[k]) == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << to_string(c_[k]);
    if (k > 0) os << "*t^" << k;
  }
  if (first) os << "0";
  os << " + O(t^" << K() << ")";
  return os.str();
}

namespace {

class Evaluator {
 public:
  Evaluator(const SeriesPoint& pt, std::size_t K) : pt_(pt), K_(K) {}

  const Series& value(const DerivVar& v) {
    auto it = cache_.find(v);
    if (it != cache_.end()) return it->second;
    Series s(K_);
    if (v.order == 0) {
      auto b = pt_.find(v.base);
      if (b == pt_.end()) throw std::invalid_argument("series_eval: no value for " + var_name(v));
      s = Series(b->second.coeffs(), K_);
    } else {
      s = value(DerivVar{v.base, v.order - 1}).derivative();
    }
    return cache_.emplace(v, std::move(s)).first->second;
  }

  Series eval(const Monomial& m) {
    Series out = Series::constant(1, K_);
    for (const auto& [v, e] : m.entries()) {
      const Series& x = value(v);
      if (e < 0 && !x.is_unit()) throw std::domain_error("series_eval: " + var_name(v) + " is not a unit");
      out = out * x.pow(e);
    }
    return out;
  }

  Series eval(const DiffPoly& p) {
    Series out(K_);
    for (const auto& [m, c] : p.terms()) out = out + eval(m) * c;
    return out;
  }

 private:
  const SeriesPoint& pt_;
  std::size_t K_;
  std::map<DerivVar, Series> cache_;
};

Series random_series(std::mt19937_64& rng, std::size_t K, bool unit) {
  std::uniform_int_distribution<int> coef(-9, 9);
  std::vector<Rational> c(K);
  for (std::size_t k = 0; k < K; ++k) {
    int v = coef(rng);
    if (k == 0 && unit)
      while (v == 0) v = coef(rng);
    c[k] = v;
  }
  return Series(std::move(c), K);
}

int support_order(const DiffSystem& sys, int i) {
  int s = 0;
  for (const auto& m : sys.supports[i])
    for (const auto& [v, e] : m.entries()) s = std::max(s, v.order);
  return s;
}

// Value of sr at one random point of the generic zero.
Series membership_trial(const DiffPoly& sr, const DiffSystem& sys, std::size_t K, std::uint64_t seed, int trial) {
  std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                   static_cast<std::uint32_t>(trial)};
  std::mt19937_64 rng(sq);
  for (int attempt = 0; attempt < 100; ++attempt) {
    SeriesPoint pt;
    for (int j = 1; j <= sys.n; ++j) pt[DiffIndex::y(j)] = random_series(rng, K, true);
    for (int i = 0; i < sys.size(); ++i)
      for (int k = 1; k <= sys.l(i); ++k) pt[DiffIndex::u(i, k)] = random_series(rng, K, false);
    Evaluator ev(pt, K);
    bool units = true;
    std::vector<Series> zeta;
    for (int i = 0; i < sys.size() && units; ++i) {
      Series m0(K);
      try {
        m0 = ev.eval(sys.supports[i][0]);
      } catch (const std::domain_error&) {
        units = false;
        break;
      }
      if (!m0.is_unit()) {
        units = false;
        break;
      }
      Series acc(K);
      try {
        for (int k = 1; k <= sys.l(i); ++k)
          acc = acc + ev.value(DerivVar::u(i, k)) * ev.eval(sys.supports[i][k]);
      } catch (const std::domain_error&) {
        units = false;
        break;
      }
      zeta.push_back(-(acc * m0.reciprocal()));
    }
    if (!units) continue;
    for (int i = 0; i < sys.size(); ++i) pt[DiffIndex::u(i, 0)] = zeta[i];
    return series_eval(sr, pt, K);
  }
  throw std::domain_error("membership_check: no sample point with unit denominators");
}

// Column-style Hermite reduction: a * u = h with h in lower echelon form.
struct Hermite {
  std::vector<std::vector<Integer>> h;
  std::vector<std::vector<Integer>> u;
  std::vector<int> pivot_col;  // per row, or -1
};

Hermite hermite(std::vector<std::vector<Integer>> a, std::size_t ncols) {
  std::size_t rows = a.size();
  Hermite out;
  out.u.assign(ncols, std::vector<Integer>(ncols, 0));
  for (std::size_t c = 0; c < ncols; ++c) out.u[c][c] = 1;
  out.pivot_col.assign(rows, -1);
  auto combine = [&](std::size_t x, std::size_t y, const Integer& q) {
    // col y -= q * col x
    for (std::size_t r = 0; r < rows; ++r) a[r][y] -= q * a[r][x];
    for (std::size_t r = 0; r < ncols; ++r) out.u[r][y] -= q * out.u[r][x];
  };
  auto swap_cols = [&](std::size_t x, std::size_t y) {
    for (std::size_t r = 0; r < rows; ++r) std::swap(a[r][x], a[r][y]);
    for (std::size_t r = 0; r < ncols; ++r) std::swap(out.u[r][x], out.u[r][y]);
  };
  std::size_t pc = 0;
  for (std::size_t r = 0; r < rows && pc < ncols; ++r) {
    while (true) {
      std::size_t best = ncols;
      for (std::size_t c = pc; c < ncols; ++c)
        if (sgn(a[r][c]) != 0 && (best == ncols || abs(a[r][c]) < abs(a[r][best]))) best = c;
      if (best == ncols) break;
      swap_cols(pc, best);
      bool done = true;
      for (std::size_t c = pc + 1; c < ncols; ++c) {
        if (sgn(a[r][c]) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a[r][c].get_mpz_t(), a[r][pc].get_mpz_t());
        combine(pc, c, q);
        if (sgn(a[r][c]) != 0) done = false;
      }
      if (done) break;
    }
    if (sgn(a[r][pc]) == 0) continue;
    if (sgn(a[r][pc]) < 0) {
      for (std::size_t s = 0; s < rows; ++s) a[s][pc] = -a[s][pc];
      for (std::size_t s = 0; s < ncols; ++s) out.u[s][pc] = -out.u[s][pc];
    }
    out.pivot_col[r] = static_cast<int>(pc);
    ++pc;
  }
  out.h = std::move(a);
  return out;
}

// Integer t with a t = b, from the Hermite form of a.
std::optional<std::vector<Integer>> lattice_solve(const Hermite& hf, const std::vector<Integer>& b, std::size_t ncols) {
  std::vector<Integer> x(ncols, 0);
  for (std::size_t r = 0; r < b.size(); ++r) {
    Integer res = b[r];
    for (std::size_t c = 0; c < ncols; ++c)
      if (sgn(x[c]) != 0) res -= hf.h[r][c] * x[c];
    int p = hf.pivot_col[r];
    if (p < 0) {
      if (sgn(res) != 0) return std::nullopt;
      continue;
    }
    if (!mpz_divisible_p(res.get_mpz_t(), hf.h[r][p].get_mpz_t())) return std::nullopt;
    x[p] = res / hf.h[r][p];
  }
  std::vector<Integer> t(ncols, 0);
  for (std::size_t r = 0; r < ncols; ++r)
    for (std::size_t c = 0; c < ncols; ++c) t[r] += hf.u[r][c] * x[c];
  return t;
}

Recovery refuse(Recovery r, std::string hyp, std::string reason) {
  r.ok = false;
  r.hypothesis = std::move(hyp);
  r.reason = std::move(reason);
  return r;
}

}  // namespace

Series series_eval(const DiffPoly& p, const SeriesPoint& pt, std::size_t K) { return Evaluator(pt, K).eval(p); }

Series series_eval(const Monomial& m, const SeriesPoint& pt, std::size_t K) { return Evaluator(pt, K).eval(m); }

int verification_margin(const DiffPoly& sr, const DiffSystem& sys) {
  int h = 0, s = 0;
  for (int i = 0; i < sys.size(); ++i) {
    int o = order_in_block(sr, i);
    if (!is_neg_inf(o)) h = std::max(h, o);
    s = std::max(s, support_order(sys, i));
  }
  return h + s + 2;
}

MembershipReport membership_check(const DiffPoly& sr, const DiffSystem& sys, std::size_t K, int trials,
                                  std::uint64_t seed, int threads) {
  if (sr.is_zero()) throw std::invalid_argument("membership_check: sr is zero");
  MembershipReport rep;
  rep.K = K;
  rep.margin = verification_margin(sr, sys);
  if (K <= static_cast<std::size_t>(rep.margin))
    throw std::invalid_argument("membership_check: truncation K = " + std::to_string(K) + " too small, need K >= " +
                                std::to_string(rep.margin + 1));
  std::size_t prec = K - rep.margin;
  std::vector<Series> vals(trials);
  auto work = [&](int first) {
    for (int t = first; t < trials; t += std::max(threads, 1)) vals[t] = membership_trial(sr, sys, K, seed, t);
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  rep.pass = true;
  for (const auto& v : vals) {
    bool ok = v.vanishes_below(prec);
    rep.trials.push_back(ok);
    rep.valuations.push_back(v.valuation());
    rep.pass = rep.pass && ok;
  }
  return rep;
}

HomogeneityReport homogeneity_check(const DiffPoly& sr, int block) {
  HomogeneityReport rep;
  rep.order = order_in_block(sr, block);
  if (is_neg_inf(rep.order)) throw std::invalid_argument("homogeneity_check: block " + std::to_string(block) + " absent");
  rep.degree = sr.terms().begin()->first.degree_in_block(block);
  rep.pass = euler_apply(sr, block, 0) == sr * Rational(static_cast<long>(rep.degree));
  for (int r = 1; r <= rep.order && rep.pass; ++r) rep.pass = euler_apply(sr, block, r).is_zero();
  return rep;
}

bool SpanReport::all() const { return std::all_of(in_span.begin(), in_span.end(), [](bool b) { return b; }); }

SpanReport span_check(const DiffSystem& sys) {
  SpanReport rep;
  std::map<DerivVar, std::size_t> coord;
  for (int j = 1; j <= sys.n; ++j) coord.emplace(DerivVar::y(j), 0);
  for (const auto& sup : sys.supports)
    for (const auto& m : sup)
      for (const auto& [v, e] : m.entries()) coord.emplace(v, 0);
  std::size_t rows = 0;
  for (auto& [v, idx] : coord) idx = rows++;
  for (int i = 0; i < sys.size(); ++i)
    for (int k = 1; k <= sys.l(i); ++k) rep.columns.emplace_back(i, k);
  std::size_t ncols = rep.columns.size();
  std::vector<std::vector<Integer>> a(rows, std::vector<Integer>(ncols, 0));
  for (std::size_t c = 0; c < ncols; ++c) {
    auto [i, k] = rep.columns[c];
    Monomial q = sys.supports[i][k] / sys.supports[i][0];
    for (const auto& [v, e] : q.entries()) a[coord.at(v)][c] = static_cast<long>(e);
  }
  Hermite hf = hermite(a, ncols);
  for (int j = 1; j <= sys.n; ++j) {
    std::vector<Integer> b(rows, 0);
    b[coord.at(DerivVar::y(j))] = 1;
    auto t = lattice_solve(hf, b, ncols);
    if (t) {
      for (std::size_t r = 0; r < rows; ++r) {
        Integer s = 0;
        for (std::size_t c = 0; c < ncols; ++c) s += a[r][c] * (*t)[c];
        if (s != b[r]) throw std::logic_error("span_check: witness does not verify");
      }
    }
    rep.in_span.push_back(t.has_value());
    rep.witness.push_back(std::move(t));
  }
  return rep;
}

Recovery recover_solution(const DiffPoly& sr, const DiffSystem& sys, std::size_t K) {
  Recovery rec;
  rec.K = K;
  rec.margin = verification_margin(sr, sys);
  if (K <= static_cast<std::size_t>(rec.margin))
    throw std::invalid_argument("recover_solution: truncation K = " + std::to_string(K) + " too small, need K >= " +
                                std::to_string(rec.margin + 1));
  std::size_t prec = K - rec.margin;
  std::vector<int> h(sys.size());
  for (int i = 0; i < sys.size(); ++i) {
    h[i] = order_in_block(sr, i);
    if (is_neg_inf(h[i]))
      return refuse(rec, "order", "sr does not involve the coefficients of P" + std::to_string(i));
  }
  SpanReport span = span_check(sys);
  for (int j = 1; j <= sys.n; ++j)
    if (!span.in_span[j - 1])
      return refuse(rec, "span", "e_" + std::to_string(j) + " is not an integer combination of the exponent differences");
  SeriesPoint pt;
  for (int i = 0; i < sys.size(); ++i)
    for (int k = 0; k <= sys.l(i); ++k) {
      auto it = sys.values.find({i, k});
      if (it == sys.values.end()) return refuse(rec, "values", "no value for " + var_name(DerivVar::u(i, k)));
      pt[DiffIndex::u(i, k)] = Series(it->second, K);
    }
  Evaluator ev(pt, K);
  if (!ev.eval(sr).vanishes_below(prec)) return refuse(rec, "vanishing", "sr does not vanish at the given coefficients");
  std::vector<std::vector<Series>> partials(sys.size());
  for (int i = 0; i < sys.size(); ++i)
    for (int k = 0; k <= sys.l(i); ++k) {
      DerivVar v = DerivVar::u(i, k, h[i]);
      Series d = ev.eval(partial(sr, v));
      if (d.vanishes_below(prec)) return refuse(rec, "nonvanishing", "d sr / d " + var_name(v) + " vanishes");
      if (!d.is_unit()) return refuse(rec, "unit", "d sr / d " + var_name(v) + " is not a unit series");
      partials[i].push_back(std::move(d));
    }
  for (int k = 1; k <= sys.l(0); ++k) rec.ratios.push_back(partials[0][k] * partials[0][0].reciprocal());
  SeriesPoint ypt;
  for (int j = 1; j <= sys.n; ++j) {
    Series y = Series::constant(1, K);
    const auto& t = *span.witness[j - 1];
    for (std::size_t c = 0; c < span.columns.size(); ++c) {
      if (sgn(t[c]) == 0) continue;
      auto [i, k] = span.columns[c];
      Series ratio = partials[i][k] * partials[i][0].reciprocal();
      if (!ratio.is_unit()) return refuse(rec, "unit", "ratio for u" + std::to_string(i) + std::to_string(k) + " is not a unit");
      y = y * ratio.pow(to_int64(t[c]));
    }
    ypt[DiffIndex::y(j)] = y;
    rec.y.push_back(std::move(y));
  }
  Evaluator yev(ypt, K);
  rec.ok = true;
  for (int i = 0; i < sys.size(); ++i) {
    Series r(K);
    try {
      for (int k = 0; k <= sys.l(i); ++k) r = r + ev.value(DerivVar::u(i, k)) * yev.eval(sys.supports[i][k]);
    } catch (const std::domain_error& e) {
      return refuse(rec, "unit", e.what());
    }
    if (!r.vanishes_below(prec)) {
      rec.ok = false;
      rec.hypothesis = "residual";
      rec.reason = "P" + std::to_string(i) + " does not vanish at the recovered point";
    }
    rec.residuals.push_back(std::move(r));
  }
  return rec;
}

}  // namespace sdr
