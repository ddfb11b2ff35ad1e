#include "sdr/resultant.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <thread>
#include <unordered_map>

#include "sdr/bounds.hpp"
#include "sdr/essential.hpp"

namespace sdr {

Prolongation prolong(const DiffSystem& sys, const std::vector<int>& h) {
  Prolongation pro;
  pro.h = h;
  pro.pivot.assign(sys.size(), 0);
  pro.polys.resize(sys.size());
  for (int i = 0; i < sys.size(); ++i) {
    if (h.at(i) < 0) continue;
    for (int k = 1; k <= sys.l(i); ++k)
      if (sys.norm_monomial(i, k).degree() < sys.norm_monomial(i, pro.pivot[i]).degree()) pro.pivot[i] = k;
    pro.top = std::max(pro.top, h[i] + sys.order(i));
    DiffPoly p = sys.norm(i);
    for (int l = 0; l <= h[i]; ++l) {
      pro.polys[i].push_back(p);
      p = differentiate(p);
    }
    for (int l = 0; l <= h[i]; ++l)
      for (int k = 0; k <= sys.l(i); ++k) pro.uvars.push_back(DerivVar::u(i, k, l));
  }
  for (int j = 1; j <= sys.n; ++j) {
    bool present = false;
    for (int i = 0; i < sys.size(); ++i)
      if (h[i] >= 0 && !is_neg_inf(order_in(pro.polys[i][0], DiffIndex::y(j)))) present = true;
    if (!present) continue;
    for (int o = 0; o <= pro.top; ++o) pro.yvars.push_back(DerivVar::y(j, o));
  }
  return pro;
}

namespace {

using Elem = ModField::Elem;
using Values = std::map<DerivVar, Elem>;

Elem eval_monomial(const Monomial& m, const Values& val, const ModField& f) {
  Elem acc = 1;
  for (const auto& [v, e] : m.entries()) {
    Elem x = val.at(v);
    acc = f.mul(acc, e >= 0 ? f.pow(x, static_cast<std::uint64_t>(e)) : f.inv(f.pow(x, static_cast<std::uint64_t>(-e))));
  }
  return acc;
}

Elem eval_poly(const DiffPoly& p, const Values& val, const ModField& f) {
  Elem acc = 0;
  for (const auto& [m, c] : p.terms()) acc = f.add(acc, f.mul(f.from_rational(c), eval_monomial(m, val, f)));
  return acc;
}

struct Grade {
  std::vector<int> b;
  std::vector<std::int64_t> g;
  std::int64_t w = 0;

  auto operator<=>(const Grade&) const = default;
};

Grade operator+(Grade a, const Grade& o) {
  for (std::size_t i = 0; i < a.b.size(); ++i) a.b[i] += o.b[i];
  for (std::size_t j = 0; j < a.g.size(); ++j) a.g[j] += o.g[j];
  a.w += o.w;
  return a;
}

Grade operator-(Grade a, const Grade& o) {
  for (std::size_t i = 0; i < a.b.size(); ++i) a.b[i] -= o.b[i];
  for (std::size_t j = 0; j < a.g.size(); ++j) a.g[j] -= o.g[j];
  a.w -= o.w;
  return a;
}

struct GradedMonomial {
  Monomial m;
  Grade grade;
};

struct Column {
  int block = -1;  // -1 for an ansatz column
  int l = 0;
  Monomial mono;
  std::int64_t degree = 0;
  std::vector<std::pair<int, Rational>> entries;
};

struct ClassProblem {
  Grade grade;
  std::vector<Monomial> ansatz;
};

struct Relation {
  int dependent = -1;
  std::vector<std::pair<int, Rational>> coefs;
};

class Engine {
 public:
  Engine(const DiffSystem& sys, const std::vector<int>& h, const SolverOptions& opt)
      : sys_(sys), opt_(opt), pro_(prolong(sys, h)), rng_(opt.seed) {
    for (int i = 0; i < sys.size(); ++i)
      if (h[i] >= 0) blocks_.push_back(i);
    for (const auto& v : pro_.uvars) {
      Grade g = zero_grade();
      Monomial nk = sys.norm_monomial(v.base.a, v.base.b);
      g.b[v.base.a] = 1;
      for (int j = 1; j <= sys.n; ++j) g.g[j - 1] = -nk.degree_in_y(j);
      g.w = v.order - nk.weight();
      ugrade_[v] = g;
    }
  }

  const Prolongation& prolongation() const { return pro_; }
  const std::vector<int>& blocks() const { return blocks_; }

  Monomial lhs(int d) const {
    Monomial out;
    for (int i : blocks_) out = out * sys_.norm_monomial(i, pro_.pivot[i]).pow((pro_.h[i] + 1) * d);
    return out;
  }

  // True when the Jacobian of the prolongation with respect to Y has full row rank mod p.
  bool jacobian_full_rank() {
    const Values& pt = point(0);
    ModField f(large_prime(0));
    DenseMatrix<ModField> jac;
    for (int i : blocks_)
      for (const auto& p : pro_.polys[i]) {
        std::vector<Elem> row;
        for (const auto& y : pro_.yvars) row.push_back(eval_poly(partial(p, y), pt, f));
        jac.push_back(std::move(row));
      }
    std::size_t rows = jac.size();
    return dense_rank(f, std::move(jac)) == rows;
  }

  std::vector<ClassProblem> classes(int d) {
    std::map<Grade, std::vector<Monomial>> by;
    std::vector<int> comp(blocks_.size(), 1);
    int rest = d - static_cast<int>(blocks_.size());
    if (rest < 0) return {};
    std::function<void(std::size_t, int)> rec = [&](std::size_t t, int left) {
      if (t + 1 == blocks_.size()) {
        comp[t] = 1 + left;
        std::vector<int> b(sys_.size(), 0);
        for (std::size_t s = 0; s < blocks_.size(); ++s) b[blocks_[s]] = comp[s];
        for (const auto& gm : umonomials(b)) by[gm.grade].push_back(gm.m);
        return;
      }
      for (int x = 0; x <= left; ++x) {
        comp[t] = 1 + x;
        rec(t + 1, left - x);
      }
    };
    rec(0, rest);
    std::vector<ClassProblem> out;
    for (auto& [g, ms] : by) out.push_back({g, std::move(ms)});
    return out;
  }

  // Dimension of the space of combinations of the class monomials vanishing at
  // random points of the generic zero, computed mod p.
  std::size_t kernel_dimension(const ClassProblem& cp) {
    ModField f(large_prime(0));
    std::size_t c = cp.ansatz.size();
    DenseMatrix<ModField> a;
    for (std::size_t r = 0; r < c + 2; ++r) {
      const Values& pt = point(r);
      std::vector<Elem> row;
      for (const auto& m : cp.ansatz) row.push_back(eval_monomial(m, pt, f));
      a.push_back(std::move(row));
    }
    return c - dense_rank(f, std::move(a));
  }

  std::vector<std::size_t> kernel_dimensions(const std::vector<ClassProblem>& cps) {
    std::size_t need = 0;
    for (const auto& cp : cps) need = std::max(need, cp.ansatz.size() + 2);
    if (need > 0) point(need - 1);
    std::vector<std::size_t> out(cps.size(), 0);
    int workers = std::max(1, std::min<int>(opt_.threads, static_cast<int>(cps.size())));
    if (workers == 1) {
      for (std::size_t t = 0; t < cps.size(); ++t) out[t] = kernel_dimension(cps[t]);
      return out;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < cps.size(); t += workers) out[t] = kernel_dimension(cps[t]);
      });
    for (auto& th : pool) th.join();
    return out;
  }

  // Cofactor columns compatible with the class grade, sorted by degree, followed by the ansatz columns.
  std::vector<Column> columns(const ClassProblem& cp, int d, int cofdeg, std::unordered_map<Monomial, int, MonomialHash>& rows) {
    Monomial lm = lhs(d);
    Grade target = cp.grade + monomial_grade(lm);
    auto bounds = cofactor_degree_bound(sys_, pro_.h, d);
    std::vector<Column> cols;
    for (int i : blocks_)
      for (int l = 0; l <= pro_.h[i]; ++l) {
        Grade fg = zero_grade();
        fg.b[i] = 1;
        fg.w = l;
        Grade hg = target - fg;
        if (std::any_of(hg.b.begin(), hg.b.end(), [](int x) { return x < 0; })) continue;
        std::int64_t cap = std::min<std::int64_t>(bounds[i][l], cofdeg);
        for (const auto& um : umonomials(hg.b)) {
          std::vector<std::int64_t> deg(sys_.n);
          bool ok = true;
          for (int j = 0; j < sys_.n; ++j) {
            deg[j] = hg.g[j] - um.grade.g[j];
            if (deg[j] < 0) ok = false;
          }
          std::int64_t wy = hg.w - um.grade.w;
          if (!ok || wy < 0) continue;
          for (const auto& ym : ymonomials(deg, wy)) {
            Monomial nu = um.m * ym;
            if (nu.degree() > cap) continue;
            cols.push_back({i, l, nu, nu.degree(), {}});
            if (cols.size() > opt_.max_columns)
              throw ResourceError("cofactor basis exceeds " + std::to_string(opt_.max_columns) + " columns at d = " +
                                  std::to_string(d));
          }
        }
      }
    std::stable_sort(cols.begin(), cols.end(), [](const Column& a, const Column& b) { return a.degree < b.degree; });
    for (auto& c : cols) {
      for (const auto& [m, q] : pro_.polys[c.block][c.l].terms()) c.entries.emplace_back(row_of(rows, m * c.mono), q);
      normalize(c.entries);
    }
    for (const auto& mu : cp.ansatz) {
      Column c{-1, 0, mu, mu.degree(), {}};
      c.entries.emplace_back(row_of(rows, lm * mu), Rational(1));
      cols.push_back(std::move(c));
    }
    return cols;
  }

 private:
  const DiffSystem& sys_;
  SolverOptions opt_;
  Prolongation pro_;
  std::vector<int> blocks_;
  std::map<DerivVar, Grade> ugrade_;
  std::mt19937_64 rng_;
  std::vector<Values> points_;
  std::map<std::vector<int>, std::vector<GradedMonomial>> ucache_;
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::vector<int>>> ycache_;

  Grade zero_grade() const {
    Grade g;
    g.b.assign(sys_.size(), 0);
    g.g.assign(sys_.n, 0);
    return g;
  }

  Grade monomial_grade(const Monomial& m) const {
    Grade g = zero_grade();
    for (const auto& [v, e] : m.entries()) {
      if (v.is_u()) {
        const Grade& ug = ugrade_.at(v);
        for (std::size_t i = 0; i < g.b.size(); ++i) g.b[i] += ug.b[i] * static_cast<int>(e);
        for (std::size_t j = 0; j < g.g.size(); ++j) g.g[j] += ug.g[j] * e;
        g.w += ug.w * e;
      } else {
        g.g[v.base.a - 1] += e;
        g.w += v.order * e;
      }
    }
    return g;
  }

  static int row_of(std::unordered_map<Monomial, int, MonomialHash>& rows, const Monomial& m) {
    auto it = rows.find(m);
    if (it != rows.end()) return it->second;
    int id = static_cast<int>(rows.size());
    rows.emplace(m, id);
    return id;
  }

  static void normalize(std::vector<std::pair<int, Rational>>& e) {
    std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<int, Rational>> out;
    for (auto& [r, q] : e) {
      if (!out.empty() && out.back().first == r) out.back().second += q;
      else out.emplace_back(r, q);
    }
    std::erase_if(out, [](const auto& x) { return x.second == 0; });
    e = std::move(out);
  }

  // Monomials in U^{[h]} with the given degree in each block.
  const std::vector<GradedMonomial>& umonomials(const std::vector<int>& b) {
    auto it = ucache_.find(b);
    if (it != ucache_.end()) return it->second;
    std::vector<std::vector<DerivVar>> per(sys_.size());
    for (const auto& v : pro_.uvars) per[v.base.a].push_back(v);
    std::vector<GradedMonomial> out;
    std::vector<Monomial::Entry> cur;
    std::function<void(int)> by_block;
    std::function<void(int, std::size_t, int)> pick = [&](int i, std::size_t start, int left) {
      if (left == 0) {
        by_block(i + 1);
        return;
      }
      for (std::size_t t = start; t < per[i].size(); ++t) {
        cur.emplace_back(per[i][t], 1);
        pick(i, t, left - 1);
        cur.pop_back();
      }
    };
    by_block = [&](int i) {
      while (i < sys_.size() && b[i] == 0) ++i;
      if (i >= sys_.size()) {
        Monomial m = Monomial::from_entries(cur);
        out.push_back({m, monomial_grade(m)});
        return;
      }
      if (per[i].empty()) return;
      pick(i, 0, b[i]);
    };
    by_block(0);
    return ucache_.emplace(b, std::move(out)).first->second;
  }

  // Order multisets of the given size and weight, as counts per order 0..top.
  const std::vector<std::vector<int>>& order_multisets(std::int64_t size, std::int64_t weight) {
    auto key = std::make_pair(size, weight);
    auto it = ycache_.find(key);
    if (it != ycache_.end()) return it->second;
    std::vector<std::vector<int>> out;
    std::vector<int> cnt(pro_.top + 1, 0);
    std::function<void(int, std::int64_t, std::int64_t)> rec = [&](int o, std::int64_t left, std::int64_t w) {
      if (o == 0) {
        if (w == 0) {
          cnt[0] = static_cast<int>(left);
          out.push_back(cnt);
          cnt[0] = 0;
        }
        return;
      }
      for (std::int64_t c = 0; c <= left && c * o <= w; ++c) {
        cnt[o] = static_cast<int>(c);
        rec(o - 1, left - c, w - c * o);
      }
      cnt[o] = 0;
    };
    rec(pro_.top, size, weight);
    return ycache_.emplace(key, std::move(out)).first->second;
  }

  std::vector<Monomial> ymonomials(const std::vector<std::int64_t>& deg, std::int64_t weight) {
    std::vector<Monomial> out;
    std::vector<Monomial::Entry> cur;
    std::vector<std::int64_t> cap(sys_.n + 1, 0);
    for (int j = sys_.n - 1; j >= 0; --j) cap[j] = cap[j + 1] + deg[j] * pro_.top;
    std::function<void(int, std::int64_t)> rec = [&](int j, std::int64_t w) {
      if (j == sys_.n) {
        if (w == 0) out.push_back(Monomial::from_entries(cur));
        return;
      }
      if (deg[j] == 0) {
        rec(j + 1, w);
        return;
      }
      std::int64_t lo = std::max<std::int64_t>(0, w - cap[j + 1]);
      std::int64_t hi = std::min<std::int64_t>(w, deg[j] * pro_.top);
      for (std::int64_t wj = lo; wj <= hi; ++wj) {
        // Copy: the cache may grow during recursion.
        auto sets = order_multisets(deg[j], wj);
        for (const auto& cnt : sets) {
          std::size_t mark = cur.size();
          for (int o = 0; o <= pro_.top; ++o)
            if (cnt[o]) cur.emplace_back(DerivVar::y(j + 1, o), cnt[o]);
          rec(j + 1, w - wj);
          cur.resize(mark);
        }
      }
    };
    rec(0, weight);
    return out;
  }

  // The r-th random point of the generic zero: random Y and u_{ik} (k not the pivot),
  // the pivot coefficients solved from the prolongation.
  const Values& point(std::size_t r) {
    ModField f(large_prime(0));
    std::uniform_int_distribution<Elem> nz(1, f.p - 1), any(0, f.p - 1);
    while (points_.size() <= r) {
      Values val;
      for (const auto& y : pro_.yvars) val[y] = nz(rng_);
      for (const auto& u : pro_.uvars)
        if (u.base.b != pro_.pivot[u.base.a]) val[u] = any(rng_);
      for (int i : blocks_) {
        Elem lead = eval_monomial(sys_.norm_monomial(i, pro_.pivot[i]), val, f);
        for (int l = 0; l <= pro_.h[i]; ++l) {
          DerivVar piv = DerivVar::u(i, pro_.pivot[i], l);
          val[piv] = 0;
          val[piv] = f.neg(f.mul(eval_poly(pro_.polys[i][l], val, f), f.inv(lead)));
        }
      }
      points_.push_back(std::move(val));
    }
    return points_[r];
  }
};

template <class F>
struct ClassRun {
  bool found = false;
  std::vector<int> basis;  // independent column ids in insertion order
  int dependent = -1;
  std::vector<std::pair<int, typename F::Elem>> relation;
  std::size_t dependent_ansatz = 0;
  std::int64_t level = 0;  // largest cofactor degree in use
};

template <class F>
SparseVec<F> convert(const F& field, const std::vector<std::pair<int, Rational>>& e) {
  SparseVec<F> out;
  for (const auto& [r, q] : e) {
    auto v = field.from_rational(q);
    if (!field.is_zero(v)) out.emplace_back(r, v);
  }
  return out;
}

// Adds the cofactor columns level by level; after each level tries the ansatz columns.
template <class F>
ClassRun<F> run_class(const F& field, const std::vector<Column>& cols, int nrows, std::int64_t start) {
  ClassRun<F> run;
  ColumnEchelon<F> ech(field, nrows);
  std::size_t nh = 0;
  while (nh < cols.size() && cols[nh].block >= 0) ++nh;
  std::size_t next = 0;
  std::vector<int> basis;
  run.level = start;
  while (true) {
    std::int64_t level = next < nh ? std::max(cols[next].degree, start) : LLONG_MAX;
    if (next < nh) run.level = level;
    while (next < nh && cols[next].degree <= level) {
      if (ech.add(static_cast<int>(next), convert(field, cols[next].entries))) basis.push_back(static_cast<int>(next));
      ++next;
    }
    auto mark = ech.checkpoint();
    std::size_t bmark = basis.size();
    for (std::size_t c = nh; c < cols.size(); ++c) {
      if (ech.add(static_cast<int>(c), convert(field, cols[c].entries))) {
        basis.push_back(static_cast<int>(c));
        continue;
      }
      if (!run.found) {
        run.found = true;
        run.dependent = static_cast<int>(c);
        run.relation = ech.last_relation();
        run.basis = basis;
      }
      ++run.dependent_ansatz;
    }
    if (run.found || next >= nh) return run;
    ech.rollback(mark);
    basis.resize(bmark);
  }
}

struct Solution {
  DiffPoly sr;
  std::vector<std::vector<DiffPoly>> cofactors;
};

Solution assemble(const std::vector<Column>& cols, const Relation& rel, const Prolongation& pro, int nblocks) {
  Solution s;
  s.cofactors.resize(nblocks);
  for (int i = 0; i < nblocks; ++i)
    if (pro.h[i] >= 0) s.cofactors[i].assign(pro.h[i] + 1, DiffPoly());
  s.sr.add_term(cols[rel.dependent].mono, 1);
  for (const auto& [id, q] : rel.coefs) {
    const Column& c = cols[id];
    if (c.block < 0) s.sr.add_term(c.mono, -q);
    else s.cofactors[c.block][c.l].add_term(c.mono, q);
  }
  return s;
}

DiffPoly residual(const Monomial& lhs, const Solution& s, const Prolongation& pro) {
  DiffPoly r = s.sr * lhs;
  for (std::size_t i = 0; i < s.cofactors.size(); ++i)
    for (std::size_t l = 0; l < s.cofactors[i].size(); ++l) r -= s.cofactors[i][l] * pro.polys[i][l];
  return r;
}

// Exact relation for the first dependent ansatz column: several primes with
// reconstruction, then elimination over Q if that fails.
std::optional<Solution> solve_class(const std::vector<Column>& cols, int nrows, std::int64_t start, const Monomial& lhs,
                                    const Prolongation& pro, int nblocks, bool exact) {
  std::vector<int> basis;
  int dependent = -1;
  std::map<int, std::pair<Integer, Integer>> acc;
  std::optional<std::vector<std::pair<int, Rational>>> last;
  for (std::size_t k = 0; k < (exact ? 0 : 10); ++k) {
    ModField f(large_prime(k + 1));
    auto run = run_class(f, cols, nrows, start);
    if (k == 0) {
      if (!run.found) return std::nullopt;
      basis = run.basis;
      dependent = run.dependent;
      start = run.level;
    } else if (!run.found || run.basis != basis || run.dependent != dependent) {
      continue;
    }
    std::map<int, Elem> rel(run.relation.begin(), run.relation.end());
    for (int id : basis) {
      auto& [r, m] = acc.try_emplace(id, Integer(0), Integer(1)).first->second;
      auto it = rel.find(id);
      crt_accumulate(r, m, it == rel.end() ? 0 : it->second, f.p);
    }
    std::vector<std::pair<int, Rational>> rec;
    bool ok = true;
    for (auto& [id, rm] : acc) {
      auto q = rational_reconstruct(rm.first, rm.second);
      if (!q) {
        ok = false;
        break;
      }
      if (*q != 0) rec.emplace_back(id, *q);
    }
    if (!ok) continue;
    if (last && *last == rec) {
      Solution s = assemble(cols, {dependent, rec}, pro, nblocks);
      if (residual(lhs, s, pro).is_zero()) return s;
    }
    last = rec;
  }
  RationalField q;
  auto run = run_class(q, cols, nrows, start);
  if (!run.found) return std::nullopt;
  Solution s = assemble(cols, {run.dependent, run.relation}, pro, nblocks);
  if (!residual(lhs, s, pro).is_zero()) throw std::logic_error("resultant: exact relation does not verify");
  return s;
}

std::optional<ResultantCertificate> search_degree(const DiffSystem& sys, Engine& eng, int d, const SolverOptions& opt) {
  auto cps = eng.classes(d);
  auto dims = eng.kernel_dimensions(cps);
  std::size_t total = 0;
  for (auto x : dims) total += x;
  if (total == 0) return std::nullopt;
  const Prolongation& pro = eng.prolongation();
  Monomial lm = eng.lhs(d);
  for (std::size_t t = 0; t < cps.size(); ++t) {
    if (dims[t] == 0) continue;
    std::unordered_map<Monomial, int, MonomialHash> rows;
    auto cols = eng.columns(cps[t], d, INT_MAX, rows);
    auto sol = solve_class(cols, static_cast<int>(rows.size()), opt.cofactor_start, lm, pro, sys.size(), opt.exact);
    if (!sol) continue;
    ResultantCertificate cert;
    cert.sr = sol->sr;
    Rational factor = cert.sr.make_primitive();
    cert.cofactors = sol->cofactors;
    for (auto& blk : cert.cofactors)
      for (auto& hc : blk) hc = hc * factor;
    cert.h = pro.h;
    cert.d = d;
    cert.pivot = pro.pivot;
    cert.lhs = lm;
    cert.c0_dimension = total;
    cert.columns = cols.size();
    cert.rows = rows.size();
    if (total != 1)
      cert.warnings.push_back("ansatz solution space has dimension " + std::to_string(total) + " at d = " +
                              std::to_string(d));
    cert.verified = check_certificate(sys, cert);
    if (!cert.verified) throw std::logic_error("resultant: certificate identity fails");
    return cert;
  }
  return std::nullopt;
}

int clamp_int(const Integer& z) { return z > INT_MAX ? INT_MAX : static_cast<int>(z.get_si()); }

}  // namespace

DiffPoly certificate_residual(const DiffSystem& sys, const ResultantCertificate& cert) {
  DiffPoly r = cert.sr * cert.lhs;
  for (std::size_t i = 0; i < cert.cofactors.size(); ++i) {
    if (cert.cofactors[i].empty()) continue;
    DiffPoly p = sys.norm(static_cast<int>(i));
    for (std::size_t l = 0; l < cert.cofactors[i].size(); ++l) {
      r -= cert.cofactors[i][l] * p;
      p = differentiate(p);
    }
  }
  return r;
}

bool check_certificate(const DiffSystem& sys, const ResultantCertificate& cert) {
  return !cert.sr.is_zero() && cert.sr.only_u() && certificate_residual(sys, cert).is_zero();
}

LinearSystem build_linear_system(const DiffSystem& sys, const std::vector<int>& h, int d, int cofdeg) {
  SolverOptions opt;
  Engine eng(sys, h, opt);
  LinearSystem ls;
  std::unordered_map<Monomial, int, MonomialHash> rows;
  std::vector<std::vector<std::pair<int, Rational>>> hcols;
  std::vector<std::vector<std::pair<int, Rational>>> acols;
  for (const auto& cp : eng.classes(d)) {
    for (auto& c : eng.columns(cp, d, cofdeg, rows)) {
      if (c.block < 0) {
        ls.c0.push_back(c.mono);
        acols.push_back(std::move(c.entries));
      } else {
        hcols.push_back(std::move(c.entries));
      }
    }
  }
  ls.cofactor_unknowns = hcols.size();
  ls.matrix.nrows = static_cast<int>(rows.size());
  ls.matrix.ncols = static_cast<int>(acols.size() + hcols.size());
  ls.matrix.rows.resize(rows.size());
  for (std::size_t c = 0; c < acols.size(); ++c)
    for (const auto& [r, q] : acols[c]) ls.matrix.rows[r].emplace_back(static_cast<int>(c), q);
  for (std::size_t c = 0; c < hcols.size(); ++c)
    for (const auto& [r, q] : hcols[c]) ls.matrix.rows[r].emplace_back(static_cast<int>(acols.size() + c), -q);
  return ls;
}

std::vector<DiffPoly> ansatz_solutions(const LinearSystem& ls) {
  std::vector<std::vector<Rational>> proj;
  for (const auto& v : nullspace(ls.matrix)) proj.emplace_back(v.begin(), v.begin() + static_cast<long>(ls.c0.size()));
  // Row echelon form of the projections.
  std::vector<std::vector<Rational>> basis;
  std::size_t cols = ls.c0.size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < proj.size(); ++c) {
    std::size_t p = r;
    while (p < proj.size() && proj[p][c] == 0) ++p;
    if (p == proj.size()) continue;
    std::swap(proj[r], proj[p]);
    for (std::size_t s = 0; s < proj.size(); ++s) {
      if (s == r || proj[s][c] == 0) continue;
      Rational f = proj[s][c] / proj[r][c];
      for (std::size_t k = 0; k < cols; ++k) proj[s][k] -= f * proj[r][k];
    }
    ++r;
  }
  std::vector<DiffPoly> out;
  for (std::size_t s = 0; s < r; ++s) {
    DiffPoly p;
    for (std::size_t k = 0; k < cols; ++k)
      if (proj[s][k] != 0) p.add_term(ls.c0[k], proj[s][k]);
    p.make_primitive();
    out.push_back(std::move(p));
  }
  return out;
}

ResultantCertificate sdresultant(const DiffSystem& sys, const SolverOptions& opt) {
  sys.validate();
  EssentialOptions eopt;
  eopt.seed = opt.seed;
  eopt.budget = opt.budget;
  if (!is_essential(sys, eopt).essential) throw std::domain_error("system is not differentially essential");
  BoundReport bounds = order_bounds(sys, eopt);
  std::vector<int> active;
  for (int i = 0; i < sys.size(); ++i) {
    bool in_t = std::find(bounds.subset.begin(), bounds.subset.end(), i) != bounds.subset.end();
    if ((!opt.rank_essential || in_t) && !is_neg_inf(bounds.bound[i])) active.push_back(i);
  }
  int omax = 0;
  for (int i : active) omax += std::max(bounds.bound[i], 0);
  if (opt.max_order >= 0) omax = std::min(omax, opt.max_order);

  std::vector<int> h(sys.size(), kNegInf);
  for (int o = 0; o <= omax; ++o) {
    // Order vectors with sum o in lexicographic order.
    std::vector<std::vector<int>> vecs;
    std::function<void(std::size_t, int)> rec = [&](std::size_t t, int left) {
      if (t + 1 == active.size()) {
        if (left <= std::max(bounds.bound[active[t]], 0)) {
          h[active[t]] = left;
          vecs.push_back(h);
        }
        return;
      }
      for (int x = 0; x <= std::min(left, std::max(bounds.bound[active[t]], 0)); ++x) {
        h[active[t]] = x;
        rec(t + 1, left - x);
      }
    };
    if (active.empty()) break;
    rec(0, o);
    for (const auto& hv : vecs) {
      Engine eng(sys, hv, opt);
      if (opt.jacobian_filter && eng.jacobian_full_rank()) continue;
      int dmax = clamp_int(degree_bound(sys, hv));
      if (opt.max_degree >= 0) dmax = std::min(dmax, opt.max_degree);
      for (int d = 1; d <= dmax; ++d) {
        auto cert = search_degree(sys, eng, d, opt);
        if (cert) return *cert;
      }
    }
  }
  throw std::runtime_error("sdresultant: search exhausted without a resultant");
}

ResultantCertificate dresultant(const DiffSystem& sys, const SolverOptions& opt) {
  sys.validate();
  if (!is_dense(sys) || sys.size() != sys.n + 1) throw std::invalid_argument("dresultant: system is not dense generic");
  int s = 0;
  for (int i = 0; i < sys.size(); ++i) s += sys.order(i);
  std::vector<int> h(sys.size());
  for (int i = 0; i < sys.size(); ++i) h[i] = s - sys.order(i);
  Engine eng(sys, h, opt);
  int dmax = clamp_int(degree_bound(sys, h));
  if (opt.max_degree >= 0) dmax = std::min(dmax, opt.max_degree);
  for (int d = sys.n + 1; d <= dmax; ++d) {
    auto cert = search_degree(sys, eng, d, opt);
    if (cert) return *cert;
  }
  throw std::runtime_error("dresultant: search exhausted without a resultant");
}

}  // namespace sdr
