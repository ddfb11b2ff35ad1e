#include "sdr/bounds.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace sdr {

OrderMatrix order_matrix(const DiffSystem& sys) {
  OrderMatrix a(sys.size(), std::vector<int>(sys.n, kNegInf));
  for (int i = 0; i < sys.size(); ++i) {
    DiffPoly p = sys.norm(i);
    for (int j = 1; j <= sys.n; ++j) a[i][j - 1] = order_in(p, DiffIndex::y(j));
  }
  return a;
}

OrderMatrix delete_row(const OrderMatrix& a, int row) {
  OrderMatrix out;
  for (int i = 0; i < static_cast<int>(a.size()); ++i)
    if (i != row) out.push_back(a[i]);
  return out;
}

namespace {

// Minimum cost assignment of every row to a distinct column (rows <= cols).
std::vector<int> hungarian(const std::vector<std::vector<std::int64_t>>& cost) {
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  int n = static_cast<int>(cost.size());
  int m = static_cast<int>(cost[0].size());
  std::vector<std::int64_t> u(n + 1, 0), v(m + 1, 0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<std::int64_t> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      int i0 = p[j0], j1 = 0;
      std::int64_t delta = inf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        std::int64_t cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j]) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

int jacobi_number(const OrderMatrix& a0) {
  if (a0.empty() || a0[0].empty()) return 0;
  OrderMatrix a = a0;
  if (a.size() > a[0].size()) {
    OrderMatrix t(a[0].size(), std::vector<int>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
    a = t;
  }
  int rows = static_cast<int>(a.size()), cols = static_cast<int>(a[0].size());
  std::int64_t hi = std::numeric_limits<std::int64_t>::min(), lo = std::numeric_limits<std::int64_t>::max();
  for (const auto& r : a)
    for (int v : r)
      if (!is_neg_inf(v)) {
        hi = std::max<std::int64_t>(hi, v);
        lo = std::min<std::int64_t>(lo, v);
      }
  if (hi < lo) return kNegInf;
  std::int64_t forbidden = (hi - lo) * rows + 1;
  std::vector<std::vector<std::int64_t>> cost(rows, std::vector<std::int64_t>(cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) cost[i][j] = is_neg_inf(a[i][j]) ? forbidden : hi - a[i][j];
  auto match = hungarian(cost);
  std::int64_t sum = 0;
  for (int i = 0; i < rows; ++i) {
    int v = a[i][match[i]];
    if (is_neg_inf(v)) return kNegInf;
    sum += v;
  }
  return static_cast<int>(sum);
}

std::vector<int> jacobi_numbers(const OrderMatrix& a) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(a.size()); ++i) out.push_back(jacobi_number(delete_row(a, i)));
  return out;
}

std::vector<int> lowest_orders(const DiffSystem& sys) {
  std::vector<int> low(sys.n, 0);
  for (int j = 1; j <= sys.n; ++j) {
    int best = kNegInf;
    for (int i = 0; i < sys.size(); ++i) {
      int o = lowest_order_in(sys.norm(i), DiffIndex::y(j));
      if (is_neg_inf(o)) continue;
      best = is_neg_inf(best) ? o : std::min(best, o);
    }
    low[j - 1] = is_neg_inf(best) ? 0 : best;
  }
  return low;
}

BoundReport matrix_bounds(const OrderMatrix& a, std::vector<int> low) {
  BoundReport rep;
  std::size_t rows = a.size();
  std::size_t n = rows ? a[0].size() : 0;
  if (low.empty()) low.assign(n, 0);
  rep.jacobi = jacobi_numbers(a);
  for (int o : low) rep.gamma += o;
  std::vector<int> e(rows, kNegInf);
  int total = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    for (int v : a[i]) e[i] = std::max(e[i], v);
    if (!is_neg_inf(e[i])) total += e[i];
  }
  int gamma_p = rep.gamma;
  for (std::size_t j = 0; j < n; ++j) {
    int best = kNegInf;
    for (std::size_t i = 0; i < rows; ++i) {
      if (is_neg_inf(a[i][j])) continue;
      int gap = e[i] - a[i][j];
      best = is_neg_inf(best) ? gap : std::min(best, gap);
    }
    if (!is_neg_inf(best)) gamma_p += best;
  }
  for (std::size_t i = 0; i < rows; ++i) {
    int j = rep.jacobi[i];
    rep.modified.push_back(is_neg_inf(j) ? kNegInf : j - rep.gamma);
    rep.alt_E.push_back(total - (is_neg_inf(e[i]) ? 0 : e[i]));
    rep.alt_L.push_back(rep.alt_E.back() - gamma_p);
  }
  rep.bound = rep.modified;
  for (std::size_t i = 0; i < rows; ++i) rep.subset.push_back(static_cast<int>(i));
  return rep;
}

BoundReport order_bounds(const DiffSystem& sys, const EssentialOptions& opt) {
  auto a = order_matrix(sys);
  BoundReport rep = matrix_bounds(a, lowest_orders(sys));
  rep.subset = rank_essential_subset(sys, opt).subset;
  if (static_cast<int>(rep.subset.size()) < sys.size()) {
    OrderMatrix at;
    for (int i : rep.subset) at.push_back(a[i]);
    std::vector<int> refined(sys.size(), kNegInf);
    for (std::size_t t = 0; t < rep.subset.size(); ++t)
      refined[rep.subset[t]] = jacobi_number(delete_row(at, static_cast<int>(t)));
    rep.refined = refined;
    for (int i = 0; i < sys.size(); ++i) {
      int r = refined[i], m = rep.modified[i];
      rep.bound[i] = (is_neg_inf(r) || is_neg_inf(m)) ? kNegInf : std::min(r, m);
    }
  }
  return rep;
}

Integer degree_bound(const DiffSystem& sys, const std::vector<int>& h) {
  Integer out = 1;
  for (int i = 0; i < sys.size(); ++i) {
    if (h.at(i) < 0) continue;
    Integer f;
    mpz_ui_pow_ui(f.get_mpz_t(), static_cast<unsigned long>(sys.degree(i) + 1), static_cast<unsigned long>(h[i] + 1));
    out *= f;
  }
  return out;
}

std::vector<std::vector<std::int64_t>> cofactor_degree_bound(const DiffSystem& sys, const std::vector<int>& h,
                                                             int d) {
  std::int64_t m = 0, lead = 0;
  for (int i = 0; i < sys.size(); ++i) {
    m = std::max(m, sys.degree(i));
    if (h.at(i) >= 0) lead = checked_add(lead, checked_mul(h[i] + 1, sys.norm_monomial(i, 0).degree()));
  }
  std::int64_t base = checked_mul(checked_add(m + 1, lead), d);
  std::vector<std::vector<std::int64_t>> out(sys.size());
  for (int i = 0; i < sys.size(); ++i)
    if (h[i] >= 0) out[i].assign(h[i] + 1, base - sys.degree(i) - 1);
  return out;
}

std::optional<Integer> bezout_block_bound(const DiffSystem& sys, int i) {
  int s = 0;
  for (int j = 0; j < sys.size(); ++j) s += std::max(sys.order(j), 0);
  Integer prod = 1;
  for (int j = 0; j < sys.size(); ++j) {
    std::int64_t mj = sys.degree(j);
    if (mj == 0) return std::nullopt;
    Integer f;
    mpz_ui_pow_ui(f.get_mpz_t(), static_cast<unsigned long>(mj),
                  static_cast<unsigned long>(s - std::max(sys.order(j), 0) + 1));
    prod *= f;
  }
  return prod * (s - std::max(sys.order(i), 0) + 1) / sys.degree(i);
}

}  // namespace sdr
