#include "sdr/support.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sdr/linalg.hpp"

namespace sdr {

int entry_degree(const SupportEntry& e) { return e.empty() ? kNegInf : static_cast<int>(e.size()) - 1; }

namespace {

void trim(SupportEntry& e) {
  while (!e.empty() && e.back() == 0) e.pop_back();
}

SupportEntry entry_of(const RowLabel& label, int var) {
  SupportEntry e;
  for (const auto& [v, q] : label) {
    if (v.base.a != var || !v.is_y()) continue;
    if (static_cast<int>(e.size()) <= v.order) e.resize(v.order + 1);
    e[v.order] += q;
  }
  trim(e);
  return e;
}

}  // namespace

std::string entry_str(const SupportEntry& e, int var) {
  if (e.empty()) return "0";
  std::string s;
  for (int k = static_cast<int>(e.size()) - 1; k >= 0; --k) {
    if (e[k] == 0) continue;
    Rational a = abs(e[k]);
    if (s.empty()) s += e[k] < 0 ? "-" : "";
    else s += e[k] < 0 ? " - " : " + ";
    std::string x = "x" + std::to_string(var);
    if (k == 0) s += to_string(a);
    else {
      if (a != 1) s += to_string(a) + "*";
      s += x;
      if (k > 1) s += "^" + std::to_string(k);
    }
  }
  return s;
}

SupportMatrix support_matrix(const std::vector<Monomial>& monomials, int n) {
  SupportMatrix a;
  a.m = static_cast<int>(monomials.size());
  a.n = n;
  for (int j = 1; j <= n; ++j) a.cols.push_back(j);
  for (const auto& mono : monomials) {
    RowLabel label;
    for (const auto& [v, e] : mono.entries()) {
      if (!v.is_y()) throw std::invalid_argument("support matrix: coefficient variable " + var_name(v));
      if (v.base.a < 1 || v.base.a > n) throw std::invalid_argument("support matrix: unknown variable " + var_name(v));
      label[v] = Rational(static_cast<long>(e));
    }
    a.rows.push_back(std::move(label));
  }
  a.entries = entries_from_labels(a);
  return a;
}

SupportMatrix support_matrix_from_entries(const std::vector<std::vector<SupportEntry>>& entries) {
  SupportMatrix a;
  a.m = static_cast<int>(entries.size());
  a.n = a.m ? static_cast<int>(entries[0].size()) : 0;
  for (int j = 1; j <= a.n; ++j) a.cols.push_back(j);
  for (const auto& row : entries) {
    if (static_cast<int>(row.size()) != a.n) throw std::invalid_argument("support matrix rows differ in length");
    RowLabel label;
    for (int c = 0; c < a.n; ++c)
      for (std::size_t k = 0; k < row[c].size(); ++k)
        if (row[c][k] != 0) label[DerivVar::y(c + 1, static_cast<int>(k))] = row[c][k];
    a.rows.push_back(std::move(label));
  }
  a.entries = entries_from_labels(a);
  return a;
}

std::vector<std::vector<SupportEntry>> entries_from_labels(const SupportMatrix& a) {
  std::vector<std::vector<SupportEntry>> out(a.m, std::vector<SupportEntry>(a.n));
  for (int r = 0; r < a.m; ++r)
    for (int c = 0; c < a.n; ++c) out[r][c] = entry_of(a.rows[r], a.cols[c]);
  return out;
}

namespace {

struct View {
  int r0, c0, m, n;
};

bool view_reduced_prefix(const SupportMatrix& a, const View& v, int ncols) {
  int lim = std::min(v.m, ncols);
  for (int c = 0; c < lim; ++c) {
    int d = entry_degree(a.at(v.r0 + c, v.c0 + c));
    if (is_neg_inf(d)) return false;
    for (int r = c + 1; r < v.m; ++r)
      if (entry_degree(a.at(v.r0 + r, v.c0 + c)) >= d) return false;
  }
  return true;
}

bool view_is_tshape(const SupportMatrix& a, const View& v, int i, int j) {
  for (int r = i; r < v.m; ++r)
    for (int c = 0; c < v.n; ++c) {
      if (c >= i && c < i + j) continue;
      if (!a.at(v.r0 + r, v.c0 + c).empty()) return false;
    }
  return view_reduced_prefix(a, v, i + j);
}

std::optional<std::pair<int, int>> view_index(const SupportMatrix& a, const View& v) {
  int mn = std::min(v.m, v.n);
  for (int rank = mn; rank >= 0; --rank)
    for (int i = rank; i >= 0; --i)
      if (view_is_tshape(a, v, i, rank - i)) return std::make_pair(i, rank - i);
  return std::nullopt;
}

class Reducer {
 public:
  Reducer(SupportMatrix& a, std::vector<ElementaryOp>& trace) : a_(a), trace_(trace) {}

  std::pair<int, int> run(const View& v);

 private:
  SupportMatrix& a_;
  std::vector<ElementaryOp>& trace_;

  void emit(const ElementaryOp& op) {
    apply_op(a_, op);
    trace_.push_back(op);
  }
  void row_swap(int x, int y) {
    if (x != y) emit({ElementaryOp::RowSwap, x, y, 0});
  }
  void col_swap(int x, int y) {
    if (x != y) emit({ElementaryOp::ColSwap, x, y, 0});
  }
  void reverse_cols(int first, int last) {
    for (--last; first < last; ++first, --last) col_swap(first, last);
  }
  // Moves global columns [mid, last) in front of [first, mid).
  void rotate_cols(int first, int mid, int last) {
    if (first == mid || mid == last) return;
    reverse_cols(first, mid);
    reverse_cols(mid, last);
    reverse_cols(first, last);
  }
  std::pair<int, int> finish(const View& v) {
    auto idx = view_index(a_, v);
    if (!idx) throw std::logic_error("rdm: internal error, result is not in T-shape");
    return *idx;
  }
  void step1(const View& v, int& s);
};

void Reducer::step1(const View& v, int& s) {
  int mn = std::min(v.m, v.n);
  for (s = 0; s < mn; ++s) {
    int prow = -1, pcol = -1;
    for (int l = s; l < v.n && pcol < 0; ++l) {
      int best = kNegInf;
      for (int r = s; r < v.m; ++r) {
        int d = entry_degree(a_.at(v.r0 + r, v.c0 + l));
        if (!is_neg_inf(d) && (prow < 0 || d > best)) {
          best = d;
          prow = r;
        }
      }
      if (prow >= 0) pcol = l;
    }
    if (pcol < 0) return;
    row_swap(v.r0 + s, v.r0 + prow);
    col_swap(v.c0 + s, v.c0 + pcol);
    const int gs = v.r0 + s, gc = v.c0 + s;
    for (int r = s + 1; r < v.m; ++r) {
      const auto& piv = a_.at(gs, gc);
      const auto& e = a_.at(v.r0 + r, gc);
      if (entry_degree(e) == entry_degree(piv)) emit({ElementaryOp::RowAdd, gs, v.r0 + r, -e.back() / piv.back()});
    }
  }
}

std::pair<int, int> Reducer::run(const View& v) {
  if (v.m == 0 || v.n == 0) return {0, 0};
  const int p = std::max(v.m, v.n);
  int s = 0;
  step1(v, s);
  int i = v.m - s, j = v.n - s;

  int prev = -1;
  while (true) {
    if (view_index(a_, v)) return finish(v);
    if (j == v.n) {
      run({v.r0, v.c0, v.m - i, v.n});
      return finish(v);
    }
    if (i == v.m) {
      run({v.r0, v.c0, v.m, v.n - j});
      return finish(v);
    }
    const int r = i + j;
    if (r <= prev) throw std::logic_error("rdm: internal error, zero block did not grow");
    prev = r;
    if (r >= p + 1) break;

    View c1{v.r0 + v.m - i, v.c0 + (p - r), i, v.n + i - p};
    View c2{v.r0 + (p - r), v.c0 + v.n - j, v.m + j - p, j};
    auto n1 = run(c1);
    auto n2 = run(c2);
    bool full1 = n1.first + n1.second == std::min(c1.m, c1.n);
    bool full2 = n2.first + n2.second == std::min(c2.m, c2.n);
    if (full1 && full2) {
      rotate_cols(v.c0 + p - r, v.c0 + v.n - j, v.c0 + v.n + v.m - p);
      return finish(v);
    }
    if (!full1) {
      auto [ka, kb] = n1;
      rotate_cols(c1.c0, c1.c0 + ka, c1.c0 + ka + kb);
      i = c1.m - ka;
      j = (c1.n - kb) + j;
    } else {
      auto [ka, kb] = n2;
      rotate_cols(c2.c0, c2.c0 + ka, c2.c0 + ka + kb);
      i = (c2.m - ka) + i;
      j = c2.n - kb;
    }
  }

  // Step 3: the lower-left block under the zero matrix has more rows than columns.
  View c3{v.r0 + v.m - i, v.c0, i, v.n - j};
  auto [k, l] = run(c3);
  if (l == 0) {
    run({v.r0, v.c0, v.m - (i - k), v.n});
    return finish(v);
  }
  if (k + l < c3.n) {
    rotate_cols(v.c0, v.c0 + k, v.c0 + k + l);
    i = i - k;
    j = v.n - l;
  }
  View c4{v.r0, v.c0 + v.n - j, v.m - i, j};
  auto n4 = run(c4);
  int rank4 = n4.first + n4.second;
  View c5{v.r0 + rank4, v.c0, v.m - rank4, v.n - j};
  run(c5);
  rotate_cols(v.c0, v.c0 + v.n - j, v.c0 + v.n - j + rank4);
  return finish(v);
}

}  // namespace

bool is_reduced(const SupportMatrix& a) {
  View v{0, 0, a.m, a.n};
  return view_reduced_prefix(a, v, std::min(a.m, a.n));
}

void apply_op(SupportMatrix& a, const ElementaryOp& op) {
  switch (op.kind) {
    case ElementaryOp::RowSwap:
      std::swap(a.entries.at(op.a), a.entries.at(op.b));
      std::swap(a.rows.at(op.a), a.rows.at(op.b));
      break;
    case ElementaryOp::RowAdd: {
      for (int c = 0; c < a.n; ++c) {
        const auto& src = a.entries.at(op.a)[c];
        auto& dst = a.entries.at(op.b)[c];
        if (dst.size() < src.size()) dst.resize(src.size());
        for (std::size_t k = 0; k < src.size(); ++k) dst[k] += op.q * src[k];
        trim(dst);
      }
      RowLabel& dl = a.rows.at(op.b);
      for (const auto& [v, e] : a.rows.at(op.a)) {
        Rational& t = dl[v];
        t += op.q * e;
        if (t == 0) dl.erase(v);
      }
      break;
    }
    case ElementaryOp::ColSwap:
      for (auto& row : a.entries) std::swap(row.at(op.a), row.at(op.b));
      std::swap(a.cols.at(op.a), a.cols.at(op.b));
      break;
  }
}

std::optional<std::pair<int, int>> tshape_index(const SupportMatrix& a) { return view_index(a, {0, 0, a.m, a.n}); }

TShapeResult rdm(const SupportMatrix& a) {
  TShapeResult res;
  res.matrix = a;
  Reducer red(res.matrix, res.trace);
  auto [i, j] = red.run({0, 0, a.m, a.n});
  res.i = i;
  res.j = j;
  return res;
}

int dtrdeg_monomials(const std::vector<Monomial>& monomials, int n) {
  return rdm(support_matrix(monomials, n)).rank();
}

std::size_t random_rank(const SupportMatrix& a, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> dist(-(1L << 16), 1L << 16);
  std::map<int, Integer> xs;
  for (int c : a.cols) xs[c] = Integer(dist(rng));
  std::vector<std::vector<Rational>> num(a.m, std::vector<Rational>(a.n));
  for (int r = 0; r < a.m; ++r)
    for (int c = 0; c < a.n; ++c) {
      const auto& e = a.at(r, c);
      Rational acc = 0;
      for (auto k = e.size(); k-- > 0;) acc = acc * xs[a.cols[c]] + e[k];
      num[r][c] = acc;
    }
  return rational_rank(num);
}

std::string matrix_str(const SupportMatrix& a) {
  std::ostringstream os;
  for (int r = 0; r < a.m; ++r) {
    os << "(";
    for (int c = 0; c < a.n; ++c) os << (c ? ", " : "") << entry_str(a.at(r, c), a.cols[c]);
    os << ")\n";
  }
  return os.str();
}

}  // namespace sdr
