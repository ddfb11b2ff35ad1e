#include "sdr/system.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>

namespace sdr {

void DiffSystem::validate() const {
  if (n < 1) throw std::invalid_argument("system needs at least one variable");
  if (size() != n + 1)
    throw std::invalid_argument("expected " + std::to_string(n + 1) + " polynomials, got " +
                                std::to_string(size()));
  for (int i = 0; i < size(); ++i) {
    const auto& s = supports[i];
    if (s.size() < 2) throw std::invalid_argument("P" + std::to_string(i) + " needs at least two monomials");
    for (std::size_t a = 0; a < s.size(); ++a) {
      for (const auto& [v, e] : s[a].entries()) {
        if (!v.is_y()) throw std::invalid_argument("P" + std::to_string(i) + ": support monomial contains " + var_name(v));
        if (v.base.a < 1 || v.base.a > n)
          throw std::invalid_argument("P" + std::to_string(i) + ": unknown variable " + var_name(v));
      }
      for (std::size_t b = 0; b < a; ++b)
        if (s[a] == s[b])
          throw std::invalid_argument("P" + std::to_string(i) + ": duplicate monomial " + s[a].str());
    }
  }
  for (const auto& [key, val] : values) {
    if (key.first < 0 || key.first >= size() || key.second < 0 || key.second > l(key.first))
      throw std::invalid_argument("value given for unknown coefficient u" + std::to_string(key.first) + "_" +
                                  std::to_string(key.second));
    if (val.empty()) throw std::invalid_argument("empty coefficient value");
  }
}

DiffPoly DiffSystem::generic(int i) const {
  DiffPoly p;
  for (int k = 0; k <= l(i); ++k) p.add_term(Monomial(DerivVar::u(i, k)) * supports[i][k], 1);
  return p;
}

Monomial DiffSystem::shift(int i) const {
  std::vector<DerivVar> vars;
  for (const auto& m : supports[i])
    for (const auto& [v, e] : m.entries()) vars.push_back(v);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  std::vector<Monomial::Entry> out;
  for (const auto& v : vars) {
    std::int64_t mn = supports[i][0].exponent(v);
    for (const auto& m : supports[i]) mn = std::min(mn, m.exponent(v));
    if (mn != 0) out.emplace_back(v, -mn);
  }
  return Monomial::from_entries(std::move(out));
}

DiffPoly DiffSystem::norm(int i) const { return generic(i) * shift(i); }

Monomial DiffSystem::norm_monomial(int i, int k) const { return supports[i][k] * shift(i); }

Monomial DiffSystem::quotient(int i, int k) const { return supports[i][k] / supports[i][0]; }

int DiffSystem::order(int i) const { return order_in_y(norm(i)); }

std::int64_t DiffSystem::degree(int i) const {
  std::int64_t d = 0;
  for (int k = 0; k <= l(i); ++k) d = std::max(d, norm_monomial(i, k).degree());
  return d;
}

DiffSystem DiffSystem::restrict_to(const std::vector<int>& idx) const {
  DiffSystem out;
  out.n = n;
  for (std::size_t t = 0; t < idx.size(); ++t) {
    out.supports.push_back(supports.at(idx[t]));
    for (const auto& [key, val] : values)
      if (key.first == idx[t]) out.values[{static_cast<int>(t), key.second}] = val;
  }
  return out;
}

std::vector<Monomial> dense_support(int n, int s, int m) {
  std::vector<DerivVar> vars;
  for (int j = 1; j <= n; ++j)
    for (int k = 0; k <= s; ++k) vars.push_back(DerivVar::y(j, k));
  std::vector<Monomial> out;
  std::vector<Monomial::Entry> cur;
  std::function<void(std::size_t, int)> rec = [&](std::size_t start, int left) {
    out.push_back(Monomial::from_entries(cur));
    if (left == 0) return;
    for (std::size_t v = start; v < vars.size(); ++v) {
      cur.emplace_back(vars[v], 1);
      rec(v, left - 1);
      cur.pop_back();
    }
  };
  rec(0, m);
  std::stable_sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return lex_compare(a, b) > 0;
  });
  return out;
}

bool is_dense(const DiffSystem& sys) {
  for (int i = 0; i < sys.size(); ++i) {
    int s = 0;
    std::int64_t m = 0;
    for (const auto& mono : sys.supports[i]) {
      if (mono.has_negative_exponent()) return false;
      for (const auto& [v, e] : mono.entries()) s = std::max(s, v.order);
      m = std::max(m, mono.degree());
    }
    std::set<std::string> have;
    for (const auto& mono : sys.supports[i]) have.insert(mono.str());
    auto full = dense_support(sys.n, s, static_cast<int>(m));
    if (full.size() != sys.supports[i].size()) return false;
    for (const auto& mono : full)
      if (!have.count(mono.str())) return false;
    if (!sys.supports[i][0].is_one()) return false;
  }
  return true;
}

}  // namespace sdr
