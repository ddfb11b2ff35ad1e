#include "sdr/diffpoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sdr {

namespace {

std::string order_marks(int order) {
  if (order <= 3) return std::string(static_cast<std::size_t>(order), '\'');
  return "^(" + std::to_string(order) + ")";
}

}  // namespace

std::string var_name(const DerivVar& v) {
  std::string s;
  if (v.is_y()) {
    s = "y" + std::to_string(v.base.a);
  } else if (v.base.a < 10 && v.base.b < 10) {
    s = "u" + std::to_string(v.base.a) + std::to_string(v.base.b);
  } else {
    s = "u" + std::to_string(v.base.a) + "_" + std::to_string(v.base.b);
  }
  return s + order_marks(v.order);
}

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(const DerivVar& v, std::int64_t e) {
  if (e != 0) exps_.emplace_back(v, e);
  recompute_degree();
}

Monomial Monomial::from_entries(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& x, const Entry& y) { return x.first < y.first; });
  Monomial m;
  for (const auto& [v, e] : entries) {
    if (!m.exps_.empty() && m.exps_.back().first == v) {
      m.exps_.back().second = checked_add(m.exps_.back().second, e);
      if (m.exps_.back().second == 0) m.exps_.pop_back();
    } else if (e != 0) {
      m.exps_.emplace_back(v, e);
    }
  }
  m.recompute_degree();
  return m;
}

void Monomial::recompute_degree() {
  std::int64_t d = 0;
  for (const auto& [v, e] : exps_) d = checked_add(d, e);
  degree_ = d;
}

std::int64_t Monomial::exponent(const DerivVar& v) const {
  auto it = std::lower_bound(exps_.begin(), exps_.end(), v,
                             [](const Entry& x, const DerivVar& w) { return x.first < w; });
  return (it != exps_.end() && it->first == v) ? it->second : 0;
}

std::int64_t Monomial::degree_in_family(Family f) const {
  std::int64_t d = 0;
  for (const auto& [v, e] : exps_)
    if (v.base.kind == f) d = checked_add(d, e);
  return d;
}

std::int64_t Monomial::degree_in_y(int j) const {
  std::int64_t d = 0;
  for (const auto& [v, e] : exps_)
    if (v.is_y() && v.base.a == j) d = checked_add(d, e);
  return d;
}

std::int64_t Monomial::degree_in_block(int i) const {
  std::int64_t d = 0;
  for (const auto& [v, e] : exps_)
    if (v.is_u() && v.base.a == i) d = checked_add(d, e);
  return d;
}

std::int64_t Monomial::weight() const {
  std::int64_t w = 0;
  for (const auto& [v, e] : exps_) w = checked_add(w, checked_mul(v.order, e));
  return w;
}

bool Monomial::has_negative_exponent() const {
  return std::any_of(exps_.begin(), exps_.end(), [](const Entry& x) { return x.second < 0; });
}

bool Monomial::only_y() const {
  return std::all_of(exps_.begin(), exps_.end(), [](const Entry& x) { return x.first.is_y(); });
}

bool Monomial::only_u() const {
  return std::all_of(exps_.begin(), exps_.end(), [](const Entry& x) { return x.first.is_u(); });
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.exps_.reserve(exps_.size() + o.exps_.size());
  auto a = exps_.begin();
  auto b = o.exps_.begin();
  while (a != exps_.end() || b != o.exps_.end()) {
    if (b == o.exps_.end() || (a != exps_.end() && a->first < b->first)) {
      r.exps_.push_back(*a++);
    } else if (a == exps_.end() || b->first < a->first) {
      r.exps_.push_back(*b++);
    } else {
      std::int64_t e = checked_add(a->second, b->second);
      if (e != 0) r.exps_.emplace_back(a->first, e);
      ++a;
      ++b;
    }
  }
  r.degree_ = checked_add(degree_, o.degree_);
  return r;
}

Monomial Monomial::inverse() const {
  Monomial r;
  r.exps_ = exps_;
  for (auto& [v, e] : r.exps_) e = checked_mul(e, -1);
  r.degree_ = checked_mul(degree_, -1);
  return r;
}

Monomial Monomial::pow(std::int64_t e) const {
  if (e == 0) return Monomial();
  Monomial r;
  r.exps_ = exps_;
  for (auto& [v, x] : r.exps_) x = checked_mul(x, e);
  r.degree_ = checked_mul(degree_, e);
  return r;
}

Monomial Monomial::without(const DerivVar& v) const {
  Monomial r;
  for (const auto& x : exps_)
    if (x.first != v) r.exps_.push_back(x);
  r.recompute_degree();
  return r;
}

std::string Monomial::str() const {
  if (exps_.empty()) return "1";
  std::string s;
  for (const auto& [v, e] : exps_) {
    if (!s.empty()) s += "*";
    s += var_name(v);
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s;
}

int lex_compare(const Monomial& a, const Monomial& b) {
  const auto& x = a.entries();
  const auto& y = b.entries();
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) return x[i].second > 0 ? 1 : -1;
    if (i == x.size() || y[j].first < x[i].first) return y[j].second > 0 ? -1 : 1;
    if (x[i].second != y[j].second) return x[i].second > y[j].second ? 1 : -1;
    ++i;
    ++j;
  }
  return 0;
}

bool TermOrder::operator()(const Monomial& a, const Monomial& b) const {
  if (a.degree() != b.degree()) return a.degree() > b.degree();
  return lex_compare(a, b) > 0;
}

std::size_t MonomialHash::operator()(const Monomial& m) const {
  std::size_t h = 1469598103934665603ull;
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (const auto& [v, e] : m.entries()) {
    mix(static_cast<std::size_t>(v.base.kind));
    mix(static_cast<std::size_t>(v.base.a));
    mix(static_cast<std::size_t>(v.base.b));
    mix(static_cast<std::size_t>(v.order));
    mix(static_cast<std::size_t>(e));
  }
  return h;
}

// ---------------------------------------------------------------- DiffPoly

DiffPoly::DiffPoly(const Rational& c) {
  if (c != 0) terms_.emplace(Monomial(), c);
}

DiffPoly::DiffPoly(const Monomial& m, const Rational& c) {
  if (c != 0) terms_.emplace(m, c);
}

Rational DiffPoly::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

const Monomial& DiffPoly::leading_monomial() const {
  if (terms_.empty()) throw std::logic_error("leading monomial of zero polynomial");
  return terms_.begin()->first;
}

const Rational& DiffPoly::leading_coeff() const {
  if (terms_.empty()) throw std::logic_error("leading coefficient of zero polynomial");
  return terms_.begin()->second;
}

void DiffPoly::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

DiffPoly DiffPoly::operator+(const DiffPoly& o) const {
  DiffPoly r = *this;
  r += o;
  return r;
}

DiffPoly DiffPoly::operator-(const DiffPoly& o) const {
  DiffPoly r = *this;
  r -= o;
  return r;
}

DiffPoly DiffPoly::operator-() const {
  DiffPoly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

DiffPoly DiffPoly::operator*(const DiffPoly& o) const {
  DiffPoly r;
  for (const auto& [m1, c1] : terms_)
    for (const auto& [m2, c2] : o.terms_) r.add_term(m1 * m2, c1 * c2);
  return r;
}

DiffPoly DiffPoly::operator*(const Rational& c) const {
  if (c == 0) return DiffPoly();
  DiffPoly r = *this;
  for (auto& [m, x] : r.terms_) x *= c;
  return r;
}

DiffPoly DiffPoly::operator*(const Monomial& mono) const {
  DiffPoly r;
  for (const auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m * mono, c);
  return r;
}

DiffPoly operator*(const Rational& c, const DiffPoly& p) { return p * c; }

DiffPoly DiffPoly::pow(unsigned e) const {
  DiffPoly r(Rational(1));
  DiffPoly base = *this;
  while (e > 0) {
    if (e & 1u) r = r * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return r;
}

std::vector<DerivVar> DiffPoly::variables() const {
  std::vector<DerivVar> vs;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m.entries()) vs.push_back(v);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

std::int64_t DiffPoly::total_degree() const {
  if (terms_.empty()) return kNegInf;
  return terms_.begin()->first.degree();
}

bool DiffPoly::only_u() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.only_u(); });
}

bool DiffPoly::only_y() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.only_y(); });
}

bool DiffPoly::is_homogeneous() const {
  if (terms_.empty()) return true;
  std::int64_t d = terms_.begin()->first.degree();
  return std::all_of(terms_.begin(), terms_.end(), [d](const auto& t) { return t.first.degree() == d; });
}

Rational DiffPoly::make_primitive() {
  if (terms_.empty()) return Rational(1);
  Integer lcm_den = 1;
  for (const auto& [m, c] : terms_) mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), c.get_den_mpz_t());
  Integer g = 0;
  for (const auto& [m, c] : terms_) {
    Integer num = c.get_num() * (lcm_den / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
  }
  Rational factor(lcm_den, g);
  factor.canonicalize();
  if (terms_.begin()->second < 0) factor = -factor;
  for (auto& [m, c] : terms_) c *= factor;
  return factor;
}

bool DiffPoly::is_primitive() const {
  if (terms_.empty()) return false;
  Integer g = 0;
  for (const auto& [m, c] : terms_) {
    if (c.get_den() != 1) return false;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
  }
  return g == 1;
}

std::string DiffPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational a = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (m.is_one()) {
      os << to_string(a);
    } else {
      if (a != 1) os << to_string(a) << "*";
      os << m.str();
    }
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------- operations

DiffPoly differentiate(const DiffPoly& p) {
  DiffPoly r;
  for (const auto& [m, c] : p.terms()) {
    for (const auto& [v, e] : m.entries()) {
      Monomial t = m * Monomial(v, -1) * Monomial(v.prime());
      r.add_term(t, c * Rational(e));
    }
  }
  return r;
}

DiffPoly differentiate(const DiffPoly& p, int times) {
  DiffPoly r = p;
  for (int t = 0; t < times; ++t) r = differentiate(r);
  return r;
}

DiffPoly partial(const DiffPoly& p, const DerivVar& v) {
  DiffPoly r;
  for (const auto& [m, c] : p.terms()) {
    std::int64_t e = m.exponent(v);
    if (e == 0) continue;
    r.add_term(m * Monomial(v, -1), c * Rational(e));
  }
  return r;
}

NormForm norm_form(const DiffPoly& f) {
  if (f.is_zero()) throw std::invalid_argument("norm form undefined for 0");
  std::map<DerivVar, std::int64_t> mins;
  for (const auto& [m, c] : f.terms())
    for (const auto& [v, e] : m.entries()) mins.emplace(v, e);
  for (auto& [v, mn] : mins)
    for (const auto& [m, c] : f.terms()) mn = std::min(mn, m.exponent(v));
  std::vector<Monomial::Entry> shift;
  for (const auto& [v, mn] : mins)
    if (mn != 0) shift.emplace_back(v, -mn);
  NormForm nf;
  nf.shift = Monomial::from_entries(std::move(shift));
  nf.poly = f * nf.shift;
  return nf;
}

int order_in(const DiffPoly& p, const DiffIndex& base) {
  int best = kNegInf;
  for (const auto& [m, c] : p.terms())
    for (const auto& [v, e] : m.entries())
      if (v.base == base) best = std::max(best, v.order);
  return best;
}

int lowest_order_in(const DiffPoly& p, const DiffIndex& base) {
  int best = kNegInf;
  for (const auto& [m, c] : p.terms())
    for (const auto& [v, e] : m.entries())
      if (v.base == base && (is_neg_inf(best) || v.order < best)) best = v.order;
  return best;
}

int order_in_block(const DiffPoly& p, int block) {
  int best = kNegInf;
  for (const auto& [m, c] : p.terms())
    for (const auto& [v, e] : m.entries())
      if (v.is_u() && v.base.a == block) best = std::max(best, v.order);
  return best;
}

int order_in_y(const DiffPoly& p) {
  int best = kNegInf;
  for (const auto& [m, c] : p.terms())
    for (const auto& [v, e] : m.entries())
      if (v.is_y()) best = std::max(best, v.order);
  return best;
}

std::int64_t degree_in_block(const DiffPoly& p, int block) {
  std::int64_t best = kNegInf;
  for (const auto& [m, c] : p.terms()) best = std::max(best, m.degree_in_block(block));
  return best;
}

std::int64_t degree_in_y(const DiffPoly& p) {
  std::int64_t best = kNegInf;
  for (const auto& [m, c] : p.terms()) best = std::max(best, m.degree_in_family(Family::Y));
  return best;
}

bool has_block(const DiffPoly& p, int block) { return !is_neg_inf(order_in_block(p, block)); }

DiffPoly euler_apply(const DiffPoly& p, int block, int r) {
  DiffPoly out;
  for (const DerivVar& w : p.variables()) {
    if (!w.is_u() || w.base.a != block || w.order < r) continue;
    DerivVar low{w.base, w.order - r};
    Rational c(binomial(static_cast<unsigned long>(w.order), static_cast<unsigned long>(r)));
    out += partial(p, w) * Monomial(low) * c;
  }
  return out;
}

DiffPoly substitute(const DiffPoly& p, const DerivVar& v, const DiffPoly& value) {
  DiffPoly out;
  std::map<std::int64_t, DiffPoly> powers;
  for (const auto& [m, c] : p.terms()) {
    std::int64_t e = m.exponent(v);
    if (e < 0) throw std::invalid_argument("substitute: negative exponent on " + var_name(v));
    if (e == 0) {
      out.add_term(m, c);
      continue;
    }
    auto it = powers.find(e);
    if (it == powers.end()) it = powers.emplace(e, value.pow(static_cast<unsigned>(e))).first;
    out += it->second * m.without(v) * c;
  }
  return out;
}

}  // namespace sdr
