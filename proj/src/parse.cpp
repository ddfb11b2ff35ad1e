#include "sdr/parse.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace sdr {

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }
  [[noreturn]] void fail_at(const std::string& msg, int line, int col) const { throw ParseError(msg, line, col); }

  int line() const { return line_; }
  int col() const { return col_; }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  char peek_raw() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  char peek() {
    skip_space();
    return peek_raw();
  }

  void advance() {
    if (pos_ >= text_.size()) return;
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  bool accept(char c) {
    if (peek() == c) {
      advance();
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::string word() {
    skip_space();
    std::string w;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      w += text_[pos_];
      advance();
    }
    return w;
  }

  std::string digits_raw() {
    std::string d;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      d += text_[pos_];
      advance();
    }
    return d;
  }

  long long integer_raw() {
    bool neg = false;
    if (peek_raw() == '-') {
      neg = true;
      advance();
    }
    std::string d = digits_raw();
    if (d.empty()) fail("expected integer");
    if (d.size() > 15) fail("integer too large");
    long long v = std::stoll(d);
    return neg ? -v : v;
  }

  Rational rational() {
    skip_space();
    std::string s;
    if (peek_raw() == '-' || peek_raw() == '+') {
      s += peek_raw();
      advance();
    }
    std::string num = digits_raw();
    if (num.empty()) fail("expected number");
    s += num;
    if (peek_raw() == '/') {
      advance();
      std::string den = digits_raw();
      if (den.empty()) fail("expected denominator");
      if (den.find_first_not_of('0') == std::string::npos) fail("zero denominator");
      s += "/" + den;
    }
    return parse_rational(s);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct VarPolicy {
  bool allow_u = true;
  bool allow_y = true;
  int max_y = -1;  // -1: unchecked
};

DerivVar parse_var(Cursor& c, const VarPolicy& pol) {
  c.skip_space();
  int line = c.line(), col = c.col();
  char k = c.peek_raw();
  DerivVar v;
  if (k == 'y') {
    c.advance();
    std::string d = c.digits_raw();
    if (d.empty()) c.fail("expected variable index after 'y'");
    int j = std::stoi(d);
    if (!pol.allow_y) c.fail_at("y variable not allowed here", line, col);
    if (j < 1 || (pol.max_y >= 0 && j > pol.max_y)) c.fail_at("unknown variable y" + d, line, col);
    v = DerivVar::y(j);
  } else if (k == 'u') {
    c.advance();
    std::string d = c.digits_raw();
    if (d.empty()) c.fail("expected coefficient index after 'u'");
    int i = 0, kk = 0;
    if (c.peek_raw() == '_') {
      c.advance();
      std::string e = c.digits_raw();
      if (e.empty()) c.fail("expected index after '_'");
      i = std::stoi(d);
      kk = std::stoi(e);
    } else if (d.size() == 2) {
      i = d[0] - '0';
      kk = d[1] - '0';
    } else {
      c.fail_at("ambiguous coefficient name u" + d + " (use u<i>_<k>)", line, col);
    }
    if (!pol.allow_u) c.fail_at("coefficient variable not allowed here", line, col);
    v = DerivVar::u(i, kk);
  } else {
    c.fail("expected variable");
  }
  // derivative marks
  if (c.peek_raw() == '\'') {
    while (c.peek_raw() == '\'') {
      c.advance();
      ++v.order;
    }
  } else if (c.peek_raw() == '^') {
    // lookahead for ^( k )
    Cursor save = c;
    c.advance();
    if (c.peek_raw() == '(') {
      c.advance();
      c.skip_space();
      std::string d = c.digits_raw();
      if (d.empty()) c.fail("malformed derivative mark, expected ^(k)");
      c.skip_space();
      if (c.peek_raw() != ')') c.fail("malformed derivative mark, expected ')'");
      c.advance();
      v.order = std::stoi(d);
    } else {
      c = save;
    }
  }
  if (c.peek_raw() == '\'') c.fail("malformed derivative mark");
  return v;
}

Monomial parse_monomial_at(Cursor& c, const VarPolicy& pol) {
  c.skip_space();
  if (c.peek_raw() == '1') {
    Cursor save = c;
    c.advance();
    if (!std::isdigit(static_cast<unsigned char>(c.peek_raw())) && c.peek_raw() != '/') return Monomial();
    c = save;
    c.fail("expected monomial");
  }
  std::vector<Monomial::Entry> entries;
  while (true) {
    DerivVar v = parse_var(c, pol);
    long long e = 1;
    if (c.peek_raw() == '^') {
      c.advance();
      e = c.integer_raw();
    }
    entries.emplace_back(v, e);
    if (c.peek() == '*') {
      c.advance();
      continue;
    }
    break;
  }
  return Monomial::from_entries(std::move(entries));
}

DiffPoly parse_poly_at(Cursor& c, const VarPolicy& pol, char terminator) {
  DiffPoly p;
  bool first = true;
  while (true) {
    char ch = c.peek();
    if (ch == terminator || ch == '\0') {
      if (first) c.fail("expected polynomial");
      break;
    }
    Rational sign = 1;
    if (ch == '+' || ch == '-') {
      if (ch == '-') sign = -1;
      c.advance();
    } else if (!first) {
      c.fail("expected '+' or '-'");
    }
    ch = c.peek();
    Rational coeff = 1;
    Monomial m;
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      coeff = c.rational();
      if (c.peek() == '*') {
        c.advance();
        m = parse_monomial_at(c, pol);
      }
    } else {
      m = parse_monomial_at(c, pol);
    }
    p.add_term(m, sign * coeff);
    first = false;
  }
  return p;
}

}  // namespace

SystemFile parse_system_file(std::string_view text) {
  Cursor c(text);
  SystemFile out;
  std::map<int, std::vector<Monomial>> polys;
  std::map<int, std::pair<int, int>> poly_pos;
  std::map<std::pair<int, int>, std::vector<Rational>> values;
  bool have_vars = false;
  while (!c.at_end()) {
    int line = c.line(), col = c.col();
    std::string kw = c.word();
    if (kw.empty()) c.fail("expected statement");
    if (kw == "vars") {
      if (have_vars) c.fail_at("duplicate vars statement", line, col);
      have_vars = true;
      std::set<int> seen;
      while (c.peek() != ';') {
        if (c.peek() == '\0') c.fail("expected ';'");
        int vl = c.line(), vc = c.col();
        std::string name = c.word();
        if (name.size() < 2 || name[0] != 'y' ||
            name.find_first_not_of("0123456789", 1) != std::string::npos)
          c.fail_at("variables must be named y1, y2, ...", vl, vc);
        int j = std::stoi(name.substr(1));
        if (j < 1 || !seen.insert(j).second) c.fail_at("duplicate or invalid variable " + name, vl, vc);
        c.accept(',');
      }
      c.expect(';');
      int n = static_cast<int>(seen.size());
      if (n == 0 || *seen.rbegin() != n) c.fail_at("variables must be y1..yn without gaps", line, col);
      out.declared_vars = n;
    } else if (kw.size() >= 2 && kw[0] == 'P' && kw.find_first_not_of("0123456789", 1) == std::string::npos) {
      int i = std::stoi(kw.substr(1));
      if (polys.count(i)) c.fail_at("duplicate polynomial " + kw, line, col);
      if (!have_vars) c.fail_at("vars must be declared before " + kw, line, col);
      c.expect(':');
      VarPolicy pol{false, true, out.declared_vars};
      std::vector<Monomial> supp;
      while (true) {
        c.skip_space();
        int ml = c.line(), mc = c.col();
        Monomial m = parse_monomial_at(c, pol);
        if (std::find(supp.begin(), supp.end(), m) != supp.end())
          c.fail_at("duplicate monomial " + m.str() + " in " + kw, ml, mc);
        supp.push_back(m);
        if (c.accept(',')) continue;
        c.expect(';');
        break;
      }
      polys[i] = std::move(supp);
      poly_pos[i] = {line, col};
    } else if (kw == "monomials") {
      c.expect(':');
      VarPolicy pol{false, true, have_vars ? out.declared_vars : -1};
      while (true) {
        out.monomials.push_back(parse_monomial_at(c, pol));
        if (c.accept(',')) continue;
        c.expect(';');
        break;
      }
    } else if (kw == "order") {
      c.expect(':');
      while (true) {
        c.expect('[');
        std::vector<int> row;
        while (true) {
          c.skip_space();
          if (c.peek_raw() == '-' ) {
            Cursor save = c;
            c.advance();
            if (c.peek_raw() == 'i') {
              std::string w = c.word();
              if (w != "inf") c.fail("expected -inf");
              row.push_back(kNegInf);
            } else {
              c = save;
              row.push_back(static_cast<int>(c.integer_raw()));
            }
          } else {
            row.push_back(static_cast<int>(c.integer_raw()));
          }
          if (c.accept(',')) continue;
          c.expect(']');
          break;
        }
        if (!out.order_matrix.empty() && row.size() != out.order_matrix.front().size())
          c.fail("order matrix rows must have equal length");
        out.order_matrix.push_back(std::move(row));
        if (c.accept(',')) continue;
        c.expect(';');
        break;
      }
    } else if (kw == "coeff") {
      VarPolicy pol{true, false, -1};
      c.skip_space();
      int vl = c.line(), vc = c.col();
      DerivVar v = parse_var(c, pol);
      if (v.order != 0) c.fail_at("coefficient values are given for u_{ik} itself", vl, vc);
      c.expect('=');
      std::vector<Rational> val;
      if (c.accept('[')) {
        while (true) {
          val.push_back(c.rational());
          if (c.accept(',')) continue;
          c.expect(']');
          break;
        }
      } else {
        val.push_back(c.rational());
      }
      c.expect(';');
      if (!values.emplace(std::make_pair(v.base.a, v.base.b), val).second)
        c.fail_at("duplicate value for " + var_name(v), vl, vc);
    } else if (kw == "sr") {
      c.expect(':');
      VarPolicy pol{true, false, -1};
      out.sr = parse_poly_at(c, pol, ';');
      c.expect(';');
    } else {
      c.fail_at("unknown statement '" + kw + "'", line, col);
    }
  }
  if (!polys.empty()) {
    DiffSystem sys;
    sys.n = out.declared_vars;
    int expect = 0;
    for (auto& [i, supp] : polys) {
      if (i != expect) {
        auto [l, cl] = poly_pos[i];
        throw ParseError("polynomials must be numbered P0..P" + std::to_string(polys.size() - 1), l, cl);
      }
      ++expect;
      sys.supports.push_back(std::move(supp));
    }
    sys.values = values;
    try {
      sys.validate();
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), c.line(), c.col());
    }
    out.system = std::move(sys);
  } else if (!values.empty()) {
    throw ParseError("coefficient values given without polynomials", c.line(), c.col());
  }
  return out;
}

DiffSystem parse_system(std::string_view text) {
  SystemFile f = parse_system_file(text);
  if (!f.system) throw ParseError("no polynomials given", 1, 1);
  return *f.system;
}

Monomial parse_monomial(std::string_view text) {
  Cursor c(text);
  Monomial m = parse_monomial_at(c, VarPolicy{});
  if (!c.at_end()) c.fail("trailing input after monomial");
  return m;
}

DiffPoly parse_poly(std::string_view text) {
  Cursor c(text);
  DiffPoly p = parse_poly_at(c, VarPolicy{}, '\0');
  if (!c.at_end()) c.fail("trailing input after polynomial");
  return p;
}

std::string print_system(const DiffSystem& sys) {
  std::ostringstream os;
  os << "vars";
  for (int j = 1; j <= sys.n; ++j) os << " y" << j;
  os << ";\n";
  for (int i = 0; i < sys.size(); ++i) {
    os << "P" << i << ":";
    for (std::size_t k = 0; k < sys.supports[i].size(); ++k) os << (k ? ", " : " ") << sys.supports[i][k].str();
    os << ";\n";
  }
  for (const auto& [key, val] : sys.values) {
    os << "coeff u" << key.first << "_" << key.second << " = ";
    if (val.size() == 1) {
      os << to_string(val[0]);
    } else {
      os << "[";
      for (std::size_t t = 0; t < val.size(); ++t) os << (t ? ", " : "") << to_string(val[t]);
      os << "]";
    }
    os << ";\n";
  }
  return os.str();
}

}  // namespace sdr
