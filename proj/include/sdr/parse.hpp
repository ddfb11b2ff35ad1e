#ifndef SDR_PARSE_HPP
#define SDR_PARSE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sdr/diffpoly.hpp"
#include "sdr/system.hpp"

namespace sdr {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Everything a system file may carry; absent sections stay empty.
struct SystemFile {
  std::optional<DiffSystem> system;
  int declared_vars = 0;
  std::vector<Monomial> monomials;
  std::vector<std::vector<int>> order_matrix;
  std::optional<DiffPoly> sr;
};

SystemFile parse_system_file(std::string_view text);
DiffSystem parse_system(std::string_view text);
Monomial parse_monomial(std::string_view text);
DiffPoly parse_poly(std::string_view text);

std::string print_system(const DiffSystem& sys);

}  // namespace sdr

#endif
