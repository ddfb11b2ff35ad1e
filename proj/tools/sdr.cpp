#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdr/bounds.hpp"
#include "sdr/essential.hpp"
#include "sdr/parse.hpp"
#include "sdr/resultant.hpp"
#include "sdr/support.hpp"
#include "sdr/verify.hpp"

using json = nlohmann::ordered_json;
using namespace sdr;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Flags {
  std::string command;
  std::string file;
  bool certify = false;
  bool verify = false;
  int max_order = -1;
  int max_degree = -1;
  int cofactor_start = 0;
  std::size_t budget = 10000;
  std::uint64_t seed = 1;
  std::size_t truncation = 12;
  int threads = 1;
  int trials = 5;
  std::string format = "json";
};

// Mathematical refusal; exit code 2.
struct Refusal {
  std::string message;
  json detail;
};

std::string fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

json order_json(int v) {
  if (is_neg_inf(v)) return "-inf";
  return v;
}

json orders_json(const std::vector<int>& v) {
  json a = json::array();
  for (int x : v) a.push_back(order_json(x));
  return a;
}

json poly_json(const DiffPoly& p) {
  json terms = json::array();
  for (const auto& [m, c] : p.terms()) terms.push_back({to_string(c), m.str()});
  return {{"text", p.str()}, {"terms", terms}};
}

json series_json(const Series& s) {
  json c = json::array();
  for (const auto& q : s.coeffs()) c.push_back(to_string(q));
  return c;
}

json matrix_json(const SupportMatrix& a) {
  json rows = json::array();
  for (const auto& row : a.entries) {
    json r = json::array();
    for (std::size_t c = 0; c < row.size(); ++c) r.push_back(entry_str(row[c], a.cols[c]));
    rows.push_back(r);
  }
  return rows;
}

EssentialOptions essential_options(const Flags& f) {
  EssentialOptions o;
  o.mode = f.certify ? EssentialMode::Certified : EssentialMode::Randomized;
  o.budget = f.budget;
  o.seed = f.seed;
  return o;
}

SolverOptions solver_options(const Flags& f) {
  SolverOptions o;
  o.max_order = f.max_order;
  o.max_degree = f.max_degree;
  o.cofactor_start = f.cofactor_start;
  o.threads = f.threads;
  o.seed = f.seed;
  o.budget = f.budget;
  return o;
}

const DiffSystem& need_system(const SystemFile& sf) {
  if (!sf.system) throw std::invalid_argument("input has no polynomials");
  return *sf.system;
}

json checks_json(const DiffPoly& sr, const DiffSystem& sys, const Flags& f, bool& ok) {
  json out;
  auto mem = membership_check(sr, sys, f.truncation, f.trials, f.seed, f.threads);
  out["membership"] = {{"pass", mem.pass}, {"K", mem.K}, {"margin", mem.margin}, {"trials", mem.trials}};
  json hom = json::array();
  bool hom_ok = true;
  for (int i = 0; i < sys.size(); ++i) {
    if (is_neg_inf(order_in_block(sr, i))) continue;
    auto r = homogeneity_check(sr, i);
    hom.push_back({{"block", i}, {"degree", r.degree}, {"order", r.order}, {"pass", r.pass}});
    hom_ok = hom_ok && r.pass;
  }
  out["homogeneity"] = hom;
  ok = mem.pass && hom_ok;
  return out;
}

json certificate_json(const ResultantCertificate& c) {
  json cof = json::array();
  for (const auto& block : c.cofactors) {
    json b = json::array();
    for (const auto& h : block) b.push_back(poly_json(h));
    cof.push_back(b);
  }
  return {{"sr", poly_json(c.sr)},
          {"h", orders_json(c.h)},
          {"d", c.d},
          {"pivot", c.pivot},
          {"lhs", c.lhs.str()},
          {"cofactors", cof},
          {"c0_dimension", c.c0_dimension},
          {"columns", c.columns},
          {"rows", c.rows},
          {"verified", c.verified},
          {"warnings", c.warnings}};
}

json run(const Flags& f, const SystemFile& sf, bool& checks_ok) {
  checks_ok = true;
  const std::string& cmd = f.command;
  if (cmd == "tshape" || cmd == "dtrdeg") {
    if (sf.monomials.empty()) throw std::invalid_argument("input has no monomials statement");
    int n = sf.declared_vars;
    if (n == 0)
      for (const auto& m : sf.monomials)
        for (const auto& [v, e] : m.entries()) n = std::max(n, v.base.a);
    if (cmd == "dtrdeg") return {{"dtrdeg", dtrdeg_monomials(sf.monomials, n)}};
    auto a = support_matrix(sf.monomials, n);
    auto res = rdm(a);
    return {{"input", matrix_json(a)},
            {"matrix", matrix_json(res.matrix)},
            {"index", {res.i, res.j}},
            {"rank", res.rank()},
            {"reduced", is_reduced(res.matrix)},
            {"operations", res.trace.size()}};
  }
  if (cmd == "jacobi") {
    OrderMatrix a = sf.order_matrix.empty() ? order_matrix(need_system(sf)) : sf.order_matrix;
    json rows = json::array();
    for (const auto& r : a) rows.push_back(orders_json(r));
    auto mb = matrix_bounds(a);
    return {{"matrix", rows}, {"Jac", order_json(jacobi_number(a))}, {"J", orders_json(mb.jacobi)},
            {"modified", orders_json(mb.modified)}, {"gamma", mb.gamma}};
  }
  const DiffSystem& sys = need_system(sf);
  if (cmd == "essential") {
    auto r = is_essential(sys, essential_options(f));
    json out{{"essential", r.essential},
             {"rank", r.rank},
             {"mode", mode_name(r.mode)},
             {"inconclusive", r.inconclusive},
             {"selections", r.selections}};
    out["witness"] = r.witness ? json(*r.witness) : json(nullptr);
    return out;
  }
  if (cmd == "rank-essential") {
    auto r = rank_essential_subset(sys, essential_options(f));
    return {{"subset", r.subset}, {"certified", r.certified}};
  }
  if (cmd == "bounds") {
    auto b = order_bounds(sys, essential_options(f));
    json out{{"J", orders_json(b.jacobi)},
             {"modified", orders_json(b.modified)},
             {"L", orders_json(b.alt_L)},
             {"E", orders_json(b.alt_E)},
             {"gamma", b.gamma},
             {"subset", b.subset},
             {"bound", orders_json(b.bound)}};
    out["refined"] = b.refined ? orders_json(*b.refined) : json(nullptr);
    out["degree_bound"] = to_string(degree_bound(sys, b.bound));
    json bez = json::array();
    for (int i = 0; i < sys.size(); ++i) {
      auto v = bezout_block_bound(sys, i);
      bez.push_back(v ? json(to_string(*v)) : json(nullptr));
    }
    out["bezout"] = bez;
    return out;
  }
  if (cmd == "resultant" || cmd == "dresultant") {
    auto opt = solver_options(f);
    auto c = cmd == "resultant" ? sdresultant(sys, opt) : dresultant(sys, opt);
    json out = certificate_json(c);
    if (f.verify) out["checks"] = checks_json(c.sr, sys, f, checks_ok);
    checks_ok = checks_ok && c.verified;
    return out;
  }
  if (cmd == "verify") {
    if (!sf.sr) throw std::invalid_argument("input has no sr statement");
    json out = checks_json(*sf.sr, sys, f, checks_ok);
    auto span = span_check(sys);
    out["span"] = span.in_span;
    return out;
  }
  if (cmd == "recover") {
    DiffPoly sr = sf.sr ? *sf.sr : sdresultant(sys, solver_options(f)).sr;
    auto r = recover_solution(sr, sys, f.truncation);
    if (!r.ok && r.hypothesis != "residual")
      throw Refusal{"recovery refused: " + r.reason, {{"hypothesis", r.hypothesis}, {"reason", r.reason}}};
    json ys = json::array(), ratios = json::array(), res = json::array();
    for (const auto& s : r.y) ys.push_back(series_json(s));
    for (const auto& s : r.ratios) ratios.push_back(series_json(s));
    for (const auto& s : r.residuals) res.push_back(series_json(s));
    checks_ok = r.ok;
    return {{"ok", r.ok}, {"K", r.K}, {"margin", r.margin}, {"sr", poly_json(sr)},
            {"y", ys}, {"ratios", ratios}, {"residuals", res}};
  }
  throw std::invalid_argument("unknown command " + cmd);
}

void print_text(const json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object() && j.contains("text") && j.contains("terms")) {
    os << prefix << ": " << j["text"].get<std::string>() << "\n";
    return;
  }
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) print_text(v, prefix.empty() ? k : prefix + "." + k, os);
    return;
  }
  os << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse differential resultants"};
  Flags f;
  app.add_option("command", f.command, "Command")
      ->required()
      ->check(CLI::IsMember({"tshape", "dtrdeg", "essential", "rank-essential", "jacobi", "bounds", "resultant",
                             "dresultant", "verify", "recover"}));
  app.add_option("file", f.file, "System file ('-' for stdin)")->required();
  app.add_flag("--certify", f.certify, "Certified essentiality checks");
  app.add_flag("--verify", f.verify, "Run membership and homogeneity checks on the resultant");
  app.add_option("--max-order", f.max_order, "Cap on the total order sum");
  app.add_option("--max-degree", f.max_degree, "Cap on the resultant degree");
  app.add_option("--cofactor-start", f.cofactor_start, "First cofactor degree level");
  app.add_option("--budget", f.budget, "Selection budget for certified checks");
  app.add_option("--seed", f.seed, "Random seed");
  app.add_option("--truncation", f.truncation, "Series truncation order K");
  app.add_option("--trials", f.trials, "Membership trials");
  app.add_option("--threads", f.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  std::string text;
  if (f.file == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(f.file, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot read " << f.file << "\n";
      return 1;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }

  json doc{{"command", f.command}, {"version", kVersion}, {"input_digest", fnv1a(text)}, {"seed", f.seed}};
  int code = 0;
  auto t0 = std::chrono::steady_clock::now();
  try {
    SystemFile sf = parse_system_file(text);
    bool ok = true;
    doc["result"] = run(f, sf, ok);
    doc["status"] = ok ? "ok" : "failed";
    if (!ok) code = 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Refusal& r) {
    doc["status"] = "refused";
    doc["refusal"] = r.detail;
    doc["message"] = r.message;
    code = 2;
  } catch (const std::domain_error& e) {
    doc["status"] = "refused";
    doc["message"] = e.what();
    code = 2;
  } catch (const ResourceError& e) {
    doc["status"] = "refused";
    doc["message"] = e.what();
    code = 2;
  }
  doc["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (f.format == "json")
    std::cout << doc.dump(2) << "\n";
  else
    print_text(doc, "", std::cout);
  return code;
}
