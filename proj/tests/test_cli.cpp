#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sdr/parse.hpp"

using json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  std::string cmd = std::string(SDR_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string data(const char* name) { return std::string(SDR_DATA) + "/" + name; }

json run_json(const std::string& args, int expect = 0) {
  Run r = run(args);
  CAPTURE(args);
  CHECK(r.code == expect);
  return json::parse(r.out);
}

}  // namespace

TEST_CASE("cli commands on sample systems") {
  auto j = run_json("jacobi " + data("order_matrix.sys"));
  CHECK(j["result"]["J"] == json::array({12, 12, 7, 10}));

  j = run_json("essential " + data("determinant.sys"));
  CHECK(j["result"]["essential"] == true);
  CHECK(j["result"]["rank"] == 2);

  j = run_json("essential --certify " + data("determinant.sys"));
  CHECK(j["result"]["essential"] == true);
  CHECK(j["result"]["mode"] == "certified");

  j = run_json("rank-essential " + data("free_of_p2.sys"));
  CHECK(j["result"]["subset"] == json::array({0, 1}));

  j = run_json("tshape " + data("tshape.sys"));
  CHECK(j["result"]["index"] == json::array({1, 2}));
  CHECK(run_json("dtrdeg " + data("tshape.sys"))["result"]["dtrdeg"] == 3);

  j = run_json("bounds " + data("laurent_triple.sys"));
  CHECK(j["result"]["bound"] == json::array({2, 1, 1}));

  j = run_json("resultant --verify " + data("free_of_p2.sys"));
  CHECK(j["status"] == "ok");
  auto sr = sdr::parse_poly(j["result"]["sr"]["text"].get<std::string>());
  auto expect = sdr::parse_poly("u00*u11^3 - u01*u10^2*u11' + u01*u10*u10'*u11");
  CHECK((sr == expect || sr == -expect));
  CHECK(j["result"]["h"] == json::array({0, 1, "-inf"}));
  CHECK(j["result"]["checks"]["membership"]["pass"] == true);
  for (const auto& t : j["result"]["sr"]["terms"]) CHECK(t[0].is_string());

  j = run_json("dresultant " + data("quadratic_dense.sys"));
  CHECK(j["result"]["d"] == 4);

  j = run_json("verify " + data("free_of_p2_sr.sys"));
  CHECK(j["result"]["membership"]["pass"] == true);

  j = run_json("recover " + data("recover_pair.sys"));
  CHECK(j["result"]["ok"] == true);
  CHECK(j["result"]["y"][0][0] == "1");
  CHECK(j["result"]["y"][0][1] == "1");
}

TEST_CASE("cli exit codes") {
  auto j = run_json("resultant " + data("line_rank.sys"), 2);
  CHECK(j["status"] == "refused");
  j = run_json("recover " + data("laurent_triple.sys"), 2);
  CHECK(j["refusal"]["hypothesis"] == "span");
  CHECK(run("bogus " + data("line_rank.sys")).code == 1);
  CHECK(run("essential /nonexistent/file").code == 1);
  CHECK(run("essential " + data("order_matrix.sys")).code == 1);
  CHECK(run("resultant " + data("line_rank.sys") + " --threads 0").code == 1);
  CHECK(run("dresultant " + data("free_of_p2.sys")).code == 1);
  CHECK(run("--help").code == 0);
}

TEST_CASE("cli output is deterministic") {
  for (const char* f : {"free_of_p2.sys", "quadratic_pair.sys"}) {
    auto a = run_json("resultant --verify --seed 5 " + data(f));
    auto b = run_json("resultant --verify --seed 5 --threads 2 " + data(f));
    a.erase("timing_ms");
    b.erase("timing_ms");
    CHECK(a == b);
  }
  auto t = run("essential --format text " + data("determinant.sys"));
  CHECK(t.code == 0);
  CHECK(t.out.find("result.essential: true") != std::string::npos);
}

TEST_CASE("sample files round-trip through the printer") {
  for (const auto& e : std::filesystem::directory_iterator(SDR_DATA)) {
    std::ifstream in(e.path());
    std::stringstream ss;
    ss << in.rdbuf();
    auto sf = sdr::parse_system_file(ss.str());
    if (!sf.system) continue;
    CAPTURE(e.path().string());
    auto again = sdr::parse_system(sdr::print_system(*sf.system));
    CHECK(again.supports == sf.system->supports);
    CHECK(again.values == sf.system->values);
  }
}
