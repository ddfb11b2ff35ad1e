#include <doctest.h>

#include <random>
#include <set>

#include "sdr/essential.hpp"
#include "sdr/parse.hpp"

using namespace sdr;

namespace {

const char* kDeterminant = "vars y1 y2; P0: y1'', y1''', y2'''; P1: y1'', y1''', y2'''; P2: y1'', y1''', y2''';";
const char* kFreeOfP2 = "vars y1 y2; P0: 1, y1*y1'; P1: 1, y1; P2: 1, y2';";
const char* kLineRank = "vars y1 y2; P0: 1, y1; P1: 1, y1; P2: 1, y1;";
const char* kHighOrder =
    "vars y1 y2 y3; P0: y1*y2, y3; P1: y1*y2, y3*y3'; P2: y1*y2, y3';"
    "P3: y1^(20), y2^(20), y3^(20);";

// Rank of the generic support matrix on `rows` as the maximum over all
// selections of a random-evaluation rank.
int brute_rank(const DiffSystem& sys, const std::vector<int>& rows) {
  int best = 0;
  std::vector<int> ks(rows.size(), 1);
  while (true) {
    std::vector<Monomial> ms;
    for (std::size_t r = 0; r < rows.size(); ++r) ms.push_back(sys.supports[rows[r]][ks[r]] / sys.supports[rows[r]][0]);
    auto a = support_matrix(ms, sys.n);
    for (std::uint64_t s = 11; s < 14; ++s) best = std::max(best, static_cast<int>(random_rank(a, s)));
    std::size_t p = 0;
    while (p < rows.size() && ks[p] == sys.l(rows[p])) ks[p++] = 1;
    if (p == rows.size()) break;
    ++ks[p];
  }
  return best;
}

std::vector<std::vector<int>> all_rank_essential(const DiffSystem& sys) {
  int total = sys.size();
  std::vector<int> deficiency(1 << total);
  for (int mask = 1; mask < (1 << total); ++mask) {
    std::vector<int> rows;
    for (int i = 0; i < total; ++i)
      if (mask >> i & 1) rows.push_back(i);
    deficiency[mask] = static_cast<int>(rows.size()) - brute_rank(sys, rows);
  }
  std::vector<std::vector<int>> out;
  for (int mask = 1; mask < (1 << total); ++mask) {
    if (deficiency[mask] != 1) continue;
    bool minimal = true;
    for (int sub = (mask - 1) & mask; sub > 0; sub = (sub - 1) & mask)
      if (deficiency[sub] != 0) minimal = false;
    if (!minimal) continue;
    std::vector<int> rows;
    for (int i = 0; i < total; ++i)
      if (mask >> i & 1) rows.push_back(i);
    out.push_back(rows);
  }
  return out;
}

DiffSystem random_system(std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> len(2, 3), ord(0, 1), ex(-1, 2), var(1, n), nvars(1, 2);
  DiffSystem sys;
  sys.n = n;
  for (int i = 0; i <= n; ++i) {
    std::vector<Monomial> supp;
    std::set<std::string> seen;
    int want = len(rng);
    while (static_cast<int>(supp.size()) < want) {
      std::vector<Monomial::Entry> es;
      int c = nvars(rng);
      for (int t = 0; t < c; ++t) es.emplace_back(DerivVar::y(var(rng), ord(rng)), ex(rng));
      auto m = Monomial::from_entries(es);
      if (seen.insert(m.str()).second) supp.push_back(m);
    }
    sys.supports.push_back(supp);
  }
  return sys;
}

}  // namespace

TEST_CASE("essentiality of the determinant system") {
  auto sys = parse_system(kDeterminant);
  for (auto mode : {EssentialMode::Randomized, EssentialMode::Certified}) {
    auto rep = is_essential(sys, {mode});
    CHECK(rep.essential);
    CHECK_FALSE(rep.inconclusive);
    CHECK(rep.rank == 2);
  }
  auto cert = is_essential(sys, {EssentialMode::Certified});
  CHECK(cert.mode == EssentialMode::Certified);
  REQUIRE(cert.witness.has_value());
  CHECK(rdm(selection_matrix(sys, {0, 1, 2}, *cert.witness)).rank() == 2);
}

TEST_CASE("a system with one nonzero column is not essential") {
  auto sys = parse_system(kLineRank);
  for (auto mode : {EssentialMode::Randomized, EssentialMode::Certified}) {
    auto rep = is_essential(sys, {mode});
    CHECK_FALSE(rep.essential);
    CHECK_FALSE(rep.inconclusive);
    CHECK(rep.rank == 1);
  }
  CHECK_THROWS_WITH_AS(rank_essential_subset(sys), "no rank-essential set: system not essential", std::domain_error);
}

TEST_CASE("certified search reports an exhausted budget") {
  auto sys = parse_system(kLineRank);
  EssentialOptions opt{EssentialMode::Certified, 2};
  auto rep = is_essential(sys, opt);
  CHECK(rep.inconclusive);
  CHECK(rep.mode == EssentialMode::Certified);
}

TEST_CASE("high-order system and its rank-essential part") {
  auto sys = parse_system(kHighOrder);
  CHECK(is_essential(sys).essential);
  CHECK(is_essential(sys, {EssentialMode::Certified}).essential);
  auto t = rank_essential_subset(sys);
  CHECK(t.subset == std::vector<int>{0, 1, 2});
  CHECK(t.certified);
}

TEST_CASE("rank-essential pair that omits the last polynomial") {
  auto sys = parse_system(kFreeOfP2);
  CHECK(is_essential(sys, {EssentialMode::Certified}).essential);
  auto t = rank_essential_subset(sys);
  CHECK(t.subset == std::vector<int>{0, 1});
  CHECK(t.certified);
}

TEST_CASE("fully essential system matches subset brute force") {
  auto sys = parse_system("vars y1 y2; P0: 1, y1; P1: 1, y2; P2: 1, y1*y2';");
  auto all = all_rank_essential(sys);
  REQUIRE(all.size() == 1);
  CHECK(all[0] == std::vector<int>{0, 1, 2});
  CHECK(rank_essential_subset(sys).subset == all[0]);
}

TEST_CASE("uniqueness and agreement on random systems") {
  std::mt19937 rng(4242);
  int essential_seen = 0;
  for (int it = 0; it < 60; ++it) {
    int n = 1 + it % 3;
    auto sys = random_system(rng, n);
    CAPTURE(print_system(sys));
    auto rnd = is_essential(sys, {EssentialMode::Randomized});
    auto cert = is_essential(sys, {EssentialMode::Certified});
    REQUIRE_FALSE(cert.inconclusive);
    CHECK(rnd.essential == cert.essential);
    CHECK(rnd.rank == cert.rank);
    std::vector<int> rows;
    for (int i = 0; i <= n; ++i) rows.push_back(i);
    CHECK(rnd.rank == brute_rank(sys, rows));
    if (!cert.essential) continue;
    ++essential_seen;
    auto all = all_rank_essential(sys);
    REQUIRE(all.size() == 1);
    auto t = rank_essential_subset(sys);
    CHECK(t.subset == all[0]);
    CHECK(t.certified);
    // Every superset of T has deficiency at most one.
    for (int mask = 0; mask < (1 << (n + 1)); ++mask) {
      std::vector<int> sup;
      bool contains = true;
      for (int i : t.subset)
        if (!(mask >> i & 1)) contains = false;
      if (!contains) continue;
      for (int i = 0; i <= n; ++i)
        if (mask >> i & 1) sup.push_back(i);
      CHECK(static_cast<int>(sup.size()) - generic_rank(sys, sup, 1, 3, nullptr) <= 1);
    }
  }
  CHECK(essential_seen >= 10);
}
