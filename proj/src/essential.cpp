#include "sdr/essential.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "sdr/linalg.hpp"

namespace sdr {

const char* mode_name(EssentialMode m) { return m == EssentialMode::Certified ? "certified" : "randomized"; }

SupportMatrix selection_matrix(const DiffSystem& sys, const std::vector<int>& rows, const std::vector<int>& ks) {
  std::vector<Monomial> ms;
  for (std::size_t r = 0; r < rows.size(); ++r) ms.push_back(sys.quotient(rows[r], ks[r]));
  return support_matrix(ms, sys.n);
}

int generic_rank(const DiffSystem& sys, const std::vector<int>& rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> dist(-(1L << 16), 1L << 16);
  std::vector<Integer> xs(sys.n + 1);
  for (int j = 1; j <= sys.n; ++j) xs[j] = dist(rng);
  std::vector<std::vector<Integer>> a;
  for (int i : rows) {
    std::vector<Integer> w(sys.n, 0);
    for (int k = 1; k <= sys.l(i); ++k) {
      Integer u = dist(rng);
      Monomial q = sys.quotient(i, k);
      for (const auto& [v, e] : q.entries()) {
        Integer xp;
        mpz_pow_ui(xp.get_mpz_t(), xs[v.base.a].get_mpz_t(), static_cast<unsigned long>(v.order));
        w[v.base.a - 1] += u * static_cast<long>(e) * xp;
      }
    }
    a.push_back(std::move(w));
  }
  return static_cast<int>(integer_rank(std::move(a)));
}

int generic_rank(const DiffSystem& sys, const std::vector<int>& rows, std::uint64_t seed, int seeds, bool* agree) {
  int best = 0;
  bool same = true;
  for (int s = 0; s < seeds; ++s) {
    int r = generic_rank(sys, rows, seed + static_cast<std::uint64_t>(s));
    if (s > 0 && r != best) same = false;
    best = std::max(best, r);
  }
  if (agree) *agree = same;
  return best;
}

namespace {

class Searcher {
 public:
  Searcher(const DiffSystem& sys, const std::vector<int>& rows, int target, std::size_t budget)
      : sys_(sys), rows_(rows), target_(target), budget_(budget), ks_(rows.size(), 0) {}

  SelectionSearch run() {
    out_.exhausted = true;
    if (target_ <= 0) {
      out_.witness = std::vector<int>(rows_.size(), 1);
      return out_;
    }
    dfs(0);
    if (out_.witness) out_.exhausted = true;
    return out_;
  }

 private:
  const DiffSystem& sys_;
  std::vector<int> rows_;
  int target_;
  std::size_t budget_;
  std::vector<int> ks_;
  SelectionSearch out_;

  // Returns true to stop the search.
  bool dfs(std::size_t depth) {
    int rest = static_cast<int>(rows_.size() - depth);
    if (depth > 0) {
      if (out_.visited >= budget_) {
        out_.exhausted = false;
        return true;
      }
      ++out_.visited;
      std::vector<int> prefix(rows_.begin(), rows_.begin() + depth);
      std::vector<int> ks(ks_.begin(), ks_.begin() + depth);
      int r = rdm(selection_matrix(sys_, prefix, ks)).rank();
      out_.best_rank = std::max(out_.best_rank, r);
      if (r >= target_) {
        std::vector<int> w = ks_;
        for (std::size_t t = depth; t < w.size(); ++t) w[t] = 1;
        out_.witness = w;
        return true;
      }
      if (r + rest < target_) return false;
    }
    if (rest == 0) return false;
    for (int k = 1; k <= sys_.l(rows_[depth]); ++k) {
      ks_[depth] = k;
      if (dfs(depth + 1)) return true;
    }
    return false;
  }
};

std::vector<int> all_rows(const DiffSystem& sys) {
  std::vector<int> rows(sys.size());
  for (int i = 0; i < sys.size(); ++i) rows[i] = i;
  return rows;
}

}  // namespace

SelectionSearch search_selections(const DiffSystem& sys, const std::vector<int>& rows, int target, std::size_t budget) {
  return Searcher(sys, rows, target, budget).run();
}

EssentialReport is_essential(const DiffSystem& sys, const EssentialOptions& opt) {
  sys.validate();
  if (sys.size() != sys.n + 1) throw std::invalid_argument("essentiality needs n+1 polynomials");
  auto rows = all_rows(sys);
  EssentialReport rep;
  bool agree = true;
  int rr = generic_rank(sys, rows, opt.seed, std::max(opt.seeds, 1), &agree);
  rep.rank = rr;
  rep.essential = rr == sys.n;
  rep.mode = EssentialMode::Randomized;
  if (opt.mode == EssentialMode::Randomized && agree) return rep;

  rep.mode = EssentialMode::Certified;
  auto full = search_selections(sys, rows, sys.n, opt.budget);
  rep.selections = full.visited;
  if (full.witness) {
    rep.essential = true;
    rep.rank = sys.n;
    rep.witness = full.witness;
    return rep;
  }
  if (!full.exhausted) {
    rep.inconclusive = true;
    return rep;
  }
  rep.essential = false;
  auto low = search_selections(sys, rows, rr, opt.budget);
  rep.selections += low.visited;
  rep.rank = low.witness ? rr : std::max(full.best_rank, low.best_rank);
  if (low.witness) rep.witness = low.witness;
  return rep;
}

RankEssentialSet rank_essential_subset(const DiffSystem& sys, const EssentialOptions& opt) {
  sys.validate();
  auto rows = all_rows(sys);
  int seeds = std::max(opt.seeds, 1);
  if (sys.size() != sys.n + 1 || generic_rank(sys, rows, opt.seed, seeds, nullptr) != sys.n)
    throw std::domain_error("no rank-essential set: system not essential");

  int total = sys.size();
  for (int card = 1; card <= total; ++card) {
    std::vector<bool> pick(total, false);
    std::fill(pick.begin(), pick.begin() + card, true);
    do {
      std::vector<int> t;
      for (int i = 0; i < total; ++i)
        if (pick[i]) t.push_back(i);
      if (card - generic_rank(sys, t, opt.seed, seeds, nullptr) != 1) continue;
      RankEssentialSet out{t, true};
      for (std::size_t drop = 0; drop < t.size() && out.certified; ++drop) {
        std::vector<int> j = t;
        j.erase(j.begin() + static_cast<long>(drop));
        if (!search_selections(sys, j, card - 1, opt.budget).witness) out.certified = false;
      }
      if (out.certified) {
        auto dep = search_selections(sys, t, card, opt.budget);
        out.certified = !dep.witness && dep.exhausted;
      }
      return out;
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  throw std::logic_error("rank_essential_subset: no deficient subset found");
}

}  // namespace sdr
