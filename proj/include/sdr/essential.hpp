#ifndef SDR_ESSENTIAL_HPP
#define SDR_ESSENTIAL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "sdr/support.hpp"
#include "sdr/system.hpp"

namespace sdr {

enum class EssentialMode { Certified, Randomized };

const char* mode_name(EssentialMode m);

struct EssentialOptions {
  EssentialMode mode = EssentialMode::Randomized;
  std::size_t budget = 10000;
  std::uint64_t seed = 1;
  int seeds = 3;
};

struct EssentialReport {
  bool essential = false;
  // Certified search ran out of budget; `essential` is then the randomized verdict.
  bool inconclusive = false;
  // k_i for each polynomial, 1 <= k_i <= l_i.
  std::optional<std::vector<int>> witness;
  int rank = 0;
  EssentialMode mode = EssentialMode::Randomized;
  std::size_t selections = 0;
};

// Support matrix of the quotients M_{i k_i} / M_{i0} for the given rows.
SupportMatrix selection_matrix(const DiffSystem& sys, const std::vector<int>& rows, const std::vector<int>& ks);

// Rank of the generic support matrix restricted to `rows` after substituting
// random integers for every u_{ik} and x_j.
int generic_rank(const DiffSystem& sys, const std::vector<int>& rows, std::uint64_t seed);

// Maximum over `seeds` consecutive seeds; `agree` reports whether all seeds gave the same rank.
int generic_rank(const DiffSystem& sys, const std::vector<int>& rows, std::uint64_t seed, int seeds, bool* agree);

struct SelectionSearch {
  int best_rank = 0;
  std::optional<std::vector<int>> witness;  // a selection reaching `target`
  bool exhausted = false;                   // every selection was accounted for
  std::size_t visited = 0;
};

// Depth-first search over selections on `rows`, checking each with rdm,
// pruning branches whose exact prefix rank plus remaining rows stays below `target`.
SelectionSearch search_selections(const DiffSystem& sys, const std::vector<int>& rows, int target, std::size_t budget);

EssentialReport is_essential(const DiffSystem& sys, const EssentialOptions& opt = {});

struct RankEssentialSet {
  std::vector<int> subset;
  bool certified = false;
};

// Throws std::domain_error when the system is not essential.
RankEssentialSet rank_essential_subset(const DiffSystem& sys, const EssentialOptions& opt = {});

}  // namespace sdr

#endif
