#pragma once

#include <algorithm>
#include <array>
#include <vector>

#include "eas/scorer.hpp"

// Exhaustive optimal-alignment oracle, independent of the greedy
// implementation it checks. Searches every injective partial matching via
// DP over gold-side bitmasks, maximizing (exact, t2, t1) lexicographically.
// Usable up to 8 codes per side.
namespace eas::test {

struct OracleCounts {
  int exact{0};
  int t2{0};
  int t1{0};
  int outlier{0};
  int missing_gold{0};
  int spurious{0};

  bool operator==(const OracleCounts&) const = default;
};

namespace detail {

using Triple = std::array<int, 3>;  // exact, t2, t1

inline Triple best_matching(const std::vector<ErrorCode>& predicted,
                            const std::vector<ErrorCode>& gold, std::size_t i,
                            unsigned mask, std::vector<Triple>& memo,
                            std::vector<bool>& computed) {
  if (i == predicted.size()) return {0, 0, 0};
  const std::size_t key = i * (1u << gold.size()) + mask;
  if (computed[key]) return memo[key];

  Triple best = best_matching(predicted, gold, i + 1, mask, memo, computed);  // leave i unpaired
  for (std::size_t j = 0; j < gold.size(); ++j) {
    if (mask & (1u << j)) continue;
    Triple with = best_matching(predicted, gold, i + 1, mask | (1u << j), memo, computed);
    switch (classify_match(predicted[i], gold[j])) {
      case MatchClass::ExactT3: ++with[0]; break;
      case MatchClass::T2Match: ++with[1]; break;
      case MatchClass::T1Match: ++with[2]; break;
      default: break;  // pairing as an outlier never helps the objective
    }
    best = std::max(best, with);
  }
  computed[key] = true;
  memo[key] = best;
  return best;
}

}  // namespace detail

inline OracleCounts optimal_alignment_counts(const std::vector<ErrorCode>& predicted,
                                             const std::vector<ErrorCode>& gold) {
  std::vector<detail::Triple> memo((predicted.size() + 1) * (1u << gold.size()));
  std::vector<bool> computed(memo.size(), false);
  const auto [exact, t2, t1] =
      detail::best_matching(predicted, gold, 0, 0, memo, computed);

  OracleCounts counts;
  counts.exact = exact;
  counts.t2 = t2;
  counts.t1 = t1;
  const int pred_left = static_cast<int>(predicted.size()) - exact - t2 - t1;
  const int gold_left = static_cast<int>(gold.size()) - exact - t2 - t1;
  counts.outlier = std::min(pred_left, gold_left);
  counts.spurious = pred_left - counts.outlier;
  counts.missing_gold = gold_left - counts.outlier;
  return counts;
}

inline OracleCounts count_aligned(const std::vector<AlignedPair>& pairs) {
  OracleCounts counts;
  for (const auto& pair : pairs) {
    switch (pair.cls) {
      case MatchClass::ExactT3: ++counts.exact; break;
      case MatchClass::T2Match: ++counts.t2; break;
      case MatchClass::T1Match: ++counts.t1; break;
      case MatchClass::Outlier: ++counts.outlier; break;
      case MatchClass::MissingGold: ++counts.missing_gold; break;
      case MatchClass::Spurious: ++counts.spurious; break;
    }
  }
  return counts;
}

// Deterministic generator for random alignment instances drawn from a small
// code space so collisions at every tier actually occur.
inline std::vector<ErrorCode> random_codes(std::mt19937& rng, std::size_t max_len) {
  std::uniform_int_distribution<int> len_dist(0, static_cast<int>(max_len));
  std::uniform_int_distribution<int> t1_dist(0, 2);
  std::uniform_int_distribution<int> t2_dist(1, 3);
  std::uniform_int_distribution<int> t3_dist(0, 2);
  std::vector<ErrorCode> codes;
  const int n = len_dist(rng);
  for (int k = 0; k < n; ++k) {
    ErrorCode code;
    code.tier1 = static_cast<Tier1>(t1_dist(rng));
    code.tier2 = t2_dist(rng);
    const int t3 = t3_dist(rng);
    if (t3 > 0) code.tier3 = static_cast<char>('A' + t3 - 1);
    codes.push_back(code);
  }
  return codes;
}

}  // namespace eas::test
