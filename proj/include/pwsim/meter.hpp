#pragma once

#include "pwsim/corpus.hpp"
#include "pwsim/matcher.hpp"
#include "pwsim/similarity.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pwsim {

enum class StrengthLabel { weak_similar, weak_policy, acceptable };

std::string_view to_string(StrengthLabel label);

struct StrengthVerdict {
  StrengthLabel label = StrengthLabel::acceptable;
  SimilarityScore max_similarity;
  std::optional<std::string> nearest_weak;
  std::optional<std::string> nearest_source;
  std::vector<Violation> violations;
  double threshold = 0.5;

  friend bool operator==(const StrengthVerdict&, const StrengthVerdict&) = default;
};

/// weak_similar when similar enough to a weak entry, otherwise weak_policy
/// when the policy is violated, otherwise acceptable.
StrengthLabel classify(SimilarityScore max_similarity, double threshold, bool policy_ok);

/// Exhaustive similarity search across all weak corpora plus a policy check.
/// Ties on the nearest weak password go to the earliest corpus, then the earliest entry.
/// Throws std::invalid_argument for an empty or ill-formed candidate, an
/// all-empty weak index, or a threshold outside [0, 1].
StrengthVerdict assess(std::string_view candidate, const WeakIndex& weak, double threshold,
                       const CompositionPolicy& policy);
StrengthVerdict assess(std::string_view candidate, const std::vector<Corpus>& weak_sets, double threshold,
                       const CompositionPolicy& policy);

}  // namespace pwsim
