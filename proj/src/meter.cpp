#include "pwsim/meter.hpp"

#include "pwsim/unicode.hpp"

#include <stdexcept>

namespace pwsim {

std::string_view to_string(StrengthLabel label) {
  switch (label) {
    case StrengthLabel::weak_similar: return "weak_similar";
    case StrengthLabel::weak_policy: return "weak_policy";
    case StrengthLabel::acceptable: return "acceptable";
  }
  return "unknown";
}

StrengthLabel classify(SimilarityScore max_similarity, double threshold, bool policy_ok) {
  if (max_similarity.value() >= threshold) return StrengthLabel::weak_similar;
  return policy_ok ? StrengthLabel::acceptable : StrengthLabel::weak_policy;
}

StrengthVerdict assess(std::string_view candidate, const WeakIndex& weak, double threshold,
                       const CompositionPolicy& policy) {
  validate_threshold(threshold);
  policy.validate();
  const auto scalars = unicode::to_scalars(candidate);
  if (!scalars) throw std::invalid_argument("candidate password is not valid UTF-8");
  if (scalars->empty()) throw std::invalid_argument("candidate password is empty");
  if (weak.empty()) throw std::invalid_argument("no weak passwords loaded");

  const MatchResult best = match_one(*scalars, weak, MatchOptions{threshold, true, true});

  StrengthVerdict v;
  v.threshold = threshold;
  v.max_similarity = best.best_score;
  v.nearest_weak = best.best_match;
  if (best.best_position) v.nearest_source = weak.sources()[weak.source_of(*best.best_position)].label;
  v.violations = policy_check(std::u32string_view(*scalars), policy);
  v.label = classify(v.max_similarity, threshold, v.violations.empty());
  return v;
}

StrengthVerdict assess(std::string_view candidate, const std::vector<Corpus>& weak_sets, double threshold,
                       const CompositionPolicy& policy) {
  return assess(candidate, WeakIndex(weak_sets), threshold, policy);
}

}  // namespace pwsim
