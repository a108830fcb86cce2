#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace pwsim {

/// A Jaro score, always in [0, 1].
class SimilarityScore {
 public:
  constexpr SimilarityScore() = default;
  /// Values outside [0, 1] are clamped.
  constexpr explicit SimilarityScore(double value)
      : value_(value < 0.0 ? 0.0 : (value > 1.0 ? 1.0 : value)) {}

  constexpr double value() const { return value_; }

  friend constexpr auto operator<=>(SimilarityScore, SimilarityScore) = default;

 private:
  double value_ = 0.0;
};

/// Matching-character and transposition counts for a pair of strings.
///
/// `transpositions` is half the number of matched characters whose relative
/// order differs between the two strings, rounded down.
struct MatchProfile {
  std::size_t matches = 0;
  std::size_t transpositions = 0;
  std::size_t len1 = 0;
  std::size_t len2 = 0;

  friend bool operator==(const MatchProfile&, const MatchProfile&) = default;
};

/// Largest index distance at which two characters may still match:
/// floor(max(len1, len2) / 2) - 1, never below zero.
std::size_t match_window(std::size_t len1, std::size_t len2);

MatchProfile match_profile(std::u32string_view s1, std::u32string_view s2);

/// Jaro similarity from precomputed counts. Both lengths zero gives 1.
SimilarityScore jaro_from_profile(const MatchProfile& profile);

SimilarityScore jaro(std::u32string_view s1, std::u32string_view s2);

/// Convenience overload for UTF-8 input; applies NFC first.
/// Throws std::invalid_argument on ill-formed UTF-8.
SimilarityScore jaro_utf8(std::string_view s1, std::string_view s2);

/// Multiset of the characters in a string, sorted by code point.
class CharHistogram {
 public:
  CharHistogram() = default;
  explicit CharHistogram(std::u32string_view s);

  std::size_t length() const { return length_; }
  const std::vector<std::pair<char32_t, std::uint32_t>>& counts() const { return counts_; }

  /// Size of the multiset intersection with another histogram.
  std::size_t shared(const CharHistogram& other) const;

 private:
  std::vector<std::pair<char32_t, std::uint32_t>> counts_;
  std::size_t length_ = 0;
};

/// Upper bound on jaro() that ignores the match window: uses the multiset
/// intersection as the largest possible match count and assumes no
/// transpositions.
SimilarityScore jaro_upper_bound(const CharHistogram& a, const CharHistogram& b);

/// Same bound using lengths only (every character of the shorter string matches).
SimilarityScore jaro_length_bound(std::size_t len1, std::size_t len2);

}  // namespace pwsim
