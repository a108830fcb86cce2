#include "pwsim/similarity.hpp"

#include "pwsim/unicode.hpp"

#include <algorithm>
#include <stdexcept>

namespace pwsim {

namespace {

// Match flags for strings of at most 64 characters; keeps the hot path
// allocation-free for password-sized inputs.
struct BitFlags {
  explicit BitFlags(std::size_t) {}
  bool test(std::size_t i) const { return (bits >> i) & 1U; }
  void set(std::size_t i) { bits |= std::uint64_t{1} << i; }
  std::uint64_t bits = 0;
};

struct VectorFlags {
  explicit VectorFlags(std::size_t n) : bits(n, 0) {}
  bool test(std::size_t i) const { return bits[i] != 0; }
  void set(std::size_t i) { bits[i] = 1; }
  std::vector<unsigned char> bits;
};

template <typename Flags>
MatchProfile profile_with(std::u32string_view s1, std::u32string_view s2) {
  MatchProfile p{0, 0, s1.size(), s2.size()};
  if (s1.empty() || s2.empty()) return p;

  const std::size_t window = match_window(s1.size(), s2.size());
  Flags matched1(s1.size());
  Flags matched2(s2.size());

  for (std::size_t i = 0; i < s1.size(); ++i) {
    const std::size_t lo = i > window ? i - window : 0;
    const std::size_t hi = std::min(s2.size(), i + window + 1);
    for (std::size_t j = lo; j < hi; ++j) {
      if (!matched2.test(j) && s1[i] == s2[j]) {
        matched1.set(i);
        matched2.set(j);
        ++p.matches;
        break;
      }
    }
  }
  if (p.matches == 0) return p;

  std::size_t out_of_order = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    if (!matched1.test(i)) continue;
    while (!matched2.test(j)) ++j;
    if (s1[i] != s2[j]) ++out_of_order;
    ++j;
  }
  p.transpositions = out_of_order / 2;
  return p;
}

double jaro_formula(std::size_t m, std::size_t t, std::size_t len1, std::size_t len2) {
  const double md = static_cast<double>(m);
  return (md / static_cast<double>(len1) + md / static_cast<double>(len2) +
          (md - static_cast<double>(t)) / md) /
         3.0;
}

}  // namespace

std::size_t match_window(std::size_t len1, std::size_t len2) {
  const std::size_t half = std::max(len1, len2) / 2;
  return half > 0 ? half - 1 : 0;
}

MatchProfile match_profile(std::u32string_view s1, std::u32string_view s2) {
  if (s1.size() <= 64 && s2.size() <= 64) return profile_with<BitFlags>(s1, s2);
  return profile_with<VectorFlags>(s1, s2);
}

SimilarityScore jaro_from_profile(const MatchProfile& p) {
  if (p.len1 == 0 && p.len2 == 0) return SimilarityScore(1.0);
  if (p.matches == 0) return SimilarityScore(0.0);
  return SimilarityScore(jaro_formula(p.matches, p.transpositions, p.len1, p.len2));
}

SimilarityScore jaro(std::u32string_view s1, std::u32string_view s2) {
  return jaro_from_profile(match_profile(s1, s2));
}

SimilarityScore jaro_utf8(std::string_view s1, std::string_view s2) {
  const auto a = unicode::to_scalars(s1);
  const auto b = unicode::to_scalars(s2);
  if (!a || !b) throw std::invalid_argument("jaro: input is not valid UTF-8");
  return jaro(*a, *b);
}

CharHistogram::CharHistogram(std::u32string_view s) : length_(s.size()) {
  std::u32string sorted(s);
  std::sort(sorted.begin(), sorted.end());
  for (char32_t c : sorted) {
    if (!counts_.empty() && counts_.back().first == c) {
      ++counts_.back().second;
    } else {
      counts_.emplace_back(c, 1);
    }
  }
}

std::size_t CharHistogram::shared(const CharHistogram& other) const {
  std::size_t total = 0;
  auto a = counts_.begin();
  auto b = other.counts_.begin();
  while (a != counts_.end() && b != other.counts_.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      total += std::min(a->second, b->second);
      ++a;
      ++b;
    }
  }
  return total;
}

SimilarityScore jaro_upper_bound(const CharHistogram& a, const CharHistogram& b) {
  if (a.length() == 0 && b.length() == 0) return SimilarityScore(1.0);
  const std::size_t m_max = a.shared(b);
  if (m_max == 0) return SimilarityScore(0.0);
  return SimilarityScore(jaro_formula(m_max, 0, a.length(), b.length()));
}

SimilarityScore jaro_length_bound(std::size_t len1, std::size_t len2) {
  if (len1 == 0 && len2 == 0) return SimilarityScore(1.0);
  const std::size_t m_max = std::min(len1, len2);
  if (m_max == 0) return SimilarityScore(0.0);
  return SimilarityScore(jaro_formula(m_max, 0, len1, len2));
}

}  // namespace pwsim
