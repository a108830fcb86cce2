#pragma once

#include "pwsim/corpus.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pwsim {

/// SplitMix64 (Steele, Lea & Flood). The whole output of the generator is
/// defined in terms of this sequence, so it is identical on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  /// Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Independent stream for item `index` of a run seeded with `seed`.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index);

 private:
  std::uint64_t state_;
};

/// Lowercase alphabetic word fragments for one language, 2 to 8 scalars each.
struct FragmentDictionary {
  Language language = Language::unknown;
  std::vector<std::string> fragments;

  /// Throws std::invalid_argument when empty or when a fragment is not
  /// purely lowercase alphabetic of length 2..8.
  void validate() const;
};

/// One fragment per line; `# language: <tag>` sets the language, other `#` lines are comments.
/// `fallback` is used when the file has no language header.
FragmentDictionary load_dictionary(const std::filesystem::path& path,
                                   Language fallback = Language::unknown);

struct LanguageWeight {
  Language language;
  double weight;
};

struct GenerationSpec {
  std::size_t count = 0;
  std::uint64_t seed = 0;
  CompositionPolicy policy;
  std::vector<LanguageWeight> languages;

  /// count > 0, weights in [0, 1] summing to 1 within 1e-9.
  void validate() const;
};

/// Composes `spec.count` policy-compliant passwords from dictionary fragments.
///
/// Per password, from its own SplitMix64 stream:
///  1. Letter budget B = max_len - 2 (one digit and one symbol are added later).
///  2. If more than one language has nonzero weight, draw a first language by
///     weight and a second, different one by weight; take a fragment of length
///     <= B - 2 from the first and a fragment from the second cut to fit B.
///     Otherwise take a fragment of length <= B, and on a coin flip (when it
///     is <= B - 2) append a second fragment cut to fit B.
///  3. Pad with random a-z letters up to min_len - 2 letters.
///  4. Uppercase exactly one random letter.
///  5. Insert one random digit, then one random symbol, at random positions.
///
/// Throws std::invalid_argument for an invalid or infeasible spec.
Corpus generate(const std::vector<FragmentDictionary>& dicts, const GenerationSpec& spec);

/// Leaked-list shaped passwords for building synthetic test sets: a fragment,
/// first letter capitalized on a coin flip, an optional separator from
/// kLeakedSeparators, then digits up to a length drawn uniformly from
/// [max(min_len, current + 1), max_len]. Only the length bounds of
/// `spec.policy` apply; the output is not four-class compliant.
/// Deterministic in (dicts, spec) like generate().
Corpus synthesize_leaked_style(const std::vector<FragmentDictionary>& dicts, const GenerationSpec& spec);

inline constexpr std::string_view kLeakedSeparators = "@!#_.";

/// Symbols the generator inserts.
inline constexpr std::string_view kGeneratorSymbols = "!@#$%^&*()-_=+?";

/// Draws from several corpora so per-source counts follow `proportion`
/// (largest-remainder rounding), then interleaves them with a seeded shuffle.
/// `total` defaults to the largest size every part can supply without repeats.
Corpus mix_corpora(const std::vector<std::pair<Corpus, double>>& parts, std::uint64_t seed,
                   std::optional<std::size_t> total = std::nullopt);

}  // namespace pwsim
