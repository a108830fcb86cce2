#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pwsim {

enum class Language { english, indian, mixed, unknown };

std::string_view to_string(Language lang);
std::optional<Language> parse_language(std::string_view tag);

/// An ordered, labelled wordlist. Entries are NFC-normalized UTF-8.
///
/// Line accounting: entries.size() + skipped + deduped + filtered == line_count_raw.
struct Corpus {
  std::vector<std::string> entries;
  std::string label;
  Language language = Language::unknown;
  std::string source;
  std::size_t line_count_raw = 0;
  std::size_t skipped = 0;
  std::size_t deduped = 0;
  std::size_t filtered = 0;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

/// Length bounds (in scalar values) and required character classes.
struct CompositionPolicy {
  std::size_t min_len = 8;
  std::size_t max_len = 10;
  bool require_upper = true;
  bool require_lower = true;
  bool require_digit = true;
  bool require_symbol = true;

  /// Throws std::invalid_argument unless 1 <= min_len <= max_len.
  void validate() const;
};

enum class Violation { too_short, too_long, missing_upper, missing_lower, missing_digit, missing_symbol };

std::string_view to_string(Violation v);

/// Reads one password per line (LF or CRLF). Lines that are not valid UTF-8
/// and blank lines are dropped and counted in `skipped`. No filtering.
/// Throws std::runtime_error naming the path when it cannot be opened. An
/// empty result appends a warning to `warnings` when given.
Corpus load_wordlist(const std::filesystem::path& path, std::string label, Language language,
                     std::vector<std::string>* warnings = nullptr);

/// Parses wordlist text already in memory with the same rules as load_wordlist.
Corpus parse_wordlist(std::string_view text, std::string label, Language language);

/// Writes entries one per line with LF endings.
void save_wordlist(const Corpus& corpus, const std::filesystem::path& path);
std::string format_wordlist(const Corpus& corpus);

/// Violated clauses in a fixed order; empty means compliant.
std::vector<Violation> policy_check(std::u32string_view password, const CompositionPolicy& policy);
std::vector<Violation> policy_check(std::string_view password_utf8, const CompositionPolicy& policy);

/// Keeps entries with no violations. With `length_only` only the length
/// clauses are enforced. Order is preserved.
Corpus filter_by_policy(const Corpus& corpus, const CompositionPolicy& policy, bool length_only);

/// Drops repeated entries, keeping the first occurrence.
Corpus deduplicate(const Corpus& corpus);

struct CorpusStats {
  std::size_t size = 0;
  std::map<std::size_t, std::size_t> length_histogram;
  double upper_rate = 0.0;
  double lower_rate = 0.0;
  double digit_rate = 0.0;
  double symbol_rate = 0.0;
  /// Fraction of entries having all four classes.
  double all_classes_rate = 0.0;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

CorpusStats corpus_stats(const Corpus& corpus);

}  // namespace pwsim
