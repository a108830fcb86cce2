#include "pwsim/corpus.hpp"

#include "pwsim/unicode.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace pwsim {

std::string_view to_string(Language lang) {
  switch (lang) {
    case Language::english: return "english";
    case Language::indian: return "indian";
    case Language::mixed: return "mixed";
    case Language::unknown: return "unknown";
  }
  return "unknown";
}

std::optional<Language> parse_language(std::string_view tag) {
  for (Language l : {Language::english, Language::indian, Language::mixed, Language::unknown}) {
    if (tag == to_string(l)) return l;
  }
  return std::nullopt;
}

void CompositionPolicy::validate() const {
  if (min_len < 1 || min_len > max_len) {
    throw std::invalid_argument("composition policy requires 1 <= min_len <= max_len (got " +
                                std::to_string(min_len) + ", " + std::to_string(max_len) + ")");
  }
}

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::too_short: return "too_short";
    case Violation::too_long: return "too_long";
    case Violation::missing_upper: return "missing_upper";
    case Violation::missing_lower: return "missing_lower";
    case Violation::missing_digit: return "missing_digit";
    case Violation::missing_symbol: return "missing_symbol";
  }
  return "unknown";
}

Corpus parse_wordlist(std::string_view text, std::string label, Language language) {
  Corpus corpus;
  corpus.label = std::move(label);
  corpus.language = language;

  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    ++corpus.line_count_raw;
    auto normalized = unicode::normalize_nfc(line);
    if (!normalized) {
      ++corpus.skipped;
      continue;
    }
    const auto scalars = unicode::decode_utf8(*normalized);
    if (unicode::is_blank(*scalars)) {
      ++corpus.skipped;
      continue;
    }
    corpus.entries.push_back(std::move(*normalized));
  }
  return corpus;
}

Corpus load_wordlist(const std::filesystem::path& path, std::string label, Language language,
                     std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open wordlist: " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw std::runtime_error("error reading wordlist: " + path.string());

  Corpus corpus = parse_wordlist(text, std::move(label), language);
  corpus.source = path.string();
  if (corpus.empty() && warnings != nullptr) {
    warnings->push_back("wordlist " + path.string() + " has no usable entries");
  }
  return corpus;
}

std::string format_wordlist(const Corpus& corpus) {
  std::string out;
  for (const auto& e : corpus.entries) {
    out += e;
    out += '\n';
  }
  return out;
}

void save_wordlist(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write wordlist: " + path.string());
  out << format_wordlist(corpus);
  if (!out) throw std::runtime_error("error writing wordlist: " + path.string());
}

std::vector<Violation> policy_check(std::u32string_view password, const CompositionPolicy& policy) {
  std::vector<Violation> out;
  if (password.size() < policy.min_len) out.push_back(Violation::too_short);
  if (password.size() > policy.max_len) out.push_back(Violation::too_long);

  bool upper = false, lower = false, digit = false, symbol = false;
  for (char32_t c : password) {
    upper = upper || unicode::is_upper(c);
    lower = lower || unicode::is_lower(c);
    digit = digit || unicode::is_digit(c);
    symbol = symbol || unicode::is_symbol(c);
  }
  if (policy.require_upper && !upper) out.push_back(Violation::missing_upper);
  if (policy.require_lower && !lower) out.push_back(Violation::missing_lower);
  if (policy.require_digit && !digit) out.push_back(Violation::missing_digit);
  if (policy.require_symbol && !symbol) out.push_back(Violation::missing_symbol);
  return out;
}

std::vector<Violation> policy_check(std::string_view password_utf8, const CompositionPolicy& policy) {
  const auto scalars = unicode::to_scalars(password_utf8);
  if (!scalars) throw std::invalid_argument("policy_check: input is not valid UTF-8");
  return policy_check(*scalars, policy);
}

Corpus filter_by_policy(const Corpus& corpus, const CompositionPolicy& policy, bool length_only) {
  policy.validate();
  CompositionPolicy effective = policy;
  if (length_only) {
    effective.require_upper = effective.require_lower = false;
    effective.require_digit = effective.require_symbol = false;
  }

  Corpus out = corpus;
  out.entries.clear();
  for (const auto& e : corpus.entries) {
    if (policy_check(std::string_view(e), effective).empty()) out.entries.push_back(e);
  }
  out.filtered += corpus.entries.size() - out.entries.size();
  return out;
}

Corpus deduplicate(const Corpus& corpus) {
  Corpus out = corpus;
  out.entries.clear();
  std::unordered_set<std::string_view> seen;
  seen.reserve(corpus.entries.size());
  for (const auto& e : corpus.entries) {
    if (seen.insert(e).second) out.entries.push_back(e);
  }
  out.deduped += corpus.entries.size() - out.entries.size();
  return out;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats stats;
  stats.size = corpus.entries.size();
  if (stats.size == 0) return stats;

  std::size_t upper = 0, lower = 0, digit = 0, symbol = 0, all = 0;
  const CompositionPolicy classes_only{1, static_cast<std::size_t>(-1), true, true, true, true};
  for (const auto& e : corpus.entries) {
    const auto scalars = unicode::decode_utf8(e).value_or(std::u32string{});
    ++stats.length_histogram[scalars.size()];
    const auto v = policy_check(std::u32string_view(scalars), classes_only);
    const auto has = [&](Violation x) { return std::find(v.begin(), v.end(), x) == v.end(); };
    upper += has(Violation::missing_upper);
    lower += has(Violation::missing_lower);
    digit += has(Violation::missing_digit);
    symbol += has(Violation::missing_symbol);
    all += v.empty();
  }
  const auto rate = [&](std::size_t n) { return static_cast<double>(n) / static_cast<double>(stats.size); };
  stats.upper_rate = rate(upper);
  stats.lower_rate = rate(lower);
  stats.digit_rate = rate(digit);
  stats.symbol_rate = rate(symbol);
  stats.all_classes_rate = rate(all);
  return stats;
}

}  // namespace pwsim
