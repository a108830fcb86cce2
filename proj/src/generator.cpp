#include "pwsim/generator.hpp"

#include "pwsim/unicode.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace pwsim {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("SplitMix64::below: bound must be positive");
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = -bound % bound;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= limit) return r % bound;
  }
}

SplitMix64 SplitMix64::stream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 keyed(index ^ 0xD1B54A32D192ED03ULL);
  return SplitMix64(seed ^ keyed.next());
}

void FragmentDictionary::validate() const {
  if (fragments.empty()) {
    throw std::invalid_argument("fragment dictionary for " + std::string(to_string(language)) +
                                " is empty");
  }
  for (const auto& f : fragments) {
    const auto s = unicode::decode_utf8(f);
    const bool ok = s && s->size() >= 2 && s->size() <= 8 &&
                    std::all_of(s->begin(), s->end(), [](char32_t c) {
                      return unicode::is_letter(c) && unicode::is_lower(c) &&
                             unicode::to_upper(c) != c;
                    });
    if (!ok) throw std::invalid_argument("invalid fragment '" + f + "': need 2-8 lowercase letters");
  }
}

FragmentDictionary load_dictionary(const std::filesystem::path& path, Language fallback) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dictionary: " + path.string());

  FragmentDictionary dict;
  dict.language = fallback;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view key = "# language:";
      if (line.rfind(key, 0) == 0) {
        std::string tag = line.substr(key.size());
        tag.erase(0, tag.find_first_not_of(' '));
        tag.erase(tag.find_last_not_of(' ') + 1);
        const auto lang = parse_language(tag);
        if (!lang) throw std::invalid_argument("unknown language tag '" + tag + "' in " + path.string());
        dict.language = *lang;
      }
      continue;
    }
    auto normalized = unicode::normalize_nfc(line);
    if (!normalized) throw std::invalid_argument("dictionary " + path.string() + " is not valid UTF-8");
    dict.fragments.push_back(std::move(*normalized));
  }
  dict.validate();
  return dict;
}

void GenerationSpec::validate() const {
  if (count == 0) throw std::invalid_argument("generation count must be positive");
  if (languages.empty()) throw std::invalid_argument("generation spec names no languages");
  double sum = 0.0;
  for (const auto& lw : languages) {
    if (!(lw.weight >= 0.0 && lw.weight <= 1.0)) {
      throw std::invalid_argument("language weight must be in [0, 1]");
    }
    sum += lw.weight;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("language weights must sum to 1");
  policy.validate();
}

namespace {

constexpr std::string_view kDigits = "0123456789";

struct LanguagePool {
  Language language;
  std::uint64_t weight;  // fixed-point weight, 2^32 == 1.0
  std::vector<std::u32string> fragments;
  std::vector<std::size_t> fits_budget;      // indices with length <= budget
  std::vector<std::size_t> fits_with_second;  // indices with length <= budget - 2
};

std::size_t pick_weighted(SplitMix64& rng, const std::vector<LanguagePool>& pools,
                          std::size_t excluded) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < pools.size(); ++i) {
    if (i != excluded) total += pools[i].weight;
  }
  std::uint64_t r = rng.below(total);
  for (std::size_t i = 0; i < pools.size(); ++i) {
    if (i == excluded) continue;
    if (r < pools[i].weight) return i;
    r -= pools[i].weight;
  }
  return pools.size() - 1;
}

const std::u32string& pick(SplitMix64& rng, const LanguagePool& pool,
                           const std::vector<std::size_t>& eligible) {
  return pool.fragments[eligible[rng.below(eligible.size())]];
}

std::u32string compose(SplitMix64& rng, const std::vector<LanguagePool>& pools,
                       const CompositionPolicy& policy) {
  const std::size_t budget = policy.max_len - 2;
  std::u32string letters;

  if (pools.size() > 1) {
    const std::size_t first = pick_weighted(rng, pools, pools.size());
    const std::size_t second = pick_weighted(rng, pools, first);
    letters = pick(rng, pools[first], pools[first].fits_with_second);
    const auto& tail = pools[second].fragments[rng.below(pools[second].fragments.size())];
    letters += tail.substr(0, budget - letters.size());
  } else {
    const auto& pool = pools.front();
    letters = pick(rng, pool, pool.fits_budget);
    const bool two = rng.below(2) == 1;
    if (two && letters.size() + 2 <= budget) {
      const auto& tail = pool.fragments[rng.below(pool.fragments.size())];
      letters += tail.substr(0, budget - letters.size());
    }
  }

  const std::size_t min_letters = policy.min_len > 2 ? policy.min_len - 2 : 0;
  while (letters.size() < min_letters) {
    letters.push_back(static_cast<char32_t>(U'a' + rng.below(26)));
  }

  const std::size_t up = rng.below(letters.size());
  letters[up] = unicode::to_upper(letters[up]);

  const auto digit = static_cast<char32_t>(kDigits[rng.below(kDigits.size())]);
  letters.insert(letters.begin() + static_cast<std::ptrdiff_t>(rng.below(letters.size() + 1)), digit);
  const auto symbol = static_cast<char32_t>(kGeneratorSymbols[rng.below(kGeneratorSymbols.size())]);
  letters.insert(letters.begin() + static_cast<std::ptrdiff_t>(rng.below(letters.size() + 1)), symbol);
  return letters;
}

std::vector<LanguagePool> build_pools(const std::vector<FragmentDictionary>& dicts, const GenerationSpec& spec,
                                      std::size_t budget) {
  std::vector<LanguagePool> pools;
  for (const auto& lw : spec.languages) {
    if (lw.weight <= 0.0) continue;
    const auto dict = std::find_if(dicts.begin(), dicts.end(),
                                   [&](const FragmentDictionary& d) { return d.language == lw.language; });
    if (dict == dicts.end()) {
      throw std::invalid_argument("no fragment dictionary for language " +
                                  std::string(to_string(lw.language)));
    }
    dict->validate();
    const auto fixed = static_cast<std::uint64_t>(std::llround(lw.weight * 4294967296.0));
    LanguagePool pool{lw.language, std::max<std::uint64_t>(fixed, 1), {}, {}, {}};
    for (const auto& f : dict->fragments) {
      pool.fragments.push_back(*unicode::decode_utf8(f));
      const std::size_t n = pool.fragments.back().size();
      if (n <= budget) pool.fits_budget.push_back(pool.fragments.size() - 1);
      if (n + 2 <= budget) pool.fits_with_second.push_back(pool.fragments.size() - 1);
    }
    pools.push_back(std::move(pool));
  }
  return pools;
}

}  // namespace

Corpus generate(const std::vector<FragmentDictionary>& dicts, const GenerationSpec& spec) {
  spec.validate();
  const CompositionPolicy& policy = spec.policy;
  if (policy.max_len < 4) {
    throw std::invalid_argument("infeasible spec: max_len " + std::to_string(policy.max_len) +
                                " leaves no room for two letters plus a digit and a symbol");
  }
  const std::size_t budget = policy.max_len - 2;

  auto pools = build_pools(dicts, spec, budget);

  for (const auto& pool : pools) {
    const auto& eligible = pools.size() > 1 ? pool.fits_with_second : pool.fits_budget;
    if (eligible.empty()) {
      throw std::invalid_argument("infeasible spec: max_len " + std::to_string(policy.max_len) +
                                  " is shorter than every " + std::string(to_string(pool.language)) +
                                  " fragment plus the mandatory digit and symbol");
    }
  }

  Corpus out;
  out.language = pools.size() == 1 ? pools.front().language : Language::mixed;
  out.label = "generated-" + std::string(to_string(out.language));
  out.source = "generator seed=" + std::to_string(spec.seed);
  out.entries.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    SplitMix64 rng = SplitMix64::stream(spec.seed, i);
    out.entries.push_back(unicode::encode_utf8(compose(rng, pools, policy)));
  }
  out.line_count_raw = out.entries.size();
  return out;
}

namespace {

std::u32string compose_leaked(SplitMix64& rng, const std::vector<LanguagePool>& pools,
                              const CompositionPolicy& policy) {
  const auto& pool = pools[pick_weighted(rng, pools, pools.size())];
  std::u32string s = pick(rng, pool, pool.fits_budget);
  if (rng.below(2) == 1) s[0] = unicode::to_upper(s[0]);
  if (rng.below(2) == 1 && s.size() + 2 <= policy.max_len) {
    s.push_back(static_cast<char32_t>(kLeakedSeparators[rng.below(kLeakedSeparators.size())]));
  }
  const std::size_t lo = std::max(policy.min_len, s.size() + 1);
  const std::size_t target = lo + rng.below(policy.max_len - lo + 1);
  while (s.size() < target) s.push_back(static_cast<char32_t>(kDigits[rng.below(kDigits.size())]));
  return s;
}

}  // namespace

Corpus synthesize_leaked_style(const std::vector<FragmentDictionary>& dicts, const GenerationSpec& spec) {
  spec.validate();
  if (spec.policy.max_len < 3) throw std::invalid_argument("infeasible spec: max_len must be at least 3");
  // Fragments of length <= max_len - 1 leave room for at least one digit.
  auto pools = build_pools(dicts, spec, spec.policy.max_len - 1);
  for (const auto& pool : pools) {
    if (pool.fits_budget.empty()) {
      throw std::invalid_argument("infeasible spec: every " + std::string(to_string(pool.language)) +
                                  " fragment is longer than max_len - 1");
    }
  }

  Corpus out;
  out.language = pools.size() == 1 ? pools.front().language : Language::mixed;
  out.label = "leaked-style-" + std::string(to_string(out.language));
  out.source = "leaked-style synthesizer seed=" + std::to_string(spec.seed);
  out.entries.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) {
    SplitMix64 rng = SplitMix64::stream(spec.seed, i);
    out.entries.push_back(unicode::encode_utf8(compose_leaked(rng, pools, spec.policy)));
  }
  out.line_count_raw = out.entries.size();
  return out;
}

namespace {

void shuffle(std::vector<std::size_t>& v, SplitMix64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng.below(i)]);
  }
}

}  // namespace

Corpus mix_corpora(const std::vector<std::pair<Corpus, double>>& parts, std::uint64_t seed,
                   std::optional<std::size_t> total) {
  if (parts.empty()) throw std::invalid_argument("mix_corpora: no parts");
  double sum = 0.0;
  for (const auto& [corpus, p] : parts) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("mix_corpora: proportion must be in [0, 1]");
    if (p > 0.0 && corpus.empty()) {
      throw std::invalid_argument("mix_corpora: part '" + corpus.label + "' is empty but has proportion " +
                                  std::to_string(p));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("mix_corpora: proportions must sum to 1");

  std::size_t n = 0;
  if (total) {
    n = *total;
  } else {
    n = static_cast<std::size_t>(-1);
    for (const auto& [corpus, p] : parts) {
      if (p > 0.0) {
        // Small epsilon so 6666 / (1/3) lands on 19998 rather than 19997.
        n = std::min(n, static_cast<std::size_t>(std::floor(static_cast<double>(corpus.size()) / p + 1e-6)));
      }
    }
  }

  // Largest-remainder apportionment; ties go to the earlier part.
  std::vector<std::size_t> share(parts.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const double quota = parts[i].second * static_cast<double>(n);
    share[i] = static_cast<std::size_t>(std::floor(quota));
    assigned += share[i];
    remainders.emplace_back(quota - std::floor(quota), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < n && k < remainders.size(); ++k, ++assigned) {
    ++share[remainders[k].second];
  }

  SplitMix64 rng(seed);
  Corpus out;
  std::vector<std::string> pooled;
  pooled.reserve(n);
  bool same_language = true;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const Corpus& c = parts[i].first;
    if (share[i] > c.size()) {
      throw std::invalid_argument("mix_corpora: part '" + c.label + "' has " + std::to_string(c.size()) +
                                  " entries but " + std::to_string(share[i]) + " are required");
    }
    std::vector<std::size_t> idx(c.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    shuffle(idx, rng);
    idx.resize(share[i]);
    std::sort(idx.begin(), idx.end());
    for (std::size_t j : idx) pooled.push_back(c.entries[j]);

    same_language = same_language && c.language == parts.front().first.language;
    if (!out.label.empty()) out.label += "+";
    out.label += c.label;
  }

  std::vector<std::size_t> order(pooled.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  shuffle(order, rng);
  out.entries.reserve(pooled.size());
  for (std::size_t j : order) out.entries.push_back(std::move(pooled[j]));

  out.language = same_language ? parts.front().first.language : Language::mixed;
  out.source = "mix seed=" + std::to_string(seed);
  out.line_count_raw = out.entries.size();
  return out;
}

}  // namespace pwsim
