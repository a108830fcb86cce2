#include "pwsim/generator.hpp"

#include "pwsim/unicode.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <set>

namespace pwsim {
namespace {

using testing::make_corpus;

std::vector<FragmentDictionary> bundled() {
  return {load_dictionary(testing::data_dir() / "fragments/english.txt"),
          load_dictionary(testing::data_dir() / "fragments/indian.txt")};
}

GenerationSpec single(Language lang, std::size_t count, std::uint64_t seed) {
  GenerationSpec spec;
  spec.count = count;
  spec.seed = seed;
  spec.languages = {{lang, 1.0}};
  return spec;
}

// Letters only, lowercased: undoes the digit/symbol insertion and the case mutation.
std::string letters_lower(const std::string& pw) {
  const std::u32string scalars = unicode::decode_utf8(pw).value();
  std::u32string out;
  for (char32_t c : scalars) {
    if (unicode::is_letter(c)) out.push_back(unicode::to_lower(c));
  }
  return unicode::encode_utf8(out);
}

bool contains_fragment(const std::string& pw, const FragmentDictionary& dict) {
  const std::string letters = letters_lower(pw);
  for (const auto& f : dict.fragments) {
    if (letters.find(f) != std::string::npos) return true;
  }
  return false;
}

TEST(SplitMix64, ReferenceSequence) {
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(rng.next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(rng.next(), 0x06C45D188009454FULL);
}

TEST(SplitMix64, BelowStaysInRange) {
  SplitMix64 rng(5);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
  EXPECT_THROW(rng.below(0), std::invalid_argument);
}

TEST(FragmentDictionary, BundledDictionariesAreValidAndDisjoint) {
  const auto dicts = bundled();
  ASSERT_EQ(dicts[0].language, Language::english);
  ASSERT_EQ(dicts[1].language, Language::indian);
  for (const auto& d : dicts) EXPECT_GE(d.fragments.size(), 200u);
  const std::set<std::string> en(dicts[0].fragments.begin(), dicts[0].fragments.end());
  for (const auto& f : dicts[1].fragments) EXPECT_FALSE(en.count(f)) << f;
}

TEST(FragmentDictionary, RejectsBadFragments) {
  EXPECT_THROW((FragmentDictionary{Language::english, {}}).validate(), std::invalid_argument);
  EXPECT_THROW((FragmentDictionary{Language::english, {"ok", "Upper"}}).validate(), std::invalid_argument);
  EXPECT_THROW((FragmentDictionary{Language::english, {"a"}}).validate(), std::invalid_argument);
  EXPECT_THROW((FragmentDictionary{Language::english, {"toolongword"}}).validate(), std::invalid_argument);
  EXPECT_THROW((FragmentDictionary{Language::english, {"ab1"}}).validate(), std::invalid_argument);
}

TEST(FragmentDictionary, LoadsHeaderAndComments) {
  testing::TempDir dir;
  const auto p = dir.write("d.txt", "# language: indian\n# comment\nraja\r\n\ndosa\n");
  const auto d = load_dictionary(p);
  EXPECT_EQ(d.language, Language::indian);
  EXPECT_EQ(d.fragments, (std::vector<std::string>{"raja", "dosa"}));
  EXPECT_THROW(load_dictionary(dir.write("x.txt", "# language: martian\nab\n")), std::invalid_argument);
}

TEST(Generate, EnglishSpecYieldsCompliantPasswords) {
  const auto dicts = bundled();
  const Corpus c = generate(dicts, single(Language::english, 3, 1));
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c.language, Language::english);
  for (const auto& pw : c.entries) {
    EXPECT_TRUE(policy_check(pw, CompositionPolicy{}).empty()) << pw;
    EXPECT_TRUE(contains_fragment(pw, dicts[0])) << pw;
  }
}

TEST(Generate, EveryLanguageSpecIsCompliantAndFaithful) {
  const auto dicts = bundled();
  for (Language lang : {Language::english, Language::indian}) {
    const FragmentDictionary& dict = lang == Language::english ? dicts[0] : dicts[1];
    const Corpus c = generate(dicts, single(lang, 2000, 77));
    for (const auto& pw : c.entries) {
      ASSERT_TRUE(policy_check(pw, CompositionPolicy{}).empty()) << pw;
      ASSERT_TRUE(contains_fragment(pw, dict)) << pw;
    }
  }
}

TEST(Generate, ExactlyOneUppercaseDigitAndSymbolInserted) {
  const auto dicts = bundled();
  for (const auto& pw : generate(dicts, single(Language::indian, 500, 3)).entries) {
    int upper = 0;
    for (char c : pw) upper += c >= 'A' && c <= 'Z';
    EXPECT_EQ(upper, 1) << pw;
  }
}

TEST(Generate, MixedPasswordsCombineBothLanguages) {
  const auto dicts = bundled();
  GenerationSpec spec;
  spec.count = 1000;
  spec.seed = 9;
  spec.languages = {{Language::english, 0.5}, {Language::indian, 0.5}};
  const Corpus c = generate(dicts, spec);
  EXPECT_EQ(c.language, Language::mixed);
  for (const auto& pw : c.entries) {
    ASSERT_TRUE(policy_check(pw, CompositionPolicy{}).empty()) << pw;
    // One whole fragment from one language; the other contributes at least a 2-letter prefix.
    ASSERT_TRUE(contains_fragment(pw, dicts[0]) || contains_fragment(pw, dicts[1])) << pw;
  }
}

TEST(Generate, DeterministicUnderSeed) {
  const auto dicts = bundled();
  const Corpus a = generate(dicts, single(Language::english, 1000, 42));
  const Corpus b = generate(dicts, single(Language::english, 1000, 42));
  EXPECT_EQ(format_wordlist(a), format_wordlist(b));
  const Corpus other = generate(dicts, single(Language::english, 1000, 43));
  EXPECT_NE(format_wordlist(a), format_wordlist(other));
}

TEST(Generate, PrefixStableAcrossCounts) {
  // Each password comes from its own stream, so a longer run extends a shorter one.
  const auto dicts = bundled();
  const Corpus small = generate(dicts, single(Language::indian, 10, 5));
  const Corpus large = generate(dicts, single(Language::indian, 100, 5));
  EXPECT_TRUE(std::equal(small.entries.begin(), small.entries.end(), large.entries.begin()));
}

TEST(Generate, RejectsZeroCount) {
  EXPECT_THROW(generate(bundled(), single(Language::english, 0, 1)), std::invalid_argument);
}

TEST(Generate, RejectsBadWeights) {
  GenerationSpec spec = single(Language::english, 5, 1);
  spec.languages = {{Language::english, 0.5}, {Language::indian, 0.4}};
  EXPECT_THROW(generate(bundled(), spec), std::invalid_argument);
}

TEST(Generate, RejectsMissingDictionary) {
  const std::vector<FragmentDictionary> only_english{bundled()[0]};
  EXPECT_THROW(generate(only_english, single(Language::indian, 5, 1)), std::invalid_argument);
}

TEST(Generate, RejectsInfeasiblePolicy) {
  const std::vector<FragmentDictionary> dicts{{Language::english, {"sunshine", "football"}}};
  GenerationSpec spec = single(Language::english, 5, 1);
  spec.policy.min_len = 6;
  spec.policy.max_len = 7;  // 8-letter fragments + digit + symbol cannot fit
  try {
    generate(dicts, spec);
    FAIL() << "expected infeasible spec";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("infeasible"), std::string::npos);
  }
}

TEST(Generate, PadsShortPasswordsUpToMinLength) {
  const std::vector<FragmentDictionary> dicts{{Language::english, {"ab", "cd"}}};
  GenerationSpec spec = single(Language::english, 200, 4);
  spec.policy.min_len = 10;
  spec.policy.max_len = 12;
  for (const auto& pw : generate(dicts, spec).entries) {
    ASSERT_TRUE(policy_check(pw, spec.policy).empty()) << pw;
  }
}

TEST(LeakedStyle, LengthBoundedAndDeterministic) {
  const auto dicts = bundled();
  const GenerationSpec spec = single(Language::english, 500, 101);
  const Corpus a = synthesize_leaked_style(dicts, spec);
  EXPECT_EQ(format_wordlist(a), format_wordlist(synthesize_leaked_style(dicts, spec)));
  for (const auto& pw : a.entries) {
    ASSERT_GE(pw.size(), 8u);
    ASSERT_LE(pw.size(), 10u);
    ASSERT_TRUE(std::isdigit(static_cast<unsigned char>(pw.back()))) << pw;
    ASSERT_TRUE(contains_fragment(pw, dicts[0])) << pw;
  }
}

TEST(LeakedStyle, BundledTestListsAreReproducible) {
  const auto dicts = bundled();
  const Corpus en = load_wordlist(testing::data_dir() / "synthetic/english_test.txt", "en", Language::english);
  const Corpus in = load_wordlist(testing::data_dir() / "synthetic/indian_test.txt", "in", Language::indian);
  EXPECT_EQ(en.entries, synthesize_leaked_style(dicts, single(Language::english, 500, 101)).entries);
  EXPECT_EQ(in.entries, synthesize_leaked_style(dicts, single(Language::indian, 500, 102)).entries);
}

Corpus numbered(const std::string& prefix, std::size_t n) {
  std::vector<std::string> e;
  for (std::size_t i = 0; i < n; ++i) e.push_back(prefix + std::to_string(i));
  return make_corpus(e, prefix);
}

std::size_t count_prefix(const Corpus& c, const std::string& prefix) {
  return static_cast<std::size_t>(std::count_if(c.entries.begin(), c.entries.end(),
                                                [&](const std::string& e) { return e.rfind(prefix, 0) == 0; }));
}

TEST(MixCorpora, ThreeEqualPartsOfSizeSixThousand) {
  const Corpus mixed = mix_corpora({{numbered("en", 6666), 1.0 / 3}, {numbered("in", 6666), 1.0 / 3},
                                    {numbered("mx", 6666), 1.0 / 3}},
                                   1);
  EXPECT_EQ(mixed.size(), 19998u);
  EXPECT_EQ(count_prefix(mixed, "en"), 6666u);
  EXPECT_EQ(count_prefix(mixed, "in"), 6666u);
}

TEST(MixCorpora, SinglePartIsAPermutation) {
  const Corpus part = numbered("p", 50);
  const Corpus mixed = mix_corpora({{part, 1.0}}, 3);
  auto a = mixed.entries, b = part.entries;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);
  EXPECT_EQ(mixed.entries, mix_corpora({{part, 1.0}}, 3).entries);
}

TEST(MixCorpora, LargestRemainderCounts) {
  const Corpus mixed = mix_corpora({{numbered("a", 10), 0.3}, {numbered("b", 10), 0.7}}, 7, 10);
  EXPECT_EQ(count_prefix(mixed, "a"), 3u);
  EXPECT_EQ(count_prefix(mixed, "b"), 7u);
  // 0.5/0.5 of 3: the tie on the remainder goes to the first part.
  const Corpus odd = mix_corpora({{numbered("a", 10), 0.5}, {numbered("b", 10), 0.5}}, 7, 3);
  EXPECT_EQ(count_prefix(odd, "a"), 2u);
  EXPECT_EQ(count_prefix(odd, "b"), 1u);
}

TEST(MixCorpora, Errors) {
  EXPECT_THROW(mix_corpora({}, 1), std::invalid_argument);
  EXPECT_THROW(mix_corpora({{Corpus{}, 0.5}, {numbered("b", 3), 0.5}}, 1), std::invalid_argument);
  EXPECT_THROW(mix_corpora({{numbered("a", 3), 0.5}, {numbered("b", 3), 0.6}}, 1), std::invalid_argument);
  EXPECT_THROW(mix_corpora({{numbered("a", 3), 1.0}}, 1, 10), std::invalid_argument);
}

}  // namespace
}  // namespace pwsim
