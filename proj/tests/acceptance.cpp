// Acceptance run: one PASS/FAIL line per headline criterion, with wall time.
// Oracles come from test_support.hpp, not from the library's search paths.

#include "pwsim/experiment.hpp"
#include "pwsim/generator.hpp"
#include "pwsim/matcher.hpp"
#include "pwsim/meter.hpp"
#include "pwsim/report.hpp"
#include "pwsim/service.hpp"
#include "pwsim/similarity.hpp"
#include "test_support.hpp"

#include <httplib.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <thread>

namespace {

using namespace pwsim;
using nlohmann::json;
using testing::random_string;
using testing::reference_jaro;

int g_failures = 0;
std::string g_note;  // optional detail appended to the current line

// body returns an empty string on success or a reason on failure.
void criterion(const char* name, double limit_seconds, const std::function<std::string()>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string reason;
  g_note.clear();
  try {
    reason = body();
  } catch (const std::exception& e) {
    reason = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (reason.empty() && secs >= limit_seconds) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "took %.2f s, limit %.0f s", secs, limit_seconds);
    reason = buf;
  }
  const bool ok = reason.empty();
  g_failures += !ok;
  const std::string detail = ok ? (g_note.empty() ? "" : "  (" + g_note + ")") : "  -- " + reason;
  std::printf("%s  %-28s %8.3f s%s\n", ok ? "PASS" : "FAIL", name, secs, detail.c_str());
  std::fflush(stdout);
}

Corpus corpus_of(const std::vector<std::u32string>& v, const std::string& label) {
  std::vector<std::string> e;
  for (const auto& s : v) e.push_back(testing::to_utf8(s));
  return testing::make_corpus(e, label);
}

std::vector<std::u32string> random_list(std::mt19937_64& rng, std::size_t n, const std::u32string& alpha,
                                        std::size_t lo, std::size_t hi) {
  std::vector<std::u32string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_string(rng, lo, hi, alpha));
  return out;
}

std::vector<FragmentDictionary> bundled() {
  return {load_dictionary(testing::data_dir() / "fragments/english.txt"),
          load_dictionary(testing::data_dir() / "fragments/indian.txt")};
}

std::string known_values() {
  const struct {
    const char *a, *b;
    double want;
  } cases[] = {{"Brian", "Jesus", 0.0}, {"Thorkel", "Thorgier", 0.779761}, {"bunty", "bunti", 0.866666}};
  for (const auto& c : cases) {
    const double got = jaro_utf8(c.a, c.b).value();
    if (std::fabs(got - c.want) > 1e-6) return std::string(c.a) + "/" + c.b + " = " + std::to_string(got);
  }
  return {};
}

std::string property_suite() {
  std::mt19937_64 rng(1);
  const std::u32string small = U"abcAB1!";
  for (int n = 0; n < 20000; ++n) {
    const auto& alpha = n % 2 ? small : testing::password_alphabet();
    const auto a = random_string(rng, 0, 16, alpha);
    const auto b = random_string(rng, 0, 16, alpha);
    const double ab = jaro(a, b).value();
    if (!(ab >= 0.0 && ab <= 1.0)) return "out of range";
    if (ab != jaro(b, a).value()) return "asymmetric";
    if (jaro(a, a).value() != 1.0) return "identity";
    if (ab == 1.0 && a != b) return "score 1 for distinct strings";
    if (ab != reference_jaro(a, b)) return "disagrees with reference";
    if (jaro_upper_bound(CharHistogram(a), CharHistogram(b)).value() < ab) return "multiset bound unsound";
    if (jaro_length_bound(a.size(), b.size()).value() < ab) return "length bound unsound";
    const auto x = random_string(rng, 1, 16, U"abcdef");
    const auto y = random_string(rng, 1, 16, U"XYZ123");
    if (jaro(x, y).value() != 0.0) return "disjoint alphabets nonzero";
  }
  return {};
}

std::string oracle_equivalence() {
  for (int seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed) * 7919);
    const std::size_t n = seed <= 5 ? 500 : 50 + rng() % 451;
    const std::u32string alpha = seed % 2 ? U"abcdefgAB12!" : testing::password_alphabet();
    const auto test = random_list(rng, n, alpha, 1, 12);
    const auto weak = random_list(rng, n, alpha, 1, 12);
    const Corpus tc = corpus_of(test, "t");
    const WeakIndex index(corpus_of(weak, "w"));
    for (double t : {0.5, 0.7, 0.9}) {
      const auto oracle = testing::naive_evaluate(test, weak, t);
      EvaluateOptions o;
      o.threshold = t;
      o.workers = 4;
      const EvaluationReport r = evaluate(tc, index, o);
      const double want = static_cast<double>(oracle.matched) / static_cast<double>(test.size());
      if (r.matched != oracle.matched || r.accuracy != want) {
        return "seed " + std::to_string(seed) + " t=" + std::to_string(t) + ": M " + std::to_string(r.matched) +
               " vs oracle " + std::to_string(oracle.matched);
      }
    }
  }
  return {};
}

std::string monotonicity() {
  std::mt19937_64 rng(2024);
  const std::u32string alpha = testing::password_alphabet();
  const Corpus test = corpus_of(random_list(rng, 1000, alpha, 8, 10), "t");
  const WeakIndex index(corpus_of(random_list(rng, 1000, alpha, 8, 10), "w"));
  const auto r = threshold_sweep(test, index, {0.5, 0.7, 0.9});
  g_note = "M = " + std::to_string(r[0].matched) + " / " + std::to_string(r[1].matched) + " / " +
           std::to_string(r[2].matched);
  if (!(r[0].matched >= r[1].matched && r[1].matched >= r[2].matched)) {
    return "M = " + std::to_string(r[0].matched) + ", " + std::to_string(r[1].matched) + ", " +
           std::to_string(r[2].matched);
  }
  return {};
}

std::string identity_and_disjoint() {
  GenerationSpec spec;
  spec.count = 1000;
  spec.seed = 3;
  spec.languages = {{Language::english, 1.0}};
  const Corpus c = filter_by_policy(generate(bundled(), spec), CompositionPolicy{}, false);
  if (evaluate(c, c, 0.5).accuracy != 1.0) return "self-match below 1.0";
  std::mt19937_64 rng(4);
  const Corpus a = corpus_of(random_list(rng, 500, U"abcdefghij", 8, 10), "a");
  const Corpus b = corpus_of(random_list(rng, 500, U"KLMNOP0123", 8, 10), "b");
  if (evaluate(a, b, 0.5).accuracy != 0.0) return "disjoint corpora above 0.0";
  return {};
}

std::string generator_compliance() {
  const auto dicts = bundled();
  const std::vector<std::vector<LanguageWeight>> specs{
      {{Language::english, 1.0}}, {{Language::indian, 1.0}}, {{Language::english, 0.5}, {Language::indian, 0.5}}};
  for (const auto& langs : specs) {
    GenerationSpec spec;
    spec.count = 10000;
    spec.seed = 99;
    spec.languages = langs;
    const Corpus first = generate(dicts, spec);
    if (first.size() != 10000) return "wrong count";
    for (const auto& pw : first.entries) {
      if (!policy_check(pw, spec.policy).empty()) return "non-compliant: " + pw;
    }
    if (format_wordlist(first) != format_wordlist(generate(dicts, spec))) return "second run differs";
  }
  return {};
}

std::string desk_grid() {
  const auto grid = reproduce_experiment(load_descriptor(testing::data_dir() / "experiments/desk.json"));
  std::map<std::string, const EvaluationReport*> by_name;
  for (const auto& c : grid) by_name[c.name] = &c.report;
  for (const char* same : {"english", "indian_only"}) {
    if (!(by_name.at(same)->accuracy > 0.95)) return std::string(same) + " not above 95%";
  }
  if (!(by_name.at("indian")->accuracy < by_name.at("english")->accuracy)) {
    return "cross-language " + format_percent(by_name.at("indian")->accuracy) + "% not below same-language " +
           format_percent(by_name.at("english")->accuracy) + "%";
  }
  for (const auto& c : grid) g_note += (g_note.empty() ? "" : ", ") + c.name + " " + format_percent(c.report.accuracy) + "%";
  std::ifstream in(std::filesystem::path(PWSIM_TEST_DIR) / "golden/desk_grid.json");
  const json golden = json::parse(in);
  if (golden.at("cells").size() != grid.size()) return "cell count differs from golden";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& g = golden.at("cells").at(i);
    const auto& r = grid[i].report;
    if (grid[i].name != g.at("name") || r.matched != g.at("M").get<std::size_t>() ||
        r.n_test != g.at("N_test").get<std::size_t>()) {
      return "cell " + grid[i].name + " differs from golden";
    }
    for (std::size_t s = 0; s < r.per_source.size(); ++s) {
      if (r.per_source[s].matched != g.at("per_source").at(s).at("M").get<std::size_t>()) {
        return "cell " + grid[i].name + " per-source differs from golden";
      }
    }
  }
  return {};
}

// Two workloads: printable-ASCII passwords (matches are found early) and a
// wide alphabet where matches are rare, so nearly every test entry must scan or
// prune all 10,000 weak entries.
std::string performance() {
  std::u32string wide = testing::password_alphabet();
  for (char32_t c = 0x3041; c < 0x3041 + 300; ++c) wide.push_back(c);
  const struct {
    const char* name;
    std::u32string alpha;
  } workloads[] = {{"ascii", testing::password_alphabet()}, {"wide", wide}};
  std::mt19937_64 rng(77);
  for (const auto& w : workloads) {
    const Corpus test = corpus_of(random_list(rng, 1000, w.alpha, 8, 10), "t");
    const WeakIndex index(corpus_of(random_list(rng, 10000, w.alpha, 8, 10), "w"));
    EvaluateOptions o;
    const auto start = std::chrono::steady_clock::now();
    const EvaluationReport pruned = evaluate(test, index, o);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 5.0) return std::string(w.name) + ": pruned evaluate took " + std::to_string(secs) + " s";
    o.prune = false;
    const EvaluationReport naive = evaluate(test, index, o);
    if (pruned.matched != naive.matched) return std::string(w.name) + ": pruned and naive disagree on M";
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s: %.2f s, M = %zu, comparisons %zu pruned vs %zu naive",
                  g_note.empty() ? "" : "; ", w.name, secs, pruned.matched, pruned.comparisons, naive.comparisons);
    g_note += buf;
    if (!(pruned.comparisons < naive.comparisons)) return std::string(w.name) + ": pruning saved no comparisons";
  }
  return {};
}

std::string service_contract() {
  std::mt19937_64 rng(55);
  const std::u32string alpha = U"abcdeABCD12!#";
  std::vector<Corpus> weak{corpus_of(random_list(rng, 300, alpha, 4, 10), "one"),
                           corpus_of(random_list(rng, 300, alpha, 4, 10), "two")};
  AssessService svc(weak, ServiceConfig{});
  const int port = svc.bind("127.0.0.1", 0);
  std::thread server([&] { svc.listen(); });
  httplib::Client client("127.0.0.1", port);
  std::string reason;
  for (int i = 0; i < 200 && !client.Get("/health"); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));

  for (int i = 0; i < 100 && reason.empty(); ++i) {
    const std::string pw = testing::to_utf8(random_string(rng, 1, 14, alpha));
    const double t = static_cast<double>(rng() % 11) / 10.0;
    const auto res = client.Post("/assess", json{{"password", pw}, {"threshold", t}}.dump(), "application/json");
    if (!res || res->status != 200) {
      reason = "request " + std::to_string(i) + " failed";
    } else if (json::parse(res->body) != to_json(assess(pw, weak, t, CompositionPolicy{}))) {
      reason = "fixture " + std::to_string(i) + " differs from in-process verdict";
    }
  }
  for (const std::string body : {std::string("{"), std::string("[]"), std::string(R"({"password": 1})"),
                                 std::string(R"({"password": ""})"), std::string(R"({"pw": "x"})")}) {
    if (!reason.empty()) break;
    const auto res = client.Post("/assess", body, "application/json");
    if (!res || res->status != 400) reason = "malformed body not rejected with 400: " + body;
  }
  svc.stop();
  server.join();
  return reason;
}

}  // namespace

int main() {
  criterion("jaro-known-values", 1, known_values);
  criterion("jaro-properties", 10, property_suite);
  criterion("oracle-equivalence", 60, oracle_equivalence);
  criterion("threshold-monotonicity", 60, monotonicity);
  criterion("self-match-and-disjoint", 60, identity_and_disjoint);
  criterion("generator-compliance", 30, generator_compliance);
  criterion("desk-grid", 120, desk_grid);
  criterion("performance", 5, performance);
  criterion("service-contract", 60, service_contract);
  std::printf("%d criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
