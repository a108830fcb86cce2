#include "pwsim/matcher.hpp"

#include "pwsim/unicode.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

namespace pwsim {

WeakIndex::WeakIndex(const Corpus& corpus) {
  add(corpus);
  build_buckets();
}

WeakIndex::WeakIndex(const std::vector<Corpus>& corpora) {
  for (const auto& c : corpora) add(c);
  build_buckets();
}

void WeakIndex::add(const Corpus& corpus) {
  const std::size_t source = sources_.size();
  sources_.push_back({corpus.label, corpus.language, corpus.size()});
  for (const auto& e : corpus.entries) {
    auto s = unicode::to_scalars(e);
    if (!s) throw std::invalid_argument("weak corpus '" + corpus.label + "' holds invalid UTF-8");
    histograms_.emplace_back(*s);
    scalars_.push_back(std::move(*s));
    utf8_.push_back(e);
    source_ids_.push_back(source);
  }
}

void WeakIndex::build_buckets() {
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> grouped;
  for (std::size_t id = 0; id < scalars_.size(); ++id) {
    grouped[{source_ids_[id], scalars_[id].size()}].push_back(id);
  }
  for (auto& [key, ids] : grouped) {
    buckets_.push_back({key.first, key.second, std::move(ids)});
  }
}

void validate_threshold(double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw std::invalid_argument("threshold must be within [0, 1]");
  }
}

namespace {

struct Best {
  bool found = false;
  SimilarityScore score;
  std::size_t position = 0;

  // Earliest position wins ties.
  bool improves(SimilarityScore s, std::size_t pos) const {
    return !found || s > score || (s == score && pos < position);
  }
  // Can an entry whose score is at most `bound` still become the best?
  bool reachable(SimilarityScore bound, std::size_t pos) const {
    return !found || bound > score || (bound == score && pos < position);
  }
};

MatchResult finish(std::u32string_view password, const WeakIndex& weak, const MatchOptions& options,
                   const Best& best, std::size_t comparisons) {
  MatchResult r;
  r.test_password = unicode::encode_utf8(password);
  r.comparisons = comparisons;
  if (best.found) {
    r.best_score = best.score;
    r.best_match = weak.entry(best.position);
    r.best_position = best.position;
  }
  r.matched = best.found && best.score.value() >= options.threshold;
  return r;
}

MatchResult scan_naive(std::u32string_view password, const WeakIndex& weak, const MatchOptions& options,
                       std::optional<std::size_t> source) {
  Best best;
  std::size_t comparisons = 0;
  for (std::size_t id = 0; id < weak.size(); ++id) {
    if (source && weak.source_of(id) != *source) continue;
    const SimilarityScore s = jaro(password, weak.scalars(id));
    ++comparisons;
    if (best.improves(s, id)) best = {true, s, id};
    if (!options.exhaustive && s.value() >= options.threshold) break;
  }
  return finish(password, weak, options, best, comparisons);
}

MatchResult scan_pruned(std::u32string_view password, const WeakIndex& weak, const MatchOptions& options,
                        std::optional<std::size_t> source) {
  const CharHistogram query(password);
  const SimilarityScore threshold(options.threshold);

  // Most promising lengths first.
  std::vector<std::pair<SimilarityScore, const WeakIndex::Bucket*>> order;
  for (const auto& b : weak.buckets()) {
    if (source && b.source != *source) continue;
    order.emplace_back(jaro_length_bound(password.size(), b.length), &b);
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  Best best;
  std::size_t comparisons = 0;
  for (const auto& [length_bound, bucket] : order) {
    if (options.exhaustive) {
      if (best.found && length_bound < best.score) break;
    } else if (length_bound < threshold) {
      break;
    }
    for (std::size_t id : bucket->ids) {
      const SimilarityScore bound = jaro_upper_bound(query, weak.histogram(id));
      if (options.exhaustive ? !best.reachable(bound, id) : bound < threshold) continue;
      const SimilarityScore s = jaro(password, weak.scalars(id));
      ++comparisons;
      if (best.improves(s, id)) best = {true, s, id};
      if (!options.exhaustive && s >= threshold) {
        return finish(password, weak, options, best, comparisons);
      }
    }
  }
  return finish(password, weak, options, best, comparisons);
}

}  // namespace

MatchResult match_one(std::u32string_view password, const WeakIndex& weak, const MatchOptions& options,
                      std::optional<std::size_t> source) {
  validate_threshold(options.threshold);
  if (weak.empty()) throw std::invalid_argument("match_one: weak corpus is empty (no reference set)");
  if (source && *source >= weak.sources().size()) throw std::out_of_range("match_one: unknown source");
  return options.prune ? scan_pruned(password, weak, options, source)
                       : scan_naive(password, weak, options, source);
}

MatchResult match_one(std::string_view password_utf8, const WeakIndex& weak, const MatchOptions& options,
                      std::optional<std::size_t> source) {
  const auto s = unicode::to_scalars(password_utf8);
  if (!s) throw std::invalid_argument("match_one: password is not valid UTF-8");
  return match_one(*s, weak, options, source);
}

MatchResult match_one(std::string_view password_utf8, const Corpus& weak, double threshold, bool exhaustive) {
  return match_one(password_utf8, WeakIndex(weak), MatchOptions{threshold, exhaustive, true});
}

namespace {

struct ChunkTotals {
  std::size_t matched = 0;
  std::size_t comparisons = 0;
  std::vector<std::size_t> per_source;
};

ChunkTotals evaluate_range(const std::vector<std::u32string>& test, std::size_t begin, std::size_t end,
                           const WeakIndex& weak, const EvaluateOptions& options) {
  ChunkTotals totals;
  const MatchOptions match{options.threshold, false, options.prune};
  const std::size_t n_sources = weak.sources().size();
  totals.per_source.assign(options.per_source ? n_sources : 0, 0);

  for (std::size_t i = begin; i < end; ++i) {
    if (!options.per_source) {
      const MatchResult r = match_one(test[i], weak, match);
      totals.comparisons += r.comparisons;
      totals.matched += r.matched;
      continue;
    }
    bool any = false;
    for (std::size_t s = 0; s < n_sources; ++s) {
      if (weak.sources()[s].size == 0) continue;
      const MatchResult r = match_one(test[i], weak, match, s);
      totals.comparisons += r.comparisons;
      totals.per_source[s] += r.matched;
      any = any || r.matched;
    }
    totals.matched += any;
  }
  return totals;
}

std::string weak_label(const WeakIndex& weak) {
  std::string label;
  for (const auto& s : weak.sources()) {
    if (!label.empty()) label += "+";
    label += s.label;
  }
  return label;
}

}  // namespace

EvaluationReport evaluate(const Corpus& test, const WeakIndex& weak, const EvaluateOptions& options) {
  validate_threshold(options.threshold);
  if (test.empty()) throw std::invalid_argument("evaluate: test corpus is empty");
  if (weak.empty()) throw std::invalid_argument("evaluate: weak corpus is empty (no reference set)");

  const auto start = std::chrono::steady_clock::now();
  std::vector<std::u32string> scalars;
  scalars.reserve(test.size());
  for (const auto& e : test.entries) {
    auto s = unicode::to_scalars(e);
    if (!s) throw std::invalid_argument("test corpus '" + test.label + "' holds invalid UTF-8");
    scalars.push_back(std::move(*s));
  }

  unsigned workers = options.workers != 0 ? options.workers : std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, scalars.size()));

  std::vector<ChunkTotals> chunks(workers);
  {
    std::vector<std::jthread> pool;
    const std::size_t per = (scalars.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(scalars.size(), w * per);
      const std::size_t end = std::min(scalars.size(), begin + per);
      if (workers == 1) {
        chunks[w] = evaluate_range(scalars, begin, end, weak, options);
      } else {
        pool.emplace_back([&, w, begin, end] { chunks[w] = evaluate_range(scalars, begin, end, weak, options); });
      }
    }
  }

  EvaluationReport report;
  report.test_label = test.label;
  report.weak_label = weak_label(weak);
  report.n_test = scalars.size();
  report.threshold = options.threshold;
  if (options.per_source) {
    for (const auto& s : weak.sources()) report.per_source.push_back({s.label, s.language, 0});
  }
  for (const auto& c : chunks) {
    report.matched += c.matched;
    report.comparisons += c.comparisons;
    for (std::size_t s = 0; s < c.per_source.size(); ++s) report.per_source[s].matched += c.per_source[s];
  }
  report.accuracy = static_cast<double>(report.matched) / static_cast<double>(report.n_test);
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

EvaluationReport evaluate(const Corpus& test, const Corpus& weak, double threshold) {
  EvaluateOptions options;
  options.threshold = threshold;
  return evaluate(test, WeakIndex(weak), options);
}

std::vector<EvaluationReport> threshold_sweep(const Corpus& test, const WeakIndex& weak,
                                              const std::vector<double>& thresholds, EvaluateOptions options) {
  if (thresholds.empty()) throw std::invalid_argument("threshold_sweep: no thresholds given");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    validate_threshold(thresholds[i]);
    if (i > 0 && thresholds[i] < thresholds[i - 1]) {
      throw std::invalid_argument("threshold_sweep: thresholds must be ascending");
    }
  }
  std::vector<EvaluationReport> reports;
  for (double t : thresholds) {
    options.threshold = t;
    reports.push_back(evaluate(test, weak, options));
  }
  return reports;
}

}  // namespace pwsim
