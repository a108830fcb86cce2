#pragma once

#include "pwsim/corpus.hpp"
#include "pwsim/similarity.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pwsim {

/// Read-only search structure over one or more weak corpora.
///
/// Entries keep their global position (concatenation order of the corpora),
/// which is what ties are broken on. Internally entries are grouped into
/// buckets by (source, length) so whole lengths can be skipped by the
/// length-only bound.
class WeakIndex {
 public:
  struct Source {
    std::string label;
    Language language = Language::unknown;
    std::size_t size = 0;
  };

  explicit WeakIndex(const Corpus& corpus);
  explicit WeakIndex(const std::vector<Corpus>& corpora);

  std::size_t size() const { return scalars_.size(); }
  bool empty() const { return scalars_.empty(); }
  const std::vector<Source>& sources() const { return sources_; }

  std::u32string_view scalars(std::size_t id) const { return scalars_[id]; }
  const std::string& entry(std::size_t id) const { return utf8_[id]; }
  const CharHistogram& histogram(std::size_t id) const { return histograms_[id]; }
  std::size_t source_of(std::size_t id) const { return source_ids_[id]; }

  struct Bucket {
    std::size_t source = 0;
    std::size_t length = 0;
    std::vector<std::size_t> ids;  // ascending global positions
  };
  const std::vector<Bucket>& buckets() const { return buckets_; }

 private:
  void add(const Corpus& corpus);
  void build_buckets();

  std::vector<std::u32string> scalars_;
  std::vector<std::string> utf8_;
  std::vector<CharHistogram> histograms_;
  std::vector<std::size_t> source_ids_;
  std::vector<Source> sources_;
  std::vector<Bucket> buckets_;
};

struct MatchOptions {
  double threshold = 0.5;
  /// Find the global best (earliest position on ties) instead of stopping at
  /// the first entry at or above the threshold.
  bool exhaustive = false;
  /// Skip entries whose upper bound rules them out. Never changes results.
  bool prune = true;
};

struct MatchResult {
  std::string test_password;
  /// best_score >= threshold (inclusive).
  bool matched = false;
  SimilarityScore best_score;
  std::optional<std::string> best_match;
  std::optional<std::size_t> best_position;
  /// Full jaro evaluations performed.
  std::size_t comparisons = 0;
};

/// Throws std::invalid_argument for an empty index or a threshold outside [0, 1].
/// `source` restricts the search to one of the index's corpora.
MatchResult match_one(std::u32string_view password, const WeakIndex& weak, const MatchOptions& options,
                      std::optional<std::size_t> source = std::nullopt);
MatchResult match_one(std::string_view password_utf8, const WeakIndex& weak, const MatchOptions& options,
                      std::optional<std::size_t> source = std::nullopt);
MatchResult match_one(std::string_view password_utf8, const Corpus& weak, double threshold, bool exhaustive);

struct EvaluateOptions {
  double threshold = 0.5;
  bool prune = true;
  /// 0 picks the hardware concurrency.
  unsigned workers = 0;
  /// Also count, for every weak source, how many test entries it matches on its own.
  bool per_source = false;
};

struct SourceCount {
  std::string label;
  Language language = Language::unknown;
  std::size_t matched = 0;
};

/// Matching accuracy of a test corpus against a weak index: accuracy = M / N_test.
struct EvaluationReport {
  std::string test_label;
  std::string weak_label;
  std::size_t matched = 0;  // M
  std::size_t n_test = 0;   // N_test
  double accuracy = 0.0;
  double threshold = 0.5;
  std::vector<SourceCount> per_source;
  std::size_t comparisons = 0;
  double elapsed_seconds = 0.0;
};

/// Throws std::invalid_argument for an empty test corpus, an empty index or
/// a threshold outside [0, 1]. Results do not depend on the worker count.
EvaluationReport evaluate(const Corpus& test, const WeakIndex& weak, const EvaluateOptions& options);
EvaluationReport evaluate(const Corpus& test, const Corpus& weak, double threshold);

/// One report per threshold; thresholds must be ascending within [0, 1].
std::vector<EvaluationReport> threshold_sweep(const Corpus& test, const WeakIndex& weak,
                                              const std::vector<double>& thresholds,
                                              EvaluateOptions options = {});

void validate_threshold(double threshold);

}  // namespace pwsim
