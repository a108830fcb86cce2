#include "pwsim/cli.hpp"

#include "pwsim/corpus.hpp"
#include "pwsim/experiment.hpp"
#include "pwsim/generator.hpp"
#include "pwsim/matcher.hpp"
#include "pwsim/meter.hpp"
#include "pwsim/report.hpp"
#include "pwsim/service.hpp"
#include "pwsim/similarity.hpp"
#include "pwsim/unicode.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace pwsim::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { text, json, csv };

const std::map<std::string, Format> kFormats{{"text", Format::text}, {"json", Format::json}, {"csv", Format::csv}};

struct PolicyFlags {
  std::size_t min_len = 8;
  std::size_t max_len = 10;

  void add(CLI::App& cmd) {
    cmd.add_option("--min-len", min_len, "Minimum password length")->capture_default_str();
    cmd.add_option("--max-len", max_len, "Maximum password length")->capture_default_str();
  }
  CompositionPolicy policy() const {
    CompositionPolicy p;
    p.min_len = min_len;
    p.max_len = max_len;
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return p;
  }
};

void add_format(CLI::App& cmd, Format& format) {
  cmd.add_option("--format", format, "Output format")->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
}

void add_threshold(CLI::App& cmd, double& threshold) {
  cmd.add_option("--threshold", threshold, "Similarity threshold (score >= threshold is a match)")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
}

std::u32string scalars_arg(const std::string& s) {
  auto v = unicode::to_scalars(s);
  if (!v) throw UsageError("argument is not valid UTF-8");
  return *v;
}

Language language_arg(const std::string& tag) {
  const auto lang = parse_language(tag);
  if (!lang) throw UsageError("unknown language '" + tag + "' (expected english, indian or mixed)");
  return *lang;
}

void write_output(const std::string& data, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << data;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << data;
}

std::vector<Corpus> load_weak(const std::vector<std::string>& paths, bool keep_duplicates, std::ostream& err) {
  std::vector<Corpus> sets;
  std::vector<std::string> warnings;
  for (const auto& p : paths) {
    Corpus c = load_wordlist(p, std::filesystem::path(p).filename().string(), Language::unknown, &warnings);
    if (!keep_duplicates) c = deduplicate(c);
    sets.push_back(std::move(c));
  }
  for (const auto& w : warnings) err << "warning: " << w << "\n";
  return sets;
}

std::vector<double> parse_thresholds(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("invalid threshold '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("--thresholds needs at least one value");
  try {
    for (std::size_t i = 0; i < out.size(); ++i) {
      validate_threshold(out[i]);
      if (i > 0 && out[i] < out[i - 1]) throw std::invalid_argument("thresholds must be ascending");
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return out;
}

std::string default_dict(Language lang) {
  return std::string(PWSIM_DATA_DIR) + "/fragments/" + std::string(to_string(lang)) + ".txt";
}

AssessService* g_serving = nullptr;

extern "C" void on_signal(int) {
  if (g_serving) g_serving->stop();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Similarity-based password strength meter and evaluation harness", "pwsim"};
  app.require_subcommand(1);
  app.fallthrough(false);

  std::function<void()> action;
  Format format = Format::text;
  double threshold = 0.5;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  PolicyFlags policy_flags;

  // jaro
  std::string s1, s2;
  auto* jaro_cmd = app.add_subcommand("jaro", "Jaro similarity of two strings");
  jaro_cmd->add_option("s1", s1)->required();
  jaro_cmd->add_option("s2", s2)->required();
  add_format(*jaro_cmd, format);
  jaro_cmd->callback([&] {
    action = [&] {
      const auto a = scalars_arg(s1);
      const auto b = scalars_arg(s2);
      const MatchProfile p = match_profile(a, b);
      const double score = jaro_from_profile(p).value();
      if (format == Format::json) {
        out << nlohmann::json{{"s1", s1}, {"s2", s2}, {"jaro", score}, {"m", p.matches}, {"t", p.transpositions}}
                   .dump()
            << "\n";
      } else if (format == Format::csv) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", score);
        out << "m,t,len1,len2,jaro\n" << p.matches << ',' << p.transpositions << ',' << p.len1 << ',' << p.len2
            << ',' << buf << "\n";
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", score);
        out << buf << "\n";
      }
    };
  });

  // filter
  std::string input, output;
  bool length_only = false;
  auto* filter_cmd = app.add_subcommand("filter", "Keep wordlist entries that satisfy the composition policy");
  filter_cmd->add_option("--input,-i", input, "Wordlist to filter")->required();
  filter_cmd->add_option("--output,-o", output, "Destination (default stdout)");
  filter_cmd->add_flag("--length-only", length_only, "Enforce only the length bounds");
  policy_flags.add(*filter_cmd);
  filter_cmd->callback([&] {
    action = [&] {
      const Corpus c = load_wordlist(input, input, Language::unknown);
      const Corpus kept = filter_by_policy(c, policy_flags.policy(), length_only);
      write_output(format_wordlist(kept), output, out);
      err << "kept " << kept.size() << " of " << c.size() << " entries (" << c.skipped << " lines skipped)\n";
    };
  });

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Size, length histogram and character-class coverage");
  stats_cmd->add_option("--input,-i", input, "Wordlist")->required();
  add_format(*stats_cmd, format);
  stats_cmd->callback([&] {
    action = [&] {
      const CorpusStats s = corpus_stats(load_wordlist(input, input, Language::unknown));
      if (format == Format::json) {
        out << to_json(s).dump(2) << "\n";
      } else if (format == Format::csv) {
        out << "length,count\n";
        for (const auto& [len, n] : s.length_histogram) out << len << ',' << n << "\n";
      } else {
        out << to_text(s);
      }
    };
  });

  // generate
  std::string lang = "english";
  std::string weights;
  std::size_t count = 0;
  std::vector<std::string> dict_args;
  std::string style = "composed";
  auto* gen_cmd = app.add_subcommand("generate", "Compose policy-compliant passwords from word fragments");
  gen_cmd->add_option("--lang", lang, "english, indian or mixed (english+indian at equal weight)")->capture_default_str();
  gen_cmd->add_option("--weights", weights, "Explicit mix, e.g. english=0.7,indian=0.3");
  gen_cmd->add_option("--count,-n", count, "Number of passwords")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", seed, "PRNG seed")->capture_default_str();
  gen_cmd->add_option("--dict", dict_args, "Fragment dictionary file (repeatable; language from its header)");
  gen_cmd->add_option("--style", style, "composed (policy-compliant) or leaked (leaked-list shaped test data)")
      ->check(CLI::IsMember({"composed", "leaked"}))
      ->capture_default_str();
  gen_cmd->add_option("--output,-o", output, "Destination (default stdout)");
  policy_flags.add(*gen_cmd);
  gen_cmd->callback([&] {
    action = [&] {
      GenerationSpec spec;
      spec.count = count;
      spec.seed = seed;
      spec.policy = policy_flags.policy();
      if (!weights.empty()) {
        std::stringstream ss(weights);
        std::string item;
        while (std::getline(ss, item, ',')) {
          const auto eq = item.find('=');
          if (eq == std::string::npos) throw UsageError("--weights entries look like language=weight");
          try {
            spec.languages.push_back({language_arg(item.substr(0, eq)), std::stod(item.substr(eq + 1))});
          } catch (const std::logic_error&) {
            throw UsageError("invalid weight in '" + item + "'");
          }
        }
      } else if (language_arg(lang) == Language::mixed) {
        spec.languages = {{Language::english, 0.5}, {Language::indian, 0.5}};
      } else {
        spec.languages = {{language_arg(lang), 1.0}};
      }
      try {
        spec.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }

      std::vector<FragmentDictionary> dicts;
      for (const auto& d : dict_args) dicts.push_back(load_dictionary(d));
      for (const auto& lw : spec.languages) {
        const bool have = std::any_of(dicts.begin(), dicts.end(),
                                      [&](const FragmentDictionary& d) { return d.language == lw.language; });
        if (!have) dicts.push_back(load_dictionary(default_dict(lw.language), lw.language));
      }
      const Corpus c = style == "leaked" ? synthesize_leaked_style(dicts, spec) : generate(dicts, spec);
      write_output(format_wordlist(c), output, out);
    };
  });

  // mix
  std::vector<std::string> parts;
  std::size_t total = 0;
  auto* mix_cmd = app.add_subcommand("mix", "Interleave wordlists at given proportions");
  mix_cmd->add_option("--part", parts, "path=proportion (repeatable)")->required();
  mix_cmd->add_option("--seed", seed, "Shuffle seed")->capture_default_str();
  mix_cmd->add_option("--total", total, "Output size (default: largest size all parts can supply)");
  mix_cmd->add_option("--output,-o", output, "Destination (default stdout)");
  mix_cmd->callback([&] {
    action = [&] {
      std::vector<std::pair<Corpus, double>> loaded;
      for (const auto& p : parts) {
        const auto eq = p.rfind('=');
        if (eq == std::string::npos) throw UsageError("--part expects path=proportion");
        double share = 0.0;
        try {
          share = std::stod(p.substr(eq + 1));
        } catch (const std::logic_error&) {
          throw UsageError("invalid proportion in '" + p + "'");
        }
        const std::string path = p.substr(0, eq);
        loaded.emplace_back(load_wordlist(path, path, Language::unknown), share);
      }
      const std::optional<std::size_t> n = total > 0 ? std::optional<std::size_t>(total) : std::nullopt;
      write_output(format_wordlist(mix_corpora(loaded, seed, n)), output, out);
    };
  });

  // evaluate / sweep share the corpus flags
  std::string test_path;
  std::vector<std::string> weak_paths;
  bool keep_duplicates = false;
  bool policy_filter = false;
  bool per_source = false;
  bool no_prune = false;
  std::string thresholds_arg;

  const auto add_eval_flags = [&](CLI::App& cmd) {
    cmd.add_option("--test", test_path, "Test (leaked-style) wordlist")->required();
    cmd.add_option("--weak", weak_paths, "Weak/generated wordlist (repeatable)")->required();
    cmd.add_flag("--length-only", length_only, "Filter the test list by length bounds first");
    cmd.add_flag("--policy-filter", policy_filter, "Filter the test list by the full composition policy first");
    cmd.add_flag("--keep-duplicates", keep_duplicates, "Do not deduplicate weak lists");
    cmd.add_flag("--no-prune", no_prune, "Disable upper-bound pruning");
    cmd.add_option("--workers", workers, "Worker threads (0 = all cores)");
    policy_flags.add(cmd);
    add_format(cmd, format);
  };
  const auto load_test = [&] {
    Corpus t = load_wordlist(test_path, std::filesystem::path(test_path).filename().string(), Language::unknown);
    if (policy_filter || length_only) t = filter_by_policy(t, policy_flags.policy(), !policy_filter);
    return t;
  };

  auto* eval_cmd = app.add_subcommand("evaluate", "Matching accuracy of a test list against weak lists");
  add_eval_flags(*eval_cmd);
  add_threshold(*eval_cmd, threshold);
  eval_cmd->add_flag("--per-source", per_source, "Break M down by weak list");
  eval_cmd->callback([&] {
    action = [&] {
      const Corpus test = load_test();
      const WeakIndex index(load_weak(weak_paths, keep_duplicates, err));
      EvaluateOptions options;
      options.threshold = threshold;
      options.prune = !no_prune;
      options.workers = workers;
      options.per_source = per_source;
      const EvaluationReport r = evaluate(test, index, options);
      if (format == Format::json) {
        out << to_json(r).dump(2) << "\n";
      } else if (format == Format::csv) {
        out << to_csv({r});
      } else {
        out << to_text(r);
      }
    };
  });

  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate at several thresholds");
  add_eval_flags(*sweep_cmd);
  sweep_cmd->add_option("--thresholds", thresholds_arg, "Ascending comma-separated list")
      ->default_val("0.5,0.6,0.7,0.8,0.9,1.0");
  sweep_cmd->callback([&] {
    action = [&] {
      const auto thresholds = parse_thresholds(thresholds_arg);
      const Corpus test = load_test();
      const WeakIndex index(load_weak(weak_paths, keep_duplicates, err));
      EvaluateOptions options;
      options.prune = !no_prune;
      options.workers = workers;
      const auto reports = threshold_sweep(test, index, thresholds, options);
      if (format == Format::json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : reports) arr.push_back(to_json(r));
        out << arr.dump(2) << "\n";
      } else if (format == Format::csv) {
        out << to_csv(reports);
      } else {
        out << "threshold        M   N_test  accuracy\n";
        for (const auto& r : reports) {
          char line[128];
          std::snprintf(line, sizeof line, "%9.3f %8zu %8zu  %7s%%\n", r.threshold, r.matched, r.n_test,
                        format_percent(r.accuracy).c_str());
          out << line;
        }
      }
    };
  });

  // assess
  std::string candidate;
  auto* assess_cmd = app.add_subcommand("assess", "Strength verdict for one candidate password");
  assess_cmd->add_option("password", candidate, "Candidate password")->required();
  assess_cmd->add_option("--weak", weak_paths, "Weak wordlist (repeatable)")->required();
  assess_cmd->add_flag("--keep-duplicates", keep_duplicates, "Do not deduplicate weak lists");
  add_threshold(*assess_cmd, threshold);
  policy_flags.add(*assess_cmd);
  add_format(*assess_cmd, format);
  assess_cmd->callback([&] {
    action = [&] {
      if (candidate.empty()) throw UsageError("candidate password is empty");
      const auto v = assess(candidate, load_weak(weak_paths, keep_duplicates, err), threshold, policy_flags.policy());
      if (format == Format::text) {
        out << to_text(v);
      } else {
        out << to_json(v).dump() << "\n";
      }
    };
  });

  // reproduce
  std::string descriptor_path;
  auto* repro_cmd = app.add_subcommand("reproduce", "Run an experiment descriptor and print the accuracy grid");
  repro_cmd->add_option("descriptor", descriptor_path, "Experiment descriptor (JSON)")->required();
  repro_cmd->add_option("--workers", workers, "Worker threads (0 = all cores)");
  repro_cmd->add_option("--output,-o", output, "Destination (default stdout)");
  add_format(*repro_cmd, format);
  repro_cmd->callback([&] {
    action = [&] {
      const auto grid = reproduce_experiment(load_descriptor(descriptor_path), workers);
      std::string data;
      if (format == Format::json) {
        data = grid_to_json(grid).dump(2) + "\n";
      } else if (format == Format::csv) {
        data = grid_to_csv(grid);
      } else {
        data = grid_to_text(grid);
      }
      write_output(data, output, out);
    };
  });

  // serve
  ServiceConfig service;
  auto* serve_cmd = app.add_subcommand("serve", "HTTP meter: POST /assess, GET /health");
  serve_cmd->add_option("--weak", service.weak_lists, "Weak wordlist (repeatable)")->required();
  serve_cmd->add_option("--host", service.host, "Bind address")->capture_default_str();
  serve_cmd->add_option("--port", service.port, "Port (0 = any free port)")->capture_default_str();
  serve_cmd->add_option("--cors-origin", service.cors_origin, "Access-Control-Allow-Origin value ('' disables)")
      ->capture_default_str();
  serve_cmd->add_option("--max-body", service.max_body_bytes, "Maximum request body in bytes")->capture_default_str();
  serve_cmd->add_flag("--keep-duplicates", service.keep_duplicates, "Do not deduplicate weak lists");
  add_threshold(*serve_cmd, threshold);
  policy_flags.add(*serve_cmd);
  serve_cmd->callback([&] {
    action = [&] {
      service.threshold = threshold;
      service.policy = policy_flags.policy();
      std::vector<std::string> warnings;
      auto svc = AssessService::from_config(service, &warnings);
      for (const auto& w : warnings) err << "warning: " << w << "\n";
      const int port = svc->bind(service.host, service.port);
      err << "listening on " << service.host << ":" << port << "\n";
      g_serving = svc.get();
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      svc->listen();
      g_serving = nullptr;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (action) action();
    return 0;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace pwsim::cli
