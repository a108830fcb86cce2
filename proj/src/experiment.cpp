#include "pwsim/experiment.hpp"

#include "pwsim/report.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pwsim {

namespace {

using nlohmann::json;

Language language_field(const json& obj, const char* key, Language fallback) {
  if (!obj.contains(key)) return fallback;
  const auto tag = obj.at(key).get<std::string>();
  const auto lang = parse_language(tag);
  if (!lang) throw std::invalid_argument("descriptor: unknown language '" + tag + "'");
  return *lang;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw std::invalid_argument("descriptor: " + where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw std::invalid_argument("descriptor: unknown key '" + key + "' in " + where);
  }
}

CompositionPolicy parse_policy(const json& obj) {
  check_keys(obj, {"min_len", "max_len", "require_upper", "require_lower", "require_digit", "require_symbol"},
             "policy");
  CompositionPolicy p;
  p.min_len = obj.value("min_len", p.min_len);
  p.max_len = obj.value("max_len", p.max_len);
  p.require_upper = obj.value("require_upper", p.require_upper);
  p.require_lower = obj.value("require_lower", p.require_lower);
  p.require_digit = obj.value("require_digit", p.require_digit);
  p.require_symbol = obj.value("require_symbol", p.require_symbol);
  p.validate();
  return p;
}

}  // namespace

ExperimentDescriptor parse_descriptor(const json& doc, const std::filesystem::path& base_dir) {
  try {
    check_keys(doc, {"threshold", "policy", "dictionaries", "generated", "files", "tests", "cells", "description"},
               "descriptor");
    ExperimentDescriptor d;
    d.threshold = doc.value("threshold", 0.5);
    validate_threshold(d.threshold);
    if (doc.contains("policy")) d.policy = parse_policy(doc.at("policy"));
    const json empty = json::object();
    const auto section = [&](const char* key) -> const json& { return doc.contains(key) ? doc.at(key) : empty; };

    for (const auto& [tag, path] : section("dictionaries").items()) {
      const auto lang = parse_language(tag);
      if (!lang) throw std::invalid_argument("descriptor: unknown dictionary language '" + tag + "'");
      d.dictionaries[*lang] = resolve(base_dir, path.get<std::string>());
    }

    for (const auto& [name, g] : section("generated").items()) {
      check_keys(g, {"languages", "count", "seed"}, "generated." + name);
      ExperimentDescriptor::GeneratedSource src;
      src.spec.count = g.at("count").get<std::size_t>();
      src.spec.seed = g.value("seed", std::uint64_t{0});
      src.spec.policy = d.policy;
      for (const auto& [tag, w] : g.at("languages").items()) {
        const auto lang = parse_language(tag);
        if (!lang) throw std::invalid_argument("descriptor: unknown language '" + tag + "'");
        if (!d.dictionaries.count(*lang)) {
          throw std::invalid_argument("descriptor: generated." + name + " needs a dictionary for " + tag);
        }
        src.spec.languages.push_back({*lang, w.get<double>()});
      }
      src.spec.validate();
      d.generated[name] = std::move(src);
    }

    for (const auto& [name, f] : section("files").items()) {
      check_keys(f, {"path", "language", "keep_duplicates"}, "files." + name);
      if (d.generated.count(name)) throw std::invalid_argument("descriptor: weak source '" + name + "' defined twice");
      d.files[name] = {resolve(base_dir, f.at("path").get<std::string>()),
                       language_field(f, "language", Language::unknown), f.value("keep_duplicates", false)};
    }

    for (const auto& [name, t] : section("tests").items()) {
      check_keys(t, {"path", "language", "filter", "length_only"}, "tests." + name);
      d.tests[name] = {resolve(base_dir, t.at("path").get<std::string>()),
                       language_field(t, "language", Language::unknown), t.value("filter", true),
                       t.value("length_only", true)};
    }

    const json cells = doc.value("cells", json::array());
    for (const auto& c : cells) {
      check_keys(c, {"name", "weak", "test", "threshold"}, "cells[]");
      ExperimentDescriptor::Cell cell;
      cell.name = c.at("name").get<std::string>();
      cell.test = c.at("test").get<std::string>();
      cell.threshold = c.value("threshold", d.threshold);
      validate_threshold(cell.threshold);
      const auto& weak = c.at("weak");
      if (weak.is_string()) {
        cell.weak.push_back(weak.get<std::string>());
      } else {
        cell.weak = weak.get<std::vector<std::string>>();
      }
      if (cell.weak.empty()) throw std::invalid_argument("descriptor: cell '" + cell.name + "' has no weak source");
      for (const auto& w : cell.weak) {
        if (!d.generated.count(w) && !d.files.count(w)) {
          throw std::invalid_argument("descriptor: cell '" + cell.name + "' names unknown weak source '" + w + "'");
        }
      }
      if (!d.tests.count(cell.test)) {
        throw std::invalid_argument("descriptor: cell '" + cell.name + "' names unknown test set '" + cell.test + "'");
      }
      d.cells.push_back(std::move(cell));
    }
    return d;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("descriptor: ") + e.what());
  }
}

ExperimentDescriptor load_descriptor(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open experiment descriptor: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument("descriptor " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_descriptor(doc, path.parent_path());
}

std::vector<CellResult> reproduce_experiment(const ExperimentDescriptor& d, unsigned workers) {
  // Only inputs that some cell actually uses.
  std::set<std::string> used_weak, used_tests;
  for (const auto& c : d.cells) {
    used_weak.insert(c.weak.begin(), c.weak.end());
    used_tests.insert(c.test);
  }
  std::set<Language> used_dicts;
  for (const auto& name : used_weak) {
    if (auto g = d.generated.find(name); g != d.generated.end()) {
      for (const auto& lw : g->second.spec.languages) used_dicts.insert(lw.language);
    }
  }

  std::vector<std::string> missing;
  const auto require = [&](const std::filesystem::path& p) {
    if (!std::filesystem::is_regular_file(p)) missing.push_back(p.string());
  };
  for (const auto& name : used_tests) require(d.tests.at(name).path);
  for (const auto& name : used_weak) {
    if (auto f = d.files.find(name); f != d.files.end()) require(f->second.path);
  }
  for (Language l : used_dicts) require(d.dictionaries.at(l));
  if (!missing.empty()) {
    std::string msg = "missing experiment inputs:";
    for (const auto& m : missing) msg += "\n  " + m;
    throw std::runtime_error(msg);
  }

  std::vector<FragmentDictionary> dicts;
  for (Language l : used_dicts) dicts.push_back(load_dictionary(d.dictionaries.at(l), l));

  std::map<std::string, Corpus> weak;
  for (const auto& name : used_weak) {
    if (auto g = d.generated.find(name); g != d.generated.end()) {
      Corpus c = deduplicate(generate(dicts, g->second.spec));
      c.label = name;
      weak.emplace(name, std::move(c));
    } else {
      const auto& f = d.files.at(name);
      Corpus c = load_wordlist(f.path, name, f.language);
      if (!f.keep_duplicates) c = deduplicate(c);
      weak.emplace(name, std::move(c));
    }
  }

  std::map<std::string, Corpus> tests;
  for (const auto& name : used_tests) {
    const auto& t = d.tests.at(name);
    Corpus c = load_wordlist(t.path, name, t.language);
    if (t.filter) c = filter_by_policy(c, d.policy, t.length_only);
    tests.emplace(name, std::move(c));
  }

  std::vector<CellResult> grid;
  for (const auto& cell : d.cells) {
    std::vector<Corpus> sources;
    for (const auto& w : cell.weak) sources.push_back(weak.at(w));
    EvaluateOptions options;
    options.threshold = cell.threshold;
    options.workers = workers;
    options.per_source = sources.size() > 1;
    grid.push_back({cell.name, evaluate(tests.at(cell.test), WeakIndex(sources), options)});
  }
  return grid;
}

nlohmann::json grid_to_json(const std::vector<CellResult>& grid) {
  json cells = json::array();
  for (const auto& c : grid) {
    json row = to_json(c.report);
    row["name"] = c.name;
    cells.push_back(std::move(row));
  }
  return {{"cells", cells}};
}

std::string grid_to_text(const std::vector<CellResult>& grid) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %-28s %-16s %7s %7s %9s\n", "cell", "weak", "test", "M", "N_test",
                "accuracy");
  out << line;
  for (const auto& c : grid) {
    const auto& r = c.report;
    std::snprintf(line, sizeof line, "%-16s %-28s %-16s %7zu %7zu %8s%%\n", c.name.c_str(), r.weak_label.c_str(),
                  r.test_label.c_str(), r.matched, r.n_test, format_percent(r.accuracy).c_str());
    out << line;
    for (const auto& s : r.per_source) {
      std::snprintf(line, sizeof line, "  %-14s %-28s %-16s %7zu %7zu %8s%%\n", "", s.label.c_str(), "", s.matched,
                    r.n_test,
                    format_percent(static_cast<double>(s.matched) / static_cast<double>(r.n_test)).c_str());
      out << line;
    }
  }
  return out.str();
}

std::string grid_to_csv(const std::vector<CellResult>& grid) {
  std::string out = std::string("cell,") + kReportCsvHeader + "\n";
  for (const auto& c : grid) out += c.name + "," + to_csv_row(c.report) + "\n";
  return out;
}

}  // namespace pwsim
