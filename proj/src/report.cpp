#include "pwsim/report.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace pwsim {

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

// Shortest representation that round-trips.
std::string full(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_percent(double fraction) { return fixed(fraction * 100.0, 2); }

nlohmann::json to_json(const EvaluationReport& r) {
  nlohmann::json per_source = nlohmann::json::array();
  for (const auto& s : r.per_source) {
    per_source.push_back({{"label", s.label},
                          {"language", to_string(s.language)},
                          {"M", s.matched},
                          {"accuracy", static_cast<double>(s.matched) / static_cast<double>(r.n_test)},
                          {"accuracy_pct", format_percent(static_cast<double>(s.matched) /
                                                          static_cast<double>(r.n_test))}});
  }
  return {{"test_label", r.test_label},
          {"weak_label", r.weak_label},
          {"M", r.matched},
          {"N_test", r.n_test},
          {"accuracy", r.accuracy},
          {"accuracy_pct", format_percent(r.accuracy)},
          {"threshold", r.threshold},
          {"per_source", per_source},
          {"comparisons", r.comparisons},
          {"elapsed_seconds", r.elapsed_seconds}};
}

nlohmann::json to_json(const StrengthVerdict& v) {
  nlohmann::json violations = nlohmann::json::array();
  for (Violation x : v.violations) violations.push_back(to_string(x));
  nlohmann::json out = {{"label", to_string(v.label)},
                        {"max_similarity", v.max_similarity.value()},
                        {"nearest_weak", nullptr},
                        {"nearest_source", nullptr},
                        {"violations", violations},
                        {"threshold", v.threshold}};
  if (v.nearest_weak) out["nearest_weak"] = *v.nearest_weak;
  if (v.nearest_source) out["nearest_source"] = *v.nearest_source;
  return out;
}

nlohmann::json to_json(const CorpusStats& s) {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [len, n] : s.length_histogram) hist[std::to_string(len)] = n;
  return {{"size", s.size},
          {"length_histogram", hist},
          {"upper_rate", s.upper_rate},
          {"lower_rate", s.lower_rate},
          {"digit_rate", s.digit_rate},
          {"symbol_rate", s.symbol_rate},
          {"all_classes_rate", s.all_classes_rate}};
}

std::string to_csv_row(const EvaluationReport& r) {
  std::ostringstream row;
  row << csv_field(r.test_label) << ',' << csv_field(r.weak_label) << ',' << r.matched << ',' << r.n_test << ','
      << format_percent(r.accuracy) << ',' << full(r.accuracy) << ',' << full(r.threshold) << ','
      << r.comparisons << ',' << fixed(r.elapsed_seconds, 6);
  return row.str();
}

std::string to_csv(const std::vector<EvaluationReport>& reports) {
  std::string out = std::string(kReportCsvHeader) + "\n";
  for (const auto& r : reports) out += to_csv_row(r) + "\n";
  return out;
}

std::string to_text(const EvaluationReport& r) {
  std::ostringstream out;
  out << "test:       " << r.test_label << " (N_test = " << r.n_test << ")\n"
      << "weak:       " << r.weak_label << "\n"
      << "threshold:  " << fixed(r.threshold, 2) << "\n"
      << "matched:    " << r.matched << "\n"
      << "accuracy:   " << format_percent(r.accuracy) << "%\n";
  for (const auto& s : r.per_source) {
    out << "  " << s.label << ": " << s.matched << " ("
        << format_percent(static_cast<double>(s.matched) / static_cast<double>(r.n_test)) << "%)\n";
  }
  out << "comparisons: " << r.comparisons << "\n"
      << "elapsed:    " << fixed(r.elapsed_seconds, 3) << " s\n";
  return out.str();
}

std::string to_text(const StrengthVerdict& v) {
  std::ostringstream out;
  out << "verdict:        " << to_string(v.label) << "\n"
      << "max similarity: " << fixed(v.max_similarity.value(), 6) << " (threshold " << fixed(v.threshold, 2)
      << ")\n";
  if (v.nearest_weak) {
    out << "nearest weak:   " << *v.nearest_weak;
    if (v.nearest_source) out << " [" << *v.nearest_source << "]";
    out << "\n";
  }
  out << "violations:    ";
  if (v.violations.empty()) out << " none";
  for (Violation x : v.violations) out << ' ' << to_string(x);
  out << "\n";
  return out.str();
}

std::string to_text(const CorpusStats& s) {
  std::ostringstream out;
  out << "entries: " << s.size << "\n"
      << "length histogram:\n";
  for (const auto& [len, n] : s.length_histogram) out << "  " << len << ": " << n << "\n";
  out << "class coverage:\n"
      << "  upper:  " << format_percent(s.upper_rate) << "%\n"
      << "  lower:  " << format_percent(s.lower_rate) << "%\n"
      << "  digit:  " << format_percent(s.digit_rate) << "%\n"
      << "  symbol: " << format_percent(s.symbol_rate) << "%\n"
      << "  all four: " << format_percent(s.all_classes_rate) << "%\n";
  return out.str();
}

}  // namespace pwsim
