#pragma once

#include "pwsim/corpus.hpp"
#include "pwsim/generator.hpp"
#include "pwsim/matcher.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace pwsim {

/// Experiment descriptor (JSON). Relative paths resolve against the
/// descriptor's directory.
///
///   {
///     "threshold": 0.5,
///     "policy": {"min_len": 8, "max_len": 10},
///     "dictionaries": {"english": "fragments/english.txt", ...},
///     "generated": {"english": {"languages": {"english": 1.0}, "count": 1000, "seed": 11}, ...},
///     "files": {"my_weak": {"path": "weak.txt", "language": "english"}},
///     "tests": {"english_test": {"path": "test.txt", "language": "english", "length_only": true}},
///     "cells": [{"name": "english", "weak": ["english"], "test": "english_test", "threshold": 0.5}]
///   }
///
/// A cell's "weak" names entries of "generated" or "files"; naming several
/// makes a combined run with a per-source breakdown.
struct ExperimentDescriptor {
  struct GeneratedSource {
    GenerationSpec spec;
  };
  struct FileSource {
    std::filesystem::path path;
    Language language = Language::unknown;
    bool keep_duplicates = false;
  };
  struct TestSet {
    std::filesystem::path path;
    Language language = Language::unknown;
    bool filter = true;
    bool length_only = true;
  };
  struct Cell {
    std::string name;
    std::vector<std::string> weak;
    std::string test;
    double threshold = 0.5;
  };

  double threshold = 0.5;
  CompositionPolicy policy;
  std::map<Language, std::filesystem::path> dictionaries;
  std::map<std::string, GeneratedSource> generated;
  std::map<std::string, FileSource> files;
  std::map<std::string, TestSet> tests;
  std::vector<Cell> cells;
};

/// Throws std::invalid_argument for schema errors or dangling names.
ExperimentDescriptor parse_descriptor(const nlohmann::json& doc, const std::filesystem::path& base_dir);
ExperimentDescriptor load_descriptor(const std::filesystem::path& path);

struct CellResult {
  std::string name;
  EvaluationReport report;
};

/// generate -> filter -> evaluate for every cell, in descriptor order.
/// Throws std::runtime_error listing every missing input file before any work is done.
std::vector<CellResult> reproduce_experiment(const ExperimentDescriptor& descriptor, unsigned workers = 0);

nlohmann::json grid_to_json(const std::vector<CellResult>& grid);
std::string grid_to_text(const std::vector<CellResult>& grid);
std::string grid_to_csv(const std::vector<CellResult>& grid);

}  // namespace pwsim
