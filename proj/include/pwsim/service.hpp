#pragma once

#include "pwsim/corpus.hpp"
#include "pwsim/matcher.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace pwsim {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::vector<std::filesystem::path> weak_lists;
  double threshold = 0.5;
  std::size_t max_body_bytes = 4096;
  std::string cors_origin = "*";
  CompositionPolicy policy;
  bool keep_duplicates = false;
};

struct HttpReply {
  int status = 200;
  nlohmann::json body;
};

/// HTTP facade over the meter: POST /assess and GET /health.
///
/// Weak lists are loaded once and never modified, so requests are handled
/// concurrently without locking. Passwords are never logged or stored.
class AssessService {
 public:
  static constexpr std::size_t kMaxPasswordScalars = 256;

  /// Throws std::invalid_argument when every weak set is empty.
  AssessService(std::vector<Corpus> weak_sets, ServiceConfig config);
  ~AssessService();

  AssessService(const AssessService&) = delete;
  AssessService& operator=(const AssessService&) = delete;

  /// Loads config.weak_lists. Lists that fail to load are reported through
  /// `warnings` and skipped; throws std::runtime_error if none loads.
  static std::unique_ptr<AssessService> from_config(const ServiceConfig& config,
                                                    std::vector<std::string>* warnings = nullptr);

  /// Request bodies are `{"password": "...", "threshold": 0.7}`; threshold is
  /// optional and clamped to [0, 1].
  HttpReply handle_assess(std::string_view body) const;
  HttpReply handle_health() const;

  /// Binds the listening socket; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Requires a prior bind().
  bool listen();
  void stop();

  const ServiceConfig& config() const { return config_; }
  const WeakIndex& index() const { return index_; }

 private:
  struct Server;
  ServiceConfig config_;
  std::vector<std::size_t> sizes_;
  WeakIndex index_;
  std::unique_ptr<Server> server_;
};

}  // namespace pwsim
