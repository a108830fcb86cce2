#include "pwsim/service.hpp"

#include "pwsim/meter.hpp"
#include "pwsim/report.hpp"
#include "pwsim/unicode.hpp"

#include <httplib.h>

#include <algorithm>
#include <stdexcept>

namespace pwsim {

struct AssessService::Server {
  httplib::Server http;
};

namespace {

std::vector<std::size_t> sizes_of(const std::vector<Corpus>& sets) {
  std::vector<std::size_t> sizes;
  for (const auto& c : sets) sizes.push_back(c.size());
  return sizes;
}

HttpReply error(int status, std::string message) { return {status, {{"error", std::move(message)}}}; }

}  // namespace

AssessService::AssessService(std::vector<Corpus> weak_sets, ServiceConfig config)
    : config_(std::move(config)), sizes_(sizes_of(weak_sets)), index_(weak_sets) {
  validate_threshold(config_.threshold);
  config_.policy.validate();
  if (index_.empty()) throw std::invalid_argument("service needs at least one non-empty weak list");
}

AssessService::~AssessService() = default;

std::unique_ptr<AssessService> AssessService::from_config(const ServiceConfig& config,
                                                          std::vector<std::string>* warnings) {
  std::vector<Corpus> sets;
  for (const auto& path : config.weak_lists) {
    try {
      Corpus c = load_wordlist(path, path.filename().string(), Language::unknown, warnings);
      if (!config.keep_duplicates) c = deduplicate(c);
      if (!c.empty()) sets.push_back(std::move(c));
    } catch (const std::exception& e) {
      if (warnings) warnings->push_back(e.what());
    }
  }
  if (sets.empty()) throw std::runtime_error("no weak list could be loaded; refusing to start");
  return std::make_unique<AssessService>(std::move(sets), config);
}

HttpReply AssessService::handle_assess(std::string_view body) const {
  if (body.size() > config_.max_body_bytes) return error(413, "request body too large");

  nlohmann::json request;
  try {
    request = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception&) {
    return error(400, "body is not valid JSON");
  }
  if (!request.is_object() || !request.contains("password") || !request.at("password").is_string()) {
    return error(400, "expected an object with a string 'password'");
  }
  const auto password = request.at("password").get<std::string>();
  const auto scalars = unicode::to_scalars(password);
  if (!scalars) return error(400, "password is not valid UTF-8");
  if (scalars->empty()) return error(400, "password is empty");
  if (scalars->size() > kMaxPasswordScalars) return error(400, "password is longer than 256 characters");

  double threshold = config_.threshold;
  if (request.contains("threshold") && !request.at("threshold").is_null()) {
    if (!request.at("threshold").is_number()) return error(400, "threshold must be a number");
    threshold = std::clamp(request.at("threshold").get<double>(), 0.0, 1.0);
  }

  try {
    return {200, to_json(assess(password, index_, threshold, config_.policy))};
  } catch (const std::exception&) {
    return error(500, "internal error");
  }
}

HttpReply AssessService::handle_health() const {
  return {200, {{"status", "ok"}, {"weak_list_sizes", sizes_}, {"threshold", config_.threshold}}};
}

int AssessService::bind(const std::string& host, int port) {
  server_ = std::make_unique<Server>();
  auto& http = server_->http;
  http.set_payload_max_length(config_.max_body_bytes);

  const std::string origin = config_.cors_origin;
  const auto cors = [origin](httplib::Response& res) {
    if (origin.empty()) return;
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  };
  const auto send = [cors](httplib::Response& res, const HttpReply& reply) {
    cors(res);
    res.status = reply.status;
    res.set_content(reply.body.dump(), "application/json");
  };

  http.Post("/assess", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_assess(req.body));
  });
  http.Get("/health", [this, send](const httplib::Request&, httplib::Response& res) { send(res, handle_health()); });
  http.Options(R"(/.*)", [cors](const httplib::Request&, httplib::Response& res) {
    cors(res);
    res.status = 204;
  });
  http.set_exception_handler([send](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
    send(res, error(500, "internal error"));
  });
  http.set_error_handler([cors](const httplib::Request&, httplib::Response& res) {
    cors(res);
    if (res.body.empty()) {
      res.set_content(nlohmann::json{{"error", httplib::status_message(res.status)}}.dump(), "application/json");
    }
  });

  const int bound = port == 0 ? http.bind_to_any_port(host) : (http.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

bool AssessService::listen() {
  if (!server_) throw std::logic_error("AssessService::listen called before bind");
  return server_->http.listen_after_bind();
}

void AssessService::stop() {
  if (server_) server_->http.stop();
}

}  // namespace pwsim
