#include "cfgfolio/cli/service.hpp"

#include <cmath>

#include "httplib.h"

namespace cfgfolio::cli {
namespace {

ServiceResponse ErrorResponse(int status, const std::string& message) {
  Json body;
  body["error"] = message;
  return {status, body.dump() + "\n", "application/json"};
}

}  // namespace

ServiceResponse HandleRecommend(const DecisionModel& model, std::string_view body) {
  Json request = Json::parse(body.begin(), body.end(), nullptr, false);
  if (request.is_discarded()) return ErrorResponse(400, "body is not valid JSON");
  if (!request.is_object()) return ErrorResponse(400, "body must be a JSON object");

  static constexpr const char* kCountFields[] = {"n_instances", "n_features",
                                                  "n_classes"};
  for (const auto& [key, _] : request.items()) {
    if (key != "n_instances" && key != "n_features" && key != "n_classes" &&
        key != "pct_numeric") {
      return ErrorResponse(400, "unknown field '" + key + "'");
    }
  }
  for (const char* key : kCountFields) {
    if (!request.contains(key)) {
      return ErrorResponse(400, std::string("missing field '") + key + "'");
    }
    if (!request[key].is_number_integer()) {
      return ErrorResponse(400, std::string("'") + key + "' must be an integer");
    }
  }
  if (!request.contains("pct_numeric")) {
    return ErrorResponse(400, "missing field 'pct_numeric'");
  }
  if (!request["pct_numeric"].is_number()) {
    return ErrorResponse(400, "'pct_numeric' must be a number");
  }

  TaskRecord query;
  query.task_id = "query";
  for (const char* key : kCountFields) {
    if (request[key].is_number_unsigned()) continue;
    if (request[key].get<std::int64_t>() < 0) {
      return ErrorResponse(422, std::string("'") + key + "' must be non-negative");
    }
  }
  query.n_instances = request["n_instances"].get<std::uint64_t>();
  query.n_features = request["n_features"].get<std::uint64_t>();
  query.n_classes = request["n_classes"].get<std::uint64_t>();
  query.pct_numeric = request["pct_numeric"].get<double>();
  if (!std::isfinite(query.pct_numeric) || query.pct_numeric < 0.0 ||
      query.pct_numeric > 1.0) {
    return ErrorResponse(422, "'pct_numeric' must lie in [0, 1]");
  }
  try {
    return {200, RecommendationBody(Recommend(model, query)), "application/json"};
  } catch (const std::exception& e) {
    return ErrorResponse(500, e.what());
  }
}

RecommendationServer::RecommendationServer(DecisionModel model)
    : model_(std::move(model)), server_(std::make_unique<httplib::Server>()) {
  server_->Post("/recommend", [this](const httplib::Request& req,
                                     httplib::Response& res) {
    const ServiceResponse r = HandleRecommend(model_, req.body);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  });
  server_->Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.status = 200;
    res.set_content("ok", "text/plain");
  });
}

RecommendationServer::~RecommendationServer() = default;

int RecommendationServer::Bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool RecommendationServer::ListenAfterBind() { return server_->listen_after_bind(); }

void RecommendationServer::Stop() { server_->stop(); }

void RecommendationServer::WaitUntilReady() const { server_->wait_until_ready(); }

}  // namespace cfgfolio::cli
