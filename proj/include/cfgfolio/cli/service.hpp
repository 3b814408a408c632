#pragma once

// Read-only HTTP/JSON recommendation service.
//
//   POST /recommend  {"n_instances":int,"n_features":int,"n_classes":int,
//                     "pct_numeric":real}  -> 200 recommendation body
//   GET  /healthz    -> 200 "ok"
//
// Unknown or ill-typed fields give 400; out-of-range values give 422.

#include <memory>
#include <string>
#include <string_view>

#include "cfgfolio/decision.hpp"

namespace httplib {
class Server;
}

namespace cfgfolio::cli {

struct ServiceResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Pure request handler; safe to call concurrently.
ServiceResponse HandleRecommend(const DecisionModel& model, std::string_view body);

class RecommendationServer {
 public:
  explicit RecommendationServer(DecisionModel model);
  ~RecommendationServer();
  RecommendationServer(const RecommendationServer&) = delete;
  RecommendationServer& operator=(const RecommendationServer&) = delete;

  // Binds to `port` (0 picks a free port) and returns the bound port, or -1.
  int Bind(const std::string& host, int port);
  // Blocks until Stop() is called.
  bool ListenAfterBind();
  void Stop();
  void WaitUntilReady() const;

 private:
  const DecisionModel model_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace cfgfolio::cli
