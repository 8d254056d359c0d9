#pragma once

#include <memory>
#include <string>
#include <thread>

#include "claimcheck/core/errors.hpp"
#include "claimcheck/service/service.hpp"

namespace httplib {
class Server;
}

namespace claimcheck::service {

// HTTP status for an error code: not_found 404, job_not_done 409,
// payload_too_large 413, empty_body 422, bad input 400, backend trouble 502,
// anything else 500.
int http_status(Errc code);

// JSON API over a VerificationService:
//   POST /v1/verify                          -> 202 {job_id, state}
//   GET  /v1/jobs/{id}                       -> job snapshot
//   GET  /v1/reports/{id}                    -> report
//   POST /v1/jobs/{id}/overrides             -> recomputed verdicts
//   POST /v1/jobs/{id}/claims/{cid}/rerun    -> fresh evidence and verdicts
//   GET  /v1/registry                        -> credibility tiers
// Errors come back as {"error": {"code", "message"}}.
class HttpApi {
 public:
  explicit HttpApi(VerificationService& service, std::string static_dir = "");
  ~HttpApi();

  // Binds and serves on a background thread; port 0 picks a free port.
  // Returns the bound port. Throws Error(io_error) when binding fails.
  int start(const std::string& host, int port);
  // Serves on the calling thread until stop().
  void listen(const std::string& host, int port);
  void stop();

 private:
  VerificationService& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace claimcheck::service
