#include "claimcheck/service/http_api.hpp"

#include <httplib.h>

#include "claimcheck/core/errors.hpp"
#include "claimcheck/core/json.hpp"

namespace claimcheck::service {

using nlohmann::json;

int http_status(Errc code) {
  switch (code) {
    case Errc::not_found: return 404;
    case Errc::job_not_done: return 409;
    case Errc::payload_too_large: return 413;
    case Errc::empty_body:
    case Errc::empty_article: return 422;
    case Errc::invalid_argument:
    case Errc::parse_failure: return 400;
    case Errc::backend_unreachable:
    case Errc::transport_exhausted: return 502;
    default: return 500;
  }
}

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& msg) {
  send_json(res, status, json{{"error", {{"code", code}, {"message", msg}}}});
}

// Runs a handler and maps exceptions onto error responses.
template <class Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_error(res, http_status(e.code()), errc_name(e.code()), e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, "parse_failure", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw Error(Errc::parse_failure, std::string("request body is not JSON: ") + e.what());
  }
}

}  // namespace

HttpApi::HttpApi(VerificationService& service, std::string static_dir)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;
  // Let oversized bodies reach the handler so they get the JSON error shape.
  s.set_payload_max_length(8 * kMaxPayloadBytes);

  s.Post("/v1/verify", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = service_.submit(std::string_view(req.body));
    send_json(res, 202, json{{"job_id", id}, {"state", "queued"}});
  }));

  s.Get(R"(/v1/jobs/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, json(service_.get_job(req.matches[1])));
  }));

  s.Get(R"(/v1/reports/([^/]+))",
        guarded([this](const httplib::Request& req, httplib::Response& res) {
          send_json(res, 200, json(service_.get_report(req.matches[1])));
        }));

  s.Post(R"(/v1/jobs/([^/]+)/overrides)",
         guarded([this](const httplib::Request& req, httplib::Response& res) {
           json body = parse_body(req);
           if (!body.is_object()) throw Error(Errc::parse_failure, "override must be an object");
           body["job_id"] = req.matches[1].str();
           body.erase("at");
           send_json(res, 200, to_json(service_.apply_override(body.get<LabelOverride>())));
         }));

  s.Post(R"(/v1/jobs/([^/]+)/claims/([^/]+)/rerun)",
         guarded([this](const httplib::Request& req, httplib::Response& res) {
           send_json(res, 200, to_json(service_.rerun_claim(req.matches[1], req.matches[2])));
         }));

  s.Get("/v1/registry", guarded([this](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, service_.registry());
  }));

  if (!static_dir.empty()) s.set_mount_point("/", static_dir);
}

HttpApi::~HttpApi() { stop(); }

int HttpApi::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
  } else if (!server_->bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound <= 0) throw Error(Errc::io_error, "cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void HttpApi::listen(const std::string& host, int port) {
  if (!server_->listen(host, port)) {
    throw Error(Errc::io_error, "cannot listen on " + host + ":" + std::to_string(port));
  }
}

void HttpApi::stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace claimcheck::service
