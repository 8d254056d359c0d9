#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "claimcheck/service/config.hpp"
#include "claimcheck/service/service.hpp"

namespace claimcheck::testing {

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("claimcheck-" + tag + "-" + std::to_string(::getpid()) + "-" +
              std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline service::ServiceConfig fixture_config(const std::string& name,
                                             const std::filesystem::path& data_dir) {
  auto c = service::ServiceConfig::load(std::string(CLAIMCHECK_FIXTURES) + "/" + name +
                                        "/config.json");
  c.data_dir = data_dir.string();
  return c;
}

struct FixtureService {
  std::shared_ptr<service::Pipeline> pipeline;
  std::shared_ptr<service::JobStore> store;
  std::unique_ptr<service::VerificationService> service;
};

inline FixtureService make_fixture_service(const std::string& name,
                                           const std::filesystem::path& data_dir,
                                           service::ServiceOptions options = {}) {
  FixtureService f;
  const auto config = fixture_config(name, data_dir);
  f.pipeline = service::build_pipeline(config);
  f.store = std::make_shared<service::JobStore>(config.data_dir);
  f.service = std::make_unique<service::VerificationService>(f.pipeline, f.store, options);
  return f;
}

}  // namespace claimcheck::testing
