#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "claimcheck/service/job.hpp"

namespace claimcheck::service {

// Durable job store under a data directory:
//   ledger.jsonl      append-only audit log, one JSON record per line
//   jobs/<id>.json    latest snapshot of each job, replaced atomically
// Writes to one job are serialized; reads return immutable snapshots without
// taking the job's write lock.
class JobStore {
 public:
  // Creates the directory layout and loads any existing snapshots.
  explicit JobStore(std::filesystem::path data_dir);

  // Throws Error(invalid_argument) for a duplicate id or an inconsistent job.
  void create(VerificationJob job);

  // Throws Error(not_found).
  std::shared_ptr<const VerificationJob> get(const std::string& job_id) const;
  bool contains(const std::string& job_id) const;
  std::vector<std::string> job_ids() const;

  // Runs `mutate` on a copy under the job's write lock, checks the result
  // (state transition and job invariants, Error(invalid_argument) otherwise),
  // persists it and publishes it. An exception from `mutate` leaves the job
  // untouched.
  std::shared_ptr<const VerificationJob> update(
      const std::string& job_id, const std::function<void(VerificationJob&)>& mutate);

  // Adds one line to the ledger; "at" is expected to be set by the caller.
  void append_ledger(const nlohmann::json& record);
  std::vector<nlohmann::json> read_ledger() const;
  std::uintmax_t ledger_bytes() const;

  const std::filesystem::path& data_dir() const { return data_dir_; }
  std::filesystem::path ledger_path() const { return data_dir_ / "ledger.jsonl"; }
  std::filesystem::path snapshot_path(const std::string& job_id) const;

 private:
  struct Slot {
    std::mutex write_mutex;
    std::shared_ptr<const VerificationJob> current;
  };

  Slot& slot(const std::string& job_id) const;
  void write_snapshot(const VerificationJob& job) const;

  std::filesystem::path data_dir_;
  mutable std::shared_mutex slots_mutex_;
  std::map<std::string, std::unique_ptr<Slot>> slots_;
  std::mutex ledger_mutex_;
};

}  // namespace claimcheck::service
