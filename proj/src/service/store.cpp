#include "claimcheck/service/store.hpp"

#include <atomic>
#include <fstream>
#include <sstream>

#include "claimcheck/core/errors.hpp"
#include "claimcheck/core/json.hpp"

namespace claimcheck::service {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += (out.empty() ? "" : "; ") + l;
  return out;
}

}  // namespace

JobStore::JobStore(fs::path data_dir) : data_dir_(std::move(data_dir)) {
  std::error_code ec;
  fs::create_directories(data_dir_ / "jobs", ec);
  if (ec) throw Error(Errc::io_error, "cannot create " + data_dir_.string() + ": " + ec.message());
  for (const auto& entry : fs::directory_iterator(data_dir_ / "jobs")) {
    if (entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    try {
      auto job = std::make_shared<VerificationJob>(json::parse(in).get<VerificationJob>());
      auto s = std::make_unique<Slot>();
      s->current = std::move(job);
      slots_.emplace(s->current->job_id, std::move(s));
    } catch (const json::exception& e) {
      throw Error(Errc::parse_failure, entry.path().string() + ": " + e.what());
    }
  }
}

fs::path JobStore::snapshot_path(const std::string& job_id) const {
  return data_dir_ / "jobs" / (job_id + ".json");
}

void JobStore::write_snapshot(const VerificationJob& job) const {
  const fs::path final_path = snapshot_path(job.job_id);
  fs::path tmp = final_path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << json(job).dump();
    if (!out) throw Error(Errc::io_error, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, final_path, ec);
  if (ec) throw Error(Errc::io_error, "cannot replace " + final_path.string() + ": " + ec.message());
}

void JobStore::create(VerificationJob job) {
  if (const auto problems = check_job(job); !problems.empty()) {
    throw Error(Errc::invalid_argument, "inconsistent job: " + join(problems));
  }
  std::unique_lock lock(slots_mutex_);
  if (slots_.count(job.job_id)) throw Error(Errc::invalid_argument, "duplicate job id " + job.job_id);
  write_snapshot(job);
  auto s = std::make_unique<Slot>();
  s->current = std::make_shared<const VerificationJob>(std::move(job));
  slots_.emplace(s->current->job_id, std::move(s));
}

JobStore::Slot& JobStore::slot(const std::string& job_id) const {
  std::shared_lock lock(slots_mutex_);
  auto it = slots_.find(job_id);
  if (it == slots_.end()) throw Error(Errc::not_found, "unknown job " + job_id);
  return *it->second;
}

std::shared_ptr<const VerificationJob> JobStore::get(const std::string& job_id) const {
  return std::atomic_load(&slot(job_id).current);
}

bool JobStore::contains(const std::string& job_id) const {
  std::shared_lock lock(slots_mutex_);
  return slots_.count(job_id) > 0;
}

std::vector<std::string> JobStore::job_ids() const {
  std::shared_lock lock(slots_mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : slots_) out.push_back(id);
  return out;
}

std::shared_ptr<const VerificationJob> JobStore::update(
    const std::string& job_id, const std::function<void(VerificationJob&)>& mutate) {
  Slot& s = slot(job_id);
  std::lock_guard lock(s.write_mutex);
  const auto before = std::atomic_load(&s.current);
  auto next = std::make_shared<VerificationJob>(*before);
  mutate(*next);
  if (next->job_id != before->job_id) throw Error(Errc::invalid_argument, "job id is immutable");
  if (next->state != before->state && !transition_allowed(before->state, next->state)) {
    throw Error(Errc::invalid_argument, "illegal job transition " +
                                            std::string(to_string(before->state)) + " -> " +
                                            std::string(to_string(next->state)));
  }
  if (const auto problems = check_job(*next); !problems.empty()) {
    throw Error(Errc::invalid_argument, "inconsistent job: " + join(problems));
  }
  write_snapshot(*next);
  std::shared_ptr<const VerificationJob> published = std::move(next);
  std::atomic_store(&s.current, published);
  return published;
}

void JobStore::append_ledger(const json& record) {
  const std::string line = record.dump() + "\n";
  std::lock_guard lock(ledger_mutex_);
  std::ofstream out(ledger_path(), std::ios::app | std::ios::binary);
  out << line;
  out.flush();
  if (!out) throw Error(Errc::io_error, "cannot append to " + ledger_path().string());
}

std::vector<json> JobStore::read_ledger() const {
  std::vector<json> out;
  std::ifstream in(ledger_path());
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

std::uintmax_t JobStore::ledger_bytes() const {
  std::error_code ec;
  const auto n = fs::file_size(ledger_path(), ec);
  return ec ? 0 : n;
}

}  // namespace claimcheck::service
