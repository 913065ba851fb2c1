#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "zkprov/backend.hpp"
#include "zkprov/circuit.hpp"
#include "zkprov/encoding.hpp"
#include "zkprov/errors.hpp"
#include "zkprov/metrics.hpp"
#include "zkprov/registry.hpp"

namespace zkprov {

struct ServiceConfig {
    std::uint32_t worker_count = 4;     // parallel proving executors, >= 1
    std::uint32_t queue_capacity = 16;  // waiting jobs beyond the running ones
    std::filesystem::path registry_root;
    std::uint32_t job_retention_seconds = 3600; // finished jobs stay queryable this long
    std::uint32_t default_k = 30;
    std::size_t registry_cache_entries = 0; // 0 = unbounded
};

struct ProofRequest {
    CircuitId circuit_id;
    std::vector<BigInt> public_inputs;
    std::vector<BigInt> private_inputs;
    bool async = false;
};

struct Timings {
    double witness_seconds = 0.0;
    double prove_seconds = 0.0;
    double queue_seconds = 0.0;
};

struct ProofResponse {
    CircuitId circuit_id;
    std::string proof; // wire encoding
    std::vector<BigInt> outputs;
    Timings timings;
    std::uint64_t peak_rss_bytes = 0;
};

enum class JobState { kQueued, kRunning, kDone, kFailed };
std::string_view to_string(JobState state);

struct JobError {
    ErrorCode code = ErrorCode::kInternal;
    std::string message;
    std::int64_t index = -1; // offending solver instruction when >= 0
};

struct JobSnapshot {
    std::string job_id; // 32-hex random
    JobState state = JobState::kQueued;
    std::string submitted_at;
    std::string started_at;  // empty until running
    std::string finished_at; // empty until terminal
    std::optional<ProofResponse> result;
    std::optional<JobError> error;
};

/// The proving pipeline behind the HTTP front-end: a fixed pool of
/// worker_count executors over a bounded FIFO queue. A request is admitted
/// only while queued + running < worker_count + queue_capacity; beyond that
/// it is rejected with kOverloaded before touching the queue. Sync submission
/// is async submission plus waiting on the job, so the two modes run the
/// identical pipeline: fetch_entry -> solve_witness -> prove.
///
/// Witness values live only on the worker's stack frame; responses carry the
/// proof and outputs alone. Queued jobs do not survive the process.
class ProvingService {
public:
    explicit ProvingService(ServiceConfig config);
    ~ProvingService(); // fails still-queued jobs, joins workers

    ProvingService(const ProvingService&) = delete;
    ProvingService& operator=(const ProvingService&) = delete;

    /// Blocks until the job finishes. Throws the job's error on failure:
    /// kNotFound (circuit), kBadRequest (arity/field), kOverloaded,
    /// kUnsatisfiableInput / kDivisionByZero (solver), kInternal.
    ProofResponse submit_sync(const ProofRequest& request);

    /// Returns the queued job immediately; same admission errors as sync.
    JobSnapshot submit_async(const ProofRequest& request);

    /// kNotFound for unknown ids and for jobs past the retention window.
    JobSnapshot get_job(const std::string& job_id) const;

    MetricsSnapshot metrics_snapshot() const { return metrics_.snapshot(); }

    struct Health {
        std::string status;
        std::string version;
        std::uint64_t registry_circuit_count = 0;
    };
    Health health() const;

    ProofRegistry& registry() { return registry_; }
    const ServiceConfig& config() const { return config_; }

private:
    struct JobRecord;
    using JobPtr = std::shared_ptr<JobRecord>;

    JobPtr admit(const ProofRequest& request); // validates, enqueues, notifies
    void worker_loop();
    void run_job(const JobPtr& job);
    void purge_expired_jobs_locked() const;
    JobSnapshot snapshot_of(const JobRecord& job) const;

    ServiceConfig config_;
    ProofRegistry registry_;
    Metrics metrics_;

    mutable std::mutex jobs_mutex_;
    std::condition_variable queue_cv_;
    std::deque<JobPtr> queue_;
    std::uint32_t running_ = 0;
    mutable std::map<std::string, JobPtr> jobs_;
    bool stopping_ = false;

    std::vector<std::thread> workers_;
};

} // namespace zkprov
