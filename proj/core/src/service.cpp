#include "zkprov/service.hpp"

#include <ctime>
#include <random>

#include "zkprov/json_util.hpp"
#include "zkprov/sysinfo.hpp"

namespace zkprov {
namespace {

using Clock = std::chrono::steady_clock;
using SysClock = std::chrono::system_clock;

double seconds_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

std::string format_utc(SysClock::time_point tp) {
    std::time_t t = SysClock::to_time_t(tp);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string random_job_id() {
    static std::mutex mutex;
    static std::mt19937_64 rng = [] {
        std::random_device rd;
        std::seed_seq seq{rd(), rd(), rd(), rd()};
        return std::mt19937_64(seq);
    }();
    std::uint64_t hi;
    std::uint64_t lo;
    {
        std::lock_guard lock(mutex);
        hi = rng();
        lo = rng();
    }
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(hi),
                  static_cast<unsigned long long>(lo));
    return buf;
}

} // namespace

std::string_view to_string(JobState state) {
    switch (state) {
    case JobState::kQueued:
        return "queued";
    case JobState::kRunning:
        return "running";
    case JobState::kDone:
        return "done";
    case JobState::kFailed:
        return "failed";
    }
    return "failed";
}

struct ProvingService::JobRecord {
    std::string job_id;
    EntryPtr entry;
    ProofRequest request;

    mutable std::mutex mutex;
    std::condition_variable done_cv;
    JobState state = JobState::kQueued;
    SysClock::time_point submitted_at;
    SysClock::time_point started_at;
    SysClock::time_point finished_at;
    Clock::time_point submitted_steady;
    Clock::time_point finished_steady;
    std::optional<ProofResponse> result;
    std::optional<JobError> error;
};

ProvingService::ProvingService(ServiceConfig config)
    : config_(std::move(config)),
      registry_(RegistryOptions{config_.registry_root, config_.registry_cache_entries, false,
                                nullptr}) {
    if (config_.worker_count == 0) {
        throw Error(ErrorCode::kConfig, "worker_count must be at least 1");
    }
    if (config_.default_k == 0) {
        throw Error(ErrorCode::kConfig, "default_k must be at least 1");
    }
    workers_.reserve(config_.worker_count);
    for (std::uint32_t i = 0; i < config_.worker_count; ++i) {
        workers_.emplace_back([this] { worker_loop(); });
    }
}

ProvingService::~ProvingService() {
    std::deque<JobPtr> abandoned;
    {
        std::lock_guard lock(jobs_mutex_);
        stopping_ = true;
        abandoned.swap(queue_);
    }
    for (const JobPtr& job : abandoned) {
        {
            std::lock_guard job_lock(job->mutex);
            job->state = JobState::kFailed;
            job->error = JobError{ErrorCode::kInternal, "service shutting down", -1};
            job->finished_at = SysClock::now();
            job->finished_steady = Clock::now();
        }
        metrics_.queue_depth_add(-1);
        metrics_.job_failed();
        job->done_cv.notify_all();
    }
    queue_cv_.notify_all();
    for (std::thread& worker : workers_) {
        worker.join();
    }
}

ProvingService::JobPtr ProvingService::admit(const ProofRequest& request) {
    EntryPtr entry;
    try {
        entry = registry_.fetch_entry(request.circuit_id);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::kNotFound) {
            metrics_.reject_not_found();
        }
        throw;
    }

    const CircuitArtifact& ecs = entry->ecs;
    auto bad_request = [this](const std::string& message) -> Error {
        metrics_.reject_bad_request();
        return Error(ErrorCode::kBadRequest, message);
    };
    if (request.public_inputs.size() != ecs.num_public_inputs) {
        throw bad_request("expected " + std::to_string(ecs.num_public_inputs) +
                          " public inputs, got " + std::to_string(request.public_inputs.size()));
    }
    if (request.private_inputs.size() != ecs.num_private_inputs) {
        throw bad_request("expected " + std::to_string(ecs.num_private_inputs) +
                          " private inputs, got " + std::to_string(request.private_inputs.size()));
    }
    for (const BigInt& v : request.public_inputs) {
        if (!ecs.field->is_canonical(v)) {
            throw bad_request("public input outside the circuit field");
        }
    }
    for (const BigInt& v : request.private_inputs) {
        if (!ecs.field->is_canonical(v)) {
            throw bad_request("private input outside the circuit field");
        }
    }

    auto job = std::make_shared<JobRecord>();
    job->job_id = random_job_id();
    job->entry = std::move(entry);
    job->request = request;
    job->submitted_at = SysClock::now();
    job->submitted_steady = Clock::now();

    {
        std::lock_guard lock(jobs_mutex_);
        if (stopping_) {
            throw Error(ErrorCode::kInternal, "service shutting down");
        }
        purge_expired_jobs_locked();
        std::size_t admitted = queue_.size() + running_;
        std::size_t capacity = config_.worker_count + config_.queue_capacity;
        if (admitted >= capacity) {
            metrics_.reject_overloaded();
            throw Error(ErrorCode::kOverloaded,
                        "queue at capacity (" + std::to_string(admitted) + " of " +
                            std::to_string(capacity) + " jobs admitted)");
        }
        queue_.push_back(job);
        jobs_.emplace(job->job_id, job);
    }
    metrics_.queue_depth_add(1);
    queue_cv_.notify_one();
    return job;
}

ProofResponse ProvingService::submit_sync(const ProofRequest& request) {
    JobPtr job = admit(request);
    std::unique_lock job_lock(job->mutex);
    job->done_cv.wait(job_lock, [&] {
        return job->state == JobState::kDone || job->state == JobState::kFailed;
    });
    if (job->state == JobState::kDone) {
        return *job->result;
    }
    const JobError& err = *job->error;
    if (err.index >= 0) {
        throw Error(err.code, err.message, err.index);
    }
    throw Error(err.code, err.message);
}

JobSnapshot ProvingService::submit_async(const ProofRequest& request) {
    JobPtr job = admit(request);
    std::lock_guard job_lock(job->mutex);
    return snapshot_of(*job);
}

JobSnapshot ProvingService::get_job(const std::string& job_id) const {
    JobPtr job;
    {
        std::lock_guard lock(jobs_mutex_);
        purge_expired_jobs_locked();
        auto it = jobs_.find(job_id);
        if (it == jobs_.end()) {
            throw Error(ErrorCode::kNotFound, "no job " + job_id);
        }
        job = it->second;
    }
    std::lock_guard job_lock(job->mutex);
    return snapshot_of(*job);
}

ProvingService::Health ProvingService::health() const {
    return Health{"ok", std::string(build_version()), registry_.circuit_count()};
}

void ProvingService::worker_loop() {
    while (true) {
        JobPtr job;
        {
            std::unique_lock lock(jobs_mutex_);
            queue_cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
            if (stopping_) {
                return;
            }
            job = queue_.front();
            queue_.pop_front();
            running_ += 1;
        }
        metrics_.queue_depth_add(-1);
        metrics_.busy_workers_add(1);
        run_job(job);
        metrics_.busy_workers_add(-1);
        {
            std::lock_guard lock(jobs_mutex_);
            running_ -= 1;
        }
    }
}

void ProvingService::run_job(const JobPtr& job) {
    Clock::time_point started = Clock::now();
    double queue_seconds = seconds_between(job->submitted_steady, started);
    {
        std::lock_guard job_lock(job->mutex);
        job->state = JobState::kRunning;
        job->started_at = SysClock::now();
    }
    metrics_.queue_seconds().record(queue_seconds);

    try {
        const RegistryEntry& entry = *job->entry;
        Clock::time_point t0 = Clock::now();
        SolveResult solved =
            solve_witness(entry.ecs, job->request.public_inputs, job->request.private_inputs);
        Clock::time_point t1 = Clock::now();
        const ProvingBackend& backend = backend_for(entry.pk.backend_id);
        std::string proof = backend.prove(entry.pk, entry.ecs, solved.witness,
                                          job->request.public_inputs, solved.outputs);
        Clock::time_point t2 = Clock::now();
        solved.witness.values.clear(); // witness never outlives the proving step

        ProofResponse response;
        response.circuit_id = entry.id;
        response.proof = std::move(proof);
        response.outputs = std::move(solved.outputs);
        response.timings.witness_seconds = seconds_between(t0, t1);
        response.timings.prove_seconds = seconds_between(t1, t2);
        response.timings.queue_seconds = queue_seconds;
        response.peak_rss_bytes = process_peak_rss_bytes();

        metrics_.witness_seconds().record(response.timings.witness_seconds);
        metrics_.prove_seconds().record(response.timings.prove_seconds);
        metrics_.job_done();

        std::lock_guard job_lock(job->mutex);
        job->state = JobState::kDone;
        job->result = std::move(response);
        job->finished_at = SysClock::now();
        job->finished_steady = Clock::now();
    } catch (const Error& e) {
        metrics_.job_failed();
        std::lock_guard job_lock(job->mutex);
        job->state = JobState::kFailed;
        job->error = JobError{e.code(), e.what(), e.index()};
        job->finished_at = SysClock::now();
        job->finished_steady = Clock::now();
    } catch (const std::exception& e) {
        metrics_.job_failed();
        std::lock_guard job_lock(job->mutex);
        job->state = JobState::kFailed;
        job->error = JobError{ErrorCode::kInternal, e.what(), -1};
        job->finished_at = SysClock::now();
        job->finished_steady = Clock::now();
    }
    job->done_cv.notify_all();
}

void ProvingService::purge_expired_jobs_locked() const {
    Clock::time_point now = Clock::now();
    auto retention = std::chrono::seconds(config_.job_retention_seconds);
    for (auto it = jobs_.begin(); it != jobs_.end();) {
        bool expired = false;
        {
            std::lock_guard job_lock(it->second->mutex);
            const JobRecord& job = *it->second;
            expired = (job.state == JobState::kDone || job.state == JobState::kFailed) &&
                      job.finished_steady + retention <= now;
        }
        it = expired ? jobs_.erase(it) : std::next(it);
    }
}

JobSnapshot ProvingService::snapshot_of(const JobRecord& job) const {
    JobSnapshot snap;
    snap.job_id = job.job_id;
    snap.state = job.state;
    snap.submitted_at = format_utc(job.submitted_at);
    if (job.state != JobState::kQueued) {
        snap.started_at = format_utc(job.started_at);
    }
    if (job.state == JobState::kDone || job.state == JobState::kFailed) {
        snap.finished_at = format_utc(job.finished_at);
        snap.result = job.result;
        snap.error = job.error;
    }
    return snap;
}

} // namespace zkprov
