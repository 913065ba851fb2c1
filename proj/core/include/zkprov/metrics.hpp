#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

namespace zkprov {

struct HistogramSnapshot {
    std::uint64_t count = 0;
    double sum = 0.0;
    double min = 0.0; // 0 when empty
    double max = 0.0;
    /// Cumulative counts for the fixed upper bounds in Histogram::bounds();
    /// the final entry (+inf) equals count.
    std::vector<std::uint64_t> bucket_counts;
};

/// Log-spaced latency histogram in seconds, safe for concurrent recording.
class Histogram {
public:
    static const std::vector<double>& bounds(); // upper bounds, excluding +inf

    void record(double seconds);
    HistogramSnapshot snapshot() const;

private:
    mutable std::mutex mutex_;
    HistogramSnapshot state_;
};

struct MetricsSnapshot {
    std::uint64_t jobs_done = 0;
    std::uint64_t jobs_failed = 0;
    std::uint64_t rejected_overloaded = 0;
    std::uint64_t rejected_not_found = 0;
    std::uint64_t rejected_bad_request = 0;
    std::int64_t queue_depth = 0;
    std::int64_t busy_workers = 0;
    std::uint64_t peak_rss_bytes = 0;
    HistogramSnapshot witness_seconds;
    HistogramSnapshot prove_seconds;
    HistogramSnapshot queue_seconds;
};

/// Service-wide counters and gauges. All methods are thread-safe; reads see
/// a consistent-enough view for monitoring (no cross-field atomicity).
class Metrics {
public:
    void job_done() { jobs_done_.fetch_add(1, std::memory_order_relaxed); }
    void job_failed() { jobs_failed_.fetch_add(1, std::memory_order_relaxed); }
    void reject_overloaded() { rejected_overloaded_.fetch_add(1, std::memory_order_relaxed); }
    void reject_not_found() { rejected_not_found_.fetch_add(1, std::memory_order_relaxed); }
    void reject_bad_request() { rejected_bad_request_.fetch_add(1, std::memory_order_relaxed); }

    void queue_depth_add(std::int64_t d) { queue_depth_.fetch_add(d, std::memory_order_relaxed); }
    void busy_workers_add(std::int64_t d) {
        busy_workers_.fetch_add(d, std::memory_order_relaxed);
    }

    Histogram& witness_seconds() { return witness_seconds_; }
    Histogram& prove_seconds() { return prove_seconds_; }
    Histogram& queue_seconds() { return queue_seconds_; }

    MetricsSnapshot snapshot() const; // fills peak_rss_bytes from the process

private:
    std::atomic<std::uint64_t> jobs_done_{0};
    std::atomic<std::uint64_t> jobs_failed_{0};
    std::atomic<std::uint64_t> rejected_overloaded_{0};
    std::atomic<std::uint64_t> rejected_not_found_{0};
    std::atomic<std::uint64_t> rejected_bad_request_{0};
    std::atomic<std::int64_t> queue_depth_{0};
    std::atomic<std::int64_t> busy_workers_{0};
    Histogram witness_seconds_;
    Histogram prove_seconds_;
    Histogram queue_seconds_;
};

} // namespace zkprov
