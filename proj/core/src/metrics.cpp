#include "zkprov/metrics.hpp"

#include <algorithm>

#include "zkprov/sysinfo.hpp"

namespace zkprov {

const std::vector<double>& Histogram::bounds() {
    static const std::vector<double> kBounds = {0.001, 0.002, 0.005, 0.01,  0.02, 0.05, 0.1,
                                                0.2,   0.5,   1.0,   2.0,   5.0,  10.0, 20.0,
                                                50.0,  100.0};
    return kBounds;
}

void Histogram::record(double seconds) {
    std::lock_guard lock(mutex_);
    if (state_.bucket_counts.empty()) {
        state_.bucket_counts.assign(bounds().size() + 1, 0);
    }
    if (state_.count == 0 || seconds < state_.min) {
        state_.min = seconds;
    }
    if (state_.count == 0 || seconds > state_.max) {
        state_.max = seconds;
    }
    state_.count += 1;
    state_.sum += seconds;
    const auto& b = bounds();
    std::size_t i = 0;
    while (i < b.size() && seconds > b[i]) {
        ++i;
    }
    // Cumulative buckets: one increment per bucket at or above the value.
    for (; i < state_.bucket_counts.size(); ++i) {
        state_.bucket_counts[i] += 1;
    }
}

HistogramSnapshot Histogram::snapshot() const {
    std::lock_guard lock(mutex_);
    HistogramSnapshot out = state_;
    if (out.bucket_counts.empty()) {
        out.bucket_counts.assign(bounds().size() + 1, 0);
    }
    return out;
}

MetricsSnapshot Metrics::snapshot() const {
    MetricsSnapshot out;
    out.jobs_done = jobs_done_.load(std::memory_order_relaxed);
    out.jobs_failed = jobs_failed_.load(std::memory_order_relaxed);
    out.rejected_overloaded = rejected_overloaded_.load(std::memory_order_relaxed);
    out.rejected_not_found = rejected_not_found_.load(std::memory_order_relaxed);
    out.rejected_bad_request = rejected_bad_request_.load(std::memory_order_relaxed);
    out.queue_depth = std::max<std::int64_t>(0, queue_depth_.load(std::memory_order_relaxed));
    out.busy_workers = std::max<std::int64_t>(0, busy_workers_.load(std::memory_order_relaxed));
    out.peak_rss_bytes = process_peak_rss_bytes();
    out.witness_seconds = witness_seconds_.snapshot();
    out.prove_seconds = prove_seconds_.snapshot();
    out.queue_seconds = queue_seconds_.snapshot();
    return out;
}

} // namespace zkprov
