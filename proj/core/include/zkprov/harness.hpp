#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "zkprov/process.hpp"
#include "zkprov/workload.hpp"

namespace zkprov {

/// One benchmark experiment. A sweeps per-instance resource caps (one point
/// per config), B sweeps workers_per_instance on one instance, C sweeps
/// instance_counts at fixed workers; the harness runs the cross product of
/// the two lists, so the non-swept list stays a singleton by convention.
struct ExperimentConfig {
    char experiment = 'B'; // 'A' | 'B' | 'C'
    WorkloadSpec workload;
    std::uint64_t total_requests = 16;
    std::vector<std::uint32_t> workers_per_instance = {1};
    std::vector<std::uint32_t> instance_counts = {1};
    std::optional<ResourceCaps> caps; // experiment A's "machine size"
    std::uint32_t warmup_requests = 3; // per instance, excluded from stats
    std::uint32_t max_in_flight = 8;   // concurrent client requests
    std::uint32_t k = 30;              // spot-check count at registration
};

/// One results.csv row. The experiment label is the letter, for A extended
/// with the applied caps, e.g. "A[mem=1.00gb;cpus=1]"; "-advisory" marks a
/// cap the host could not honor exactly.
struct MeasurementRecord {
    std::string experiment;
    std::uint32_t instances = 1;
    std::uint32_t workers = 1;
    std::uint64_t n_constraints = 0;
    double avg_prove_s = 0.0;
    double p50_s = 0.0;
    double p95_s = 0.0;
    double throughput_pps = 0.0; // completed proofs / measured wall seconds
    double peak_rss_gb = 0.0;    // max over instances, from /v1/metrics
    std::uint64_t rejects = 0;   // overload rejections during measurement
};

struct HarnessOptions {
    std::string zkprovd_path;        // service binary to spawn
    std::filesystem::path work_dir;  // scratch space for registries and logs
    bool verbose = false;            // progress lines on stderr
    double startup_timeout_seconds = 30.0;
    double request_timeout_seconds = 600.0;
};

/// Config file: {"experiments":[...]} with per-experiment objects mirroring
/// ExperimentConfig; documented in docs/api.md. Throws kParse / kConfig.
std::vector<ExperimentConfig> parse_experiment_configs(const std::string& text);

/// Spawns instance_count service processes per point, registers the workload
/// circuit on each, fires total_requests round-robin after warmup, and
/// returns one record per configuration point. Instances are torn down
/// between points. Throws kInternal with diagnostics when an instance fails
/// to start; overload rejections are counted, not fatal.
std::vector<MeasurementRecord> run_experiment(const ExperimentConfig& config,
                                              const HarnessOptions& options);

/// Nearest-rank percentile over a copy of samples; q in [0,1].
double percentile(std::vector<double> samples, double q);

} // namespace zkprov
