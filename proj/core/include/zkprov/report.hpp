#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "zkprov/harness.hpp"

namespace zkprov {

inline constexpr std::string_view kResultsCsvHeader =
    "experiment,instances,workers,n_constraints,avg_prove_s,p50_s,p95_s,"
    "throughput_pps,peak_rss_gb,rejects";

/// '#' comment lines (host metadata), then the header, then one row per
/// record. Numbers use %.9g so rows re-serialize identically after parsing.
std::string results_csv(const std::vector<MeasurementRecord>& records,
                        std::string_view host_line);

/// Inverse of results_csv; comment lines are skipped, the header is
/// required. Throws kParse on schema drift.
std::vector<MeasurementRecord> parse_results_csv(std::string_view text);

/// Writes out_dir/results.csv plus chart-<letter>.svg for each experiment
/// letter present (proving time and memory against the swept variable).
/// Returns the paths written. Throws kStorage on I/O failure.
std::vector<std::filesystem::path> write_report(
    const std::vector<MeasurementRecord>& records,
    const std::filesystem::path& out_dir);

} // namespace zkprov
