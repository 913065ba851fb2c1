#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace zkprov {

/// High-water-mark RSS of this process in bytes (/proc/self/status VmHWM,
/// getrusage fallback). Monotonically non-decreasing over a run.
std::uint64_t process_peak_rss_bytes();

unsigned hardware_threads();

/// One-line host description for measurement records: hostname, CPU count,
/// kernel.
std::string host_summary();

std::string_view build_version();

} // namespace zkprov
