#pragma once

#include <sys/types.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace zkprov {

/// Caps applied in the child between fork and exec.
struct ResourceCaps {
    std::uint64_t memory_bytes = 0; // address-space cap; 0 = unlimited
    std::vector<int> cpus;          // CPU affinity set; empty = inherit
};

struct SpawnOptions {
    std::string exe;
    std::vector<std::string> args; // argv[1..]; argv[0] is exe
    std::map<std::string, std::string> env;
    ResourceCaps caps;
    std::string stdout_path; // empty = inherit
    std::string stderr_path;
};

/// A forked child. Non-copyable handle; the destructor kills anything still
/// running so a failed test cannot leak servers.
class ChildProcess {
public:
    ChildProcess() = default;
    ~ChildProcess();

    ChildProcess(ChildProcess&& other) noexcept;
    ChildProcess& operator=(ChildProcess&& other) noexcept;
    ChildProcess(const ChildProcess&) = delete;
    ChildProcess& operator=(const ChildProcess&) = delete;

    /// kInternal when fork or exec fails. Exec failure is reported from the
    /// parent (the child exits 127 and a pipe carries errno back).
    static ChildProcess spawn(const SpawnOptions& options);

    pid_t pid() const { return pid_; }
    bool running();

    /// Blocks. Exit status for a normal exit, 128+signal otherwise.
    int wait();
    std::optional<int> try_wait();

    void kill_now();                                  // SIGKILL, no reaping
    int terminate(double grace_seconds = 5.0);        // SIGTERM, then SIGKILL

private:
    pid_t pid_ = -1;
    std::optional<int> status_;
};

} // namespace zkprov
