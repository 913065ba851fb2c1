#include "zkprov/sysinfo.hpp"

#include <sys/resource.h>
#include <sys/utsname.h>
#include <unistd.h>

#include <cstdio>
#include <cstring>
#include <thread>

namespace zkprov {

std::uint64_t process_peak_rss_bytes() {
    if (std::FILE* f = std::fopen("/proc/self/status", "r")) {
        char line[256];
        while (std::fgets(line, sizeof line, f)) {
            unsigned long long kb = 0;
            if (std::sscanf(line, "VmHWM: %llu kB", &kb) == 1) {
                std::fclose(f);
                return static_cast<std::uint64_t>(kb) * 1024;
            }
        }
        std::fclose(f);
    }
    struct rusage ru {};
    if (getrusage(RUSAGE_SELF, &ru) == 0) {
        return static_cast<std::uint64_t>(ru.ru_maxrss) * 1024; // Linux reports kB
    }
    return 0;
}

unsigned hardware_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

std::string host_summary() {
    char host[256] = "unknown";
    gethostname(host, sizeof host - 1);
    struct utsname un {};
    std::string kernel = "unknown";
    if (uname(&un) == 0) {
        kernel = std::string(un.sysname) + " " + un.release;
    }
    return std::string(host) + ", " + std::to_string(hardware_threads()) +
           " hardware threads, " + kernel;
}

std::string_view build_version() {
#ifdef ZKPROV_VERSION_STRING
    return ZKPROV_VERSION_STRING;
#else
    return "0.0.0";
#endif
}

} // namespace zkprov
