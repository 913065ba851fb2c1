// zkprovd: the proving service daemon. Serves the /v1 API over HTTP until
// SIGINT or SIGTERM, then drains in-flight jobs and exits.

#include <csignal>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <thread>

#include <CLI11.hpp>

#include "zkprov/errors.hpp"
#include "zkprov/http_server.hpp"
#include "zkprov/service.hpp"
#include "zkprov/sysinfo.hpp"

namespace {

// The bound port, atomically: readers polling the file never see a partial
// write.
void write_port_file(const std::string& path, int port) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << port << "\n";
        out.flush();
        if (!out.good()) {
            throw zkprov::Error(zkprov::ErrorCode::kConfig,
                                "cannot write port file " + path);
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zkprovd: verifiable-computation proving service"};

    std::uint16_t port = 8080;
    std::uint32_t workers = 4;
    std::uint32_t queue_capacity = 16;
    std::string registry_root = "registry";
    std::uint32_t retention_seconds = 3600;
    std::uint32_t default_k = 30;
    std::string port_file;

    // Precedence: flag > environment > default.
    app.add_option("--port", port, "TCP port to listen on; 0 picks a free port")
        ->envname("ZKPROVD_PORT");
    app.add_option("--workers", workers, "parallel proving workers (>= 1)")
        ->envname("ZKPROVD_WORKERS");
    app.add_option("--queue-capacity", queue_capacity,
                   "jobs that may wait beyond the running ones")
        ->envname("ZKPROVD_QUEUE_CAPACITY");
    app.add_option("--registry-root", registry_root,
                   "directory holding the circuit registry")
        ->envname("ZKPROVD_REGISTRY_ROOT");
    app.add_option("--retention-seconds", retention_seconds,
                   "how long finished jobs stay queryable")
        ->envname("ZKPROVD_RETENTION_SECONDS");
    app.add_option("--default-k", default_k,
                   "spot-check count used when registration gives none")
        ->envname("ZKPROVD_DEFAULT_K");
    app.add_option("--port-file", port_file,
                   "write the bound port here once listening (for port 0)")
        ->envname("ZKPROVD_PORT_FILE");

    CLI11_PARSE(app, argc, argv);

    std::signal(SIGPIPE, SIG_IGN);
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    sigaddset(&set, SIGUSR1);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);

    try {
        zkprov::ServiceConfig config;
        config.worker_count = workers;
        config.queue_capacity = queue_capacity;
        config.registry_root = registry_root;
        config.job_retention_seconds = retention_seconds;
        config.default_k = default_k;

        zkprov::ProvingService service(std::move(config));
        zkprov::ProvingHttpServer server(service);
        const int bound = server.bind(port);
        if (!port_file.empty()) {
            write_port_file(port_file, bound);
        }
        std::fprintf(stderr,
                     "zkprovd %s listening on port %d (workers=%u queue=%u "
                     "registry=%s k=%u)\n",
                     std::string(zkprov::build_version()).c_str(), bound, workers,
                     queue_capacity, registry_root.c_str(), default_k);

        std::thread waiter([&server, &set] {
            int sig = 0;
            sigwait(&set, &sig);
            if (sig == SIGINT || sig == SIGTERM) {
                std::fprintf(stderr, "zkprovd: %s, shutting down\n", strsignal(sig));
            }
            server.stop();
        });
        server.serve();
        raise(SIGUSR1); // unblocks the waiter if serve ended without a signal
        waiter.join();
        std::fprintf(stderr, "zkprovd: stopped\n");
        return 0;
    } catch (const zkprov::Error& e) {
        std::fprintf(stderr, "zkprovd: %s: %s\n",
                     std::string(to_string(e.code())).c_str(), e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "zkprovd: %s\n", e.what());
        return 1;
    }
}
