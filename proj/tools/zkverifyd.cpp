// zkverifyd: the stand-alone verifier service. Shares a proving service's
// registry directory read-only and answers POST /v1/verify.

#include <csignal>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <thread>

#include <CLI11.hpp>

#include "zkprov/errors.hpp"
#include "zkprov/registry.hpp"
#include "zkprov/verifier_server.hpp"

namespace {

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
    CLI::App app{"zkverifyd: proof verification service"};

    std::uint16_t port = 8081;
    std::string registry_root = "registry";
    std::string port_file;

    app.add_option("--port", port, "TCP port to listen on; 0 picks a free port")
        ->envname("ZKVERIFYD_PORT");
    app.add_option("--registry-root", registry_root,
                   "registry directory to read verification material from")
        ->envname("ZKVERIFYD_REGISTRY_ROOT");
    app.add_option("--port-file", port_file,
                   "write the bound port here once listening (for port 0)")
        ->envname("ZKVERIFYD_PORT_FILE");

    CLI11_PARSE(app, argc, argv);

    std::signal(SIGPIPE, SIG_IGN);
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    sigaddset(&set, SIGUSR1);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);

    try {
        zkprov::RegistryOptions options;
        options.root = registry_root;
        options.read_only = true;
        zkprov::ProofRegistry registry(std::move(options));
        zkprov::VerifierHttpServer server(registry);
        const int bound = server.bind(port);
        if (!port_file.empty()) {
            write_port_file(port_file, bound);
        }
        std::fprintf(stderr, "zkverifyd listening on port %d (registry=%s)\n", bound,
                     registry_root.c_str());

        std::thread waiter([&server, &set] {
            int sig = 0;
            sigwait(&set, &sig);
            if (sig == SIGINT || sig == SIGTERM) {
                std::fprintf(stderr, "zkverifyd: %s, shutting down\n", strsignal(sig));
            }
            server.stop();
        });
        server.serve();
        raise(SIGUSR1);
        waiter.join();
        std::fprintf(stderr, "zkverifyd: stopped\n");
        return 0;
    } catch (const zkprov::Error& e) {
        std::fprintf(stderr, "zkverifyd: %s: %s\n",
                     std::string(to_string(e.code())).c_str(), e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "zkverifyd: %s\n", e.what());
        return 1;
    }
}
