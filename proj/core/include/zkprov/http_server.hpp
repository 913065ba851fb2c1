#pragma once

#include <cstdint>
#include <memory>

#include "zkprov/service.hpp"

namespace zkprov {

/// HTTP/1.1 front-end for a ProvingService:
///   POST   /v1/circuits        register (body: ECS document, optional ?k=)
///   GET    /v1/circuits        list (optional ?rescan=true)
///   GET    /v1/circuits/{id}   metadata
///   DELETE /v1/circuits/{id}
///   POST   /v1/proofs          sync 200 ProofResponse | async 202 Job
///   GET    /v1/jobs/{job_id}
///   GET    /v1/metrics
///   GET    /v1/health
/// Sync handlers block their connection thread, so the handler pool is sized
/// past worker_count + queue_capacity; beyond that the service's own
/// admission control answers 503 immediately.
class ProvingHttpServer {
public:
    explicit ProvingHttpServer(ProvingService& service);
    ~ProvingHttpServer();

    ProvingHttpServer(const ProvingHttpServer&) = delete;
    ProvingHttpServer& operator=(const ProvingHttpServer&) = delete;

    /// Binds 0.0.0.0:port (port 0 picks a free port). Returns the bound
    /// port. Throws kNetwork when the bind fails.
    int bind(std::uint16_t port);

    /// Serves until stop(); call after bind(). Throws kNetwork on failure.
    void serve();

    /// bind() must have been called; runs serve() on a background thread and
    /// returns once the server accepts connections.
    void start();
    void stop(); // safe from any thread, including signal-driven paths

    int port() const; // -1 before bind()

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace zkprov
