#pragma once

#include <cstdint>
#include <memory>

#include "zkprov/registry.hpp"

namespace zkprov {

/// Independent verification endpoint:
///   POST /v1/verify   {circuit_id, public_inputs, outputs, proof}
///                     -> 200 {"accepted":bool,"reason":string}
///   GET  /v1/health
/// Holds the registry read-only; it never has a witness and never learns
/// private inputs, only the statement and the proof. An undecodable proof or
/// a statement that does not match the circuit is a 400, an unknown circuit
/// a 404; "rejected" (200, accepted=false) is reserved for well-formed
/// proofs that fail a check.
class VerifierHttpServer {
public:
    explicit VerifierHttpServer(ProofRegistry& registry);
    ~VerifierHttpServer();

    VerifierHttpServer(const VerifierHttpServer&) = delete;
    VerifierHttpServer& operator=(const VerifierHttpServer&) = delete;

    int bind(std::uint16_t port); // 0 picks a free port; returns it
    void serve();                 // blocks until stop()
    void start();                 // background thread; returns once ready
    void stop();

    int port() const; // -1 before bind()

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace zkprov
