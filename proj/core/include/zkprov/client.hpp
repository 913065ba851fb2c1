#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zkprov/backend.hpp"
#include "zkprov/registry.hpp"
#include "zkprov/service.hpp"

namespace zkprov {

/// Statement handed to a verifier: everything public, nothing else.
struct VerifyStatement {
    CircuitId circuit_id;
    std::vector<BigInt> public_inputs;
    std::vector<BigInt> outputs;
    std::string proof; // wire encoding, as returned in ProofResponse::proof
};

/// Client for the proving service API. Transport failures (refused,
/// unreachable, timeout) throw kNetwork; HTTP error responses are rehydrated
/// into the Error the server threw, so callers see kNotFound, kOverloaded,
/// kUnsatisfiableInput and friends exactly as if the service were in-process.
class ProverClient {
public:
    /// base_url like "http://127.0.0.1:8080". The timeout bounds each
    /// request round-trip; sync proving can be slow, so keep it generous.
    explicit ProverClient(std::string base_url, double timeout_seconds = 600.0);
    ~ProverClient();

    ProverClient(ProverClient&&) noexcept;
    ProverClient& operator=(ProverClient&&) noexcept;

    CircuitMetadata register_circuit(std::string_view ecs_bytes,
                                     std::optional<std::uint32_t> k = {});
    std::vector<CircuitMetadata> list_circuits(bool rescan = false);
    CircuitMetadata circuit(const CircuitId& id);
    bool remove_circuit(const CircuitId& id); // false when already absent

    ProofResponse prove(const ProofRequest& request);     // sync
    JobSnapshot submit_async(const ProofRequest& request);
    JobSnapshot job(const std::string& job_id);
    /// Polls until the job is terminal; kNetwork on timeout.
    JobSnapshot await_job(const std::string& job_id, double timeout_seconds = 600.0);

    MetricsSnapshot metrics();
    ProvingService::Health health();

    const std::string& base_url() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Client for the verifier service. Same error contract as ProverClient.
class VerifierClient {
public:
    explicit VerifierClient(std::string base_url, double timeout_seconds = 600.0);
    ~VerifierClient();

    VerifierClient(VerifierClient&&) noexcept;
    VerifierClient& operator=(VerifierClient&&) noexcept;

    VerifyResult verify(const VerifyStatement& statement);
    ProvingService::Health health(); // registry_circuit_count from "circuits"

    const std::string& base_url() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace zkprov
