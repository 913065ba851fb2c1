#pragma once

// JSON codecs for the HTTP wire types, shared by the two servers and the
// clients. Internal header: keeps nlohmann out of the installed API.

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "zkprov/registry.hpp"
#include "zkprov/service.hpp"

namespace zkprov::wire {

nlohmann::json decimals_to_json(const std::vector<BigInt>& values);
std::vector<BigInt> decimals_from_json(const nlohmann::json& arr, const char* what);

CircuitId circuit_id_from_json(const nlohmann::json& value, const char* what);

nlohmann::json metadata_to_json(const CircuitMetadata& md);
CircuitMetadata metadata_from_json(const nlohmann::json& doc);

nlohmann::json proof_response_to_json(const ProofResponse& response);
ProofResponse proof_response_from_json(const nlohmann::json& doc);

nlohmann::json job_to_json(const JobSnapshot& job);
JobSnapshot job_from_json(const nlohmann::json& doc);

nlohmann::json metrics_to_json(const MetricsSnapshot& snapshot);
MetricsSnapshot metrics_from_json(const nlohmann::json& doc);

nlohmann::json health_to_json(const ProvingService::Health& health);
ProvingService::Health health_from_json(const nlohmann::json& doc);

/// Body of POST /v1/proofs.
ProofRequest proof_request_from_json(std::string_view body);
nlohmann::json proof_request_to_json(const ProofRequest& request);

/// Body of POST /v1/verify. `proof` may be the embedded JSON object (the
/// canonical form) or a string holding the raw wire encoding.
struct VerifyRequestWire {
    CircuitId circuit_id;
    std::vector<BigInt> public_inputs;
    std::vector<BigInt> outputs;
    std::string proof_bytes;
};
VerifyRequestWire verify_request_from_json(std::string_view body);
nlohmann::json verify_request_to_json(const VerifyRequestWire& request);

nlohmann::json parse_json(std::string_view body, const char* what); // kParse on failure

} // namespace zkprov::wire
