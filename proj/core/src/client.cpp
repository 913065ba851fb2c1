#include "zkprov/client.hpp"

#include <chrono>
#include <cmath>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "zkprov/errors.hpp"
#include "zkprov/json_util.hpp"
#include "wire_json.hpp"

namespace zkprov {
namespace {

using nlohmann::json;

void set_timeouts(httplib::Client& cli, double seconds) {
    const auto whole = static_cast<time_t>(seconds);
    const auto usec = static_cast<time_t>((seconds - std::floor(seconds)) * 1e6);
    cli.set_connection_timeout(whole, usec);
    cli.set_read_timeout(whole, usec);
    cli.set_write_timeout(whole, usec);
}

/// Turns a non-2xx response back into the Error the server threw. Transport
/// failures (no response at all) become kNetwork.
[[noreturn]] void throw_from(const httplib::Result& res, const std::string& what) {
    if (!res) {
        throw Error(ErrorCode::kNetwork, what + ": " + httplib::to_string(res.error()));
    }
    try {
        const json doc = json::parse(res->body);
        const json& err = doc.at("error");
        const ErrorCode code =
            error_code_from_string(err.value("code", std::string{"internal"}));
        const std::string message = err.value("message", std::string{what});
        if (err.contains("index")) {
            throw Error(code, message, err["index"].get<std::int64_t>());
        }
        throw Error(code, message);
    } catch (const json::exception&) {
        throw Error(ErrorCode::kInternal,
                    what + ": HTTP " + std::to_string(res->status));
    }
}

json expect_json(const httplib::Result& res, int status, const std::string& what) {
    if (!res || res->status != status) {
        throw_from(res, what);
    }
    try {
        return json::parse(res->body);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::kParse, what + ": bad response body: " + e.what());
    }
}

} // namespace

struct ProverClient::Impl {
    std::string base_url;
    httplib::Client cli;

    Impl(std::string url, double timeout) : base_url(std::move(url)), cli(base_url) {
        set_timeouts(cli, timeout);
    }
};

ProverClient::ProverClient(std::string base_url, double timeout_seconds)
    : impl_(std::make_unique<Impl>(std::move(base_url), timeout_seconds)) {}

ProverClient::~ProverClient() = default;
ProverClient::ProverClient(ProverClient&&) noexcept = default;
ProverClient& ProverClient::operator=(ProverClient&&) noexcept = default;

CircuitMetadata ProverClient::register_circuit(std::string_view ecs_bytes,
                                               std::optional<std::uint32_t> k) {
    std::string path = "/v1/circuits";
    if (k) {
        path += "?k=" + std::to_string(*k);
    }
    auto res = impl_->cli.Post(path, std::string(ecs_bytes), "application/json");
    return wire::metadata_from_json(expect_json(res, 201, "register circuit"));
}

std::vector<CircuitMetadata> ProverClient::list_circuits(bool rescan) {
    const char* path = rescan ? "/v1/circuits?rescan=true" : "/v1/circuits";
    auto res = impl_->cli.Get(path);
    const json doc = expect_json(res, 200, "list circuits");
    if (!doc.is_array()) {
        throw Error(ErrorCode::kParse, "circuit list: expected a JSON array");
    }
    std::vector<CircuitMetadata> out;
    out.reserve(doc.size());
    for (const json& item : doc) {
        out.push_back(wire::metadata_from_json(item));
    }
    return out;
}

CircuitMetadata ProverClient::circuit(const CircuitId& id) {
    auto res = impl_->cli.Get("/v1/circuits/" + id.hex());
    return wire::metadata_from_json(expect_json(res, 200, "fetch circuit"));
}

bool ProverClient::remove_circuit(const CircuitId& id) {
    auto res = impl_->cli.Delete("/v1/circuits/" + id.hex());
    if (res && res->status == 204) {
        return true;
    }
    if (res && res->status == 404) {
        return false;
    }
    throw_from(res, "remove circuit");
}

ProofResponse ProverClient::prove(const ProofRequest& request) {
    ProofRequest sync_request = request;
    sync_request.async = false;
    auto res = impl_->cli.Post("/v1/proofs",
                               wire::proof_request_to_json(sync_request).dump(),
                               "application/json");
    return wire::proof_response_from_json(expect_json(res, 200, "prove"));
}

JobSnapshot ProverClient::submit_async(const ProofRequest& request) {
    ProofRequest async_request = request;
    async_request.async = true;
    auto res = impl_->cli.Post("/v1/proofs",
                               wire::proof_request_to_json(async_request).dump(),
                               "application/json");
    return wire::job_from_json(expect_json(res, 202, "submit proof job"));
}

JobSnapshot ProverClient::job(const std::string& job_id) {
    auto res = impl_->cli.Get("/v1/jobs/" + job_id);
    return wire::job_from_json(expect_json(res, 200, "fetch job"));
}

JobSnapshot ProverClient::await_job(const std::string& job_id,
                                    double timeout_seconds) {
    const auto deadline =
        std::chrono::steady_clock::now() +
        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
            std::chrono::duration<double>(timeout_seconds));
    for (;;) {
        JobSnapshot snapshot = job(job_id);
        if (snapshot.state == JobState::kDone || snapshot.state == JobState::kFailed) {
            return snapshot;
        }
        if (std::chrono::steady_clock::now() >= deadline) {
            throw Error(ErrorCode::kNetwork, "job " + job_id + " still running after " +
                                                 std::to_string(timeout_seconds) + "s");
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(25));
    }
}

MetricsSnapshot ProverClient::metrics() {
    auto res = impl_->cli.Get("/v1/metrics");
    return wire::metrics_from_json(expect_json(res, 200, "fetch metrics"));
}

ProvingService::Health ProverClient::health() {
    auto res = impl_->cli.Get("/v1/health");
    return wire::health_from_json(expect_json(res, 200, "health check"));
}

const std::string& ProverClient::base_url() const {
    return impl_->base_url;
}

struct VerifierClient::Impl {
    std::string base_url;
    httplib::Client cli;

    Impl(std::string url, double timeout) : base_url(std::move(url)), cli(base_url) {
        set_timeouts(cli, timeout);
    }
};

VerifierClient::VerifierClient(std::string base_url, double timeout_seconds)
    : impl_(std::make_unique<Impl>(std::move(base_url), timeout_seconds)) {}

VerifierClient::~VerifierClient() = default;
VerifierClient::VerifierClient(VerifierClient&&) noexcept = default;
VerifierClient& VerifierClient::operator=(VerifierClient&&) noexcept = default;

VerifyResult VerifierClient::verify(const VerifyStatement& statement) {
    wire::VerifyRequestWire request{statement.circuit_id, statement.public_inputs,
                                    statement.outputs, statement.proof};
    auto res = impl_->cli.Post("/v1/verify", wire::verify_request_to_json(request).dump(),
                               "application/json");
    const json doc = expect_json(res, 200, "verify");
    VerifyResult result;
    result.accepted = doc.value("accepted", false);
    result.reason = doc.value("reason", std::string{});
    return result;
}

ProvingService::Health VerifierClient::health() {
    auto res = impl_->cli.Get("/v1/health");
    const json doc = expect_json(res, 200, "health check");
    ProvingService::Health h;
    h.status = doc.value("status", std::string{});
    h.version = doc.value("version", std::string{});
    h.registry_circuit_count = doc.value("circuits", std::uint64_t{0});
    return h;
}

const std::string& VerifierClient::base_url() const {
    return impl_->base_url;
}

} // namespace zkprov
