#include "zkprov/verifier_server.hpp"

#include <atomic>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "zkprov/backend.hpp"
#include "zkprov/errors.hpp"
#include "zkprov/json_util.hpp"
#include "zkprov/sysinfo.hpp"
#include "wire_json.hpp"

namespace zkprov {
namespace {

constexpr const char* kJsonType = "application/json";

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
        try {
            fn(req, res);
        } catch (const Error& e) {
            res.status = http_status_for(e.code());
            res.set_content(error_body(e), kJsonType);
        } catch (const std::exception& e) {
            res.status = 500;
            res.set_content(error_body(ErrorCode::kInternal, e.what()), kJsonType);
        }
    };
}

} // namespace

struct VerifierHttpServer::Impl {
    ProofRegistry& registry;
    httplib::Server server;
    std::thread thread;
    std::atomic<int> port{-1};

    explicit Impl(ProofRegistry& reg) : registry(reg) {
        server.new_task_queue = [] { return new httplib::ThreadPool(16); };
        server.set_payload_max_length(std::size_t{1} << 30);

        server.Post("/v1/verify", guarded([this](const httplib::Request& req,
                                                 httplib::Response& res) {
            const wire::VerifyRequestWire request =
                wire::verify_request_from_json(req.body);
            const EntryPtr entry = registry.fetch_entry(request.circuit_id);
            const ProvingBackend& backend = backend_for(entry->vk.backend_id);
            VerifyResult result;
            try {
                result = backend.verify(entry->vk, request.public_inputs,
                                        request.outputs, request.proof_bytes,
                                        entry->ecs);
            } catch (const Error& e) {
                // A proof that cannot be decoded is a malformed request, not
                // a rejection; re-surface it as such.
                if (e.code() == ErrorCode::kParse)
                    throw Error(ErrorCode::kBadRequest, e.what());
                throw;
            }
            nlohmann::json body;
            body["accepted"] = result.accepted;
            body["reason"] = result.reason;
            res.status = 200;
            res.set_content(body.dump(), kJsonType);
        }));

        server.Get("/v1/health", guarded([this](const httplib::Request&,
                                                httplib::Response& res) {
            nlohmann::json body;
            body["status"] = "ok";
            body["version"] = std::string(build_version());
            body["circuits"] = registry.circuit_count();
            res.status = 200;
            res.set_content(body.dump(), kJsonType);
        }));
    }
};

VerifierHttpServer::VerifierHttpServer(ProofRegistry& registry)
    : impl_(std::make_unique<Impl>(registry)) {}

VerifierHttpServer::~VerifierHttpServer() {
    stop();
}

int VerifierHttpServer::bind(std::uint16_t port) {
    int bound = -1;
    if (port == 0) {
        bound = impl_->server.bind_to_any_port("0.0.0.0");
        if (bound <= 0) throw Error(ErrorCode::kNetwork, "failed to bind a port");
    } else {
        if (!impl_->server.bind_to_port("0.0.0.0", port))
            throw Error(ErrorCode::kNetwork,
                        "failed to bind port " + std::to_string(port));
        bound = port;
    }
    impl_->port.store(bound);
    return bound;
}

void VerifierHttpServer::serve() {
    if (impl_->port.load() < 0)
        throw Error(ErrorCode::kNetwork, "serve() before bind()");
    impl_->server.listen_after_bind();
}

void VerifierHttpServer::start() {
    if (impl_->port.load() < 0)
        throw Error(ErrorCode::kNetwork, "start() before bind()");
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void VerifierHttpServer::stop() {
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

int VerifierHttpServer::port() const {
    return impl_->port.load();
}

} // namespace zkprov
