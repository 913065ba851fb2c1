#include "zkprov/http_server.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "zkprov/encoding.hpp"
#include "zkprov/errors.hpp"
#include "zkprov/json_util.hpp"
#include "wire_json.hpp"

namespace zkprov {
namespace {

constexpr const char* kJsonType = "application/json";

void send_json(httplib::Response& res, int status, const std::string& body) {
    res.status = status;
    res.set_content(body, kJsonType);
}

void send_error(httplib::Response& res, const Error& e) {
    send_json(res, http_status_for(e.code()), error_body(e));
}

// Every handler runs under this so a thrown Error maps onto its status code
// and nothing escapes to httplib (which would close the connection bare).
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
        try {
            fn(req, res);
        } catch (const Error& e) {
            send_error(res, e);
        } catch (const std::exception& e) {
            send_json(res, 500, error_body(ErrorCode::kInternal, e.what()));
        }
    };
}

CircuitId circuit_id_param(const httplib::Request& req) {
    const auto it = req.path_params.find("id");
    if (it == req.path_params.end())
        throw Error(ErrorCode::kBadRequest, "missing circuit id");
    try {
        return CircuitId::from_hex(it->second);
    } catch (const Error&) {
        throw Error(ErrorCode::kBadRequest,
                    "circuit id must be 64 lowercase hex characters");
    }
}

std::uint32_t parse_k_param(const std::string& raw) {
    if (raw.empty() || raw.size() > 9 ||
        !std::all_of(raw.begin(), raw.end(),
                     [](char c) { return c >= '0' && c <= '9'; }))
        throw Error(ErrorCode::kBadRequest, "k must be a positive integer");
    const unsigned long value = std::stoul(raw);
    if (value == 0)
        throw Error(ErrorCode::kBadRequest, "k must be a positive integer");
    return static_cast<std::uint32_t>(value);
}

} // namespace

struct ProvingHttpServer::Impl {
    ProvingService& service;
    httplib::Server server;
    std::thread thread;
    std::atomic<int> port{-1};

    explicit Impl(ProvingService& svc) : service(svc) {
        // Sync proof handlers park on the job condition variable, so keep
        // enough handler threads that admission control, not the accept
        // queue, is what says no.
        const std::size_t pool = std::max<std::size_t>(
            16, service.config().worker_count + service.config().queue_capacity + 8);
        server.new_task_queue = [pool] { return new httplib::ThreadPool(pool); };
        server.set_payload_max_length(std::size_t{1} << 30);
        routes();
    }

    void routes() {
        server.Post("/v1/circuits", guarded([this](const httplib::Request& req,
                                                   httplib::Response& res) {
            std::uint32_t k = service.config().default_k;
            if (req.has_param("k")) k = parse_k_param(req.get_param_value("k"));
            const CircuitArtifact ecs = decode_circuit(req.body);
            const CircuitMetadata md = service.registry().register_circuit(ecs, k);
            send_json(res, 201, wire::metadata_to_json(md).dump());
        }));

        server.Get("/v1/circuits", guarded([this](const httplib::Request& req,
                                                  httplib::Response& res) {
            if (req.get_param_value("rescan") == "true") service.registry().rescan();
            nlohmann::json out = nlohmann::json::array();
            for (const CircuitMetadata& md : service.registry().list_circuits())
                out.push_back(wire::metadata_to_json(md));
            send_json(res, 200, out.dump());
        }));

        server.Get("/v1/circuits/:id", guarded([this](const httplib::Request& req,
                                                      httplib::Response& res) {
            const EntryPtr entry = service.registry().fetch_entry(circuit_id_param(req));
            send_json(res, 200, wire::metadata_to_json(metadata_of(*entry)).dump());
        }));

        server.Delete("/v1/circuits/:id", guarded([this](const httplib::Request& req,
                                                         httplib::Response& res) {
            if (!service.registry().remove_circuit(circuit_id_param(req)))
                throw Error(ErrorCode::kNotFound, "circuit not found");
            res.status = 204;
        }));

        server.Post("/v1/proofs", guarded([this](const httplib::Request& req,
                                                 httplib::Response& res) {
            const ProofRequest request = wire::proof_request_from_json(req.body);
            if (request.async) {
                const JobSnapshot job = service.submit_async(request);
                send_json(res, 202, wire::job_to_json(job).dump());
            } else {
                const ProofResponse response = service.submit_sync(request);
                send_json(res, 200, wire::proof_response_to_json(response).dump());
            }
        }));

        server.Get("/v1/jobs/:id", guarded([this](const httplib::Request& req,
                                                  httplib::Response& res) {
            const auto it = req.path_params.find("id");
            const JobSnapshot job =
                service.get_job(it == req.path_params.end() ? "" : it->second);
            send_json(res, 200, wire::job_to_json(job).dump());
        }));

        server.Get("/v1/metrics", guarded([this](const httplib::Request&,
                                                 httplib::Response& res) {
            send_json(res, 200, wire::metrics_to_json(service.metrics_snapshot()).dump());
        }));

        server.Get("/v1/health", guarded([this](const httplib::Request&,
                                                httplib::Response& res) {
            send_json(res, 200, wire::health_to_json(service.health()).dump());
        }));
    }
};

ProvingHttpServer::ProvingHttpServer(ProvingService& service)
    : impl_(std::make_unique<Impl>(service)) {}

ProvingHttpServer::~ProvingHttpServer() {
    stop();
}

int ProvingHttpServer::bind(std::uint16_t port) {
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

void ProvingHttpServer::serve() {
    if (impl_->port.load() < 0)
        throw Error(ErrorCode::kNetwork, "serve() before bind()");
    if (!impl_->server.listen_after_bind() && impl_->port.load() >= 0)
        throw Error(ErrorCode::kNetwork, "listener failed");
}

void ProvingHttpServer::start() {
    if (impl_->port.load() < 0)
        throw Error(ErrorCode::kNetwork, "start() before bind()");
    impl_->thread = std::thread([this] {
        impl_->server.listen_after_bind();
    });
    impl_->server.wait_until_ready();
}

void ProvingHttpServer::stop() {
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

int ProvingHttpServer::port() const {
    return impl_->port.load();
}

} // namespace zkprov
