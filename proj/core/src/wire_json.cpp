#include "wire_json.hpp"

#include "zkprov/errors.hpp"
#include "zkprov/json_util.hpp"

namespace zkprov::wire {
namespace {

using nlohmann::json;

const json& member(const json& obj, const char* key, const char* what) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw Error(ErrorCode::kParse,
                    std::string(what) + ": missing key \"" + key + "\"");
    }
    return *it;
}

std::string get_string(const json& j, const char* what) {
    if (!j.is_string()) {
        throw Error(ErrorCode::kParse, std::string(what) + " must be a string");
    }
    return j.get<std::string>();
}

} // namespace

json parse_json(std::string_view body, const char* what) {
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::kParse, std::string(what) + ": " + e.what());
    }
}

json decimals_to_json(const std::vector<BigInt>& values) {
    json arr = json::array();
    for (const BigInt& v : values) {
        arr.push_back(to_decimal(v));
    }
    return arr;
}

std::vector<BigInt> decimals_from_json(const json& arr, const char* what) {
    if (!arr.is_array()) {
        throw Error(ErrorCode::kParse, std::string(what) + " must be an array");
    }
    std::vector<BigInt> out;
    out.reserve(arr.size());
    for (const json& v : arr) {
        try {
            out.push_back(parse_decimal(get_string(v, what)));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::kParse) {
                throw Error(ErrorCode::kParse, std::string(what) + "[" +
                                                   std::to_string(out.size()) +
                                                   "]: " + e.what());
            }
            throw;
        }
    }
    return out;
}

CircuitId circuit_id_from_json(const json& value, const char* what) {
    try {
        return CircuitId::from_hex(get_string(value, what));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::kParse) {
            throw Error(ErrorCode::kParse, std::string(what) + ": " + e.what());
        }
        throw;
    }
}

json metadata_to_json(const CircuitMetadata& md) {
    json doc;
    doc["id"] = md.id.hex();
    doc["name"] = md.name;
    doc["constraint_count"] = md.constraint_count;
    doc["num_public_inputs"] = md.num_public_inputs;
    doc["num_public_outputs"] = md.num_public_outputs;
    doc["created_at"] = md.created_at;
    return doc;
}

CircuitMetadata metadata_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw Error(ErrorCode::kParse, "circuit metadata must be an object");
    }
    CircuitMetadata md;
    md.id = circuit_id_from_json(member(doc, "id", "circuit metadata"), "circuit metadata id");
    md.name = get_string(member(doc, "name", "circuit metadata"), "circuit metadata name");
    md.constraint_count = member(doc, "constraint_count", "circuit metadata").get<std::uint64_t>();
    md.num_public_inputs =
        member(doc, "num_public_inputs", "circuit metadata").get<std::uint32_t>();
    md.num_public_outputs =
        member(doc, "num_public_outputs", "circuit metadata").get<std::uint32_t>();
    md.created_at = get_string(member(doc, "created_at", "circuit metadata"), "created_at");
    return md;
}

json proof_response_to_json(const ProofResponse& response) {
    json doc;
    doc["circuit_id"] = response.circuit_id.hex();
    doc["proof"] = parse_json(response.proof, "proof encoding");
    doc["outputs"] = decimals_to_json(response.outputs);
    doc["timings"] = json{{"witness_seconds", response.timings.witness_seconds},
                          {"prove_seconds", response.timings.prove_seconds},
                          {"queue_seconds", response.timings.queue_seconds}};
    doc["peak_rss_bytes"] = response.peak_rss_bytes;
    return doc;
}

ProofResponse proof_response_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw Error(ErrorCode::kParse, "proof response must be an object");
    }
    ProofResponse out;
    out.circuit_id =
        circuit_id_from_json(member(doc, "circuit_id", "proof response"), "circuit_id");
    const json& proof = member(doc, "proof", "proof response");
    out.proof = proof.is_string() ? proof.get<std::string>() : proof.dump();
    out.outputs = decimals_from_json(member(doc, "outputs", "proof response"), "outputs");
    const json& timings = member(doc, "timings", "proof response");
    out.timings.witness_seconds = member(timings, "witness_seconds", "timings").get<double>();
    out.timings.prove_seconds = member(timings, "prove_seconds", "timings").get<double>();
    out.timings.queue_seconds = member(timings, "queue_seconds", "timings").get<double>();
    out.peak_rss_bytes = member(doc, "peak_rss_bytes", "proof response").get<std::uint64_t>();
    return out;
}

json job_to_json(const JobSnapshot& job) {
    json doc;
    doc["job_id"] = job.job_id;
    doc["state"] = std::string(to_string(job.state));
    doc["submitted_at"] = job.submitted_at;
    if (!job.started_at.empty()) {
        doc["started_at"] = job.started_at;
    }
    if (!job.finished_at.empty()) {
        doc["finished_at"] = job.finished_at;
    }
    if (job.result) {
        doc["result"] = proof_response_to_json(*job.result);
    }
    if (job.error) {
        json err;
        err["code"] = std::string(to_string(job.error->code));
        err["message"] = job.error->message;
        if (job.error->index >= 0) {
            err["index"] = job.error->index;
        }
        doc["error"] = std::move(err);
    }
    return doc;
}

JobSnapshot job_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw Error(ErrorCode::kParse, "job must be an object");
    }
    JobSnapshot job;
    job.job_id = get_string(member(doc, "job_id", "job"), "job_id");
    std::string state = get_string(member(doc, "state", "job"), "job state");
    if (state == "queued") {
        job.state = JobState::kQueued;
    } else if (state == "running") {
        job.state = JobState::kRunning;
    } else if (state == "done") {
        job.state = JobState::kDone;
    } else if (state == "failed") {
        job.state = JobState::kFailed;
    } else {
        throw Error(ErrorCode::kParse, "unknown job state \"" + state + "\"");
    }
    job.submitted_at = get_string(member(doc, "submitted_at", "job"), "submitted_at");
    job.started_at = doc.value("started_at", std::string{});
    job.finished_at = doc.value("finished_at", std::string{});
    if (doc.contains("result")) {
        job.result = proof_response_from_json(doc["result"]);
    }
    if (doc.contains("error")) {
        const json& err = doc["error"];
        JobError je;
        je.message = err.value("message", std::string{});
        je.index = err.value("index", std::int64_t{-1});
        je.code = error_code_from_string(err.value("code", std::string{"internal"}));
        job.error = std::move(je);
    }
    return job;
}

namespace {

json histogram_to_json(const HistogramSnapshot& h) {
    json buckets = json::array();
    const auto& bounds = Histogram::bounds();
    for (std::size_t i = 0; i < h.bucket_counts.size(); ++i) {
        json bucket;
        if (i < bounds.size()) {
            bucket["le"] = bounds[i];
        } else {
            bucket["le"] = "+inf";
        }
        bucket["count"] = h.bucket_counts[i];
        buckets.push_back(std::move(bucket));
    }
    return json{{"count", h.count}, {"sum", h.sum},          {"min", h.min},
                {"max", h.max},     {"buckets", std::move(buckets)}};
}

} // namespace

json metrics_to_json(const MetricsSnapshot& snapshot) {
    json doc;
    doc["counters"] = json{{"jobs_done", snapshot.jobs_done},
                           {"jobs_failed", snapshot.jobs_failed},
                           {"rejected_overloaded", snapshot.rejected_overloaded},
                           {"rejected_not_found", snapshot.rejected_not_found},
                           {"rejected_bad_request", snapshot.rejected_bad_request}};
    doc["gauges"] = json{{"queue_depth", snapshot.queue_depth},
                         {"busy_workers", snapshot.busy_workers},
                         {"peak_rss_bytes", snapshot.peak_rss_bytes}};
    doc["histograms"] = json{{"witness_seconds", histogram_to_json(snapshot.witness_seconds)},
                             {"prove_seconds", histogram_to_json(snapshot.prove_seconds)},
                             {"queue_seconds", histogram_to_json(snapshot.queue_seconds)}};
    return doc;
}

MetricsSnapshot metrics_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("counters") || !doc.contains("gauges") ||
        !doc.contains("histograms")) {
        throw Error(ErrorCode::kParse, "malformed metrics document");
    }
    const auto histogram = [&](const char* name) {
        HistogramSnapshot h;
        const json& hd = doc["histograms"].value(name, json::object());
        h.count = hd.value("count", std::uint64_t{0});
        h.sum = hd.value("sum", 0.0);
        h.min = hd.value("min", 0.0);
        h.max = hd.value("max", 0.0);
        for (const json& bucket : hd.value("buckets", json::array())) {
            h.bucket_counts.push_back(bucket.value("count", std::uint64_t{0}));
        }
        return h;
    };
    MetricsSnapshot s;
    const json& c = doc["counters"];
    s.jobs_done = c.value("jobs_done", std::uint64_t{0});
    s.jobs_failed = c.value("jobs_failed", std::uint64_t{0});
    s.rejected_overloaded = c.value("rejected_overloaded", std::uint64_t{0});
    s.rejected_not_found = c.value("rejected_not_found", std::uint64_t{0});
    s.rejected_bad_request = c.value("rejected_bad_request", std::uint64_t{0});
    const json& g = doc["gauges"];
    s.queue_depth = g.value("queue_depth", std::int64_t{0});
    s.busy_workers = g.value("busy_workers", std::int64_t{0});
    s.peak_rss_bytes = g.value("peak_rss_bytes", std::uint64_t{0});
    s.witness_seconds = histogram("witness_seconds");
    s.prove_seconds = histogram("prove_seconds");
    s.queue_seconds = histogram("queue_seconds");
    return s;
}

json health_to_json(const ProvingService::Health& health) {
    return json{{"status", health.status},
                {"version", health.version},
                {"registry_circuit_count", health.registry_circuit_count}};
}

ProvingService::Health health_from_json(const json& doc) {
    if (!doc.is_object()) {
        throw Error(ErrorCode::kParse, "malformed health document");
    }
    ProvingService::Health h;
    h.status = doc.value("status", std::string{});
    h.version = doc.value("version", std::string{});
    h.registry_circuit_count = doc.value("registry_circuit_count", std::uint64_t{0});
    return h;
}

ProofRequest proof_request_from_json(std::string_view body) {
    json doc = parse_json(body, "proof request");
    if (!doc.is_object()) {
        throw Error(ErrorCode::kParse, "proof request must be a JSON object");
    }
    ProofRequest request;
    request.circuit_id =
        circuit_id_from_json(member(doc, "circuit_id", "proof request"), "circuit_id");
    request.public_inputs =
        decimals_from_json(member(doc, "public_inputs", "proof request"), "public_inputs");
    request.private_inputs =
        decimals_from_json(member(doc, "private_inputs", "proof request"), "private_inputs");
    if (doc.contains("mode")) {
        std::string mode = get_string(doc["mode"], "mode");
        if (mode == "async") {
            request.async = true;
        } else if (mode == "sync") {
            request.async = false;
        } else {
            throw Error(ErrorCode::kParse, "mode must be \"sync\" or \"async\"");
        }
    }
    return request;
}

json proof_request_to_json(const ProofRequest& request) {
    json doc;
    doc["circuit_id"] = request.circuit_id.hex();
    doc["public_inputs"] = decimals_to_json(request.public_inputs);
    doc["private_inputs"] = decimals_to_json(request.private_inputs);
    doc["mode"] = request.async ? "async" : "sync";
    return doc;
}

VerifyRequestWire verify_request_from_json(std::string_view body) {
    json doc = parse_json(body, "verify request");
    if (!doc.is_object()) {
        throw Error(ErrorCode::kParse, "verify request must be a JSON object");
    }
    VerifyRequestWire request;
    request.circuit_id =
        circuit_id_from_json(member(doc, "circuit_id", "verify request"), "circuit_id");
    request.public_inputs =
        decimals_from_json(member(doc, "public_inputs", "verify request"), "public_inputs");
    request.outputs = decimals_from_json(member(doc, "outputs", "verify request"), "outputs");
    const json& proof = member(doc, "proof", "verify request");
    request.proof_bytes = proof.is_string() ? proof.get<std::string>() : proof.dump();
    return request;
}

json verify_request_to_json(const VerifyRequestWire& request) {
    json doc;
    doc["circuit_id"] = request.circuit_id.hex();
    doc["public_inputs"] = decimals_to_json(request.public_inputs);
    doc["outputs"] = decimals_to_json(request.outputs);
    doc["proof"] = parse_json(request.proof_bytes, "proof encoding");
    return doc;
}

} // namespace zkprov::wire
