#include "zkprov/consumer.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "zkprov/client.hpp"
#include "zkprov/errors.hpp"
#include "wire_json.hpp"

namespace zkprov {
namespace {

using nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

ConsumerReport usage_failure(std::string message) {
    ConsumerReport report;
    report.exit_code = consumer_exit::kUsage;
    report.error_code = std::string(to_string(ErrorCode::kParse));
    report.error_message = std::move(message);
    report.reason = "usage";
    return report;
}

int prover_exit_code(const Error& e) {
    switch (e.code()) {
    case ErrorCode::kNetwork:
        return consumer_exit::kProverNetwork;
    case ErrorCode::kNotFound:
        return consumer_exit::kNotFound;
    case ErrorCode::kUnsatisfiableInput:
    case ErrorCode::kDivisionByZero:
        return consumer_exit::kUnsatisfiable;
    default:
        return consumer_exit::kProverError;
    }
}

} // namespace

void parse_consumer_input(const std::string& body, std::vector<BigInt>& public_inputs,
                          std::vector<BigInt>& private_inputs) {
    const json doc = wire::parse_json(body, "consumer input");
    if (!doc.is_object() || !doc.contains("public") || !doc.contains("private")) {
        throw Error(ErrorCode::kParse,
                    "consumer input must be {\"public\":[...],\"private\":[...]}");
    }
    public_inputs = wire::decimals_from_json(doc["public"], "public");
    private_inputs = wire::decimals_from_json(doc["private"], "private");
}

ConsumerReport consumer_run(const ConsumerOptions& options) {
    ConsumerReport report;

    CircuitId circuit_id;
    try {
        circuit_id = CircuitId::from_hex(options.circuit_id_hex);
    } catch (const Error& e) {
        return usage_failure(std::string("bad circuit id: ") + e.what());
    }

    std::ifstream in(options.input_path, std::ios::binary);
    if (!in) {
        return usage_failure("cannot read input file " + options.input_path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();

    ProofRequest request;
    request.circuit_id = circuit_id;
    try {
        parse_consumer_input(buf.str(), request.public_inputs, request.private_inputs);
    } catch (const Error& e) {
        return usage_failure(e.what());
    }

    ProofResponse response;
    try {
        ProverClient prover(options.prover_url, options.timeout_seconds);
        const auto start = std::chrono::steady_clock::now();
        response = prover.prove(request);
        report.prove_wall_seconds = seconds_since(start);
    } catch (const Error& e) {
        report.exit_code = prover_exit_code(e);
        report.error_code = std::string(to_string(e.code()));
        report.error_message = e.what();
        report.reason = "prover-failed";
        return report;
    }
    report.outputs = response.outputs;
    report.timings = response.timings;

    VerifyResult decision;
    try {
        VerifierClient verifier(options.verifier_url, options.timeout_seconds);
        const auto start = std::chrono::steady_clock::now();
        decision = verifier.verify(VerifyStatement{circuit_id, request.public_inputs,
                                                   response.outputs, response.proof});
        report.verify_wall_seconds = seconds_since(start);
    } catch (const Error& e) {
        report.exit_code = e.code() == ErrorCode::kNetwork
                               ? consumer_exit::kVerifierNetwork
                               : consumer_exit::kVerifierError;
        report.error_code = std::string(to_string(e.code()));
        report.error_message = e.what();
        report.reason = "verifier-failed";
        return report;
    }

    report.accepted = decision.accepted;
    report.reason = decision.reason;
    report.exit_code =
        decision.accepted ? consumer_exit::kAccepted : consumer_exit::kRejected;
    return report;
}

std::string consumer_report_json(const ConsumerReport& report) {
    json doc;
    doc["accepted"] = report.accepted;
    doc["reason"] = report.reason;
    doc["outputs"] = wire::decimals_to_json(report.outputs);
    doc["timings"] = json{{"witness_seconds", report.timings.witness_seconds},
                          {"prove_seconds", report.timings.prove_seconds},
                          {"queue_seconds", report.timings.queue_seconds}};
    doc["proof_time_seconds"] = report.prove_wall_seconds;
    doc["verify_time_seconds"] = report.verify_wall_seconds;
    doc["exit_code"] = report.exit_code;
    if (!report.error_message.empty()) {
        doc["error"] =
            json{{"code", report.error_code}, {"message", report.error_message}};
    }
    return doc.dump(2) + "\n";
}

} // namespace zkprov
