#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zkprov/encoding.hpp"
#include "zkprov/field.hpp"
#include "zkprov/service.hpp"

namespace zkprov {

/// Exit codes of `consumer run`; each failure class is distinguishable so
/// callers can script against the binary.
namespace consumer_exit {
inline constexpr int kAccepted = 0;
inline constexpr int kRejected = 2;        // verifier said no
inline constexpr int kUnsatisfiable = 3;   // witness solving failed
inline constexpr int kNotFound = 4;        // circuit unknown to the prover
inline constexpr int kProverNetwork = 5;   // prover unreachable; verifier not contacted
inline constexpr int kVerifierNetwork = 6;
inline constexpr int kProverError = 7;     // any other prover-side failure
inline constexpr int kVerifierError = 8;
inline constexpr int kUsage = 64;          // bad arguments or input file
} // namespace consumer_exit

struct ConsumerOptions {
    std::string input_path;      // JSON {"public":[...],"private":[...]}
    std::string circuit_id_hex;
    std::string prover_url;
    std::string verifier_url;
    double timeout_seconds = 600.0;
};

struct ConsumerReport {
    bool accepted = false;
    std::string reason;
    std::vector<BigInt> outputs;
    Timings timings;               // prover-reported
    double prove_wall_seconds = 0.0;
    double verify_wall_seconds = 0.0;
    int exit_code = consumer_exit::kUsage;
    std::string error_code;        // empty on success or plain rejection
    std::string error_message;
};

/// Runs the full consumer workflow: read inputs, request a sync proof, hand
/// the statement and proof to the verifier, report the decision. Never
/// throws; every failure is folded into the report's exit_code. When the
/// prover cannot be reached the verifier is not contacted at all.
ConsumerReport consumer_run(const ConsumerOptions& options);

/// The report as printed by the CLI (pretty JSON, trailing newline).
std::string consumer_report_json(const ConsumerReport& report);

/// Parses the input file body. Throws kParse on malformed JSON or values.
void parse_consumer_input(const std::string& body, std::vector<BigInt>& public_inputs,
                          std::vector<BigInt>& private_inputs);

} // namespace zkprov
