// consumer: requests a proof for its inputs and independently verifies the
// result. Exit codes distinguish every failure class; see --help.

#include <csignal>
#include <cstdio>

#include <CLI11.hpp>

#include "zkprov/consumer.hpp"

int main(int argc, char** argv) {
    CLI::App app{"consumer: prove-then-verify workflow client"};
    app.require_subcommand(1);

    zkprov::ConsumerOptions options;
    CLI::App* run = app.add_subcommand(
        "run",
        "solve inputs into a proof via the prover, then verify the statement.\n"
        "Exit codes: 0 accepted, 2 rejected, 3 unsatisfiable input, 4 circuit "
        "not found,\n5 prover unreachable, 6 verifier unreachable, 7 other "
        "prover error,\n8 other verifier error, 64 usage.");
    run->add_option("--input", options.input_path,
                    "JSON file {\"public\":[...],\"private\":[...]} of decimal strings")
        ->required();
    run->add_option("--circuit", options.circuit_id_hex, "circuit id (64 hex chars)")
        ->required();
    run->add_option("--prover", options.prover_url, "proving service base URL")
        ->required();
    run->add_option("--verifier", options.verifier_url, "verifier service base URL")
        ->required();
    run->add_option("--timeout", options.timeout_seconds,
                    "per-request timeout in seconds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : zkprov::consumer_exit::kUsage;
    }

    std::signal(SIGPIPE, SIG_IGN);
    const zkprov::ConsumerReport report = zkprov::consumer_run(options);
    std::fputs(zkprov::consumer_report_json(report).c_str(), stdout);
    return report.exit_code;
}
