// bench: drives experiment configurations against spawned zkprovd instances
// and renders the measurements. `bench run --config <file>` executes the
// experiments; `bench report --in results.csv --out <dir>` re-renders charts
// from an existing results file.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "zkprov/errors.hpp"
#include "zkprov/harness.hpp"
#include "zkprov/report.hpp"

namespace {

std::string read_file_or_die(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw zkprov::Error(zkprov::ErrorCode::kConfig, "cannot read " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

// Default to the zkprovd built alongside this binary.
std::string sibling_zkprovd() {
    char buf[4096];
    const ssize_t n = readlink("/proc/self/exe", buf, sizeof buf - 1);
    if (n <= 0) {
        return "zkprovd";
    }
    buf[n] = '\0';
    return (std::filesystem::path(buf).parent_path() / "zkprovd").string();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bench: proving service benchmark harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "bench-out";
    std::string zkprovd_path = sibling_zkprovd();
    std::string work_dir;
    bool verbose = false;

    CLI::App* run = app.add_subcommand("run", "run the experiments in a config file");
    run->add_option("--config", config_path, "experiment config JSON")->required();
    run->add_option("--out", out_dir, "output directory for results.csv and charts");
    run->add_option("--zkprovd", zkprovd_path, "service binary to spawn")
        ->envname("BENCH_ZKPROVD");
    run->add_option("--work-dir", work_dir,
                    "scratch directory (default: <out>/work)");
    run->add_flag("--verbose", verbose, "progress lines on stderr");

    std::string in_csv;
    CLI::App* report = app.add_subcommand("report", "render charts from a results.csv");
    report->add_option("--in", in_csv, "results.csv produced by bench run")->required();
    report->add_option("--out", out_dir, "output directory")->required();

    CLI11_PARSE(app, argc, argv);
    std::signal(SIGPIPE, SIG_IGN);

    try {
        if (run->parsed()) {
            const auto configs = zkprov::parse_experiment_configs(
                read_file_or_die(config_path));
            zkprov::HarnessOptions options;
            options.zkprovd_path = zkprovd_path;
            options.work_dir = work_dir.empty()
                                   ? std::filesystem::path(out_dir) / "work"
                                   : std::filesystem::path(work_dir);
            options.verbose = verbose;
            std::vector<zkprov::MeasurementRecord> records;
            for (const auto& config : configs) {
                auto batch = zkprov::run_experiment(config, options);
                records.insert(records.end(), batch.begin(), batch.end());
            }
            for (const auto& path : zkprov::write_report(records, out_dir)) {
                std::printf("%s\n", path.c_str());
            }
            return 0;
        }
        const auto records = zkprov::parse_results_csv(read_file_or_die(in_csv));
        if (records.empty()) {
            throw zkprov::Error(zkprov::ErrorCode::kConfig, in_csv + " holds no records");
        }
        for (const auto& path : zkprov::write_report(records, out_dir)) {
            std::printf("%s\n", path.c_str());
        }
        return 0;
    } catch (const zkprov::Error& e) {
        std::fprintf(stderr, "bench: %s: %s\n",
                     std::string(to_string(e.code())).c_str(), e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "bench: %s\n", e.what());
        return 1;
    }
}
