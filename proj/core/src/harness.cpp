#include "zkprov/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "zkprov/client.hpp"
#include "zkprov/encoding.hpp"
#include "zkprov/errors.hpp"
#include "zkprov/sysinfo.hpp"

namespace zkprov {
namespace {

using nlohmann::json;

std::uint64_t get_count(const json& value, const char* what) {
    if (!value.is_number_unsigned() || value.get<std::uint64_t>() == 0) {
        throw Error(ErrorCode::kConfig, std::string(what) + " must be a positive integer");
    }
    return value.get<std::uint64_t>();
}

std::vector<std::uint32_t> get_count_list(const json& value, const char* what) {
    std::vector<std::uint32_t> out;
    if (value.is_array()) {
        for (const json& item : value) {
            out.push_back(static_cast<std::uint32_t>(get_count(item, what)));
        }
    } else {
        out.push_back(static_cast<std::uint32_t>(get_count(value, what)));
    }
    if (out.empty()) {
        throw Error(ErrorCode::kConfig, std::string(what) + " must not be empty");
    }
    return out;
}

BigInt get_bigint(const json& value, const char* what) {
    if (value.is_number_unsigned()) {
        return BigInt(value.get<std::uint64_t>());
    }
    if (value.is_string()) {
        try {
            return parse_decimal(value.get<std::string>());
        } catch (const Error& e) {
            throw Error(ErrorCode::kConfig, std::string(what) + ": " + e.what());
        }
    }
    throw Error(ErrorCode::kConfig, std::string(what) + " must be a decimal string");
}

ExperimentConfig parse_one(const json& doc) {
    if (!doc.is_object()) {
        throw Error(ErrorCode::kConfig, "experiment entry must be a JSON object");
    }
    ExperimentConfig config;

    const std::string letter = doc.value("experiment", std::string{});
    if (letter != "A" && letter != "B" && letter != "C") {
        throw Error(ErrorCode::kConfig, "experiment must be \"A\", \"B\" or \"C\"");
    }
    config.experiment = letter[0];

    if (!doc.contains("workload") || !doc["workload"].is_object()) {
        throw Error(ErrorCode::kConfig, "experiment needs a workload object");
    }
    const json& wl = doc["workload"];
    config.workload.n = get_count(wl.at("n"), "workload.n");
    if (wl.contains("modulus")) {
        config.workload.modulus = get_bigint(wl["modulus"], "workload.modulus");
    }
    if (wl.contains("seed_input")) {
        config.workload.seed_input = get_bigint(wl["seed_input"], "workload.seed_input");
    }

    if (doc.contains("total_requests")) {
        config.total_requests = get_count(doc["total_requests"], "total_requests");
    }
    if (doc.contains("workers_per_instance")) {
        config.workers_per_instance =
            get_count_list(doc["workers_per_instance"], "workers_per_instance");
    } else if (doc.contains("workers")) {
        config.workers_per_instance = get_count_list(doc["workers"], "workers");
    }
    if (doc.contains("instance_counts")) {
        config.instance_counts = get_count_list(doc["instance_counts"], "instance_counts");
    } else if (doc.contains("instances")) {
        config.instance_counts = get_count_list(doc["instances"], "instances");
    }
    if (doc.contains("warmup_requests")) {
        // Zero is allowed: warmup is a default, not a requirement.
        const json& w = doc["warmup_requests"];
        if (!w.is_number_unsigned()) {
            throw Error(ErrorCode::kConfig, "warmup_requests must be a non-negative integer");
        }
        config.warmup_requests = w.get<std::uint32_t>();
    }
    if (doc.contains("max_in_flight")) {
        config.max_in_flight =
            static_cast<std::uint32_t>(get_count(doc["max_in_flight"], "max_in_flight"));
    }
    if (doc.contains("k")) {
        config.k = static_cast<std::uint32_t>(get_count(doc["k"], "k"));
    }
    if (doc.contains("caps")) {
        const json& caps = doc["caps"];
        if (!caps.is_object()) {
            throw Error(ErrorCode::kConfig, "caps must be an object");
        }
        ResourceCaps rc;
        if (caps.contains("memory_gb")) {
            const double gb = caps["memory_gb"].get<double>();
            if (!(gb > 0)) {
                throw Error(ErrorCode::kConfig, "caps.memory_gb must be positive");
            }
            rc.memory_bytes = static_cast<std::uint64_t>(gb * (std::uint64_t{1} << 30));
        }
        if (caps.contains("cpus")) {
            const auto cpus = static_cast<int>(get_count(caps["cpus"], "caps.cpus"));
            for (int i = 0; i < cpus; ++i) rc.cpus.push_back(i);
        }
        config.caps = std::move(rc);
    }

    const std::uint32_t max_instances =
        *std::max_element(config.instance_counts.begin(), config.instance_counts.end());
    if (config.total_requests < max_instances) {
        throw Error(ErrorCode::kConfig,
                    "total_requests must be at least the instance count");
    }
    return config;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

std::string tail_of(const std::string& text, std::size_t max_bytes = 2000) {
    if (text.size() <= max_bytes) return text;
    return text.substr(text.size() - max_bytes);
}

struct Instance {
    ChildProcess process;
    std::string url;
    std::filesystem::path stderr_path;
};

/// Applies caps with a host-feasibility clamp; advisory = the host could not
/// honor the request exactly, reported in the experiment label.
ResourceCaps effective_caps(const ResourceCaps& requested, bool& advisory) {
    ResourceCaps caps = requested;
    const unsigned hw = hardware_threads();
    if (caps.cpus.size() > hw) {
        caps.cpus.resize(hw);
        advisory = true;
    }
    return caps;
}

std::string experiment_label(const ExperimentConfig& config, bool advisory) {
    std::string label(1, config.experiment);
    if (!config.caps) {
        return label;
    }
    std::string detail;
    if (config.caps->memory_bytes > 0) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "mem=%.2fgb",
                      static_cast<double>(config.caps->memory_bytes) /
                          static_cast<double>(std::uint64_t{1} << 30));
        detail += buf;
    }
    if (!config.caps->cpus.empty()) {
        if (!detail.empty()) detail += ";";
        detail += "cpus=" + std::to_string(config.caps->cpus.size());
    }
    if (advisory) label += "-advisory";
    if (!detail.empty()) label += "[" + detail + "]";
    return label;
}

Instance start_instance(const ExperimentConfig& config, const HarnessOptions& options,
                        const std::filesystem::path& dir, std::uint32_t workers,
                        const ResourceCaps& caps) {
    std::filesystem::create_directories(dir);
    const auto port_file = dir / "port";
    const auto queue_capacity = std::max<std::uint32_t>(16, config.max_in_flight * 2);

    SpawnOptions spawn;
    spawn.exe = options.zkprovd_path;
    spawn.args = {"--port", "0",
                  "--port-file", port_file.string(),
                  "--workers", std::to_string(workers),
                  "--queue-capacity", std::to_string(queue_capacity),
                  "--registry-root", (dir / "registry").string(),
                  "--retention-seconds", "600",
                  "--default-k", std::to_string(config.k)};
    spawn.caps = caps;
    spawn.stdout_path = (dir / "stdout.log").string();
    spawn.stderr_path = (dir / "stderr.log").string();

    Instance instance;
    instance.stderr_path = dir / "stderr.log";
    instance.process = ChildProcess::spawn(spawn);

    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(options.startup_timeout_seconds));
    int port = 0;
    for (;;) {
        if (instance.process.try_wait()) {
            throw Error(ErrorCode::kInternal,
                        "service instance exited during startup: " +
                            tail_of(read_text_file(instance.stderr_path)));
        }
        std::ifstream in(port_file);
        if (in >> port && port > 0) break;
        if (std::chrono::steady_clock::now() >= deadline) {
            throw Error(ErrorCode::kInternal,
                        "service instance did not publish a port within " +
                            std::to_string(options.startup_timeout_seconds) + "s: " +
                            tail_of(read_text_file(instance.stderr_path)));
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    instance.url = "http://127.0.0.1:" + std::to_string(port);

    for (;;) {
        try {
            ProverClient client(instance.url, 2.0);
            if (client.health().status == "ok") break;
        } catch (const Error&) {
        }
        if (std::chrono::steady_clock::now() >= deadline) {
            throw Error(ErrorCode::kInternal,
                        "service instance never became healthy: " +
                            tail_of(read_text_file(instance.stderr_path)));
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    return instance;
}

} // namespace

std::vector<ExperimentConfig> parse_experiment_configs(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::kParse, std::string("bench config: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("experiments") ||
        !doc["experiments"].is_array() || doc["experiments"].empty()) {
        throw Error(ErrorCode::kConfig,
                    "bench config must be {\"experiments\":[...]} with at least one entry");
    }
    std::vector<ExperimentConfig> out;
    for (const json& entry : doc["experiments"]) {
        out.push_back(parse_one(entry));
    }
    return out;
}

double percentile(std::vector<double> samples, double q) {
    if (samples.empty()) return 0.0;
    std::sort(samples.begin(), samples.end());
    const double rank = q * static_cast<double>(samples.size());
    auto index = static_cast<std::size_t>(std::ceil(rank));
    if (index > 0) index -= 1;
    if (index >= samples.size()) index = samples.size() - 1;
    return samples[index];
}

std::vector<MeasurementRecord> run_experiment(const ExperimentConfig& config,
                                              const HarnessOptions& options) {
    const Workload workload = generate_workload(config.workload);
    const std::string ecs_bytes = encode_circuit(workload.ecs);
    const CircuitId id = circuit_id(workload.ecs);

    bool advisory = false;
    const ResourceCaps caps =
        config.caps ? effective_caps(*config.caps, advisory) : ResourceCaps{};
    const std::string label = experiment_label(config, advisory);

    const auto log = [&](const std::string& line) {
        if (options.verbose) std::fprintf(stderr, "[bench] %s\n", line.c_str());
    };

    std::vector<MeasurementRecord> records;
    std::size_t point_index = 0;
    for (const std::uint32_t instances_wanted : config.instance_counts) {
        for (const std::uint32_t workers : config.workers_per_instance) {
            const auto point_dir =
                options.work_dir / (label.substr(0, 1) + "-point" + std::to_string(point_index));
            ++point_index;
            log("point " + std::to_string(point_index) + ": instances=" +
                std::to_string(instances_wanted) + " workers=" + std::to_string(workers) +
                " n=" + std::to_string(config.workload.n));

            std::vector<Instance> instances;
            instances.reserve(instances_wanted);
            for (std::uint32_t i = 0; i < instances_wanted; ++i) {
                instances.push_back(start_instance(
                    config, options, point_dir / ("instance-" + std::to_string(i)),
                    workers, caps));
            }

            for (Instance& instance : instances) {
                ProverClient client(instance.url, options.request_timeout_seconds);
                client.register_circuit(ecs_bytes, config.k);
                for (std::uint32_t w = 0; w < config.warmup_requests; ++w) {
                    client.prove(
                        ProofRequest{id, workload.public_inputs, {}, false});
                }
            }

            std::atomic<std::uint64_t> next{0};
            std::mutex agg_mutex;
            std::vector<double> prove_samples;
            std::uint64_t rejects = 0;
            std::exception_ptr failure;

            const auto measured_start = std::chrono::steady_clock::now();
            const std::uint32_t pool =
                static_cast<std::uint32_t>(std::min<std::uint64_t>(
                    config.max_in_flight, config.total_requests));
            std::vector<std::thread> drivers;
            drivers.reserve(pool);
            for (std::uint32_t t = 0; t < pool; ++t) {
                drivers.emplace_back([&] {
                    std::vector<std::unique_ptr<ProverClient>> clients(instances.size());
                    for (;;) {
                        const std::uint64_t i = next.fetch_add(1);
                        if (i >= config.total_requests) return;
                        const std::size_t target = i % instances.size();
                        if (!clients[target]) {
                            clients[target] = std::make_unique<ProverClient>(
                                instances[target].url, options.request_timeout_seconds);
                        }
                        try {
                            const ProofResponse response = clients[target]->prove(
                                ProofRequest{id, workload.public_inputs, {}, false});
                            std::lock_guard lock(agg_mutex);
                            prove_samples.push_back(response.timings.prove_seconds);
                        } catch (const Error& e) {
                            std::lock_guard lock(agg_mutex);
                            if (e.code() == ErrorCode::kOverloaded) {
                                ++rejects;
                            } else if (!failure) {
                                failure = std::current_exception();
                            }
                        }
                    }
                });
            }
            for (std::thread& t : drivers) t.join();
            const double wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              measured_start)
                    .count();
            if (failure) std::rethrow_exception(failure);

            std::uint64_t peak_rss_bytes = 0;
            for (Instance& instance : instances) {
                ProverClient client(instance.url, options.request_timeout_seconds);
                peak_rss_bytes =
                    std::max(peak_rss_bytes, client.metrics().peak_rss_bytes);
            }
            for (Instance& instance : instances) {
                instance.process.terminate(10.0);
            }

            MeasurementRecord record;
            record.experiment = label;
            record.instances = instances_wanted;
            record.workers = workers;
            record.n_constraints = config.workload.n;
            if (!prove_samples.empty()) {
                double sum = 0;
                for (double s : prove_samples) sum += s;
                record.avg_prove_s = sum / static_cast<double>(prove_samples.size());
                record.p50_s = percentile(prove_samples, 0.50);
                record.p95_s = percentile(prove_samples, 0.95);
                record.throughput_pps =
                    static_cast<double>(prove_samples.size()) / wall_seconds;
            }
            record.peak_rss_gb = static_cast<double>(peak_rss_bytes) /
                                 static_cast<double>(std::uint64_t{1} << 30);
            record.rejects = rejects;
            log("point done: avg=" + std::to_string(record.avg_prove_s) +
                "s throughput=" + std::to_string(record.throughput_pps) + "pps");
            records.push_back(std::move(record));
        }
    }
    return records;
}

} // namespace zkprov
