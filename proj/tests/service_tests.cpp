#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <mutex>
#include <thread>
#include <vector>

#include "zkprov/backend.hpp"
#include "zkprov/errors.hpp"
#include "zkprov/service.hpp"
#include "zkprov/sysinfo.hpp"
#include "zkprov/workload.hpp"

#include "checks.hpp"
#include "support.hpp"

using namespace zkprov;
using namespace zkprov::testsupport;
using namespace std::chrono_literals;

namespace {

ServiceConfig config_for(const TempDir& dir, std::uint32_t workers = 2,
                         std::uint32_t queue = 16) {
    ServiceConfig cfg;
    cfg.worker_count = workers;
    cfg.queue_capacity = queue;
    cfg.registry_root = dir.path();
    return cfg;
}

JobSnapshot await_terminal(ProvingService& svc, const std::string& job_id,
                           std::chrono::seconds deadline = 60s) {
    auto until = std::chrono::steady_clock::now() + deadline;
    while (std::chrono::steady_clock::now() < until) {
        JobSnapshot snap = svc.get_job(job_id);
        if (snap.state == JobState::kDone || snap.state == JobState::kFailed) {
            return snap;
        }
        std::this_thread::sleep_for(2ms);
    }
    FAIL("job ", job_id, " did not finish in time");
    return {};
}

} // namespace

TEST_SUITE("service") {

TEST_CASE("sync proving round-trips and the proof verifies") {
    TempDir dir("service");
    ProvingService svc(config_for(dir));
    auto ecs = square_circuit(field97());
    CircuitMetadata meta = svc.registry().register_circuit(ecs, 30);

    ProofRequest req;
    req.circuit_id = meta.id;
    req.private_inputs = {3};
    ProofResponse resp = svc.submit_sync(req);

    CHECK(resp.circuit_id == meta.id);
    CHECK(resp.outputs == std::vector<BigInt>{9});
    CHECK_FALSE(resp.proof.empty());
    CHECK(resp.timings.witness_seconds >= 0.0);
    CHECK(resp.timings.prove_seconds >= 0.0);
    CHECK(resp.timings.queue_seconds >= 0.0);
    CHECK(resp.peak_rss_bytes > 0);

    EntryPtr entry = svc.registry().fetch_entry(meta.id);
    VerifyResult v = backend_for(entry->vk.backend_id)
                         .verify(entry->vk, {}, resp.outputs, resp.proof, entry->ecs);
    CHECK(v.accepted);
}

TEST_CASE("async submission runs the same pipeline as sync") {
    TempDir dir("service");
    ProvingService svc(config_for(dir));
    auto ecs = square_root_circuit(field97());
    CircuitMetadata meta = svc.registry().register_circuit(ecs, 30);

    ProofRequest req;
    req.circuit_id = meta.id;
    req.public_inputs = {9};
    req.private_inputs = {3};
    ProofResponse sync = svc.submit_sync(req);

    req.async = true;
    JobSnapshot submitted = svc.submit_async(req);
    CHECK(submitted.job_id.size() == 32);
    CHECK(submitted.submitted_at.size() > 0);
    CHECK(submitted.started_at.empty());
    CHECK_FALSE(submitted.result.has_value());

    JobSnapshot finished = await_terminal(svc, submitted.job_id);
    CHECK(finished.state == JobState::kDone);
    CHECK_FALSE(finished.started_at.empty());
    CHECK_FALSE(finished.finished_at.empty());
    REQUIRE(finished.result.has_value());
    CHECK_FALSE(finished.error.has_value());

    // Proving is deterministic, so the async proof matches the sync one.
    CHECK(finished.result->proof == sync.proof);
    CHECK(finished.result->outputs == sync.outputs);
    CHECK(finished.result->circuit_id == sync.circuit_id);
}

TEST_CASE("admission errors surface before any job is created") {
    TempDir dir("service");
    ProvingService svc(config_for(dir));
    auto ecs = square_root_circuit(field97());
    CircuitMetadata meta = svc.registry().register_circuit(ecs, 30);

    ProofRequest req;
    req.circuit_id = CircuitId::from_hex(std::string(64, 'a'));
    req.public_inputs = {9};
    req.private_inputs = {3};
    CHECK(code_of([&] { svc.submit_sync(req); }) == ErrorCode::kNotFound);
    CHECK(code_of([&] { svc.submit_async(req); }) == ErrorCode::kNotFound);

    req.circuit_id = meta.id;
    req.public_inputs = {};
    CHECK(code_of([&] { svc.submit_sync(req); }) == ErrorCode::kBadRequest);
    req.public_inputs = {9, 9};
    CHECK(code_of([&] { svc.submit_sync(req); }) == ErrorCode::kBadRequest);
    req.public_inputs = {97}; // not canonical in F_97
    CHECK(code_of([&] { svc.submit_sync(req); }) == ErrorCode::kBadRequest);
    req.public_inputs = {9};
    req.private_inputs = {3, 3};
    CHECK(code_of([&] { svc.submit_sync(req); }) == ErrorCode::kBadRequest);

    MetricsSnapshot m = svc.metrics_snapshot();
    CHECK(m.rejected_not_found == 2);
    CHECK(m.rejected_bad_request == 4);
    CHECK(m.jobs_done == 0);
    CHECK(m.jobs_failed == 0);

    CHECK(code_of([&] { svc.get_job("0123456789abcdef0123456789abcdef"); }) ==
          ErrorCode::kNotFound);
}

TEST_CASE("solver failures carry the offending instruction index") {
    TempDir dir("service");
    ProvingService svc(config_for(dir));
    auto ecs = square_root_circuit(field97());
    CircuitMetadata meta = svc.registry().register_circuit(ecs, 30);

    ProofRequest req;
    req.circuit_id = meta.id;
    req.public_inputs = {9};
    req.private_inputs = {4}; // 4*4 = 16 != 9, assert at instruction 1

    Error err = error_of([&] { svc.submit_sync(req); });
    CHECK(err.code() == ErrorCode::kUnsatisfiableInput);
    CHECK(err.has_index());
    CHECK(err.index() == 1);

    req.async = true;
    JobSnapshot snap = await_terminal(svc, svc.submit_async(req).job_id);
    CHECK(snap.state == JobState::kFailed);
    REQUIRE(snap.error.has_value());
    CHECK(snap.error->code == ErrorCode::kUnsatisfiableInput);
    CHECK(snap.error->index == 1);
    CHECK_FALSE(snap.result.has_value());

    // A division by zero inside the solver is its own error class.
    auto inv = inverse_chain_circuit(2, field97());
    CircuitMetadata inv_meta = svc.registry().register_circuit(inv, 30);
    ProofRequest zero;
    zero.circuit_id = inv_meta.id;
    zero.public_inputs = {0};
    CHECK(code_of([&] { svc.submit_sync(zero); }) == ErrorCode::kDivisionByZero);

    MetricsSnapshot m = svc.metrics_snapshot();
    CHECK(m.jobs_failed == 3);
}

TEST_CASE("metrics account for every job") {
    TempDir dir("service");
    ProvingService svc(config_for(dir));
    auto ecs = square_circuit(field97());
    CircuitMetadata meta = svc.registry().register_circuit(ecs, 30);

    for (int i = 1; i <= 5; ++i) {
        ProofRequest req;
        req.circuit_id = meta.id;
        req.private_inputs = {BigInt(i)};
        svc.submit_sync(req);
    }

    MetricsSnapshot m = svc.metrics_snapshot();
    CHECK(m.jobs_done == 5);
    CHECK(m.jobs_failed == 0);
    CHECK(m.queue_depth == 0);
    CHECK(m.busy_workers == 0);
    CHECK(m.peak_rss_bytes > 0);
    CHECK(m.witness_seconds.count == 5);
    CHECK(m.prove_seconds.count == 5);
    CHECK(m.queue_seconds.count == 5);
    CHECK(m.prove_seconds.sum >= 0.0);
    CHECK(m.prove_seconds.max >= m.prove_seconds.min);
    REQUIRE_FALSE(m.prove_seconds.bucket_counts.empty());
    CHECK(m.prove_seconds.bucket_counts.back() == 5);
    // Cumulative buckets never decrease.
    for (std::size_t i = 1; i < m.prove_seconds.bucket_counts.size(); ++i) {
        CHECK(m.prove_seconds.bucket_counts[i] >= m.prove_seconds.bucket_counts[i - 1]);
    }
}

TEST_CASE("a full queue rejects exactly the overflow") {
    TempDir dir("service");
    ProvingService svc(config_for(dir, 2, 4));
    // Each job takes a noticeable fraction of a second to solve, so all ten
    // submissions land while the first jobs still occupy the pool.
    auto ecs = inverse_chain_circuit(4000, Field::make(Field::default_modulus()));
    CircuitMetadata meta = svc.registry().register_circuit(ecs, 5);

    ProofRequest req;
    req.circuit_id = meta.id;
    req.public_inputs = {7};
    req.async = true;

    std::vector<std::string> admitted;
    int overloaded = 0;
    for (int i = 0; i < 10; ++i) {
        try {
            admitted.push_back(svc.submit_async(req).job_id);
        } catch (const Error& e) {
            REQUIRE(e.code() == ErrorCode::kOverloaded);
            ++overloaded;
        }
    }
    // Capacity is worker_count + queue_capacity = 6.
    CHECK(admitted.size() == 6);
    CHECK(overloaded == 4);
    CHECK(svc.metrics_snapshot().rejected_overloaded == 4);

    for (const std::string& id : admitted) {
        CHECK(await_terminal(svc, id).state == JobState::kDone);
    }
    MetricsSnapshot m = svc.metrics_snapshot();
    CHECK(m.jobs_done == 6);

    // Capacity freed: the same request is admitted again.
    CHECK(svc.submit_async(req).job_id.size() == 32);
}

TEST_CASE("64 concurrent clients get isolated, non-interchangeable proofs") {
    TempDir dir("service");
    ProvingService svc(config_for(dir, 4, 60));
    auto field = Field::make(Field::default_modulus());
    auto ecs = square_circuit(field);
    CircuitMetadata meta = svc.registry().register_circuit(ecs, 30);
    EntryPtr entry = svc.registry().fetch_entry(meta.id);

    const int n = 64;
    std::vector<ProofResponse> responses(n);
    std::vector<std::string> failures;
    std::mutex mu;
    std::vector<std::thread> threads;
    for (int i = 0; i < n; ++i) {
        threads.emplace_back([&, i] {
            try {
                ProofRequest req;
                req.circuit_id = meta.id;
                req.private_inputs = {BigInt(i + 1)};
                ProofResponse resp = svc.submit_sync(req);
                std::lock_guard lock(mu);
                responses[i] = std::move(resp);
            } catch (const std::exception& e) {
                std::lock_guard lock(mu);
                failures.push_back(e.what());
            }
        });
    }
    for (auto& th : threads) {
        th.join();
    }
    REQUIRE_MESSAGE(failures.empty(), (failures.empty() ? std::string("-") : failures.front()));

    const ProvingBackend& backend = backend_for(entry->vk.backend_id);
    for (int i = 0; i < n; ++i) {
        BigInt expect = field->mul(BigInt(i + 1), BigInt(i + 1));
        REQUIRE(responses[i].outputs == std::vector<BigInt>{expect});
        CHECK(backend.verify(entry->vk, {}, responses[i].outputs, responses[i].proof, entry->ecs)
                  .accepted);
        // A neighbour's statement must not validate against this proof.
        const ProofResponse& other = responses[(i + 1) % n];
        VerifyResult swapped =
            backend.verify(entry->vk, {}, other.outputs, responses[i].proof, entry->ecs);
        CHECK_FALSE(swapped.accepted);
        CHECK(swapped.reason == kRejectBadPublicWire);
    }
    CHECK(svc.metrics_snapshot().jobs_done == 64);
}

TEST_CASE("circuit removal never disturbs jobs already admitted") {
    TempDir dir("service");
    ProvingService svc(config_for(dir, 1, 8));
    auto ecs = inverse_chain_circuit(1500, Field::make(Field::default_modulus()));
    CircuitMetadata meta = svc.registry().register_circuit(ecs, 5);

    ProofRequest req;
    req.circuit_id = meta.id;
    req.public_inputs = {11};
    req.async = true;
    // One running, one queued; both captured their registry snapshot at
    // admission, so removing the circuit afterwards is invisible to them.
    std::string running = svc.submit_async(req).job_id;
    std::string queued = svc.submit_async(req).job_id;

    CHECK(svc.registry().remove_circuit(meta.id));
    CHECK(code_of([&] { svc.submit_sync(req); }) == ErrorCode::kNotFound);

    CHECK(await_terminal(svc, running).state == JobState::kDone);
    CHECK(await_terminal(svc, queued).state == JobState::kDone);
}

TEST_CASE("finished jobs stay queryable within retention and vanish with zero retention") {
    TempDir dir("service");
    auto ecs = square_circuit(field97());

    SUBCASE("long retention keeps snapshots stable") {
        ServiceConfig cfg = config_for(dir);
        cfg.job_retention_seconds = 3600;
        ProvingService svc(cfg);
        CircuitMetadata meta = svc.registry().register_circuit(ecs, 30);
        ProofRequest req;
        req.circuit_id = meta.id;
        req.private_inputs = {3};
        req.async = true;
        JobSnapshot snap = await_terminal(svc, svc.submit_async(req).job_id);
        CHECK(snap.state == JobState::kDone);
        for (int i = 0; i < 3; ++i) {
            JobSnapshot again = svc.get_job(snap.job_id);
            CHECK(again.state == JobState::kDone);
            CHECK(again.result->proof == snap.result->proof);
        }
    }

    SUBCASE("zero retention purges a job as soon as it finishes") {
        ServiceConfig cfg = config_for(dir);
        cfg.job_retention_seconds = 0;
        ProvingService svc(cfg);
        CircuitMetadata meta = svc.registry().register_circuit(ecs, 30);
        ProofRequest req;
        req.circuit_id = meta.id;
        req.private_inputs = {3};
        req.async = true;
        std::string job_id = svc.submit_async(req).job_id;

        bool purged = false;
        auto deadline = std::chrono::steady_clock::now() + 30s;
        while (std::chrono::steady_clock::now() < deadline) {
            try {
                svc.get_job(job_id);
                std::this_thread::sleep_for(1ms);
            } catch (const Error& e) {
                CHECK(e.code() == ErrorCode::kNotFound);
                purged = true;
                break;
            }
        }
        CHECK_MESSAGE(purged, "finished job was never purged");
        CHECK(code_of([&] { svc.get_job(job_id); }) == ErrorCode::kNotFound);
    }
}

TEST_CASE("no submitted job is ever lost") {
    TempDir dir("service");
    ProvingService svc(config_for(dir, 2, 20));
    auto ecs = square_circuit(field97());
    CircuitMetadata meta = svc.registry().register_circuit(ecs, 30);

    std::vector<std::string> ids;
    for (int i = 1; i <= 20; ++i) {
        ProofRequest req;
        req.circuit_id = meta.id;
        req.private_inputs = {BigInt(i % 96 + 1)};
        req.async = true;
        ids.push_back(svc.submit_async(req).job_id);
    }
    int done = 0;
    for (const std::string& id : ids) {
        JobSnapshot snap = await_terminal(svc, id);
        if (snap.state == JobState::kDone) {
            ++done;
        }
    }
    CHECK(done == 20);
    MetricsSnapshot m = svc.metrics_snapshot();
    CHECK(m.jobs_done == 20);
    CHECK(m.jobs_failed == 0);
    CHECK(m.queue_depth == 0);
}

TEST_CASE("health reports the registry and build version") {
    TempDir dir("service");
    ProvingService svc(config_for(dir));
    auto h = svc.health();
    CHECK(h.status == "ok");
    CHECK(h.version == build_version());
    CHECK(h.registry_circuit_count == 0);
    svc.registry().register_circuit(square_circuit(field97()), 30);
    CHECK(svc.health().registry_circuit_count == 1);
}

TEST_CASE("service construction rejects a zero worker count") {
    TempDir dir("service");
    ServiceConfig cfg = config_for(dir, 1);
    cfg.worker_count = 0;
    CHECK(code_of([&] { ProvingService svc(cfg); }) == ErrorCode::kConfig);
    cfg.worker_count = 1;
    cfg.default_k = 0;
    CHECK(code_of([&] { ProvingService svc(cfg); }) == ErrorCode::kConfig);
}

} // TEST_SUITE
