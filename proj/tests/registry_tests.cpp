#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>
#include <vector>

#include "zkprov/encoding.hpp"
#include "zkprov/errors.hpp"
#include "zkprov/keys_codec.hpp"
#include "zkprov/registry.hpp"
#include "zkprov/workload.hpp"

#include "checks.hpp"
#include "support.hpp"

using namespace zkprov;
using namespace zkprov::testsupport;
namespace fs = std::filesystem;

namespace {

ProofRegistry open_rw(const fs::path& root, std::size_t cache = 0) {
    RegistryOptions opt;
    opt.root = root;
    opt.max_cache_entries = cache;
    return ProofRegistry(opt);
}

} // namespace

TEST_SUITE("registry") {

TEST_CASE("register, fetch, list, remove round-trip") {
    TempDir dir("registry");
    ProofRegistry reg = open_rw(dir.path());
    auto ecs = square_circuit(field97());
    CircuitId id = circuit_id(ecs);

    CircuitMetadata meta = reg.register_circuit(ecs, 30);
    CHECK(meta.id == id);
    CHECK(meta.name == ecs.name);
    CHECK(meta.constraint_count == ecs.constraints.size());
    CHECK(meta.num_public_inputs == 0);
    CHECK(meta.num_public_outputs == 1);
    CHECK_FALSE(meta.created_at.empty());

    EntryPtr entry = reg.fetch_entry(id);
    REQUIRE(entry);
    CHECK(entry->id == id);
    CHECK(entry->ecs.equals(ecs));
    CHECK(entry->pk.circuit_id == id);
    CHECK(entry->vk.k == 30);
    CHECK(entry->constraint_count == 1);

    auto listed = reg.list_circuits();
    REQUIRE(listed.size() == 1);
    CHECK(listed[0].id == id);
    CHECK(reg.circuit_count() == 1);

    CHECK(reg.remove_circuit(id));
    CHECK_FALSE(reg.remove_circuit(id));
    CHECK(code_of([&] { reg.fetch_entry(id); }) == ErrorCode::kNotFound);
    CHECK(reg.circuit_count() == 0);
    CHECK_FALSE(fs::exists(dir.path() / id.hex()));

    // The snapshot handed out before removal stays intact.
    CHECK(entry->ecs.equals(ecs));
}

TEST_CASE("re-registration is idempotent for the same k and a conflict otherwise") {
    TempDir dir("registry");
    ProofRegistry reg = open_rw(dir.path());
    auto ecs = square_circuit(field97());

    CircuitMetadata first = reg.register_circuit(ecs, 30);
    CircuitMetadata again = reg.register_circuit(ecs, 30);
    CHECK(first.id == again.id);
    CHECK(reg.circuit_count() == 1);

    CHECK(code_of([&] { reg.register_circuit(ecs, 10); }) == ErrorCode::kConflict);
    CHECK(reg.circuit_count() == 1);
    CHECK(reg.fetch_entry(first.id)->vk.k == 30);
}

TEST_CASE("entries survive reopen byte for byte") {
    TempDir dir("registry");
    std::vector<CircuitArtifact> circuits{
        square_circuit(field97()),
        square_root_circuit(field97()),
        squaring_chain_circuit(3, field97()),
    };
    std::vector<std::string> ecs_bytes, pk_bytes, vk_bytes;
    std::vector<CircuitId> ids;
    {
        ProofRegistry reg = open_rw(dir.path());
        std::uint32_t k = 8;
        for (const auto& ecs : circuits) {
            CircuitMetadata meta = reg.register_circuit(ecs, k++);
            ids.push_back(meta.id);
            EntryPtr e = reg.fetch_entry(meta.id);
            ecs_bytes.push_back(encode_circuit(e->ecs));
            pk_bytes.push_back(encode_proving_key(e->pk));
            vk_bytes.push_back(encode_verifying_key(e->vk));
        }
        // Registry goes out of scope with no orderly shutdown step, like a
        // process kill after the registrations returned.
    }
    ProofRegistry reopened = open_rw(dir.path());
    CHECK(reopened.circuit_count() == 3);
    for (std::size_t i = 0; i < circuits.size(); ++i) {
        EntryPtr e = reopened.fetch_entry(ids[i]);
        REQUIRE(e);
        CHECK(encode_circuit(e->ecs) == ecs_bytes[i]);
        CHECK(encode_proving_key(e->pk) == pk_bytes[i]);
        CHECK(encode_verifying_key(e->vk) == vk_bytes[i]);
        CHECK_FALSE(e->created_at.empty());
    }
}

TEST_CASE("a crash before the meta marker leaves no visible entry") {
    auto ecs = square_circuit(field97());
    CircuitId id = circuit_id(ecs);

    for (const std::string step : {"dir", "ecs", "pk", "vk"}) {
        TempDir dir("registry");
        {
            RegistryOptions opt;
            opt.root = dir.path();
            opt.write_hook = [&](std::string_view at) {
                if (at == step) {
                    throw Error(ErrorCode::kStorage, "injected crash at " + std::string(at));
                }
            };
            ProofRegistry reg{opt};
            CHECK(code_of([&] { reg.register_circuit(ecs, 30); }) == ErrorCode::kStorage);
            // The aborted directory exists but has no meta marker, so it is
            // invisible to fetch and list even before any sweep.
            CHECK(fs::exists(dir.path() / id.hex()));
            CHECK_FALSE(fs::exists(dir.path() / id.hex() / "meta.json"));
            CHECK(code_of([&] { reg.fetch_entry(id); }) == ErrorCode::kNotFound);
            CHECK(reg.list_circuits().empty());
        }

        // Read-only reopen leaves the orphan alone.
        {
            RegistryOptions ro;
            ro.root = dir.path();
            ro.read_only = true;
            ProofRegistry reg{ro};
            CHECK(fs::exists(dir.path() / id.hex()));
            CHECK(code_of([&] { reg.fetch_entry(id); }) == ErrorCode::kNotFound);
        }

        // Read-write reopen sweeps it, and registration then succeeds.
        ProofRegistry reg = open_rw(dir.path());
        CHECK_FALSE(fs::exists(dir.path() / id.hex()));
        CircuitMetadata meta = reg.register_circuit(ecs, 30);
        CHECK(meta.id == id);
        CHECK(reg.fetch_entry(id)->vk.k == 30);
    }
}

TEST_CASE("a crash after the meta marker is a committed registration") {
    TempDir dir("registry");
    auto ecs = square_circuit(field97());
    CircuitId id = circuit_id(ecs);
    {
        RegistryOptions opt;
        opt.root = dir.path();
        opt.write_hook = [](std::string_view at) {
            if (at == "meta") {
                throw Error(ErrorCode::kStorage, "injected crash after commit");
            }
        };
        ProofRegistry reg{opt};
        CHECK(code_of([&] { reg.register_circuit(ecs, 30); }) == ErrorCode::kStorage);
        CHECK(fs::exists(dir.path() / id.hex() / "meta.json"));
    }
    ProofRegistry reopened = open_rw(dir.path());
    CHECK(reopened.circuit_count() == 1);
    EntryPtr e = reopened.fetch_entry(id);
    CHECK(e->ecs.equals(ecs));
    CHECK(e->vk.k == 30);
}

TEST_CASE("entry files follow the documented layout") {
    TempDir dir("registry");
    ProofRegistry reg = open_rw(dir.path());
    auto ecs = square_circuit(field97());
    CircuitMetadata meta = reg.register_circuit(ecs, 30);
    fs::path entry = dir.path() / meta.id.hex();
    CHECK(fs::exists(entry / "ecs.ecs.json"));
    CHECK(fs::exists(entry / "pk.bin"));
    CHECK(fs::exists(entry / "vk.json"));
    CHECK(fs::exists(entry / "meta.json"));

    // The stored circuit is the canonical encoding, so hashing the file
    // reproduces the directory name.
    std::string stored = read_file(entry / "ecs.ecs.json");
    CHECK(circuit_id_of_encoding(stored).hex() == meta.id.hex());
    CHECK(encode_entry_meta(*reg.fetch_entry(meta.id)) == read_file(entry / "meta.json"));
}

TEST_CASE("circuits dropped into the root out-of-band are served lazily") {
    TempDir source_dir("registry-source");
    TempDir dir("registry");
    auto ecs = squaring_chain_circuit(4, field97());
    CircuitId id = circuit_id(ecs);

    ProofRegistry reg = open_rw(dir.path());
    CHECK(reg.circuit_count() == 0);

    {
        ProofRegistry source = open_rw(source_dir.path());
        source.register_circuit(ecs, 30);
    }
    fs::copy(source_dir.path() / id.hex(), dir.path() / id.hex(),
             fs::copy_options::recursive);

    // No rescan call: fetch and list read through to the directory.
    EntryPtr e = reg.fetch_entry(id);
    CHECK(e->ecs.equals(ecs));
    CHECK(reg.circuit_count() == 1);
    REQUIRE(reg.list_circuits().size() == 1);
    CHECK(reg.list_circuits()[0].id == id);
}

TEST_CASE("rescan drops cache entries whose directories vanished") {
    TempDir dir("registry");
    ProofRegistry reg = open_rw(dir.path());
    auto ecs = square_circuit(field97());
    CircuitMetadata meta = reg.register_circuit(ecs, 30);

    EntryPtr cached = reg.fetch_entry(meta.id);
    REQUIRE(cached);
    fs::remove_all(dir.path() / meta.id.hex());

    // Still served from cache until a rescan notices the removal.
    CHECK(reg.fetch_entry(meta.id) == cached);
    reg.rescan();
    CHECK(code_of([&] { reg.fetch_entry(meta.id); }) == ErrorCode::kNotFound);
    CHECK(reg.circuit_count() == 0);
}

TEST_CASE("a bounded cache evicts least-recently-used entries but never loses data") {
    TempDir dir("registry");
    ProofRegistry reg = open_rw(dir.path(), 2);
    auto a = square_circuit(field97());
    auto b = square_root_circuit(field97());
    auto c = squaring_chain_circuit(2, field97());
    CircuitId ida = circuit_id(a), idb = circuit_id(b), idc = circuit_id(c);
    reg.register_circuit(a, 30);
    reg.register_circuit(b, 30);
    reg.register_circuit(c, 30);

    EntryPtr a1 = reg.fetch_entry(ida);
    CHECK(reg.fetch_entry(ida) == a1); // cache hit returns the same snapshot
    reg.fetch_entry(idb);
    reg.fetch_entry(idc); // capacity 2: `a` is now the eviction victim
    EntryPtr a2 = reg.fetch_entry(ida);
    CHECK(a2 != a1); // reloaded from disk
    CHECK(a2->ecs.equals(a1->ecs));
    CHECK(encode_proving_key(a2->pk) == encode_proving_key(a1->pk));
    CHECK(reg.circuit_count() == 3);
}

TEST_CASE("a read-only registry serves but never mutates") {
    TempDir dir("registry");
    auto ecs = square_circuit(field97());
    CircuitId id = circuit_id(ecs);
    {
        ProofRegistry rw = open_rw(dir.path());
        rw.register_circuit(ecs, 30);
    }
    RegistryOptions opt;
    opt.root = dir.path();
    opt.read_only = true;
    ProofRegistry reg{opt};
    CHECK(reg.read_only());
    CHECK(reg.fetch_entry(id)->vk.k == 30);
    CHECK(reg.circuit_count() == 1);

    auto other = square_root_circuit(field97());
    Error err = error_of([&] { reg.register_circuit(other, 30); });
    CHECK(err.code() == ErrorCode::kStorage);
    CHECK(std::string(err.what()).find("read-only") != std::string::npos);
    CHECK(code_of([&] { reg.remove_circuit(id); }) == ErrorCode::kStorage);
    CHECK(fs::exists(dir.path() / id.hex()));
}

TEST_CASE("listing is sorted by creation time then id") {
    TempDir dir("registry");
    ProofRegistry reg = open_rw(dir.path());
    reg.register_circuit(square_circuit(field97()), 30);
    reg.register_circuit(square_root_circuit(field97()), 30);
    reg.register_circuit(squaring_chain_circuit(2, field97()), 30);
    reg.register_circuit(squaring_chain_circuit(3, field97()), 30);

    auto listed = reg.list_circuits();
    REQUIRE(listed.size() == 4);
    for (std::size_t i = 1; i < listed.size(); ++i) {
        bool ordered = listed[i - 1].created_at < listed[i].created_at ||
                       (listed[i - 1].created_at == listed[i].created_at &&
                        listed[i - 1].id < listed[i].id);
        CHECK(ordered);
    }
}

TEST_CASE("concurrent registrations of the same and distinct circuits are safe") {
    TempDir dir("registry");
    ProofRegistry reg = open_rw(dir.path());
    auto shared = square_circuit(field97());
    std::vector<CircuitArtifact> distinct;
    for (std::uint32_t n = 1; n <= 4; ++n) {
        distinct.push_back(squaring_chain_circuit(n, field97()));
    }

    std::mutex mu;
    std::vector<std::string> failures;
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&, t] {
            try {
                reg.register_circuit(shared, 30);
                reg.register_circuit(distinct[t % distinct.size()], 30);
                reg.fetch_entry(circuit_id(shared));
            } catch (const Error& e) {
                std::lock_guard lock(mu);
                failures.push_back(e.what());
            }
        });
    }
    for (auto& th : threads) {
        th.join();
    }
    CHECK_MESSAGE(failures.empty(), (failures.empty() ? std::string("-") : failures.front()));
    CHECK(reg.circuit_count() == 5);

    ProofRegistry reopened = open_rw(dir.path());
    CHECK(reopened.circuit_count() == 5);
}

} // TEST_SUITE
