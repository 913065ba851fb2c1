#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "zkprov/backend.hpp"
#include "zkprov/circuit.hpp"
#include "zkprov/encoding.hpp"

namespace zkprov {

/// A durable (ecs, pk, vk) triple. Handed out as an immutable snapshot:
/// removal of the circuit never invalidates copies already held by jobs.
struct RegistryEntry {
    CircuitId id;
    CircuitArtifact ecs;
    ProvingKey pk;
    VerifyingKey vk;
    std::string created_at; // UTC, RFC 3339, second resolution
    std::string name;
    std::uint64_t constraint_count = 0;
};

using EntryPtr = std::shared_ptr<const RegistryEntry>;

struct CircuitMetadata {
    CircuitId id;
    std::string name;
    std::uint64_t constraint_count = 0;
    std::uint32_t num_public_inputs = 0;
    std::uint32_t num_public_outputs = 0;
    std::string created_at;
};

struct RegistryOptions {
    std::filesystem::path root;
    std::size_t max_cache_entries = 0; // 0 = unbounded
    bool read_only = false;            // fetch/list only; orphans are left alone
    /// Test seam: called after each durable step of a registration, with one
    /// of "dir", "ecs", "pk", "vk", "meta". A throwing hook simulates a crash
    /// at that point.
    std::function<void(std::string_view)> write_hook;
};

/// Directory-per-circuit store with a cache in front:
///   <root>/<id>/ecs.ecs.json | pk.bin | vk.json | meta.json
/// Every file lands via temp-file + rename with meta.json last, so a
/// directory without meta.json is an aborted registration; open() sweeps
/// such orphans. Ids are the full 64-hex circuit digest.
///
/// Locking: one shared cache mutex held only for map operations, plus a
/// per-id mutex serializing registration/removal of the same circuit;
/// operations on distinct ids never wait on each other's I/O.
class ProofRegistry {
public:
    explicit ProofRegistry(RegistryOptions options);

    /// Runs setup and persists the entry before returning. Idempotent for a
    /// byte-identical circuit with the same k; same circuit with a different
    /// k is kConflict. kStorage on I/O failure or a read-only registry.
    CircuitMetadata register_circuit(const CircuitArtifact& ecs, std::uint32_t k);

    /// kNotFound for unknown ids. Cached after the first disk load; circuits
    /// dropped into the directory out-of-band are picked up lazily.
    EntryPtr fetch_entry(const CircuitId& id);

    /// All complete entries on disk, sorted by created_at then id.
    std::vector<CircuitMetadata> list_circuits() const;

    /// False if absent. Deletes the directory and drops the cache entry.
    bool remove_circuit(const CircuitId& id);

    /// Drops cache entries whose directories vanished out-of-band. New
    /// directories need no rescan; fetch and list see them directly.
    void rescan();

    std::uint64_t circuit_count() const;

    const std::filesystem::path& root() const { return options_.root; }
    bool read_only() const { return options_.read_only; }

private:
    std::filesystem::path entry_dir(const CircuitId& id) const;
    std::shared_ptr<std::mutex> id_mutex(const CircuitId& id);
    EntryPtr load_from_disk(const CircuitId& id) const; // nullptr if absent
    EntryPtr cache_get(const std::string& hex);
    void cache_put(const std::string& hex, EntryPtr entry);
    void cache_erase(const std::string& hex);

    RegistryOptions options_;

    mutable std::mutex cache_mutex_;
    std::list<std::string> lru_; // most recent first, only maintained when bounded
    struct CacheSlot {
        EntryPtr entry;
        std::list<std::string>::iterator lru_it;
    };
    std::map<std::string, CacheSlot> cache_;

    std::mutex id_mutexes_mutex_;
    std::map<std::string, std::shared_ptr<std::mutex>> id_mutexes_;
};

/// meta.json bytes for an entry; schema documented in docs/registry-layout.md.
std::string encode_entry_meta(const RegistryEntry& entry);

CircuitMetadata metadata_of(const RegistryEntry& entry);

} // namespace zkprov
