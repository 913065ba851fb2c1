#include "zkprov/registry.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "zkprov/errors.hpp"
#include "zkprov/json_util.hpp"
#include "zkprov/keys_codec.hpp"

namespace zkprov {
namespace {

namespace fs = std::filesystem;

constexpr const char* kEcsFile = "ecs.ecs.json";
constexpr const char* kPkFile = "pk.bin";
constexpr const char* kVkFile = "vk.json";
constexpr const char* kMetaFile = "meta.json";

bool is_hex_id(const std::string& name) {
    if (name.size() != 64) {
        return false;
    }
    return std::all_of(name.begin(), name.end(), [](char c) {
        return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    });
}

[[noreturn]] void storage_error(const std::string& what) {
    throw Error(ErrorCode::kStorage, what + ": " + std::strerror(errno));
}

// Temp-file + rename so readers only ever see complete files; fsync of file
// and directory so the rename survives a crash.
void write_file_durable(const fs::path& dir, const char* name, std::string_view bytes) {
    fs::path tmp = dir / (std::string(name) + ".tmp");
    fs::path final_path = dir / name;
    int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd < 0) {
        storage_error("open " + tmp.string());
    }
    std::size_t off = 0;
    while (off < bytes.size()) {
        ssize_t n = ::write(fd, bytes.data() + off, bytes.size() - off);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            ::close(fd);
            storage_error("write " + tmp.string());
        }
        off += static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0) {
        ::close(fd);
        storage_error("fsync " + tmp.string());
    }
    ::close(fd);
    if (::rename(tmp.c_str(), final_path.c_str()) != 0) {
        storage_error("rename " + final_path.string());
    }
    int dfd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
    if (dfd >= 0) {
        ::fsync(dfd);
        ::close(dfd);
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::kStorage, "cannot read " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof()) {
        throw Error(ErrorCode::kStorage, "read failed for " + path.string());
    }
    return std::move(buf).str();
}

} // namespace

CircuitMetadata metadata_of(const RegistryEntry& entry) {
    return CircuitMetadata{entry.id,
                           entry.name,
                           entry.constraint_count,
                           entry.ecs.num_public_inputs,
                           entry.ecs.num_public_outputs,
                           entry.created_at};
}

std::string encode_entry_meta(const RegistryEntry& entry) {
    nlohmann::json doc;
    doc["version"] = 1;
    doc["circuit_id"] = entry.id.hex();
    doc["name"] = entry.name;
    doc["backend"] = entry.vk.backend_id;
    doc["k"] = entry.vk.k;
    doc["constraint_count"] = entry.constraint_count;
    doc["num_public_inputs"] = entry.ecs.num_public_inputs;
    doc["num_public_outputs"] = entry.ecs.num_public_outputs;
    doc["num_private_inputs"] = entry.ecs.num_private_inputs;
    doc["num_wires"] = entry.ecs.num_wires;
    doc["created_at"] = entry.created_at;
    return doc.dump();
}

ProofRegistry::ProofRegistry(RegistryOptions options) : options_(std::move(options)) {
    if (options_.root.empty()) {
        throw Error(ErrorCode::kConfig, "registry root must not be empty");
    }
    std::error_code ec;
    if (!options_.read_only) {
        fs::create_directories(options_.root, ec);
        if (ec) {
            throw Error(ErrorCode::kStorage,
                        "cannot create registry root " + options_.root.string() + ": " +
                            ec.message());
        }
        // A directory without meta.json is an aborted registration.
        for (const auto& dirent : fs::directory_iterator(options_.root, ec)) {
            if (!dirent.is_directory() || !is_hex_id(dirent.path().filename().string())) {
                continue;
            }
            if (!fs::exists(dirent.path() / kMetaFile)) {
                fs::remove_all(dirent.path(), ec);
            }
        }
    } else if (!fs::is_directory(options_.root, ec)) {
        throw Error(ErrorCode::kStorage,
                    "registry root " + options_.root.string() + " is not a directory");
    }
}

std::filesystem::path ProofRegistry::entry_dir(const CircuitId& id) const {
    return options_.root / id.hex();
}

std::shared_ptr<std::mutex> ProofRegistry::id_mutex(const CircuitId& id) {
    std::lock_guard lock(id_mutexes_mutex_);
    auto& slot = id_mutexes_[id.hex()];
    if (!slot) {
        slot = std::make_shared<std::mutex>();
    }
    return slot;
}

EntryPtr ProofRegistry::cache_get(const std::string& hex) {
    std::lock_guard lock(cache_mutex_);
    auto it = cache_.find(hex);
    if (it == cache_.end()) {
        return nullptr;
    }
    if (options_.max_cache_entries > 0) {
        lru_.splice(lru_.begin(), lru_, it->second.lru_it);
    }
    return it->second.entry;
}

void ProofRegistry::cache_put(const std::string& hex, EntryPtr entry) {
    std::lock_guard lock(cache_mutex_);
    auto it = cache_.find(hex);
    if (it != cache_.end()) {
        it->second.entry = std::move(entry);
        if (options_.max_cache_entries > 0) {
            lru_.splice(lru_.begin(), lru_, it->second.lru_it);
        }
        return;
    }
    auto lru_it = lru_.end();
    if (options_.max_cache_entries > 0) {
        lru_.push_front(hex);
        lru_it = lru_.begin();
    }
    cache_.emplace(hex, CacheSlot{std::move(entry), lru_it});
    if (options_.max_cache_entries > 0 && cache_.size() > options_.max_cache_entries) {
        cache_.erase(lru_.back());
        lru_.pop_back();
    }
}

void ProofRegistry::cache_erase(const std::string& hex) {
    std::lock_guard lock(cache_mutex_);
    auto it = cache_.find(hex);
    if (it == cache_.end()) {
        return;
    }
    if (options_.max_cache_entries > 0) {
        lru_.erase(it->second.lru_it);
    }
    cache_.erase(it);
}

EntryPtr ProofRegistry::load_from_disk(const CircuitId& id) const {
    fs::path dir = entry_dir(id);
    if (!fs::exists(dir / kMetaFile)) {
        return nullptr;
    }
    auto entry = std::make_shared<RegistryEntry>();
    entry->id = id;

    std::string ecs_bytes = read_file(dir / kEcsFile);
    if (circuit_id_of_encoding(ecs_bytes) != id) {
        throw Error(ErrorCode::kStorage,
                    "registry entry " + id.hex() + " does not match its circuit bytes");
    }
    entry->ecs = decode_circuit(ecs_bytes);
    entry->pk = decode_proving_key(read_file(dir / kPkFile));
    entry->vk = decode_verifying_key(read_file(dir / kVkFile));
    if (entry->pk.circuit_id != id || entry->vk.circuit_id != id) {
        throw Error(ErrorCode::kStorage, "registry entry " + id.hex() + " has mismatched keys");
    }

    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(read_file(dir / kMetaFile));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::kStorage, "registry entry " + id.hex() + ": bad meta.json");
    }
    entry->created_at = meta.value("created_at", std::string{});
    entry->name = entry->ecs.name;
    entry->constraint_count = entry->ecs.constraints.size();
    return entry;
}

CircuitMetadata ProofRegistry::register_circuit(const CircuitArtifact& ecs, std::uint32_t k) {
    if (options_.read_only) {
        throw Error(ErrorCode::kStorage, "registry is read-only");
    }
    std::string ecs_bytes = encode_circuit(ecs);
    CircuitId id = circuit_id_of_encoding(ecs_bytes);
    std::string hex = id.hex();

    auto mtx = id_mutex(id);
    std::lock_guard id_lock(*mtx);

    EntryPtr existing = cache_get(hex);
    if (!existing) {
        existing = load_from_disk(id);
    }
    if (existing) {
        if (existing->vk.k != k) {
            throw Error(ErrorCode::kConflict,
                        "circuit " + hex + " is registered with k=" +
                            std::to_string(existing->vk.k) + ", requested k=" +
                            std::to_string(k));
        }
        cache_put(hex, existing);
        return metadata_of(*existing);
    }

    KeyPair keys = backend_for(kSpotCheckBackendId).setup(ecs, k);
    auto entry = std::make_shared<RegistryEntry>();
    entry->id = id;
    entry->ecs = ecs;
    entry->pk = std::move(keys.pk);
    entry->vk = std::move(keys.vk);
    entry->created_at = utc_now_rfc3339();
    entry->name = ecs.name;
    entry->constraint_count = ecs.constraints.size();

    auto hook = [&](std::string_view step) {
        if (options_.write_hook) {
            options_.write_hook(step);
        }
    };
    fs::path dir = entry_dir(id);
    std::error_code ec;
    fs::create_directory(dir, ec);
    if (ec) {
        throw Error(ErrorCode::kStorage, "cannot create " + dir.string() + ": " + ec.message());
    }
    hook("dir");
    write_file_durable(dir, kEcsFile, ecs_bytes);
    hook("ecs");
    write_file_durable(dir, kPkFile, encode_proving_key(entry->pk));
    hook("pk");
    write_file_durable(dir, kVkFile, encode_verifying_key(entry->vk));
    hook("vk");
    write_file_durable(dir, kMetaFile, encode_entry_meta(*entry));
    hook("meta");

    cache_put(hex, entry);
    return metadata_of(*entry);
}

EntryPtr ProofRegistry::fetch_entry(const CircuitId& id) {
    std::string hex = id.hex();
    if (EntryPtr cached = cache_get(hex)) {
        return cached;
    }
    EntryPtr loaded = load_from_disk(id);
    if (!loaded) {
        throw Error(ErrorCode::kNotFound, "no circuit " + hex);
    }
    cache_put(hex, loaded);
    return loaded;
}

std::vector<CircuitMetadata> ProofRegistry::list_circuits() const {
    std::vector<CircuitMetadata> out;
    std::error_code ec;
    for (const auto& dirent : fs::directory_iterator(options_.root, ec)) {
        if (!dirent.is_directory()) {
            continue;
        }
        std::string name = dirent.path().filename().string();
        if (!is_hex_id(name) || !fs::exists(dirent.path() / kMetaFile)) {
            continue;
        }
        nlohmann::json meta;
        try {
            meta = nlohmann::json::parse(read_file(dirent.path() / kMetaFile));
        } catch (const std::exception&) {
            throw Error(ErrorCode::kStorage, "bad meta.json under " + dirent.path().string());
        }
        CircuitMetadata md;
        md.id = CircuitId::from_hex(name);
        md.name = meta.value("name", std::string{});
        md.constraint_count = meta.value("constraint_count", std::uint64_t{0});
        md.num_public_inputs = meta.value("num_public_inputs", std::uint32_t{0});
        md.num_public_outputs = meta.value("num_public_outputs", std::uint32_t{0});
        md.created_at = meta.value("created_at", std::string{});
        out.push_back(std::move(md));
    }
    if (ec) {
        throw Error(ErrorCode::kStorage,
                    "cannot list registry root " + options_.root.string() + ": " + ec.message());
    }
    std::sort(out.begin(), out.end(), [](const CircuitMetadata& a, const CircuitMetadata& b) {
        if (a.created_at != b.created_at) {
            return a.created_at < b.created_at;
        }
        return a.id < b.id;
    });
    return out;
}

bool ProofRegistry::remove_circuit(const CircuitId& id) {
    if (options_.read_only) {
        throw Error(ErrorCode::kStorage, "registry is read-only");
    }
    auto mtx = id_mutex(id);
    std::lock_guard id_lock(*mtx);

    fs::path dir = entry_dir(id);
    bool existed = fs::exists(dir / kMetaFile);
    if (existed) {
        std::error_code ec;
        fs::remove_all(dir, ec);
        if (ec) {
            throw Error(ErrorCode::kStorage, "cannot remove " + dir.string() + ": " + ec.message());
        }
    }
    cache_erase(id.hex());
    return existed;
}

void ProofRegistry::rescan() {
    std::vector<std::string> stale;
    {
        std::lock_guard lock(cache_mutex_);
        for (const auto& [hex, slot] : cache_) {
            if (!fs::exists(options_.root / hex / kMetaFile)) {
                stale.push_back(hex);
            }
        }
    }
    for (const std::string& hex : stale) {
        cache_erase(hex);
    }
}

std::uint64_t ProofRegistry::circuit_count() const {
    std::uint64_t count = 0;
    std::error_code ec;
    for (const auto& dirent : fs::directory_iterator(options_.root, ec)) {
        if (dirent.is_directory() && is_hex_id(dirent.path().filename().string()) &&
            fs::exists(dirent.path() / kMetaFile)) {
            ++count;
        }
    }
    return count;
}

} // namespace zkprov
