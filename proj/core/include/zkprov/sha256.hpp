#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "zkprov/bytes.hpp"

namespace zkprov {

/// Streaming SHA-256. Reusable: `finish()` returns the digest and re-arms the
/// context for the next message.
class Sha256 {
public:
    Sha256();
    ~Sha256();
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    Sha256& update(const void* data, std::size_t size);
    Sha256& update(std::span<const std::uint8_t> data) {
        return update(data.data(), data.size());
    }
    Sha256& update(std::string_view data) { return update(data.data(), data.size()); }
    Sha256& update(std::uint8_t byte) { return update(&byte, 1); }

    Digest finish();

private:
    void* ctx_; // EVP_MD_CTX
};

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(std::string_view data);

} // namespace zkprov
