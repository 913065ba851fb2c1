#pragma once

#include <cstdint>
#include <vector>

#include "zkprov/bytes.hpp"

namespace zkprov {

/// Authentication path for one leaf: sibling digests ordered leaf level
/// upward. Its length always equals the tree depth.
struct MerklePath {
    std::uint64_t leaf_index = 0;
    std::vector<Digest> siblings;

    bool operator==(const MerklePath&) const = default;
};

// Domain-separated SHA-256: 0x00 prefix for leaves, 0x01 for interior nodes,
// so a leaf can never be reinterpreted as a subtree.
Digest hash_leaf(const Digest& leaf);
Digest hash_interior(const Digest& left, const Digest& right);

/// Number of levels above the leaves for `count` leaves after padding to the
/// next power of two. One leaf gives depth 0 (root = leaf hash).
std::size_t tree_depth(std::uint64_t count);

/// Binary SHA-256 Merkle tree over fixed 32-byte leaves. The leaf count is
/// padded to a power of two with all-zero leaves.
class MerkleTree {
public:
    static MerkleTree build(const std::vector<Digest>& leaves); // leaves non-empty

    const Digest& root() const { return levels_.back()[0]; }
    std::uint64_t num_leaves() const { return num_leaves_; }
    std::size_t depth() const { return levels_.size() - 1; }

    MerklePath open(std::uint64_t index) const; // index < num_leaves()

private:
    std::uint64_t num_leaves_ = 0;
    std::vector<std::vector<Digest>> levels_; // [0] = padded leaf hashes
};

/// Recomputes the root from `leaf` and `path` and compares. False on any
/// mismatch, including a path whose length disagrees with `num_leaves`.
bool verify_path(const Digest& root, std::uint64_t num_leaves, const Digest& leaf,
                 const MerklePath& path);

} // namespace zkprov
