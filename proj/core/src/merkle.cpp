#include "zkprov/merkle.hpp"

#include "zkprov/errors.hpp"
#include "zkprov/sha256.hpp"

namespace zkprov {

Digest hash_leaf(const Digest& leaf) {
    Sha256 h;
    h.update(std::uint8_t{0x00});
    h.update(std::span<const std::uint8_t>(leaf));
    return h.finish();
}

Digest hash_interior(const Digest& left, const Digest& right) {
    Sha256 h;
    h.update(std::uint8_t{0x01});
    h.update(std::span<const std::uint8_t>(left));
    h.update(std::span<const std::uint8_t>(right));
    return h.finish();
}

std::size_t tree_depth(std::uint64_t count) {
    std::size_t depth = 0;
    std::uint64_t width = 1;
    while (width < count) {
        width <<= 1;
        ++depth;
    }
    return depth;
}

MerkleTree MerkleTree::build(const std::vector<Digest>& leaves) {
    if (leaves.empty()) {
        throw Error(ErrorCode::kBadRequest, "merkle tree over zero leaves");
    }
    MerkleTree tree;
    tree.num_leaves_ = leaves.size();
    std::size_t padded = std::size_t{1} << tree_depth(leaves.size());

    std::vector<Digest> level;
    level.reserve(padded);
    for (const Digest& leaf : leaves) {
        level.push_back(hash_leaf(leaf));
    }
    const Digest padding_hash = hash_leaf(Digest{});
    level.resize(padded, padding_hash);
    tree.levels_.push_back(std::move(level));

    while (tree.levels_.back().size() > 1) {
        const std::vector<Digest>& below = tree.levels_.back();
        std::vector<Digest> above;
        above.reserve(below.size() / 2);
        for (std::size_t i = 0; i < below.size(); i += 2) {
            above.push_back(hash_interior(below[i], below[i + 1]));
        }
        tree.levels_.push_back(std::move(above));
    }
    return tree;
}

MerklePath MerkleTree::open(std::uint64_t index) const {
    if (index >= num_leaves_) {
        throw Error(ErrorCode::kInternal, "merkle open past last leaf");
    }
    MerklePath path;
    path.leaf_index = index;
    path.siblings.reserve(depth());
    std::uint64_t pos = index;
    for (std::size_t lvl = 0; lvl + 1 < levels_.size(); ++lvl) {
        path.siblings.push_back(levels_[lvl][pos ^ 1]);
        pos >>= 1;
    }
    return path;
}

bool verify_path(const Digest& root, std::uint64_t num_leaves, const Digest& leaf,
                 const MerklePath& path) {
    if (num_leaves == 0 || path.leaf_index >= num_leaves) {
        return false;
    }
    if (path.siblings.size() != tree_depth(num_leaves)) {
        return false;
    }
    Digest node = hash_leaf(leaf);
    std::uint64_t pos = path.leaf_index;
    for (const Digest& sibling : path.siblings) {
        node = (pos & 1) ? hash_interior(sibling, node) : hash_interior(node, sibling);
        pos >>= 1;
    }
    return node == root;
}

} // namespace zkprov
