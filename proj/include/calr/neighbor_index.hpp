#pragma once

#include <span>
#include <vector>

#include "calr/types.hpp"

namespace calr {

// Exact k-nearest-neighbor lists over a batch, Euclidean metric. Each
// item's own id is excluded; distance ties break toward the lower id.
// Immutable after construction and safe to share across threads.
struct NeighborIndex {
    int k = 0;
    std::size_t n = 0;
    std::vector<ItemId> neighbor_ids; // n*k, row-major, nearest first
    std::vector<double> distances;    // n*k, non-decreasing per row

    std::span<const ItemId> row(std::size_t i) const {
        return {neighbor_ids.data() + i * static_cast<std::size_t>(k),
                static_cast<std::size_t>(k)};
    }
    std::span<const double> row_distances(std::size_t i) const {
        return {distances.data() + i * static_cast<std::size_t>(k),
                static_cast<std::size_t>(k)};
    }
};

NeighborIndex build_index(const Matrix& features, int k);

// Bounds-checked lookup of a stored neighbor list.
std::span<const ItemId> neighbors(const NeighborIndex& index, ItemId i);

} // namespace calr
