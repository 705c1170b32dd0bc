#include "calr/neighbor_index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "calr/kernels.hpp"
#include "calr/parallel.hpp"

namespace calr {

NeighborIndex build_index(const Matrix& features, int k) {
    const std::size_t n = features.rows;
    if (k < 1) throw std::runtime_error("neighbor count k must be >= 1");
    if (static_cast<std::size_t>(k) >= n)
        throw std::runtime_error("neighbor count k must be smaller than the batch size");

    NeighborIndex index;
    index.k = k;
    index.n = n;
    index.neighbor_ids.resize(n * static_cast<std::size_t>(k));
    index.distances.resize(n * static_cast<std::size_t>(k));

    const std::size_t f = features.cols;
    const std::size_t kk = static_cast<std::size_t>(k);

    parallel_for_blocks(n, 512, [&](std::size_t begin, std::size_t end) {
        std::vector<std::pair<double, ItemId>> cand(n - 1);
        for (std::size_t i = begin; i < end; ++i) {
            const double* xi = features.row(i);
            std::size_t m = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                cand[m++] = {kernels::l2sq(xi, features.row(j), f), static_cast<ItemId>(j)};
            }
            std::nth_element(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(kk - 1),
                             cand.end());
            std::sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(kk));
            ItemId* ids = index.neighbor_ids.data() + i * kk;
            double* dist = index.distances.data() + i * kk;
            for (std::size_t s = 0; s < kk; ++s) {
                ids[s] = cand[s].second;
                dist[s] = std::sqrt(cand[s].first);
            }
        }
    });
    return index;
}

std::span<const ItemId> neighbors(const NeighborIndex& index, ItemId i) {
    if (i < 0 || static_cast<std::size_t>(i) >= index.n)
        throw std::runtime_error("item id out of range");
    return index.row(static_cast<std::size_t>(i));
}

} // namespace calr
