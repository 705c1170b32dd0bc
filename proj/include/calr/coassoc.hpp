#pragma once

#include <cstdint>
#include <vector>

#include "calr/neighbor_index.hpp"
#include "calr/types.hpp"
#include "calr/weak_learner.hpp"

namespace calr {

// Per-peer binary co-association entries over the index's neighbor
// pairs: entry (i, slot j) is 1 iff the peer gave item i and its j-th
// neighbor the same label. Directional, aligned with the neighbor lists.
struct LocalCaMatrix {
    std::size_t n = 0;
    int k = 0;
    int peer_id = -1;
    std::vector<std::uint8_t> entries; // n*k, values 0/1

    std::uint8_t at(std::size_t i, int j) const {
        return entries[i * static_cast<std::size_t>(k) + static_cast<std::size_t>(j)];
    }
};

// Running average of local matrices: per-pair weight sums plus how many
// messages contributed to each pair. Averaging happens lazily at query
// time so messages can keep arriving without renormalization.
struct EnsembleCaMatrix {
    std::size_t n = 0;
    int k = 0;
    std::vector<double> weight_sum;         // n*k
    std::vector<std::uint32_t> received_count; // n*k
    std::vector<std::uint8_t> own_entries;  // fallback for pairs with no message

    EnsembleCaMatrix() = default;
    EnsembleCaMatrix(std::size_t n_, int k_)
        : n(n_), k(k_),
          weight_sum(n_ * static_cast<std::size_t>(k_), 0.0),
          received_count(n_ * static_cast<std::size_t>(k_), 0) {}

    // Remembers the owner's binary entries; used when a pair received no
    // message at all.
    void set_own(const LocalCaMatrix& own);

    // Average weight in [0,1] for pair (i, slot j). Bounds-checked.
    double value(std::size_t i, int j) const;

    double value_unchecked(std::size_t idx) const {
        const std::uint32_t c = received_count[idx];
        if (c > 0) return weight_sum[idx] / static_cast<double>(c);
        return own_entries.empty() ? 0.0 : static_cast<double>(own_entries[idx]);
    }
};

LocalCaMatrix build_local_ca(const Prediction& pred, const NeighborIndex& index);

// Adds one peer's matrix into the accumulator. The mask (n*k, nonzero =
// delivered) models partial message delivery; omitted mask = full
// delivery.
void accumulate(EnsembleCaMatrix& acc, const LocalCaMatrix& local,
                const std::vector<std::uint8_t>& delivered);
void accumulate(EnsembleCaMatrix& acc, const LocalCaMatrix& local);

// Wire format, fixed bit-exactly:
//   offset 0:  magic bytes 'C','A','B','M'
//   offset 4:  u16 LE version (= 1)
//   offset 6:  u16 LE k
//   offset 8:  u32 LE n
//   offset 12: u32 LE peer_id
//   offset 16: ceil(n*k/8) payload bytes; bit b = entry b in row-major
//              (item-major, neighbor-slot-minor) order, LSB-first.
std::vector<std::uint8_t> serialize(const LocalCaMatrix& local);
LocalCaMatrix deserialize(const std::vector<std::uint8_t>& bytes, std::size_t n, int k);

constexpr std::size_t kWireHeaderSize = 16;

} // namespace calr
