#include "calr/coassoc.hpp"

#include <stdexcept>

namespace calr {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::size_t off, std::uint16_t v) {
    out[off] = static_cast<std::uint8_t>(v & 0xff);
    out[off + 1] = static_cast<std::uint8_t>(v >> 8);
}

void put_u32(std::vector<std::uint8_t>& out, std::size_t off, std::uint32_t v) {
    out[off] = static_cast<std::uint8_t>(v & 0xff);
    out[off + 1] = static_cast<std::uint8_t>((v >> 8) & 0xff);
    out[off + 2] = static_cast<std::uint8_t>((v >> 16) & 0xff);
    out[off + 3] = static_cast<std::uint8_t>((v >> 24) & 0xff);
}

std::uint16_t get_u16(const std::vector<std::uint8_t>& in, std::size_t off) {
    return static_cast<std::uint16_t>(in[off] | (in[off + 1] << 8));
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& in, std::size_t off) {
    return static_cast<std::uint32_t>(in[off]) | (static_cast<std::uint32_t>(in[off + 1]) << 8) |
           (static_cast<std::uint32_t>(in[off + 2]) << 16) |
           (static_cast<std::uint32_t>(in[off + 3]) << 24);
}

constexpr std::uint8_t kMagic[4] = {'C', 'A', 'B', 'M'};
constexpr std::uint16_t kVersion = 1;

} // namespace

void EnsembleCaMatrix::set_own(const LocalCaMatrix& own) {
    if (own.n != n || own.k != k)
        throw std::runtime_error("own matrix shape does not match accumulator");
    own_entries = own.entries;
}

double EnsembleCaMatrix::value(std::size_t i, int j) const {
    if (i >= n || j < 0 || j >= k) throw std::runtime_error("pair slot out of range");
    return value_unchecked(i * static_cast<std::size_t>(k) + static_cast<std::size_t>(j));
}

LocalCaMatrix build_local_ca(const Prediction& pred, const NeighborIndex& index) {
    if (pred.labels.size() != index.n)
        throw std::runtime_error("prediction size does not match neighbor index");

    LocalCaMatrix local;
    local.n = index.n;
    local.k = index.k;
    local.peer_id = pred.peer_id;
    local.entries.resize(index.n * static_cast<std::size_t>(index.k));

    const std::size_t kk = static_cast<std::size_t>(index.k);
    for (std::size_t i = 0; i < index.n; ++i) {
        const Label li = pred.labels[i];
        const ItemId* ids = index.neighbor_ids.data() + i * kk;
        std::uint8_t* row = local.entries.data() + i * kk;
        for (std::size_t j = 0; j < kk; ++j)
            row[j] = li == pred.labels[static_cast<std::size_t>(ids[j])] ? 1 : 0;
    }
    return local;
}

void accumulate(EnsembleCaMatrix& acc, const LocalCaMatrix& local,
                const std::vector<std::uint8_t>& delivered) {
    const std::size_t cells = acc.n * static_cast<std::size_t>(acc.k);
    if (local.n != acc.n || local.k != acc.k || local.entries.size() != cells)
        throw std::runtime_error("local matrix shape does not match accumulator");
    if (delivered.size() != cells)
        throw std::runtime_error("delivery mask shape does not match accumulator");

    for (std::size_t idx = 0; idx < cells; ++idx) {
        if (!delivered[idx]) continue;
        acc.weight_sum[idx] += static_cast<double>(local.entries[idx]);
        acc.received_count[idx] += 1;
    }
}

void accumulate(EnsembleCaMatrix& acc, const LocalCaMatrix& local) {
    const std::size_t cells = acc.n * static_cast<std::size_t>(acc.k);
    if (local.n != acc.n || local.k != acc.k || local.entries.size() != cells)
        throw std::runtime_error("local matrix shape does not match accumulator");
    for (std::size_t idx = 0; idx < cells; ++idx) {
        acc.weight_sum[idx] += static_cast<double>(local.entries[idx]);
        acc.received_count[idx] += 1;
    }
}

std::vector<std::uint8_t> serialize(const LocalCaMatrix& local) {
    const std::size_t bits = local.n * static_cast<std::size_t>(local.k);
    const std::size_t payload = (bits + 7) / 8;
    std::vector<std::uint8_t> out(kWireHeaderSize + payload, 0);

    out[0] = kMagic[0];
    out[1] = kMagic[1];
    out[2] = kMagic[2];
    out[3] = kMagic[3];
    put_u16(out, 4, kVersion);
    put_u16(out, 6, static_cast<std::uint16_t>(local.k));
    put_u32(out, 8, static_cast<std::uint32_t>(local.n));
    put_u32(out, 12, static_cast<std::uint32_t>(local.peer_id));

    for (std::size_t b = 0; b < bits; ++b) {
        if (local.entries[b])
            out[kWireHeaderSize + (b >> 3)] |= static_cast<std::uint8_t>(1u << (b & 7));
    }
    return out;
}

LocalCaMatrix deserialize(const std::vector<std::uint8_t>& bytes, std::size_t n, int k) {
    if (bytes.size() < kWireHeaderSize) throw std::runtime_error("truncated payload");
    if (bytes[0] != kMagic[0] || bytes[1] != kMagic[1] || bytes[2] != kMagic[2] ||
        bytes[3] != kMagic[3])
        throw std::runtime_error("bad magic");
    if (get_u16(bytes, 4) != kVersion) throw std::runtime_error("unsupported version");

    const int header_k = static_cast<int>(get_u16(bytes, 6));
    const std::size_t header_n = get_u32(bytes, 8);
    if (header_n != n || header_k != k)
        throw std::runtime_error("header shape does not match expected n, k");

    const std::size_t bits = n * static_cast<std::size_t>(k);
    const std::size_t payload = (bits + 7) / 8;
    if (bytes.size() < kWireHeaderSize + payload) throw std::runtime_error("truncated payload");
    if (bytes.size() > kWireHeaderSize + payload)
        throw std::runtime_error("payload longer than expected");

    LocalCaMatrix local;
    local.n = n;
    local.k = k;
    local.peer_id = static_cast<int>(get_u32(bytes, 12));
    local.entries.resize(bits);
    for (std::size_t b = 0; b < bits; ++b)
        local.entries[b] = (bytes[kWireHeaderSize + (b >> 3)] >> (b & 7)) & 1;
    return local;
}

} // namespace calr
