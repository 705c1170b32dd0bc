#include "calr/peer_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "calr/rng.hpp"

namespace calr {

Prediction corrupt_labels(const Prediction& pred, const NoiseModel& noise,
                          const std::vector<Label>& label_space) {
    if (noise.alpha < 0.0 || noise.alpha > 1.0)
        throw std::runtime_error("noise level must be in [0, 1]");
    if (label_space.empty()) throw std::runtime_error("label space is empty");

    Prediction out = pred;
    out.label_space.insert(out.label_space.end(), label_space.begin(), label_space.end());
    std::sort(out.label_space.begin(), out.label_space.end());
    out.label_space.erase(std::unique(out.label_space.begin(), out.label_space.end()),
                          out.label_space.end());

    const std::size_t n = pred.labels.size();
    const std::size_t m =
        static_cast<std::size_t>(std::llround(noise.alpha * static_cast<double>(n)));
    if (m == 0) return out;

    Rng rng(noise.seed);
    std::vector<std::uint32_t> positions(n);
    for (std::size_t i = 0; i < n; ++i) positions[i] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t pick = j + rng.bounded(n - j);
        std::swap(positions[j], positions[pick]);
        out.labels[positions[j]] = label_space[rng.bounded(label_space.size())];
    }
    return out;
}

std::vector<EnsembleCaMatrix> exchange(const PeerNetwork& net) {
    const std::size_t k_p = net.peers.size();
    if (k_p == 0) throw std::runtime_error("network has no peers");

    const std::size_t n = net.peers[0].local.n;
    const int k = net.peers[0].local.k;
    for (const Peer& p : net.peers)
        if (p.local.n != n || p.local.k != k)
            throw std::runtime_error("peers hold local matrices of different shapes");

    const std::size_t cells = n * static_cast<std::size_t>(k);
    std::vector<EnsembleCaMatrix> result;
    result.reserve(k_p);

    std::vector<std::uint8_t> mask(cells);
    for (std::size_t r = 0; r < k_p; ++r) {
        EnsembleCaMatrix acc(n, k);
        acc.set_own(net.peers[r].local);
        accumulate(acc, net.peers[r].local);

        for (std::size_t s = 0; s < k_p; ++s) {
            if (s == r) continue;
            Rng rng(derive_seed(net.channel.seed, static_cast<std::uint64_t>(r),
                                static_cast<std::uint64_t>(s)));
            if (rng.bernoulli(net.channel.peer_drop_prob)) continue;
            if (net.channel.pair_drop_prob <= 0.0) {
                accumulate(acc, net.peers[s].local);
                continue;
            }
            for (std::size_t idx = 0; idx < cells; ++idx)
                mask[idx] = rng.bernoulli(net.channel.pair_drop_prob) ? 0 : 1;
            accumulate(acc, net.peers[s].local, mask);
        }
        result.push_back(std::move(acc));
    }
    return result;
}

} // namespace calr
