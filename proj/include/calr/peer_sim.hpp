#pragma once

#include <cstdint>
#include <vector>

#include "calr/coassoc.hpp"
#include "calr/weak_learner.hpp"

namespace calr {

// Uniform label replacement: exactly round(alpha*n) positions get a label
// drawn uniformly from the full label space (possibly the one already
// there).
struct NoiseModel {
    double alpha = 0.0;
    std::uint64_t seed = 0;
};

// Lossy delivery: a whole message is dropped with peer_drop_prob, then
// each surviving pair is dropped independently with pair_drop_prob.
struct ChannelModel {
    double pair_drop_prob = 0.0;
    double peer_drop_prob = 0.0;
    std::uint64_t seed = 0;
};

struct Peer {
    KnnClassifier classifier;
    Prediction prediction;
    LocalCaMatrix local;
};

struct PeerNetwork {
    std::vector<Peer> peers;
    ChannelModel channel;

    std::size_t k_p() const { return peers.size(); }
};

Prediction corrupt_labels(const Prediction& pred, const NoiseModel& noise,
                          const std::vector<Label>& label_space);

// Runs one synchronous exchange round: every peer's local matrix passes
// through the channel toward every other peer; a peer's own matrix is
// always fully delivered to itself. Returns one accumulator per peer.
// RNG streams derive from (channel.seed, receiver, sender), so results do
// not depend on iteration order.
std::vector<EnsembleCaMatrix> exchange(const PeerNetwork& net);

} // namespace calr
