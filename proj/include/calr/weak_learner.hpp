#pragma once

#include <vector>

#include "calr/dataset.hpp"
#include "calr/types.hpp"

namespace calr {

// k-NN classifier over a small stratified training subset. Training is
// storage only; the instance is immutable afterwards.
struct KnnClassifier {
    Matrix train_features;
    std::vector<Label> train_labels;
    int vote_k = 3;
    std::vector<Label> label_space; // sorted, unique
};

struct Prediction {
    std::vector<Label> labels;
    int peer_id = -1;
    std::vector<Label> label_space; // sorted, unique
};

// Surjective coarsening of a label space: targets[src] is the fused label
// of source label `src`, -1 marks an unmapped source.
struct LabelMapping {
    std::vector<Label> targets;
};

KnnClassifier train(const Dataset& ds, const std::vector<ItemId>& train_ids, int vote_k);

// Plurality label among the vote_k nearest training items. A tie between
// classes goes to the class of the nearest training item among the tied
// ones.
Prediction predict(const KnnClassifier& clf, const Matrix& batch, int peer_id = -1);

Prediction fuse_labels(const Prediction& pred, const LabelMapping& mapping);

} // namespace calr
