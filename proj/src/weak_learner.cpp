#include "calr/weak_learner.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "calr/kernels.hpp"
#include "calr/parallel.hpp"

namespace calr {

KnnClassifier train(const Dataset& ds, const std::vector<ItemId>& train_ids, int vote_k) {
    const std::size_t m = train_ids.size();
    if (m == 0) throw std::runtime_error("training set is empty");
    if (vote_k < 1 || static_cast<std::size_t>(vote_k) > m)
        throw std::runtime_error("vote_k must be in [1, training set size]");

    KnnClassifier clf;
    clf.vote_k = vote_k;
    clf.train_features = Matrix(m, ds.dims());
    clf.train_labels.resize(m);

    std::map<Label, std::size_t> counts;
    for (std::size_t r = 0; r < m; ++r) {
        const ItemId id = train_ids[r];
        if (id < 0 || static_cast<std::size_t>(id) >= ds.n())
            throw std::runtime_error("training id out of range");
        const double* src = ds.features.row(static_cast<std::size_t>(id));
        std::copy(src, src + ds.dims(), clf.train_features.row(r));
        clf.train_labels[r] = ds.labels[static_cast<std::size_t>(id)];
        counts[clf.train_labels[r]]++;
    }

    // Stratified contract: the same number of items for every class.
    const std::size_t d = counts.begin()->second;
    for (const auto& [label, count] : counts) {
        if (count != d) {
            std::ostringstream msg;
            msg << "training ids are not stratified: class " << label << " has " << count
                << " items, expected " << d;
            throw std::runtime_error(msg.str());
        }
    }

    clf.label_space.reserve(counts.size());
    for (const auto& [label, count] : counts) clf.label_space.push_back(label);
    return clf;
}

namespace {

Label vote_nearest(const KnnClassifier& clf, const double* x,
                   std::vector<std::pair<double, ItemId>>& scratch,
                   std::vector<int>& tally) {
    const std::size_t m = clf.train_labels.size();
    const std::size_t f = clf.train_features.cols;
    scratch.resize(m);
    for (std::size_t j = 0; j < m; ++j)
        scratch[j] = {kernels::l2sq(x, clf.train_features.row(j), f), static_cast<ItemId>(j)};
    std::sort(scratch.begin(), scratch.end());

    std::fill(tally.begin(), tally.end(), 0);
    const std::size_t vk = static_cast<std::size_t>(clf.vote_k);
    int best = 0;
    for (std::size_t s = 0; s < vk; ++s) {
        const Label l = clf.train_labels[static_cast<std::size_t>(scratch[s].second)];
        best = std::max(best, ++tally[static_cast<std::size_t>(l)]);
    }
    // first tied class in nearest-first order wins
    for (std::size_t s = 0; s < vk; ++s) {
        const Label l = clf.train_labels[static_cast<std::size_t>(scratch[s].second)];
        if (tally[static_cast<std::size_t>(l)] == best) return l;
    }
    return clf.train_labels[static_cast<std::size_t>(scratch[0].second)]; // unreachable
}

} // namespace

Prediction predict(const KnnClassifier& clf, const Matrix& batch, int peer_id) {
    if (batch.cols != clf.train_features.cols)
        throw std::runtime_error("feature dimension mismatch between batch and classifier");

    Prediction pred;
    pred.peer_id = peer_id;
    pred.label_space = clf.label_space;
    pred.labels.resize(batch.rows);

    const std::size_t tally_size = clf.label_space.empty()
                                       ? 1
                                       : static_cast<std::size_t>(clf.label_space.back()) + 1;
    parallel_for_blocks(batch.rows, 2048, [&](std::size_t begin, std::size_t end) {
        std::vector<std::pair<double, ItemId>> scratch;
        std::vector<int> tally(tally_size, 0);
        for (std::size_t i = begin; i < end; ++i)
            pred.labels[i] = vote_nearest(clf, batch.row(i), scratch, tally);
    });
    return pred;
}

Prediction fuse_labels(const Prediction& pred, const LabelMapping& mapping) {
    Prediction fused;
    fused.peer_id = pred.peer_id;
    fused.labels.resize(pred.labels.size());
    for (std::size_t i = 0; i < pred.labels.size(); ++i) {
        const Label l = pred.labels[i];
        if (l < 0 || static_cast<std::size_t>(l) >= mapping.targets.size() ||
            mapping.targets[static_cast<std::size_t>(l)] < 0) {
            std::ostringstream msg;
            msg << "unmapped label " << l << " at position " << i;
            throw std::runtime_error(msg.str());
        }
        fused.labels[i] = mapping.targets[static_cast<std::size_t>(l)];
    }
    fused.label_space.assign(mapping.targets.begin(), mapping.targets.end());
    std::erase_if(fused.label_space, [](Label l) { return l < 0; });
    std::sort(fused.label_space.begin(), fused.label_space.end());
    fused.label_space.erase(std::unique(fused.label_space.begin(), fused.label_space.end()),
                            fused.label_space.end());
    return fused;
}

} // namespace calr
