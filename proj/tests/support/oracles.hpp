#pragma once

// Brute-force reference implementations, deliberately written against the
// plain definitions (full scans, no partial selection, no packed layouts)
// so they stay independent of the library code paths they check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "calr/coassoc.hpp"
#include "calr/neighbor_index.hpp"
#include "calr/types.hpp"
#include "calr/weak_learner.hpp"

namespace calr::testing {

inline double oracle_distance(const Matrix& m, std::size_t a, std::size_t b) {
    double acc = 0.0;
    for (std::size_t c = 0; c < m.cols; ++c) {
        const double d = m.at(a, c) - m.at(b, c);
        acc += d * d;
    }
    return std::sqrt(acc);
}

// Exhaustive k-NN: full sort of every candidate, ties by lower id.
inline std::vector<std::vector<ItemId>> oracle_knn(const Matrix& features, int k) {
    const std::size_t n = features.rows;
    std::vector<std::vector<ItemId>> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, ItemId>> all;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            all.emplace_back(oracle_distance(features, i, j), static_cast<ItemId>(j));
        }
        std::sort(all.begin(), all.end());
        for (int s = 0; s < k; ++s) out[i].push_back(all[static_cast<std::size_t>(s)].second);
    }
    return out;
}

// Reference k-NN classification of one point: full distance sort over the
// training set, plurality over the first vote_k, tie to the class of the
// nearest tied representative.
inline Label oracle_knn_vote(const Matrix& train_features, const std::vector<Label>& train_labels,
                             const double* x, int vote_k) {
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t j = 0; j < train_features.rows; ++j) {
        double acc = 0.0;
        for (std::size_t c = 0; c < train_features.cols; ++c) {
            const double d = x[c] - train_features.at(j, c);
            acc += d * d;
        }
        order.emplace_back(std::sqrt(acc), j);
    }
    std::sort(order.begin(), order.end());

    std::map<Label, int> counts;
    for (int s = 0; s < vote_k; ++s) counts[train_labels[order[static_cast<std::size_t>(s)].second]]++;
    int best = 0;
    for (const auto& [label, count] : counts) best = std::max(best, count);
    for (int s = 0; s < vote_k; ++s) {
        const Label l = train_labels[order[static_cast<std::size_t>(s)].second];
        if (counts[l] == best) return l;
    }
    return train_labels[order[0].second];
}

// One weighted-vote sweep straight from the update rule: per item, per
// candidate label, sum the matrix weights of neighbors currently carrying
// that label; keep the current label when it reaches the maximum,
// otherwise take the lowest maximizing label.
inline std::vector<Label> oracle_refine_sweep(const std::vector<Label>& current,
                                              const EnsembleCaMatrix& ca,
                                              const NeighborIndex& index,
                                              const std::vector<Label>& label_space) {
    const std::size_t n = index.n;
    std::vector<Label> next(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::map<Label, double> score;
        for (int j = 0; j < index.k; ++j) {
            const ItemId nb = index.row(i)[static_cast<std::size_t>(j)];
            score[current[static_cast<std::size_t>(nb)]] += ca.value(i, j);
        }
        double max_score = 0.0;
        for (const Label l : label_space) {
            const auto it = score.find(l);
            const double s = it == score.end() ? 0.0 : it->second;
            if (s > max_score) max_score = s;
        }
        const auto cur_it = score.find(current[i]);
        const double cur_score = cur_it == score.end() ? 0.0 : cur_it->second;
        if (cur_score >= max_score) {
            next[i] = current[i];
            continue;
        }
        Label winner = std::numeric_limits<Label>::max();
        for (const Label l : label_space) {
            const auto it = score.find(l);
            if (it != score.end() && it->second == max_score && l < winner) winner = l;
        }
        next[i] = winner;
    }
    return next;
}

// Co-association definition applied directly.
inline std::vector<std::vector<int>> oracle_local_ca(const std::vector<Label>& labels,
                                                     const NeighborIndex& index) {
    std::vector<std::vector<int>> out(index.n, std::vector<int>(static_cast<std::size_t>(index.k)));
    for (std::size_t i = 0; i < index.n; ++i)
        for (int j = 0; j < index.k; ++j) {
            const ItemId nb = index.row(i)[static_cast<std::size_t>(j)];
            out[i][static_cast<std::size_t>(j)] =
                labels[i] == labels[static_cast<std::size_t>(nb)] ? 1 : 0;
        }
    return out;
}

} // namespace calr::testing
