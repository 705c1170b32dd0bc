#include "calr/refine.hpp"

#include <algorithm>
#include <stdexcept>

namespace calr {

namespace {

std::size_t score_table_size(const Prediction& y0) {
    Label max_label = 0;
    for (const Label l : y0.labels) max_label = std::max(max_label, l);
    for (const Label l : y0.label_space) max_label = std::max(max_label, l);
    return static_cast<std::size_t>(max_label) + 1;
}

} // namespace

RefineResult refine(const Prediction& y0, const EnsembleCaMatrix& ca,
                    const NeighborIndex& index, const RefinementConfig& cfg) {
    const std::size_t n = index.n;
    const std::size_t kk = static_cast<std::size_t>(index.k);
    if (y0.labels.empty()) throw std::runtime_error("initial prediction is empty");
    if (y0.labels.size() != n) throw std::runtime_error("prediction size does not match index");
    if (ca.n != n || ca.k != index.k)
        throw std::runtime_error("ensemble matrix shape does not match index");
    if (cfg.max_iters < 1) throw std::runtime_error("max_iters must be >= 1");
    for (const Label l : y0.labels)
        if (l < 0) throw std::runtime_error("labels must be non-negative");

    RefineResult result;
    result.prediction.peer_id = y0.peer_id;
    result.prediction.label_space = y0.label_space;

    std::vector<Label> current = y0.labels;
    std::vector<Label> next(n);
    std::vector<double> scores(score_table_size(y0), 0.0);
    std::vector<Label> touched;
    touched.reserve(kk);

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        std::size_t changed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const ItemId* ids = index.neighbor_ids.data() + i * kk;
            const std::size_t base = i * kk;
            touched.clear();
            double max_score = 0.0;
            for (std::size_t j = 0; j < kk; ++j) {
                const Label l = current[static_cast<std::size_t>(ids[j])];
                double& slot = scores[static_cast<std::size_t>(l)];
                if (slot == 0.0) touched.push_back(l);
                slot += ca.value_unchecked(base + j);
                if (slot > max_score) max_score = slot;
            }
            const Label cur = current[i];
            Label winner = cur;
            if (scores[static_cast<std::size_t>(cur)] < max_score) {
                winner = static_cast<Label>(scores.size());
                for (const Label l : touched)
                    if (scores[static_cast<std::size_t>(l)] == max_score && l < winner) winner = l;
            }
            for (const Label l : touched) scores[static_cast<std::size_t>(l)] = 0.0;
            next[i] = winner;
            if (winner != cur) ++changed;
        }
        current.swap(next);
        result.iterations = iter + 1;
        result.weight_lookups += n * kk;
        result.last_changed_fraction = static_cast<double>(changed) / static_cast<double>(n);
        if (result.last_changed_fraction < cfg.convergence_epsilon) break;
    }

    result.prediction.labels = std::move(current);
    return result;
}

namespace {

Prediction plurality(const std::vector<Prediction>& preds) {
    if (preds.empty()) throw std::runtime_error("no predictions to combine");
    const std::size_t n = preds[0].labels.size();
    for (const Prediction& p : preds) {
        if (p.labels.size() != n) throw std::runtime_error("predictions have different sizes");
        if (p.label_space != preds[0].label_space)
            throw std::runtime_error("mismatched label spaces");
    }
    if (preds.size() == 1) return preds[0];

    Label max_label = 0;
    for (const Prediction& p : preds)
        for (const Label l : p.labels) {
            if (l < 0) throw std::runtime_error("labels must be non-negative");
            max_label = std::max(max_label, l);
        }

    Prediction out;
    out.peer_id = -1;
    out.label_space = preds[0].label_space;
    out.labels.resize(n);

    std::vector<int> counts(static_cast<std::size_t>(max_label) + 1, 0);
    std::vector<Label> touched;
    touched.reserve(preds.size());
    for (std::size_t i = 0; i < n; ++i) {
        touched.clear();
        int best = 0;
        for (const Prediction& p : preds) {
            const Label l = p.labels[i];
            int& c = counts[static_cast<std::size_t>(l)];
            if (c == 0) touched.push_back(l);
            best = std::max(best, ++c);
        }
        Label winner = static_cast<Label>(counts.size());
        for (const Label l : touched)
            if (counts[static_cast<std::size_t>(l)] == best && l < winner) winner = l;
        for (const Label l : touched) counts[static_cast<std::size_t>(l)] = 0;
        out.labels[i] = winner;
    }
    return out;
}

} // namespace

Prediction voter_model(const std::vector<Prediction>& preds) { return plurality(preds); }

Prediction lr_vm(const std::vector<Prediction>& refined) { return plurality(refined); }

} // namespace calr
