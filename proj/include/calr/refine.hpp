#pragma once

#include <cstddef>
#include <vector>

#include "calr/coassoc.hpp"
#include "calr/neighbor_index.hpp"
#include "calr/weak_learner.hpp"

namespace calr {

struct RefinementConfig {
    int max_iters = 20;
    // Stop once the fraction of labels changed by a sweep drops below
    // this value.
    double convergence_epsilon = 0.001;
};

struct RefineResult {
    Prediction prediction;
    int iterations = 0;
    double last_changed_fraction = 0.0;
    std::size_t weight_lookups = 0; // exactly n*k per sweep
};

// Iterative weighted-vote relabeling. Each sweep recomputes every item's
// label as the argmax over labels of the co-association-weighted votes of
// its k nearest neighbors, reading the previous sweep's labels (Jacobi
// update). Tie rule: keep the current label whenever it attains the
// maximum score (this covers the all-zero-score case); otherwise take the
// lowest tied label id.
RefineResult refine(const Prediction& y0, const EnsembleCaMatrix& ca,
                    const NeighborIndex& index, const RefinementConfig& cfg = {});

// Per-item plurality across peer predictions; ties go to the lowest label
// id. All predictions must share one label space.
Prediction voter_model(const std::vector<Prediction>& preds);

// Plurality across locally refined predictions.
Prediction lr_vm(const std::vector<Prediction>& refined);

} // namespace calr
