#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "calr/types.hpp"

namespace calr {

// Dataset as read from disk, labels densely re-encoded to 0..C-1 in
// first-appearance order. Row order is preserved.
struct RawDataset {
    Matrix features;
    std::vector<Label> labels;
    std::vector<std::string> class_names; // original label values, encoding order

    std::size_t n() const { return features.rows; }
    std::size_t dims() const { return features.cols; }
    std::size_t num_classes() const { return class_names.size(); }
};

// z-normalized dataset. Every non-constant feature column has mean 0 and
// population standard deviation 1; constant columns are all-zero.
struct Dataset {
    Matrix features;
    std::vector<Label> labels;
    std::vector<std::string> class_names;
    std::vector<std::size_t> class_counts;

    std::size_t n() const { return features.rows; }
    std::size_t dims() const { return features.cols; }
    std::size_t num_classes() const { return class_names.size(); }
};

struct CsvOptions {
    bool has_header = false;
    // Label column index; -1 selects the last column. Ignored when
    // label_name is set (requires has_header).
    int label_column = -1;
    std::string label_name;
};

RawDataset load_csv(const std::string& path, const CsvOptions& opt = {});

// Population statistics (divide by n) over all rows. Requires n >= 2.
Dataset z_normalize(const RawDataset& raw);

struct SamplingConfig {
    int d = 3; // items per class per sample
    std::uint64_t seed = 0;
};

// Draws exactly d items from every class, skipping ids marked in
// `excluded` (size n). Deterministic given the seed; the caller is
// responsible for folding the result back into `excluded` when disjoint
// successive samples are needed.
std::vector<ItemId> stratified_sample(const Dataset& ds, const SamplingConfig& cfg,
                                      const std::vector<bool>& excluded);

} // namespace calr
