#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "calr/dataset.hpp"
#include "calr/peer_sim.hpp"
#include "calr/refine.hpp"
#include "calr/types.hpp"

namespace calr {

enum class ExperimentKind { AccVsPeers, Noise, BoundaryK, BatchSize };

ExperimentKind parse_experiment_kind(const std::string& name);
std::string experiment_kind_name(ExperimentKind kind);

// Inclusive noise grid start, start+step, ..., stop.
struct NoiseGrid {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;

    std::vector<double> points() const;
};

struct ExperimentConfig {
    std::string dataset_path;
    std::string dataset_name; // defaults to the file stem
    ExperimentKind kind = ExperimentKind::Noise;
    std::vector<int> peer_counts = {1, 2, 5, 10, 20};
    std::vector<int> k_list = {10};
    NoiseGrid noise{0.0, 1.0, 0.25};
    int trials = 10;
    int d = 3;
    int vote_k = 3;
    std::uint64_t master_seed = 1;
    std::string out_path;
    std::vector<int> batch_sizes = {100, 150, 300, 500, 1000};
    RefinementConfig refine{};
    ChannelModel channel{};
    CsvOptions csv{};
    // Real wall times in the rows make re-runs differ byte-for-byte, so
    // they are opt-in; the default writes 0 and keeps output reproducible.
    bool measure_time = false;
};

struct ResultRecord {
    std::string dataset;
    std::string method; // baseline | VM | LR | LR+VM
    int k_p = 0;
    int k = 0;
    double alpha = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    double accuracy = 0.0;
    int iterations = 0;
    double wall_ms = 0.0;
};

struct AggregateRow {
    std::string dataset;
    std::string method;
    int k_p = 0;
    int k = 0;
    double alpha = 0.0;
    int trials = 0;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;
};

double accuracy(const std::vector<Label>& predicted, const std::vector<Label>& truth);

// One corrupt -> build locals -> exchange -> refine round over an already
// predicted batch. Exposed separately so synthetic predictions can be fed
// through the same path the full trial uses.
struct RoundScores {
    double baseline = 0.0;
    double vm = 0.0;
    double lr = 0.0;
    double lr_vm = 0.0;
    int iterations_max = 0;
};

RoundScores evaluate_round(const Matrix& batch_features, const std::vector<Label>& truth,
                           const std::vector<Prediction>& clean_preds,
                           const std::vector<Label>& label_space, int k, double alpha,
                           std::uint64_t seed, const RefinementConfig& refine_cfg,
                           ChannelModel channel);

// Full trial: disjoint stratified training sets for k_p peers, shared
// test batch = everything left, then evaluate_round. batch_limit > 0
// subsamples the test batch to that many items. Emits one record per
// method.
std::vector<ResultRecord> run_trial(const Dataset& ds, const ExperimentConfig& cfg, int k_p,
                                    int k, double alpha, std::uint64_t trial_seed,
                                    int trial_index, int batch_limit = -1);

std::uint64_t trial_seed(const ExperimentConfig& cfg, int k_p, int k, double alpha, int trial,
                         int batch_limit);

struct ExperimentOutput {
    std::vector<ResultRecord> rows;
    std::string rows_path; // empty when nothing was written
    std::string agg_path;
};

// Runs the configured grid x trials and, when out_path is set, writes the
// row CSV plus a per-(method, grid point) aggregate CSV next to it.
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

std::vector<AggregateRow> aggregate(const std::vector<ResultRecord>& rows);

void write_rows_csv(const std::string& path, const std::vector<ResultRecord>& rows);
void write_aggregate_csv(const std::string& path, const std::vector<AggregateRow>& rows);
std::vector<ResultRecord> read_rows_csv(const std::string& path);
std::string aggregate_path(const std::string& rows_path);

Dataset load_dataset(const ExperimentConfig& cfg);

} // namespace calr
