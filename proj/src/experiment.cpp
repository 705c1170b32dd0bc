#include "calr/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "calr/rng.hpp"

namespace calr {

namespace {

// Stream tags for per-trial seed derivation.
constexpr std::uint64_t kStreamStratify = 0;
constexpr std::uint64_t kStreamBatchSubsample = 1;
constexpr std::uint64_t kStreamNoise = 2;
constexpr std::uint64_t kStreamChannel = 3;

std::uint64_t alpha_key(double alpha) {
    return static_cast<std::uint64_t>(std::llround(alpha * 1e6));
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::runtime_error("bad numeric field in results CSV: " + s);
    return v;
}

} // namespace

ExperimentKind parse_experiment_kind(const std::string& name) {
    if (name == "acc-vs-peers") return ExperimentKind::AccVsPeers;
    if (name == "noise") return ExperimentKind::Noise;
    if (name == "boundary-k") return ExperimentKind::BoundaryK;
    if (name == "batch-size") return ExperimentKind::BatchSize;
    throw std::runtime_error("unknown experiment kind: " + name);
}

std::string experiment_kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::AccVsPeers: return "acc-vs-peers";
        case ExperimentKind::Noise: return "noise";
        case ExperimentKind::BoundaryK: return "boundary-k";
        case ExperimentKind::BatchSize: return "batch-size";
    }
    return "?";
}

std::vector<double> NoiseGrid::points() const {
    if (step <= 0.0) return {start};
    std::vector<double> out;
    for (int i = 0;; ++i) {
        // snap to a 1e-9 lattice so grids like 0:1:0.02 yield clean values
        const double a = std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9;
        if (a > stop + step * 1e-9) break;
        out.push_back(a);
    }
    return out;
}

double accuracy(const std::vector<Label>& predicted, const std::vector<Label>& truth) {
    if (predicted.size() != truth.size())
        throw std::runtime_error("prediction and ground truth sizes differ");
    if (predicted.empty()) throw std::runtime_error("empty prediction");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (predicted[i] == truth[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

RoundScores evaluate_round(const Matrix& batch_features, const std::vector<Label>& truth,
                           const std::vector<Prediction>& clean_preds,
                           const std::vector<Label>& label_space, int k, double alpha,
                           std::uint64_t seed, const RefinementConfig& refine_cfg,
                           ChannelModel channel) {
    const std::size_t k_p = clean_preds.size();
    if (k_p == 0) throw std::runtime_error("no peers");

    const NeighborIndex index = build_index(batch_features, k);

    PeerNetwork net;
    net.channel = channel;
    net.peers.resize(k_p);
    RoundScores scores;

    std::vector<Prediction> corrupted(k_p);
    for (std::size_t p = 0; p < k_p; ++p) {
        const NoiseModel noise{alpha, derive_seed(seed, kStreamNoise, static_cast<std::uint64_t>(p))};
        corrupted[p] = corrupt_labels(clean_preds[p], noise, label_space);
        net.peers[p].prediction = corrupted[p];
        net.peers[p].local = build_local_ca(corrupted[p], index);
        scores.baseline += accuracy(corrupted[p].labels, truth);
    }
    scores.baseline /= static_cast<double>(k_p);
    scores.vm = accuracy(voter_model(corrupted).labels, truth);

    const std::vector<EnsembleCaMatrix> ensembles = exchange(net);

    std::vector<Prediction> refined(k_p);
    for (std::size_t p = 0; p < k_p; ++p) {
        RefineResult res = refine(corrupted[p], ensembles[p], index, refine_cfg);
        scores.iterations_max = std::max(scores.iterations_max, res.iterations);
        scores.lr += accuracy(res.prediction.labels, truth);
        refined[p] = std::move(res.prediction);
    }
    scores.lr /= static_cast<double>(k_p);
    scores.lr_vm = accuracy(lr_vm(refined).labels, truth);
    return scores;
}

std::uint64_t trial_seed(const ExperimentConfig& cfg, int k_p, int k, double alpha, int trial,
                         int batch_limit) {
    return derive_seed(cfg.master_seed, static_cast<std::uint64_t>(cfg.kind),
                       static_cast<std::uint64_t>(k_p), static_cast<std::uint64_t>(k),
                       alpha_key(alpha), static_cast<std::uint64_t>(trial),
                       static_cast<std::uint64_t>(batch_limit < 0 ? 0 : batch_limit));
}

std::vector<ResultRecord> run_trial(const Dataset& ds, const ExperimentConfig& cfg, int k_p,
                                    int k, double alpha, std::uint64_t seed, int trial_index,
                                    int batch_limit) {
    if (k_p < 1) throw std::runtime_error("peer count must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();

    // Disjoint stratified training sets, one per peer.
    std::vector<bool> used(ds.n(), false);
    std::vector<KnnClassifier> classifiers;
    classifiers.reserve(static_cast<std::size_t>(k_p));
    for (int p = 0; p < k_p; ++p) {
        const SamplingConfig sampling{
            cfg.d, derive_seed(seed, kStreamStratify, static_cast<std::uint64_t>(p))};
        const std::vector<ItemId> ids = stratified_sample(ds, sampling, used);
        for (const ItemId id : ids) used[static_cast<std::size_t>(id)] = true;
        classifiers.push_back(train(ds, ids, cfg.vote_k));
    }

    // Shared test batch: everything no peer trained on.
    std::vector<ItemId> batch_ids;
    for (std::size_t i = 0; i < ds.n(); ++i)
        if (!used[i]) batch_ids.push_back(static_cast<ItemId>(i));
    if (batch_limit > 0 && static_cast<std::size_t>(batch_limit) < batch_ids.size()) {
        Rng rng(derive_seed(seed, kStreamBatchSubsample));
        for (int j = 0; j < batch_limit; ++j) {
            const std::size_t pick =
                static_cast<std::size_t>(j) + rng.bounded(batch_ids.size() - static_cast<std::size_t>(j));
            std::swap(batch_ids[static_cast<std::size_t>(j)], batch_ids[pick]);
        }
        batch_ids.resize(static_cast<std::size_t>(batch_limit));
        std::sort(batch_ids.begin(), batch_ids.end());
    }
    if (batch_ids.size() <= static_cast<std::size_t>(k))
        throw std::runtime_error("test batch too small for the requested neighbor count");

    Matrix batch(batch_ids.size(), ds.dims());
    std::vector<Label> truth(batch_ids.size());
    for (std::size_t i = 0; i < batch_ids.size(); ++i) {
        const double* src = ds.features.row(static_cast<std::size_t>(batch_ids[i]));
        std::copy(src, src + ds.dims(), batch.row(i));
        truth[i] = ds.labels[static_cast<std::size_t>(batch_ids[i])];
    }

    std::vector<Prediction> preds(static_cast<std::size_t>(k_p));
    for (int p = 0; p < k_p; ++p)
        preds[static_cast<std::size_t>(p)] = predict(classifiers[static_cast<std::size_t>(p)], batch, p);

    std::vector<Label> label_space(ds.num_classes());
    for (std::size_t c = 0; c < label_space.size(); ++c) label_space[c] = static_cast<Label>(c);

    ChannelModel channel = cfg.channel;
    channel.seed = derive_seed(seed, kStreamChannel);
    const RoundScores scores =
        evaluate_round(batch, truth, preds, label_space, k, alpha, seed, cfg.refine, channel);

    const auto t1 = std::chrono::steady_clock::now();
    const double wall_ms =
        cfg.measure_time
            ? std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0).count()
            : 0.0;

    std::string dataset = cfg.dataset_name;
    if (batch_limit > 0) dataset += ":b=" + std::to_string(batch_limit);

    const auto record = [&](const std::string& method, double acc, int iters) {
        return ResultRecord{dataset, method, k_p, k, alpha, trial_index, seed, acc, iters, wall_ms};
    };
    return {record("baseline", scores.baseline, 0), record("VM", scores.vm, 0),
            record("LR", scores.lr, scores.iterations_max),
            record("LR+VM", scores.lr_vm, scores.iterations_max)};
}

ExperimentOutput run_experiment(const ExperimentConfig& input) {
    ExperimentConfig cfg = input;
    if (cfg.trials < 1) throw std::runtime_error("trials must be >= 1");
    if (cfg.peer_counts.empty()) throw std::runtime_error("peer count list is empty");
    if (cfg.k_list.empty()) throw std::runtime_error("k list is empty");
    const std::vector<double> alphas = cfg.noise.points();
    if (alphas.empty()) throw std::runtime_error("noise grid is empty");
    if (cfg.dataset_name.empty())
        cfg.dataset_name = std::filesystem::path(cfg.dataset_path).stem().string();

    const Dataset ds = load_dataset(cfg);

    ExperimentOutput out;
    const auto run_point = [&](int k_p, int k, double alpha, int batch_limit) {
        for (int trial = 0; trial < cfg.trials; ++trial) {
            const std::uint64_t seed = trial_seed(cfg, k_p, k, alpha, trial, batch_limit);
            auto rows = run_trial(ds, cfg, k_p, k, alpha, seed, trial, batch_limit);
            out.rows.insert(out.rows.end(), rows.begin(), rows.end());
        }
    };

    switch (cfg.kind) {
        case ExperimentKind::AccVsPeers:
            for (const int k_p : cfg.peer_counts) run_point(k_p, cfg.k_list.front(), 0.0, -1);
            break;
        case ExperimentKind::Noise:
            for (const int k_p : cfg.peer_counts)
                for (const double alpha : alphas) run_point(k_p, cfg.k_list.front(), alpha, -1);
            break;
        case ExperimentKind::BoundaryK:
            for (const int k : cfg.k_list)
                for (const double alpha : alphas) run_point(cfg.peer_counts.front(), k, alpha, -1);
            break;
        case ExperimentKind::BatchSize:
            if (cfg.batch_sizes.empty()) throw std::runtime_error("batch size list is empty");
            for (const int b : cfg.batch_sizes)
                run_point(cfg.peer_counts.front(), cfg.k_list.front(), alphas.front(), b);
            break;
    }

    if (!cfg.out_path.empty()) {
        write_rows_csv(cfg.out_path, out.rows);
        out.rows_path = cfg.out_path;
        out.agg_path = aggregate_path(cfg.out_path);
        write_aggregate_csv(out.agg_path, aggregate(out.rows));
    }
    return out;
}

std::vector<AggregateRow> aggregate(const std::vector<ResultRecord>& rows) {
    std::vector<AggregateRow> out;
    std::map<std::tuple<std::string, std::string, int, int, std::uint64_t>, std::size_t> slot;
    std::vector<std::vector<double>> samples;

    for (const ResultRecord& r : rows) {
        const auto key = std::make_tuple(r.dataset, r.method, r.k_p, r.k, alpha_key(r.alpha));
        const auto it = slot.find(key);
        std::size_t idx;
        if (it == slot.end()) {
            idx = out.size();
            slot.emplace(key, idx);
            out.push_back({r.dataset, r.method, r.k_p, r.k, r.alpha, 0, 0.0, 0.0});
            samples.emplace_back();
        } else {
            idx = it->second;
        }
        samples[idx].push_back(r.accuracy);
    }

    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& xs = samples[i];
        const double n = static_cast<double>(xs.size());
        double sum = 0.0;
        for (const double x : xs) sum += x;
        const double mean = sum / n;
        double sq = 0.0;
        for (const double x : xs) sq += (x - mean) * (x - mean);
        out[i].trials = static_cast<int>(xs.size());
        out[i].mean_accuracy = mean;
        out[i].std_accuracy = std::sqrt(sq / n);
    }
    return out;
}

void write_rows_csv(const std::string& path, const std::vector<ResultRecord>& rows) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write results file: " + path);
    f << "dataset,method,k_p,k,alpha,trial,seed,accuracy,iterations,wall_ms\n";
    for (const ResultRecord& r : rows) {
        f << r.dataset << ',' << r.method << ',' << r.k_p << ',' << r.k << ','
          << format_double(r.alpha) << ',' << r.trial << ',' << r.seed << ','
          << format_double(r.accuracy) << ',' << r.iterations << ',' << format_double(r.wall_ms)
          << '\n';
    }
    if (!f) throw std::runtime_error("failed while writing results file: " + path);
}

void write_aggregate_csv(const std::string& path, const std::vector<AggregateRow>& rows) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write aggregate file: " + path);
    f << "dataset,method,k_p,k,alpha,trials,mean_accuracy,std_accuracy\n";
    for (const AggregateRow& r : rows) {
        f << r.dataset << ',' << r.method << ',' << r.k_p << ',' << r.k << ','
          << format_double(r.alpha) << ',' << r.trials << ',' << format_double(r.mean_accuracy)
          << ',' << format_double(r.std_accuracy) << '\n';
    }
    if (!f) throw std::runtime_error("failed while writing aggregate file: " + path);
}

std::vector<ResultRecord> read_rows_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open results file: " + path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("results file is empty: " + path);

    std::vector<ResultRecord> rows;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 10) throw std::runtime_error("bad row in results CSV: " + line);
        ResultRecord r;
        r.dataset = cells[0];
        r.method = cells[1];
        r.k_p = std::stoi(cells[2]);
        r.k = std::stoi(cells[3]);
        r.alpha = parse_double(cells[4]);
        r.trial = std::stoi(cells[5]);
        r.seed = std::stoull(cells[6]);
        r.accuracy = parse_double(cells[7]);
        r.iterations = std::stoi(cells[8]);
        r.wall_ms = parse_double(cells[9]);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::string aggregate_path(const std::string& rows_path) {
    const std::filesystem::path p(rows_path);
    std::filesystem::path out = p;
    if (p.extension() == ".csv") {
        out.replace_extension();
        out += ".agg.csv";
    } else {
        out += ".agg.csv";
    }
    return out.string();
}

Dataset load_dataset(const ExperimentConfig& cfg) {
    return z_normalize(load_csv(cfg.dataset_path, cfg.csv));
}

} // namespace calr
