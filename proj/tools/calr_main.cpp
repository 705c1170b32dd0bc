// calr command line: fetch benchmark datasets, run experiment grids, or
// inspect a single refinement round.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#ifdef CALR_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "calr/experiment.hpp"
#include "calr/fetch.hpp"
#include "calr/rng.hpp"

namespace {

struct UrlParts {
    std::string scheme;
    std::string host;
    std::string path;
};

UrlParts parse_url(const std::string& url) {
    const std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw std::runtime_error("bad URL: " + url);
    UrlParts parts;
    parts.scheme = url.substr(0, scheme_end);
    const std::size_t host_start = scheme_end + 3;
    const std::size_t path_start = url.find('/', host_start);
    if (path_start == std::string::npos) {
        parts.host = url.substr(host_start);
        parts.path = "/";
    } else {
        parts.host = url.substr(host_start, path_start - host_start);
        parts.path = url.substr(path_start);
    }
    return parts;
}

std::string http_get(const std::string& url) {
    const UrlParts parts = parse_url(url);
    httplib::Result res;
    if (parts.scheme == "https") {
#ifdef CALR_HAVE_OPENSSL
        httplib::SSLClient client(parts.host);
        client.set_follow_location(true);
        client.set_read_timeout(120, 0);
        res = client.Get(parts.path);
#else
        throw std::runtime_error(
            "built without TLS support; download " + url +
            " manually and pass it with --from");
#endif
    } else if (parts.scheme == "http") {
        httplib::Client client(parts.host);
        client.set_follow_location(true);
        client.set_read_timeout(120, 0);
        res = client.Get(parts.path);
    } else {
        throw std::runtime_error("unsupported URL scheme: " + parts.scheme);
    }
    if (!res) {
        std::ostringstream msg;
        msg << "request to " << url << " failed: " << httplib::to_string(res.error());
        throw std::runtime_error(msg.str());
    }
    if (res->status != 200) {
        std::ostringstream msg;
        msg << "request to " << url << " returned HTTP " << res->status;
        throw std::runtime_error(msg.str());
    }
    return res->body;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int fetch_one(const std::string& name, const std::string& out_dir,
              const std::vector<std::string>& from_files) {
    const calr::DatasetSource& source = calr::dataset_source(name);

    std::vector<std::string> texts;
    if (!from_files.empty()) {
        for (const std::string& path : from_files) texts.push_back(read_file(path));
    } else {
        for (const std::string& url : source.urls) {
            std::cout << "fetching " << url << "\n";
            texts.push_back(http_get(url));
        }
    }

    const std::string csv = calr::convert_to_csv(source, texts);
    std::filesystem::create_directories(out_dir);
    const std::string out_path =
        (std::filesystem::path(out_dir) / (source.name + ".csv")).string();
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << csv;
    if (!out) throw std::runtime_error("failed while writing " + out_path);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

calr::NoiseGrid parse_noise(const std::string& text) {
    calr::NoiseGrid grid;
    const std::size_t p1 = text.find(':');
    const std::size_t p2 = text.find(':', p1 == std::string::npos ? p1 : p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
        throw std::runtime_error("noise grid must be start:stop:step, got '" + text + "'");
    grid.start = std::stod(text.substr(0, p1));
    grid.stop = std::stod(text.substr(p1 + 1, p2 - p1 - 1));
    grid.step = std::stod(text.substr(p2 + 1));
    return grid;
}

int run_refine_once(const calr::ExperimentConfig& cfg, int k_p, int k, double alpha) {
    using namespace calr;
    const Dataset ds = load_dataset(cfg);

    std::vector<bool> used(ds.n(), false);
    std::vector<KnnClassifier> classifiers;
    const std::uint64_t seed = cfg.master_seed;
    for (int p = 0; p < k_p; ++p) {
        const SamplingConfig sampling{cfg.d, derive_seed(seed, 0, static_cast<std::uint64_t>(p))};
        const std::vector<ItemId> ids = stratified_sample(ds, sampling, used);
        for (const ItemId id : ids) used[static_cast<std::size_t>(id)] = true;
        classifiers.push_back(train(ds, ids, cfg.vote_k));
    }

    std::vector<ItemId> batch_ids;
    for (std::size_t i = 0; i < ds.n(); ++i)
        if (!used[i]) batch_ids.push_back(static_cast<ItemId>(i));
    Matrix batch(batch_ids.size(), ds.dims());
    std::vector<Label> truth(batch_ids.size());
    for (std::size_t i = 0; i < batch_ids.size(); ++i) {
        const double* src = ds.features.row(static_cast<std::size_t>(batch_ids[i]));
        std::copy(src, src + ds.dims(), batch.row(i));
        truth[i] = ds.labels[static_cast<std::size_t>(batch_ids[i])];
    }

    const NeighborIndex index = build_index(batch, k);

    std::vector<Label> label_space(ds.num_classes());
    for (std::size_t c = 0; c < label_space.size(); ++c) label_space[c] = static_cast<Label>(c);

    PeerNetwork net;
    net.channel = cfg.channel;
    net.channel.seed = derive_seed(seed, 3);
    net.peers.resize(static_cast<std::size_t>(k_p));
    std::vector<Prediction> corrupted(static_cast<std::size_t>(k_p));
    for (int p = 0; p < k_p; ++p) {
        const std::size_t pi = static_cast<std::size_t>(p);
        const Prediction clean = predict(classifiers[pi], batch, p);
        const NoiseModel noise{alpha, derive_seed(seed, 2, static_cast<std::uint64_t>(p))};
        corrupted[pi] = corrupt_labels(clean, noise, label_space);
        net.peers[pi].prediction = corrupted[pi];
        net.peers[pi].local = build_local_ca(corrupted[pi], index);
    }

    const std::vector<EnsembleCaMatrix> ensembles = exchange(net);

    std::cout << "dataset: " << cfg.dataset_path << "  n=" << ds.n() << "  batch=" << batch.rows
              << "  classes=" << ds.num_classes() << "\n";
    std::cout << "peers=" << k_p << "  k=" << k << "  alpha=" << alpha << "  seed=" << seed
              << "\n\n";
    std::cout << "peer  initial_acc  refined_acc  iterations\n";

    std::vector<Prediction> refined(static_cast<std::size_t>(k_p));
    double lr_mean = 0.0;
    for (int p = 0; p < k_p; ++p) {
        const std::size_t pi = static_cast<std::size_t>(p);
        RefineResult res = refine(corrupted[pi], ensembles[pi], index, cfg.refine);
        const double before = accuracy(corrupted[pi].labels, truth);
        const double after = accuracy(res.prediction.labels, truth);
        lr_mean += after;
        std::printf("%4d  %11.4f  %11.4f  %10d\n", p, before, after, res.iterations);
        refined[pi] = std::move(res.prediction);
    }
    lr_mean /= static_cast<double>(k_p);

    std::cout << "\nVM    = " << accuracy(voter_model(corrupted).labels, truth) << "\n";
    std::cout << "LR    = " << lr_mean << "\n";
    std::cout << "LR+VM = " << accuracy(lr_vm(refined).labels, truth) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"co-association label refinement toolkit"};
    app.require_subcommand(1);

    // fetch-data
    auto* fetch = app.add_subcommand("fetch-data", "download a benchmark dataset as CSV");
    std::string fetch_name;
    std::string fetch_out = ".";
    std::vector<std::string> fetch_from;
    fetch->add_option("name", fetch_name, "drybean | pendigit | statlog | usps | all")->required();
    fetch->add_option("--out", fetch_out, "output directory");
    fetch->add_option("--from", fetch_from,
                      "already-downloaded raw file(s) to convert instead of fetching");

    // shared dataset flags
    calr::ExperimentConfig cfg;
    const auto add_dataset_flags = [&cfg](CLI::App* cmd) {
        cmd->add_option("--dataset", cfg.dataset_path, "input CSV file")->required();
        cmd->add_flag("--header", cfg.csv.has_header, "input CSV has a header row");
        cmd->add_option("--label-col", cfg.csv.label_column,
                        "label column index (default: last column)");
        cmd->add_option("--label-name", cfg.csv.label_name,
                        "label column name (requires --header)");
        cmd->add_option("--d", cfg.d, "training items per class per peer");
        cmd->add_option("--vote-k", cfg.vote_k, "internal neighbor count of each weak learner");
        cmd->add_option("--max-iters", cfg.refine.max_iters, "refinement iteration cap");
        cmd->add_option("--epsilon", cfg.refine.convergence_epsilon,
                        "refinement convergence threshold");
        cmd->add_option("--pair-drop", cfg.channel.pair_drop_prob,
                        "per-pair message drop probability");
        cmd->add_option("--peer-drop", cfg.channel.peer_drop_prob,
                        "whole-message drop probability");
    };

    // run
    auto* run = app.add_subcommand("run", "run an experiment grid and write result CSVs");
    std::string run_kind = "noise";
    std::string run_noise;
    std::string run_name;
    add_dataset_flags(run);
    run->add_option("--experiment", run_kind, "acc-vs-peers | noise | boundary-k | batch-size");
    run->add_option("--peers", cfg.peer_counts, "ensemble sizes")->delimiter(',');
    run->add_option("--k", cfg.k_list, "boundary neighbor counts")->delimiter(',');
    run->add_option("--noise", run_noise, "noise grid start:stop:step");
    run->add_option("--trials", cfg.trials, "trials per grid point");
    run->add_option("--seed", cfg.master_seed, "master seed");
    run->add_option("--out", cfg.out_path, "output CSV path")->required();
    run->add_option("--name", run_name, "dataset name for the CSV (default: file stem)");
    run->add_option("--batch-sizes", cfg.batch_sizes, "batch sizes for the batch-size experiment")
        ->delimiter(',');
    run->add_flag("--measure-time", cfg.measure_time,
                  "record real wall times (makes re-runs differ byte-for-byte)");

    // refine-once
    auto* once = app.add_subcommand("refine-once", "run one pipeline round and print a summary");
    int once_peers = 10;
    int once_k = 10;
    double once_alpha = 0.0;
    add_dataset_flags(once);
    once->add_option("--peers", once_peers, "ensemble size");
    once->add_option("--k", once_k, "boundary neighbor count");
    once->add_option("--seed", cfg.master_seed, "seed");
    once->add_option("--alpha", once_alpha, "label noise level");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fetch->parsed()) {
            if (fetch_name == "all") {
                if (!fetch_from.empty())
                    throw std::runtime_error("--from needs a single dataset name, not 'all'");
                for (const auto& src : calr::dataset_sources()) fetch_one(src.name, fetch_out, {});
                return 0;
            }
            return fetch_one(fetch_name, fetch_out, fetch_from);
        }
        if (run->parsed()) {
            cfg.kind = calr::parse_experiment_kind(run_kind);
            if (!run_noise.empty()) cfg.noise = parse_noise(run_noise);
            if (!run_name.empty()) cfg.dataset_name = run_name;
            const calr::ExperimentOutput out = calr::run_experiment(cfg);
            std::cout << "wrote " << out.rows.size() << " rows to " << out.rows_path << "\n";
            std::cout << "wrote aggregates to " << out.agg_path << "\n";
            return 0;
        }
        if (once->parsed()) return run_refine_once(cfg, once_peers, once_k, once_alpha);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
