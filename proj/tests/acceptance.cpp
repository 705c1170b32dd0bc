// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fail. Runs against the real benchmark CSVs when present (CALR_DATA_DIR
// or ./data), otherwise against built-in Gaussian blob fixtures with
// matching class counts.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "calr/experiment.hpp"
#include "calr/rng.hpp"
#include "support/blobs.hpp"
#include "support/oracles.hpp"

using namespace calr;

namespace {

// ---------------------------------------------------------------- data

std::string data_dir() {
    const char* env = std::getenv("CALR_DATA_DIR");
    return env ? std::string(env) : std::string("data");
}

struct Bench {
    std::string name;
    Dataset ds;
    bool real = false;
};

// Chained multi-modal Gaussians: each class is a connected string of
// three modes, several classes sharing a crowded box. Weak 30-item
// learners then miss class regions the way they do on the real digit
// manifolds, which is the regime the refinement method targets.
Dataset blob_bench(std::size_t classes, double spread, double separation, std::uint64_t seed) {
    return calr::testing::make_blob_dataset({.n = 2400,
                                             .classes = classes,
                                             .dims = 8,
                                             .spread = spread,
                                             .separation = separation,
                                             .modes = 3,
                                             .chain_step = 2.5,
                                             .seed = seed});
}

std::vector<Bench>& benchmarks() {
    static std::vector<Bench> cache = [] {
        const struct {
            const char* name;
            std::size_t classes;
            double spread;
            double separation;
            std::uint64_t seed;
        } specs[] = {
            {"drybean", 7, 0.60, 4.2, 407},
            {"pendigit", 10, 0.65, 4.0, 303},
            {"statlog", 6, 0.62, 4.2, 507},
            {"usps", 10, 0.65, 4.0, 308},
        };
        std::vector<Bench> out;
        for (const auto& spec : specs) {
            const std::string path = data_dir() + "/" + spec.name + ".csv";
            if (std::filesystem::exists(path)) {
                out.push_back({spec.name, z_normalize(load_csv(path)), true});
            } else {
                out.push_back({std::string(spec.name) + "-blobs",
                               blob_bench(spec.classes, spec.spread, spec.separation, spec.seed),
                               false});
            }
        }
        return out;
    }();
    return cache;
}

// 10-class dataset with n = 2000 for the noise baseline: subsampled real
// pendigit when available, otherwise a blob fixture of the same shape.
Dataset noise_baseline_dataset() {
    const std::string path = data_dir() + "/pendigit.csv";
    if (std::filesystem::exists(path)) {
        RawDataset raw = load_csv(path);
        Rng rng(777);
        std::vector<std::size_t> ids(raw.n());
        for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
        for (std::size_t j = 0; j < 2000; ++j) {
            const std::size_t pick = j + rng.bounded(ids.size() - j);
            std::swap(ids[j], ids[pick]);
        }
        ids.resize(2000);
        std::sort(ids.begin(), ids.end());

        RawDataset sub;
        sub.features = Matrix(2000, raw.dims());
        sub.labels.resize(2000);
        sub.class_names = raw.class_names;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const double* src = raw.features.row(ids[i]);
            std::copy(src, src + raw.dims(), sub.features.row(i));
            sub.labels[i] = raw.labels[ids[i]];
        }
        return z_normalize(sub);
    }
    return calr::testing::make_blob_dataset({.n = 2000,
                                             .classes = 10,
                                             .dims = 8,
                                             .spread = 0.65,
                                             .separation = 4.0,
                                             .modes = 3,
                                             .chain_step = 2.5,
                                             .seed = 999});
}

// ------------------------------------------------ shared trial machinery

struct Means {
    double baseline = 0.0;
    double vm = 0.0;
    double lr = 0.0;
    double lr_vm = 0.0;
};

constexpr int kTrials = 10;

ExperimentConfig bench_config(const std::string& name) {
    ExperimentConfig cfg;
    cfg.dataset_name = name;
    cfg.trials = kTrials;
    cfg.d = 3;
    cfg.vote_k = 3;
    cfg.master_seed = 20240501;
    return cfg;
}

// trial means at one grid point, cached across criteria
Means mean_scores(std::size_t bench_idx, int k_p, int k, double alpha) {
    static std::map<std::tuple<std::size_t, int, int, long long>, Means> cache;
    const auto key = std::make_tuple(bench_idx, k_p, k, std::llround(alpha * 1e6));
    const auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const Bench& bench = benchmarks()[bench_idx];
    const ExperimentConfig cfg = bench_config(bench.name);
    Means m;
    for (int trial = 0; trial < kTrials; ++trial) {
        const std::uint64_t seed = trial_seed(cfg, k_p, k, alpha, trial, -1);
        const auto rows = run_trial(bench.ds, cfg, k_p, k, alpha, seed, trial);
        m.baseline += rows[0].accuracy;
        m.vm += rows[1].accuracy;
        m.lr += rows[2].accuracy;
        m.lr_vm += rows[3].accuracy;
    }
    m.baseline /= kTrials;
    m.vm /= kTrials;
    m.lr /= kTrials;
    m.lr_vm /= kTrials;
    cache.emplace(key, m);
    return m;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

// ------------------------------------------------------------ criteria

bool criterion_1(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const Dataset ds = noise_baseline_dataset();
    const double inv_l = 1.0 / static_cast<double>(ds.num_classes());

    ExperimentConfig cfg = bench_config("noise-baseline");
    std::vector<double> vm_mean(11, 0.0);
    for (int step = 0; step <= 10; ++step) {
        const double alpha = 0.1 * step;
        for (int trial = 0; trial < kTrials; ++trial) {
            const std::uint64_t seed = trial_seed(cfg, 1, 10, alpha, trial, -1);
            const auto rows = run_trial(ds, cfg, 1, 10, alpha, seed, trial);
            vm_mean[static_cast<std::size_t>(step)] += rows[1].accuracy;
        }
        vm_mean[static_cast<std::size_t>(step)] /= kTrials;
    }

    const double acc0 = vm_mean[0];
    double worst = 0.0;
    for (int step = 0; step <= 10; ++step) {
        const double alpha = 0.1 * step;
        const double expected = (acc0 - inv_l) * (1.0 - alpha) + inv_l;
        worst = std::max(worst, std::abs(vm_mean[static_cast<std::size_t>(step)] - expected));
    }
    const double seconds =
        std::chrono::duration_cast<std::chrono::duration<double>>(std::chrono::steady_clock::now() -
                                                                  t0)
            .count();

    detail = "acc0=" + fmt(acc0) + " worst-gap=" + fmt(worst) + " (tol 0.03), runtime " +
             fmt(seconds) + "s (limit 120)";
    return worst <= 0.03 && seconds < 120.0;
}

bool criterion_2(std::string& detail) {
    int lrvm_wins = 0;
    bool lr_beats_baseline_everywhere = true;
    std::ostringstream log;
    for (std::size_t b = 0; b < benchmarks().size(); ++b) {
        const Means five = mean_scores(b, 5, 10, 0.0);
        const Means twenty = mean_scores(b, 20, 10, 0.0);
        if (!(five.lr > five.baseline)) lr_beats_baseline_everywhere = false;
        if (twenty.lr_vm > twenty.vm) ++lrvm_wins;
        log << benchmarks()[b].name << "(LR " << fmt(five.lr) << " vs base " << fmt(five.baseline)
            << "; LR+VM " << fmt(twenty.lr_vm) << " vs VM " << fmt(twenty.vm) << ") ";
    }
    detail = log.str() + "LR+VM wins " + std::to_string(lrvm_wins) + "/4 (need >= 3)";
    return lr_beats_baseline_everywhere && lrvm_wins >= 3;
}

bool criterion_3(std::string& detail) {
    bool ok = true;
    std::ostringstream log;
    for (std::size_t b = 0; b < benchmarks().size(); ++b) {
        const Means clean = mean_scores(b, 20, 10, 0.0);
        const Means noisy = mean_scores(b, 20, 10, 0.5);
        const bool ordering = noisy.lr_vm >= noisy.lr && noisy.lr > noisy.vm;
        const bool retention = noisy.lr_vm >= 0.9 * clean.lr_vm;
        if (!(ordering && retention)) ok = false;
        log << benchmarks()[b].name << "(LR+VM " << fmt(noisy.lr_vm) << " LR " << fmt(noisy.lr)
            << " VM " << fmt(noisy.vm) << ", retention " << fmt(noisy.lr_vm / clean.lr_vm) << ") ";
    }
    detail = log.str();
    return ok;
}

bool criterion_4(std::string& detail) {
    bool flat_at_k1 = true;
    bool recovery_with_k = true;
    std::ostringstream log;
    for (std::size_t b = 0; b < benchmarks().size(); ++b) {
        const Means k1 = mean_scores(b, 10, 1, 0.0);
        const double gap = std::abs(k1.lr - k1.baseline);
        if (gap > 0.02) flat_at_k1 = false;

        const Means k3 = mean_scores(b, 10, 3, 0.5);
        const Means k10 = mean_scores(b, 10, 10, 0.5);
        if (!(k10.lr > k3.lr)) recovery_with_k = false;
        log << benchmarks()[b].name << "(|LR(k=1)-base|=" << fmt(gap) << "; LR@0.5 k10 "
            << fmt(k10.lr) << " vs k3 " << fmt(k3.lr) << ") ";
    }
    detail = log.str();
    return flat_at_k1 && recovery_with_k;
}

bool criterion_5(std::string& detail) {
    std::size_t sweep_mismatches = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(5000 + seed);
        const std::size_t n = 200;
        const int k = 10;
        Matrix features(n, 3);
        for (double& x : features.data) x = rng.next_double();
        const NeighborIndex index = build_index(features, k);

        EnsembleCaMatrix ca(n, k);
        for (std::size_t idx = 0; idx < ca.weight_sum.size(); ++idx) {
            const std::uint32_t received = static_cast<std::uint32_t>(1 + rng.bounded(8));
            ca.received_count[idx] = received;
            ca.weight_sum[idx] = static_cast<double>(rng.bounded(received + 1));
        }
        std::vector<Label> space{0, 1, 2, 3, 4};
        Prediction y0;
        y0.label_space = space;
        y0.labels.resize(n);
        for (Label& l : y0.labels) l = static_cast<Label>(rng.bounded(5));

        const RefineResult res = refine(y0, ca, index, {1, 0.0});
        const auto expected = calr::testing::oracle_refine_sweep(y0.labels, ca, index, space);
        if (res.prediction.labels != expected) ++sweep_mismatches;
    }

    // local CA against the definition
    std::size_t ca_mismatches = 0;
    {
        Rng rng(6001);
        const Dataset ds = calr::testing::make_blob_dataset(
            {.n = 300, .classes = 6, .dims = 4, .spread = 1.5, .separation = 3.0, .seed = 61});
        const NeighborIndex index = build_index(ds.features, 9);
        Prediction pred;
        pred.label_space = {0, 1, 2, 3, 4, 5};
        pred.labels.resize(ds.n());
        for (Label& l : pred.labels) l = static_cast<Label>(rng.bounded(6));
        const LocalCaMatrix local = build_local_ca(pred, index);
        const auto oracle = calr::testing::oracle_local_ca(pred.labels, index);
        for (std::size_t i = 0; i < index.n; ++i)
            for (int j = 0; j < index.k; ++j)
                if (static_cast<int>(local.at(i, j)) != oracle[i][static_cast<std::size_t>(j)])
                    ++ca_mismatches;
    }

    // exact k-NN against exhaustive search up to the n = 500 bound
    std::size_t knn_mismatches = 0;
    for (const std::size_t n : {150, 350, 500}) {
        const Dataset ds = calr::testing::make_blob_dataset(
            {.n = n, .classes = 5, .dims = 3, .spread = 1.2, .separation = 3.0,
             .seed = 400 + n});
        const int k = 10;
        const NeighborIndex index = build_index(ds.features, k);
        const auto oracle = calr::testing::oracle_knn(ds.features, k);
        for (std::size_t i = 0; i < index.n; ++i)
            for (int j = 0; j < k; ++j)
                if (index.row(i)[static_cast<std::size_t>(j)] != oracle[i][static_cast<std::size_t>(j)])
                    ++knn_mismatches;
    }

    detail = "sweep mismatches " + std::to_string(sweep_mismatches) + "/100, CA mismatches " +
             std::to_string(ca_mismatches) + ", kNN mismatches " + std::to_string(knn_mismatches);
    return sweep_mismatches == 0 && ca_mismatches == 0 && knn_mismatches == 0;
}

bool criterion_6(std::string& detail) {
    std::ostringstream log;
    bool ok = true;

    // peer-permutation invariance of accumulation
    {
        Rng rng(701);
        const std::size_t n = 50;
        const int k = 6;
        std::vector<LocalCaMatrix> locals;
        for (int p = 0; p < 8; ++p) {
            LocalCaMatrix local;
            local.n = n;
            local.k = k;
            local.peer_id = p;
            local.entries.resize(n * static_cast<std::size_t>(k));
            for (auto& e : local.entries) e = static_cast<std::uint8_t>(rng.bounded(2));
            locals.push_back(std::move(local));
        }
        EnsembleCaMatrix forward(n, k);
        for (const auto& l : locals) accumulate(forward, l);
        bool perm_ok = true;
        for (int rep = 0; rep < 10; ++rep) {
            std::vector<std::size_t> order(locals.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            for (std::size_t i = 0; i < order.size(); ++i) {
                const std::size_t pick = i + rng.bounded(order.size() - i);
                std::swap(order[i], order[pick]);
            }
            EnsembleCaMatrix shuffled(n, k);
            for (const std::size_t p : order) accumulate(shuffled, locals[p]);
            if (shuffled.weight_sum != forward.weight_sum ||
                shuffled.received_count != forward.received_count)
                perm_ok = false;
        }
        if (!perm_ok) ok = false;
        log << "perm=" << (perm_ok ? "ok" : "FAIL") << " ";
    }

    // label-bijection invariance of the local CA
    {
        Rng rng(702);
        const Dataset ds = calr::testing::make_blob_dataset(
            {.n = 150, .classes = 5, .dims = 3, .spread = 1.0, .separation = 3.0, .seed = 62});
        const NeighborIndex index = build_index(ds.features, 7);
        Prediction pred;
        pred.label_space = {0, 1, 2, 3, 4};
        pred.labels.resize(ds.n());
        for (Label& l : pred.labels) l = static_cast<Label>(rng.bounded(5));

        std::vector<Label> perm{11, 3, 17, 8, 5};
        for (std::size_t i = 0; i < perm.size(); ++i) {
            const std::size_t pick = i + rng.bounded(perm.size() - i);
            std::swap(perm[i], perm[pick]);
        }
        Prediction relabeled = pred;
        relabeled.label_space = perm;
        for (Label& l : relabeled.labels) l = perm[static_cast<std::size_t>(l)];

        const bool bij_ok =
            build_local_ca(pred, index).entries == build_local_ca(relabeled, index).entries;
        if (!bij_ok) ok = false;
        log << "bijection=" << (bij_ok ? "ok" : "FAIL") << " ";
    }

    // positive scaling invariance of refinement
    {
        Rng rng(703);
        const std::size_t n = 180;
        const int k = 8;
        Matrix features(n, 3);
        for (double& x : features.data) x = rng.next_double();
        const NeighborIndex index = build_index(features, k);
        EnsembleCaMatrix ca(n, k);
        for (std::size_t idx = 0; idx < ca.weight_sum.size(); ++idx) {
            ca.received_count[idx] = 5;
            // continuous weights keep exact cross-label score ties out of
            // the picture, so scale factors cannot flip tie decisions
            ca.weight_sum[idx] = 5.0 * rng.next_double();
        }
        Prediction y0;
        y0.label_space = {0, 1, 2, 3};
        y0.labels.resize(n);
        for (Label& l : y0.labels) l = static_cast<Label>(rng.bounded(4));

        const RefineResult base = refine(y0, ca, index);
        bool scale_ok = true;
        for (const double scale : {0.25, 7.0}) {
            EnsembleCaMatrix scaled = ca;
            for (double& w : scaled.weight_sum) w *= scale;
            if (refine(y0, scaled, index).prediction.labels != base.prediction.labels)
                scale_ok = false;
        }
        if (!scale_ok) ok = false;
        log << "scaling=" << (scale_ok ? "ok" : "FAIL") << " ";

        // own-matrix fixed point on the same geometry
        const LocalCaMatrix own = build_local_ca(y0, index);
        EnsembleCaMatrix own_acc(n, k);
        accumulate(own_acc, own);
        const RefineResult own_res = refine(y0, own_acc, index);
        const bool own_ok = own_res.prediction.labels == y0.labels && own_res.iterations == 1;
        if (!own_ok) ok = false;
        log << "own-fixed-point=" << (own_ok ? "ok" : "FAIL") << " ";

        // single-class fixed point
        Prediction uniform = y0;
        uniform.labels.assign(n, 2);
        const bool uniform_ok = refine(uniform, ca, index).prediction.labels == uniform.labels;
        if (!uniform_ok) ok = false;
        log << "single-class=" << (uniform_ok ? "ok" : "FAIL") << " ";
    }

    // corruption: exact count and the alpha = 1 accuracy floor
    {
        const std::size_t n = 5000;
        std::vector<Label> space{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
        Rng rng(704);
        Prediction pred;
        pred.label_space = space;
        pred.labels.resize(n);
        for (Label& l : pred.labels) l = static_cast<Label>(rng.bounded(10));

        const Prediction marked = corrupt_labels(pred, {0.37, 71}, {99});
        std::size_t rewritten = 0;
        for (const Label l : marked.labels)
            if (l == 99) ++rewritten;
        const bool count_ok = rewritten == static_cast<std::size_t>(std::llround(0.37 * n));
        if (!count_ok) ok = false;
        log << "count=" << (count_ok ? "ok" : "FAIL") << " ";

        const Prediction full = corrupt_labels(pred, {1.0, 72}, space);
        std::size_t hits = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (full.labels[i] == pred.labels[i]) ++hits;
        const double acc = static_cast<double>(hits) / static_cast<double>(n);
        const double sigma = std::sqrt(0.1 * 0.9 / static_cast<double>(n));
        const bool floor_ok = std::abs(acc - 0.1) <= 3.0 * sigma;
        if (!floor_ok) ok = false;
        log << "alpha1-floor=" << (floor_ok ? "ok" : "FAIL") << " (acc " << fmt(acc) << ")";
    }

    detail = log.str();
    return ok;
}

bool criterion_7(std::string& detail) {
    Rng rng(801);
    std::size_t roundtrip_failures = 0;
    std::size_t size_failures = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        LocalCaMatrix local;
        local.n = 1 + rng.bounded(80);
        local.k = static_cast<int>(1 + rng.bounded(16));
        local.peer_id = static_cast<int>(rng.bounded(1000));
        local.entries.resize(local.n * static_cast<std::size_t>(local.k));
        for (auto& e : local.entries) e = static_cast<std::uint8_t>(rng.bounded(2));

        const auto bytes = serialize(local);
        const std::size_t bits = local.n * static_cast<std::size_t>(local.k);
        if (bytes.size() != 16 + (bits + 7) / 8) ++size_failures;

        const LocalCaMatrix back = deserialize(bytes, local.n, local.k);
        if (back.entries != local.entries || back.peer_id != local.peer_id) ++roundtrip_failures;
    }

    // the published size example: n = 1000, k = 10 -> 1250 payload bytes
    LocalCaMatrix big;
    big.n = 1000;
    big.k = 10;
    big.peer_id = 1;
    big.entries.assign(10000, 1);
    const auto big_bytes = serialize(big);
    const bool example_ok = big_bytes.size() == 16 + 1250;

    bool truncation_ok = true;
    {
        auto cut = big_bytes;
        cut.pop_back();
        try {
            deserialize(cut, big.n, big.k);
            truncation_ok = false;
        } catch (const std::exception&) {
        }
        try {
            deserialize(std::vector<std::uint8_t>(big_bytes.begin(), big_bytes.begin() + 7),
                        big.n, big.k);
            truncation_ok = false;
        } catch (const std::exception&) {
        }
    }

    detail = "roundtrip failures " + std::to_string(roundtrip_failures) + "/1000, size failures " +
             std::to_string(size_failures) + ", example(1250B)=" +
             (example_ok ? "ok" : "FAIL") + ", truncation=" + (truncation_ok ? "ok" : "FAIL");
    return roundtrip_failures == 0 && size_failures == 0 && example_ok && truncation_ok;
}

bool criterion_8(std::string& detail) {
    const RawDataset raw = calr::testing::make_blobs(
        {.n = 500, .classes = 5, .dims = 4, .spread = 1.2, .separation = 4.0, .seed = 901});
    const auto tmp = std::filesystem::temp_directory_path();
    const std::string csv_path = (tmp / "calr_acceptance_fixture.csv").string();
    {
        std::ofstream out(csv_path, std::ios::binary);
        for (std::size_t i = 0; i < raw.n(); ++i) {
            for (std::size_t c = 0; c < raw.dims(); ++c) out << raw.features.at(i, c) << ',';
            out << raw.class_names[static_cast<std::size_t>(raw.labels[i])] << '\n';
        }
    }

    ExperimentConfig cfg;
    cfg.dataset_path = csv_path;
    cfg.dataset_name = "fixture";
    cfg.kind = ExperimentKind::Noise;
    cfg.peer_counts = {2, 5};
    cfg.k_list = {8};
    cfg.noise = {0.0, 1.0, 0.5};
    cfg.trials = 3;
    cfg.master_seed = 321;

    const auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };

    const std::string out1 = (tmp / "calr_acceptance_run1.csv").string();
    const std::string out2 = (tmp / "calr_acceptance_run2.csv").string();
    cfg.out_path = out1;
    run_experiment(cfg);
    cfg.out_path = out2;
    run_experiment(cfg);

    const bool rows_same = slurp(out1) == slurp(out2);
    const bool aggs_same = slurp(aggregate_path(out1)) == slurp(aggregate_path(out2));

    for (const auto& p : {out1, out2}) {
        std::error_code ec;
        std::filesystem::remove(p, ec);
        std::filesystem::remove(aggregate_path(p), ec);
    }
    {
        std::error_code ec;
        std::filesystem::remove(csv_path, ec);
    }

    detail = std::string("rows ") + (rows_same ? "identical" : "DIFFER") + ", aggregates " +
             (aggs_same ? "identical" : "DIFFER");
    return rows_same && aggs_same;
}

struct Criterion {
    int id;
    std::string name;
    std::function<bool(std::string&)> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "VM noise baseline matches the linear formula within 0.03", criterion_1},
        {2, "ensemble improvement: LR beats the mean learner, LR+VM beats VM on >= 3/4", criterion_2},
        {3, "noise resilience at alpha=0.5: LR+VM >= LR > VM and >= 90% retention", criterion_3},
        {4, "boundary k: k=1 is inert (<= 0.02), k=10 recovers more than k=3 at alpha=0.5",
         criterion_4},
        {5, "oracle equivalence: refine sweep, local CA and exact k-NN", criterion_5},
        {6, "algebraic invariants: permutation, bijection, scaling, fixed points, corruption",
         criterion_6},
        {7, "wire format: round trip, exact payload size, truncation rejected", criterion_7},
        {8, "determinism: same master seed, byte-identical CSV output", criterion_8},
    };

    std::vector<int> selected;
    for (int a = 1; a < argc; ++a) selected.push_back(std::atoi(argv[a]));

    bool any_real = false;
    for (const Bench& b : benchmarks()) any_real |= b.real;
    std::cout << "datasets: " << (any_real ? "real CSVs from " + data_dir() : "blob fixtures")
              << "\n";

    int failures = 0;
    for (const Criterion& c : criteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), c.id) == selected.end())
            continue;
        std::string detail;
        bool pass = false;
        try {
            pass = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.name
                  << " -- " << detail << "\n";
        if (!pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
