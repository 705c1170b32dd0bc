#include "calr/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "calr/kernels.hpp"
#include "calr/rng.hpp"

namespace calr {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    for (auto& cell : out) {
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.pop_back();
        std::size_t i = 0;
        while (i < cell.size() && (cell[i] == ' ' || cell[i] == '\t')) ++i;
        cell.erase(0, i);
    }
    return out;
}

double parse_feature(const std::string& cell, std::size_t row, std::size_t col) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) {
        std::ostringstream msg;
        msg << "non-numeric feature cell '" << cell << "' at row " << row << ", column " << col;
        throw std::runtime_error(msg.str());
    }
    return value;
}

} // namespace

RawDataset load_csv(const std::string& path, const CsvOptions& opt) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        lines.push_back(std::move(line));
    }

    std::size_t first_row = 0;
    std::vector<std::string> header;
    if (opt.has_header) {
        if (lines.empty()) throw std::runtime_error("empty dataset");
        header = split_line(lines[0]);
        first_row = 1;
    }
    if (lines.size() <= first_row) throw std::runtime_error("empty dataset");

    const std::size_t cols = split_line(lines[first_row]).size();
    if (cols < 2) throw std::runtime_error("dataset needs at least one feature column and a label column");

    std::size_t label_col;
    if (!opt.label_name.empty()) {
        if (!opt.has_header)
            throw std::runtime_error("label column by name requires a header row");
        const auto it = std::find(header.begin(), header.end(), opt.label_name);
        if (it == header.end())
            throw std::runtime_error("label column '" + opt.label_name + "' not found in header");
        label_col = static_cast<std::size_t>(it - header.begin());
    } else if (opt.label_column < 0) {
        label_col = cols - 1;
    } else {
        label_col = static_cast<std::size_t>(opt.label_column);
    }
    if (label_col >= cols) throw std::runtime_error("label column index out of range");
    if (opt.has_header && header.size() != cols)
        throw std::runtime_error("header column count does not match data rows");

    const std::size_t n = lines.size() - first_row;
    RawDataset raw;
    raw.features = Matrix(n, cols - 1);
    raw.labels.resize(n);

    std::unordered_map<std::string, Label> encoding;
    for (std::size_t r = 0; r < n; ++r) {
        const auto cells = split_line(lines[first_row + r]);
        if (cells.size() != cols) {
            std::ostringstream msg;
            msg << "ragged row " << r << ": expected " << cols << " columns, got " << cells.size();
            throw std::runtime_error(msg.str());
        }
        double* dst = raw.features.row(r);
        std::size_t f = 0;
        for (std::size_t c = 0; c < cols; ++c) {
            if (c == label_col) continue;
            dst[f++] = parse_feature(cells[c], r, c);
        }
        const auto it = encoding.find(cells[label_col]);
        if (it != encoding.end()) {
            raw.labels[r] = it->second;
        } else {
            const Label id = static_cast<Label>(raw.class_names.size());
            encoding.emplace(cells[label_col], id);
            raw.class_names.push_back(cells[label_col]);
            raw.labels[r] = id;
        }
    }
    return raw;
}

Dataset z_normalize(const RawDataset& raw) {
    const std::size_t n = raw.n();
    const std::size_t f = raw.dims();
    if (n < 2) throw std::runtime_error("z-normalization needs at least 2 items");

    Dataset ds;
    ds.features = Matrix(n, f);
    ds.labels = raw.labels;
    ds.class_names = raw.class_names;
    ds.class_counts.assign(raw.num_classes(), 0);
    for (const Label l : raw.labels) ds.class_counts[static_cast<std::size_t>(l)]++;

    std::vector<double> column(n);
    for (std::size_t c = 0; c < f; ++c) {
        for (std::size_t r = 0; r < n; ++r) column[r] = raw.features.at(r, c);

        double sum = 0.0, sumsq = 0.0;
        kernels::sum_sumsq(column.data(), n, sum, sumsq);
        const double mean = sum / static_cast<double>(n);

        // Second pass on the centered column keeps the variance exact for
        // columns with large offsets.
        for (std::size_t r = 0; r < n; ++r) column[r] -= mean;
        kernels::sum_sumsq(column.data(), n, sum, sumsq);
        const double var = sumsq / static_cast<double>(n);
        const double stddev = std::sqrt(var);

        if (stddev > 0.0) {
            const double inv = 1.0 / stddev;
            for (std::size_t r = 0; r < n; ++r) ds.features.at(r, c) = column[r] * inv;
        }
        // constant column: leave as zeros
    }
    return ds;
}

std::vector<ItemId> stratified_sample(const Dataset& ds, const SamplingConfig& cfg,
                                      const std::vector<bool>& excluded) {
    if (cfg.d < 1) throw std::runtime_error("sampling requires d >= 1");
    if (!excluded.empty() && excluded.size() != ds.n())
        throw std::runtime_error("excluded mask size does not match dataset");

    const std::size_t d = static_cast<std::size_t>(cfg.d);
    std::vector<ItemId> out;
    out.reserve(d * ds.num_classes());

    std::vector<ItemId> eligible;
    for (std::size_t c = 0; c < ds.num_classes(); ++c) {
        eligible.clear();
        for (std::size_t i = 0; i < ds.n(); ++i) {
            if (ds.labels[i] != static_cast<Label>(c)) continue;
            if (!excluded.empty() && excluded[i]) continue;
            eligible.push_back(static_cast<ItemId>(i));
        }
        if (eligible.size() < d) {
            std::ostringstream msg;
            msg << "class '" << ds.class_names[c] << "' has " << eligible.size()
                << " items available, need " << d;
            throw std::runtime_error(msg.str());
        }
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(c)));
        for (std::size_t j = 0; j < d; ++j) {
            const std::size_t pick = j + rng.bounded(eligible.size() - j);
            std::swap(eligible[j], eligible[pick]);
            out.push_back(eligible[j]);
        }
    }
    return out;
}

} // namespace calr
