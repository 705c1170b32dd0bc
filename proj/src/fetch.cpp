#include "calr/fetch.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace calr {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string strip_quotes(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '\'' && s.back() == '\'') ||
                          (s.front() == '"' && s.back() == '"')))
        return s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string> split_csv_cells(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    char quote_char = 0;
    for (const char c : line) {
        if (quoted) {
            if (c == quote_char) quoted = false;
            else cell.push_back(c);
        } else if (c == '\'' || c == '"') {
            quoted = true;
            quote_char = c;
        } else if (c == ',') {
            out.push_back(trim(cell));
            cell.clear();
        } else {
            cell.push_back(c);
        }
    }
    out.push_back(trim(cell));
    return out;
}

} // namespace

const std::vector<DatasetSource>& dataset_sources() {
    static const std::vector<DatasetSource> sources = {
        {"drybean",
         DatasetSource::Format::Arff,
         {"https://api.openml.org/data/download/22111905/dataset"},
         "OpenML copy of the UCI Dry Bean dataset (13611 rows, 7 classes)"},
        {"pendigit",
         DatasetSource::Format::DelimComma,
         {"https://archive.ics.uci.edu/ml/machine-learning-databases/pendigits/pendigits.tra",
          "https://archive.ics.uci.edu/ml/machine-learning-databases/pendigits/pendigits.tes"},
         "UCI Pen-Based Recognition of Handwritten Digits; train and test "
         "parts merged (10992 rows, 10 classes)"},
        {"statlog",
         DatasetSource::Format::DelimSpace,
         {"https://archive.ics.uci.edu/ml/machine-learning-databases/statlog/satimage/sat.trn",
          "https://archive.ics.uci.edu/ml/machine-learning-databases/statlog/satimage/sat.tst"},
         "UCI Statlog Landsat Satellite; train and test parts merged "
         "(6435 rows, 6 classes)"},
        {"usps",
         DatasetSource::Format::Arff,
         {"https://api.openml.org/data/download/19329737/usps.arff"},
         "OpenML copy of the USPS digits dataset (9298 rows, 10 classes)"},
    };
    return sources;
}

const DatasetSource& dataset_source(const std::string& name) {
    const std::string needle = lower(name);
    for (const DatasetSource& s : dataset_sources())
        if (s.name == needle) return s;
    throw std::runtime_error("unknown dataset '" + name +
                             "' (expected drybean, pendigit, statlog or usps)");
}

std::string arff_to_csv(const std::string& arff_text) {
    std::istringstream in(arff_text);
    std::string line;

    struct Attribute {
        std::string name;
        bool nominal = false;
    };
    std::vector<Attribute> attrs;
    bool in_data = false;
    std::ostringstream out;
    std::size_t label_col = 0;
    std::size_t rows = 0;

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t = trim(line);
        if (t.empty() || t[0] == '%') continue;

        if (!in_data) {
            const std::string lt = lower(t);
            if (lt.rfind("@attribute", 0) == 0) {
                std::string rest = trim(t.substr(10));
                std::string name;
                if (!rest.empty() && (rest[0] == '\'' || rest[0] == '"')) {
                    const char q = rest[0];
                    const std::size_t end = rest.find(q, 1);
                    if (end == std::string::npos)
                        throw std::runtime_error("unterminated attribute name in ARFF header");
                    name = rest.substr(1, end - 1);
                    rest = trim(rest.substr(end + 1));
                } else {
                    const std::size_t end = rest.find_first_of(" \t");
                    if (end == std::string::npos)
                        throw std::runtime_error("attribute without a type in ARFF header");
                    name = rest.substr(0, end);
                    rest = trim(rest.substr(end));
                }
                attrs.push_back({name, !rest.empty() && rest[0] == '{'});
            } else if (lt.rfind("@data", 0) == 0) {
                if (attrs.size() < 2)
                    throw std::runtime_error("ARFF header has fewer than 2 attributes");
                // class attribute: named "class" if present, else the last
                // nominal one, else the last attribute
                label_col = attrs.size() - 1;
                bool found = false;
                for (std::size_t i = 0; i < attrs.size(); ++i)
                    if (lower(attrs[i].name) == "class") {
                        label_col = i;
                        found = true;
                        break;
                    }
                if (!found)
                    for (std::size_t i = attrs.size(); i-- > 0;)
                        if (attrs[i].nominal) {
                            label_col = i;
                            break;
                        }
                in_data = true;
            }
            continue;
        }

        if (t[0] == '{') throw std::runtime_error("sparse ARFF data is not supported");
        const std::vector<std::string> cells = split_csv_cells(t);
        if (cells.size() != attrs.size())
            throw std::runtime_error("ARFF data row has wrong column count");
        bool first = true;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (c == label_col) continue;
            if (!first) out << ',';
            out << strip_quotes(cells[c]);
            first = false;
        }
        out << ',' << strip_quotes(cells[label_col]) << '\n';
        ++rows;
    }
    if (!in_data) throw std::runtime_error("ARFF document has no @data section");
    if (rows == 0) throw std::runtime_error("ARFF document has no data rows");
    return out.str();
}

std::string delim_to_csv(const std::vector<std::string>& file_texts, bool comma_separated) {
    std::ostringstream out;
    std::size_t rows = 0;
    for (const std::string& text : file_texts) {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const std::string t = trim(line);
            if (t.empty()) continue;
            if (comma_separated) {
                const auto cells = split_csv_cells(t);
                for (std::size_t c = 0; c < cells.size(); ++c) {
                    if (c) out << ',';
                    out << cells[c];
                }
            } else {
                std::istringstream fields(t);
                std::string field;
                bool first = true;
                while (fields >> field) {
                    if (!first) out << ',';
                    out << field;
                    first = false;
                }
            }
            out << '\n';
            ++rows;
        }
    }
    if (rows == 0) throw std::runtime_error("no data rows in downloaded files");
    return out.str();
}

std::string convert_to_csv(const DatasetSource& source, const std::vector<std::string>& file_texts) {
    if (file_texts.empty()) throw std::runtime_error("no input files to convert");
    switch (source.format) {
        case DatasetSource::Format::Arff: {
            if (file_texts.size() != 1)
                throw std::runtime_error("expected a single ARFF file for " + source.name);
            return arff_to_csv(file_texts[0]);
        }
        case DatasetSource::Format::DelimComma: return delim_to_csv(file_texts, true);
        case DatasetSource::Format::DelimSpace: return delim_to_csv(file_texts, false);
    }
    throw std::runtime_error("unhandled dataset format");
}

} // namespace calr
