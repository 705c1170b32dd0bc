#pragma once

#include <string>
#include <vector>

namespace calr {

// Where each benchmark dataset comes from and how to turn the raw
// download into the CSV shape the loader expects (numeric features,
// label token in the last column, no header).
struct DatasetSource {
    std::string name;
    enum class Format { Arff, DelimComma, DelimSpace } format = Format::Arff;
    std::vector<std::string> urls;
    std::string notes;
};

const std::vector<DatasetSource>& dataset_sources();
const DatasetSource& dataset_source(const std::string& name);

// Converts one dense ARFF document. The class attribute (by name,
// case-insensitive "class"; otherwise the last nominal attribute) moves
// to the last CSV column.
std::string arff_to_csv(const std::string& arff_text);

// Concatenates whitespace- or comma-delimited raw files (label already in
// the last column) into one CSV.
std::string delim_to_csv(const std::vector<std::string>& file_texts, bool comma_separated);

std::string convert_to_csv(const DatasetSource& source, const std::vector<std::string>& file_texts);

} // namespace calr
