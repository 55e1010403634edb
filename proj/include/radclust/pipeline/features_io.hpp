#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radclust/clustering/feature_matrix.hpp"

namespace radclust::pipeline {

/// Row ids must be non-empty and drawn from [A-Za-z0-9._-].
bool valid_id(std::string_view id);

/// Header `id,f0,...,f{d-1}`; values in shortest round-trip decimal form.
std::string write_features_csv(const clustering::FeatureMatrix& fm);
/// Throws ParseError with the 1-based line for ragged rows, duplicate or
/// malformed ids and non-finite or non-numeric values.
clustering::FeatureMatrix read_features_csv(std::string_view text);

struct LabeledRow {
    std::string id;
    int cluster;
};

/// Header `id,cluster`.
std::string write_labels_csv(std::span<const std::string> ids, std::span<const int> labels);
std::vector<LabeledRow> read_labels_csv(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace radclust::pipeline
