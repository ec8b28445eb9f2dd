#pragma once

// CSV ingestion for UCI-style tables, min-max feature normalization, and
// stratified labeled/unlabeled splits for semi-supervised experiments.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sswarm/core.hpp"

namespace sswarm {

struct Dataset {
  std::string name;
  Matrix features;                       // n x d
  std::vector<int> labels;               // class codes 0..C-1, first-appearance order
  std::vector<std::string> label_names;  // code -> original token
  int class_count = 0;

  std::size_t sample_count() const { return features.rows(); }
  std::size_t feature_count() const { return features.cols(); }

  // Throws std::invalid_argument when a structural invariant is broken.
  void validate() const;
};

struct SemiSupervisedSplit {
  const Dataset* dataset = nullptr;
  std::vector<int> labeled_idx;    // sorted ascending
  std::vector<int> unlabeled_idx;  // sorted ascending

  const Dataset& data() const { return *dataset; }
  void validate() const;
};

// How each feature column was turned into a number. Retained so that a
// serialized model can encode new rows the same way at prediction time.
struct ColumnCodec {
  struct Column {
    std::string name;
    bool categorical = false;
    std::vector<std::string> vocabulary;  // categorical: code == position
    double impute_value = 0.0;            // numeric: median used for missing cells
  };
  std::vector<Column> columns;
  std::string missing_token = "?";

  // Encodes the feature fields of one raw text row. Throws on unknown
  // categorical tokens or unparseable numerics.
  std::vector<double> encode_row(const std::vector<std::string>& fields) const;
};

struct CsvOptions {
  std::string label_column;                      // header name, or 0-based index
  std::vector<std::string> categorical_columns;  // header names or indices
  std::string missing_token = "?";
};

// Reads a UTF-8 comma-separated file with one header row. Categorical
// columns are coded by first appearance; missing numeric cells (the
// missing token) are replaced by the column median; labels are coded by
// first appearance. Row order is preserved.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options,
                 ColumnCodec* codec = nullptr);

struct MinMaxScaler {
  std::vector<double> min, max;  // per column, from the raw data

  // (x - min) / (max - min), clamped to [0,1]; constant columns map to 0.
  void apply(std::span<double> row) const;
};

// Maps every column to [0,1]; a constant column maps to all-zeros. Labels
// are unchanged. Throws on non-finite input.
Dataset normalize_minmax(const Dataset& raw, MinMaxScaler* scaler = nullptr);

// Stratified label masking: exactly max(floor(fraction*n), C) labeled
// indices, per-class quotas proportional to class frequency with at least
// one per class, remainder to the largest classes first. Pure function of
// (dataset content, fraction, seed).
SemiSupervisedSplit mask_labels(const Dataset& data, double fraction, std::uint64_t seed);

}  // namespace sswarm
