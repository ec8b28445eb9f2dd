#pragma once

// Shared helpers for the test binaries.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "sswarm/dataset.hpp"
#include "sswarm/rng.hpp"

namespace testutil {

inline std::filesystem::path write_temp_csv(const std::string& stem, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / (stem + ".csv");
  std::ofstream out(path);
  out << content;
  return path;
}

// A dataset built directly from in-range values (already normalized).
inline sswarm::Dataset make_dataset(const std::vector<std::vector<double>>& rows,
                                    const std::vector<int>& labels) {
  sswarm::Dataset ds;
  ds.name = "inline";
  ds.features = sswarm::Matrix(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) ds.features.set_row(r, rows[r]);
  ds.labels = labels;
  int c = 0;
  for (int y : labels) c = std::max(c, y + 1);
  ds.class_count = c;
  for (int k = 0; k < c; ++k) ds.label_names.push_back(std::to_string(k));
  return ds;
}

inline sswarm::SemiSupervisedSplit make_split(const sswarm::Dataset& ds,
                                              std::vector<int> labeled) {
  sswarm::SemiSupervisedSplit split;
  split.dataset = &ds;
  std::sort(labeled.begin(), labeled.end());
  split.labeled_idx = std::move(labeled);
  std::vector<char> mark(ds.sample_count(), 0);
  for (int i : split.labeled_idx) mark[static_cast<std::size_t>(i)] = 1;
  for (std::size_t i = 0; i < ds.sample_count(); ++i) {
    if (!mark[i]) split.unlabeled_idx.push_back(static_cast<int>(i));
  }
  return split;
}

}  // namespace testutil
