#pragma once

// Flat text serialization for trained models, with the preprocessing state
// (column codec and min-max scaler) needed to score raw CSV rows later.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sswarm/dataset.hpp"
#include "sswarm/psc.hpp"
#include "sswarm/sslpso.hpp"

namespace sswarm::model_io {

struct SavedModel {
  std::string kind;  // "sspso" or "psc"
  std::optional<sslpso::ClusterLabelModel> cluster_model;
  std::optional<psc::PscModel> psc_model;
  ColumnCodec codec;
  MinMaxScaler scaler;
  std::vector<std::string> label_names;
};

void save(const std::filesystem::path& path, const SavedModel& model);

// Throws std::runtime_error on unreadable files or format violations.
SavedModel load(const std::filesystem::path& path);

}  // namespace sswarm::model_io
