#include "sswarm/model_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sswarm::model_io {

namespace {

constexpr const char* kMagic = "sswarm-model 1";

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

double parse_double(const std::string& tok) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw std::runtime_error("bad number in model file: '" + tok + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

void write_row(std::ostream& out, std::span<const double> row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    out << (i ? "," : "") << fmt(row[i]);
  }
  out << '\n';
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string next() {
    std::string line;
    while (std::getline(in_, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      ++line_no_;
      if (!line.empty()) return line;
    }
    throw std::runtime_error("unexpected end of model file");
  }

  int line_no() const { return line_no_; }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

}  // namespace

void save(const std::filesystem::path& path, const SavedModel& model) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");

  const bool is_cluster = model.kind == "sspso";
  if (!is_cluster && model.kind != "psc") throw std::runtime_error("unknown model kind");
  if (is_cluster && !model.cluster_model) throw std::runtime_error("missing cluster model");
  if (!is_cluster && !model.psc_model) throw std::runtime_error("missing psc model");

  const Matrix& centroids =
      is_cluster ? model.cluster_model->centroids : model.psc_model->class_centroids;
  const int class_count =
      is_cluster ? model.cluster_model->class_count : model.psc_model->class_count();

  out << kMagic << '\n';
  out << "kind," << model.kind << '\n';
  out << "features," << centroids.cols() << '\n';
  out << "classes," << class_count << '\n';
  out << "clusters," << centroids.rows() << '\n';
  if (is_cluster) {
    out << "fitness," << fmt(model.cluster_model->fitness_achieved) << '\n';
  } else {
    out << "fitness," << fmt(model.psc_model->training_fitness) << '\n';
    out << "variant," << psc::to_string(model.psc_model->variant) << '\n';
  }

  out << "[labels]\n";
  for (std::size_t c = 0; c < model.label_names.size(); ++c) {
    out << c << ',' << model.label_names[c] << '\n';
  }

  out << "[columns]\n";
  for (const auto& col : model.codec.columns) {
    if (col.categorical) {
      out << col.name << ",categorical";
      for (const auto& tok : col.vocabulary) out << ',' << tok;
      out << '\n';
    } else {
      out << col.name << ",numeric," << fmt(col.impute_value) << '\n';
    }
  }

  out << "[scaler]\n";
  for (std::size_t c = 0; c < model.scaler.min.size(); ++c) {
    out << fmt(model.scaler.min[c]) << ',' << fmt(model.scaler.max[c]) << '\n';
  }

  out << "[centroids]\n";
  for (std::size_t k = 0; k < centroids.rows(); ++k) {
    if (is_cluster) {
      out << model.cluster_model->cluster_class[k] << ','
          << (model.cluster_model->cluster_pure[k] ? 1 : 0) << ',';
    } else {
      out << k << ",1,";
    }
    write_row(out, centroids.row_span(k));
  }

  out << "[anchors]\n";
  if (is_cluster) {
    const auto& m = *model.cluster_model;
    for (std::size_t a = 0; a < m.anchor_features.rows(); ++a) {
      out << m.anchor_labels[a] << ',';
      write_row(out, m.anchor_features.row_span(a));
    }
  }
  out << "[end]\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

SavedModel load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  Reader reader(in);

  if (reader.next() != kMagic) throw std::runtime_error("not a sswarm model file");

  SavedModel model;
  std::size_t features = 0, clusters = 0;
  int classes = 0;
  double fitness = 0.0;
  psc::FitnessVariant variant = psc::FitnessVariant::hybrid;

  std::string line = reader.next();
  while (line[0] != '[') {
    const auto kv = split(line, ',');
    if (kv.size() < 2) throw std::runtime_error("bad header line: " + line);
    if (kv[0] == "kind") {
      model.kind = kv[1];
    } else if (kv[0] == "features") {
      features = static_cast<std::size_t>(parse_double(kv[1]));
    } else if (kv[0] == "classes") {
      classes = static_cast<int>(parse_double(kv[1]));
    } else if (kv[0] == "clusters") {
      clusters = static_cast<std::size_t>(parse_double(kv[1]));
    } else if (kv[0] == "fitness") {
      fitness = parse_double(kv[1]);
    } else if (kv[0] == "variant") {
      if (kv[1] == "misclassification") {
        variant = psc::FitnessVariant::misclassification;
      } else if (kv[1] == "mean_distance") {
        variant = psc::FitnessVariant::mean_distance;
      } else if (kv[1] == "hybrid") {
        variant = psc::FitnessVariant::hybrid;
      } else {
        throw std::runtime_error("unknown fitness variant: " + kv[1]);
      }
    } else {
      throw std::runtime_error("unknown header key: " + kv[0]);
    }
    line = reader.next();
  }

  const bool is_cluster = model.kind == "sspso";
  if (!is_cluster && model.kind != "psc") throw std::runtime_error("unknown model kind");
  if (features == 0 || clusters == 0 || classes < 2) {
    throw std::runtime_error("incomplete model header");
  }

  if (line != "[labels]") throw std::runtime_error("expected [labels]");
  model.label_names.assign(static_cast<std::size_t>(classes), "");
  for (int c = 0; c < classes; ++c) {
    const auto kv = split(reader.next(), ',');
    if (kv.size() != 2) throw std::runtime_error("bad label line");
    model.label_names[static_cast<std::size_t>(parse_double(kv[0]))] = kv[1];
  }

  if (reader.next() != "[columns]") throw std::runtime_error("expected [columns]");
  model.codec.columns.resize(features);
  for (std::size_t c = 0; c < features; ++c) {
    const auto kv = split(reader.next(), ',');
    if (kv.size() < 2) throw std::runtime_error("bad column line");
    auto& col = model.codec.columns[c];
    col.name = kv[0];
    if (kv[1] == "categorical") {
      col.categorical = true;
      col.vocabulary.assign(kv.begin() + 2, kv.end());
    } else if (kv[1] == "numeric") {
      col.categorical = false;
      if (kv.size() >= 3) col.impute_value = parse_double(kv[2]);
    } else {
      throw std::runtime_error("bad column type: " + kv[1]);
    }
  }

  if (reader.next() != "[scaler]") throw std::runtime_error("expected [scaler]");
  model.scaler.min.resize(features);
  model.scaler.max.resize(features);
  for (std::size_t c = 0; c < features; ++c) {
    const auto kv = split(reader.next(), ',');
    if (kv.size() != 2) throw std::runtime_error("bad scaler line");
    model.scaler.min[c] = parse_double(kv[0]);
    model.scaler.max[c] = parse_double(kv[1]);
  }

  if (reader.next() != "[centroids]") throw std::runtime_error("expected [centroids]");
  Matrix centroids(clusters, features);
  std::vector<int> cluster_class(clusters);
  std::vector<bool> cluster_pure(clusters);
  for (std::size_t k = 0; k < clusters; ++k) {
    const auto kv = split(reader.next(), ',');
    if (kv.size() != features + 2) throw std::runtime_error("bad centroid line");
    cluster_class[k] = static_cast<int>(parse_double(kv[0]));
    cluster_pure[k] = parse_double(kv[1]) != 0.0;
    for (std::size_t f = 0; f < features; ++f) centroids(k, f) = parse_double(kv[f + 2]);
  }

  if (reader.next() != "[anchors]") throw std::runtime_error("expected [anchors]");
  std::vector<int> anchor_labels;
  std::vector<std::vector<double>> anchor_rows;
  line = reader.next();
  while (line != "[end]") {
    const auto kv = split(line, ',');
    if (kv.size() != features + 1) throw std::runtime_error("bad anchor line");
    anchor_labels.push_back(static_cast<int>(parse_double(kv[0])));
    std::vector<double> row(features);
    for (std::size_t f = 0; f < features; ++f) row[f] = parse_double(kv[f + 1]);
    anchor_rows.push_back(std::move(row));
    line = reader.next();
  }

  if (is_cluster) {
    sslpso::ClusterLabelModel m;
    m.centroids = std::move(centroids);
    m.cluster_class = std::move(cluster_class);
    m.cluster_pure = std::move(cluster_pure);
    m.class_count = classes;
    m.fitness_achieved = fitness;
    m.anchor_features = Matrix(anchor_rows.size(), features);
    m.anchor_labels = std::move(anchor_labels);
    for (std::size_t a = 0; a < anchor_rows.size(); ++a) {
      m.anchor_features.set_row(a, anchor_rows[a]);
    }
    model.cluster_model = std::move(m);
  } else {
    psc::PscModel m;
    m.class_centroids = std::move(centroids);
    m.variant = variant;
    m.training_fitness = fitness;
    model.psc_model = std::move(m);
  }
  return model;
}

}  // namespace sswarm::model_io
