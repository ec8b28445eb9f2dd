#include "sswarm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "sswarm/rng.hpp"

namespace sswarm {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && !s.empty();
}

// Resolves a header name or a 0-based numeric index.
int resolve_column(const std::string& ref, const std::vector<std::string>& header) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == ref) return static_cast<int>(i);
  }
  int idx = -1;
  double parsed = 0.0;
  if (parse_double(ref, parsed) && parsed == std::floor(parsed)) idx = static_cast<int>(parsed);
  if (idx < 0 || idx >= static_cast<int>(header.size())) {
    throw std::invalid_argument("column '" + ref + "' not found in header");
  }
  return idx;
}

double median_of(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("cannot impute a column with no known values");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

void Dataset::validate() const {
  const std::size_t n = sample_count();
  if (n < 2) throw std::invalid_argument("dataset needs at least 2 samples");
  if (feature_count() < 1) throw std::invalid_argument("dataset needs at least 1 feature");
  if (class_count < 2) throw std::invalid_argument("dataset needs at least 2 classes");
  if (labels.size() != n) throw std::invalid_argument("labels/feature row count mismatch");
  std::vector<char> seen(static_cast<std::size_t>(class_count), 0);
  for (int y : labels) {
    if (y < 0 || y >= class_count) throw std::invalid_argument("label code out of range");
    seen[static_cast<std::size_t>(y)] = 1;
  }
  for (char s : seen) {
    if (!s) throw std::invalid_argument("a class has no samples");
  }
}

void SemiSupervisedSplit::validate() const {
  if (dataset == nullptr) throw std::invalid_argument("split has no dataset");
  const std::size_t n = dataset->sample_count();
  std::vector<char> mark(n, 0);
  auto check = [&](const std::vector<int>& idx) {
    for (int i : idx) {
      if (i < 0 || static_cast<std::size_t>(i) >= n) {
        throw std::invalid_argument("split index out of range");
      }
      if (mark[static_cast<std::size_t>(i)]++) {
        throw std::invalid_argument("split indices overlap");
      }
    }
  };
  check(labeled_idx);
  check(unlabeled_idx);
  if (labeled_idx.size() + unlabeled_idx.size() != n) {
    throw std::invalid_argument("split does not cover the dataset");
  }
  std::vector<char> covered(static_cast<std::size_t>(dataset->class_count), 0);
  for (int i : labeled_idx) covered[static_cast<std::size_t>(dataset->labels[i])] = 1;
  for (char c : covered) {
    if (!c) throw std::invalid_argument("a class has no labeled member");
  }
}

std::vector<double> ColumnCodec::encode_row(const std::vector<std::string>& fields) const {
  if (fields.size() != columns.size()) {
    throw std::invalid_argument("row has wrong number of feature fields");
  }
  std::vector<double> out(columns.size(), 0.0);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const Column& col = columns[c];
    const std::string& tok = fields[c];
    if (col.categorical) {
      auto it = std::find(col.vocabulary.begin(), col.vocabulary.end(), tok);
      if (it == col.vocabulary.end()) {
        throw std::invalid_argument("unknown category '" + tok + "' in column '" + col.name + "'");
      }
      out[c] = static_cast<double>(it - col.vocabulary.begin());
    } else if (tok == missing_token) {
      out[c] = col.impute_value;
    } else {
      double v = 0.0;
      if (!parse_double(tok, v)) {
        throw std::invalid_argument("cannot parse '" + tok + "' in numeric column '" + col.name +
                                    "'");
      }
      out[c] = v;
    }
  }
  return out;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options, ColumnCodec* codec) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty file: " + path.string());
  const std::vector<std::string> header = split_fields(line);
  if (header.size() < 2) throw std::invalid_argument("header needs a label and a feature column");

  const int label_col = resolve_column(options.label_column, header);
  std::vector<char> is_categorical(header.size(), 0);
  for (const std::string& ref : options.categorical_columns) {
    is_categorical[static_cast<std::size_t>(resolve_column(ref, header))] = 1;
  }

  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() && in.eof()) break;
    std::vector<std::string> fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw std::invalid_argument("ragged row at line " + std::to_string(line_no) + " in " +
                                  path.filename().string());
    }
    rows.push_back(std::move(fields));
  }
  if (rows.size() < 2) throw std::invalid_argument("dataset needs at least 2 rows");

  const std::size_t n = rows.size();
  const std::size_t d = header.size() - 1;

  Dataset ds;
  ds.name = path.stem().string();
  ds.features = Matrix(n, d);
  ds.labels.resize(n);

  ColumnCodec local_codec;
  local_codec.missing_token = options.missing_token;
  local_codec.columns.resize(d);

  // feature column order: file order with the label column removed
  std::vector<int> feature_cols;
  for (int c = 0; c < static_cast<int>(header.size()); ++c) {
    if (c != label_col) feature_cols.push_back(c);
  }

  std::unordered_map<std::string, int> label_codes;
  for (std::size_t r = 0; r < n; ++r) {
    const std::string& tok = rows[r][static_cast<std::size_t>(label_col)];
    auto [it, inserted] = label_codes.emplace(tok, static_cast<int>(ds.label_names.size()));
    if (inserted) ds.label_names.push_back(tok);
    ds.labels[r] = it->second;
  }
  ds.class_count = static_cast<int>(ds.label_names.size());
  if (ds.class_count < 2) {
    throw std::invalid_argument("label column has fewer than 2 classes");
  }

  for (std::size_t fc = 0; fc < d; ++fc) {
    const std::size_t src = static_cast<std::size_t>(feature_cols[fc]);
    ColumnCodec::Column& col = local_codec.columns[fc];
    col.name = header[src];
    col.categorical = is_categorical[src] != 0;
    if (col.categorical) {
      std::unordered_map<std::string, int> codes;
      for (std::size_t r = 0; r < n; ++r) {
        const std::string& tok = rows[r][src];
        auto [it, inserted] = codes.emplace(tok, static_cast<int>(col.vocabulary.size()));
        if (inserted) col.vocabulary.push_back(tok);
        ds.features(r, fc) = static_cast<double>(it->second);
      }
    } else {
      std::vector<double> known;
      std::vector<std::size_t> missing;
      for (std::size_t r = 0; r < n; ++r) {
        const std::string& tok = rows[r][src];
        if (tok == options.missing_token) {
          missing.push_back(r);
          continue;
        }
        double v = 0.0;
        if (!parse_double(tok, v)) {
          throw std::invalid_argument("column '" + col.name +
                                      "' is neither numeric nor declared categorical (value '" +
                                      tok + "')");
        }
        ds.features(r, fc) = v;
        known.push_back(v);
      }
      if (!missing.empty()) {
        col.impute_value = median_of(known);
        for (std::size_t r : missing) ds.features(r, fc) = col.impute_value;
      } else if (!known.empty()) {
        col.impute_value = median_of(known);
      }
    }
  }

  ds.validate();
  if (codec != nullptr) *codec = std::move(local_codec);
  return ds;
}

void MinMaxScaler::apply(std::span<double> row) const {
  for (std::size_t c = 0; c < row.size(); ++c) {
    const double range = max[c] - min[c];
    row[c] = range > 0.0 ? std::clamp((row[c] - min[c]) / range, 0.0, 1.0) : 0.0;
  }
}

Dataset normalize_minmax(const Dataset& raw, MinMaxScaler* scaler) {
  const std::size_t n = raw.sample_count();
  const std::size_t d = raw.feature_count();
  MinMaxScaler s;
  s.min.assign(d, std::numeric_limits<double>::infinity());
  s.max.assign(d, -std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const double v = raw.features(r, c);
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature value");
      s.min[c] = std::min(s.min[c], v);
      s.max[c] = std::max(s.max[c], v);
    }
  }
  Dataset out = raw;
  for (std::size_t r = 0; r < n; ++r) s.apply(out.features.row_span(r));
  if (scaler != nullptr) *scaler = std::move(s);
  return out;
}

SemiSupervisedSplit mask_labels(const Dataset& data, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw std::invalid_argument("label fraction must lie in (0, 1]");
  }
  data.validate();
  const std::size_t n = data.sample_count();
  const int C = data.class_count;

  std::vector<std::vector<int>> by_class(static_cast<std::size_t>(C));
  for (std::size_t i = 0; i < n; ++i) {
    by_class[static_cast<std::size_t>(data.labels[i])].push_back(static_cast<int>(i));
  }

  std::size_t target = std::max<std::size_t>(
      static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n))),
      static_cast<std::size_t>(C));
  target = std::min(target, n);
  if (target < static_cast<std::size_t>(C)) {
    throw std::invalid_argument("stratification impossible: fewer labels than classes");
  }

  // per-class quotas: proportional floor, at least 1 each
  std::vector<std::size_t> quota(static_cast<std::size_t>(C));
  std::size_t total = 0;
  for (int c = 0; c < C; ++c) {
    const std::size_t nc = by_class[static_cast<std::size_t>(c)].size();
    quota[c] = std::max<std::size_t>(target * nc / n, 1);
    total += quota[c];
  }
  // remainder to the largest classes first
  std::vector<int> by_size(static_cast<std::size_t>(C));
  std::iota(by_size.begin(), by_size.end(), 0);
  std::stable_sort(by_size.begin(), by_size.end(), [&](int a, int b) {
    return by_class[static_cast<std::size_t>(a)].size() > by_class[static_cast<std::size_t>(b)].size();
  });
  while (total < target) {
    bool progressed = false;
    for (int c : by_size) {
      if (total == target) break;
      if (quota[c] < by_class[static_cast<std::size_t>(c)].size()) {
        ++quota[c];
        ++total;
        progressed = true;
      }
    }
    if (!progressed) throw std::invalid_argument("stratification impossible");
  }
  while (total > target) {
    // shed the surplus from the classes with the largest quotas
    std::size_t best = 0;
    for (std::size_t c = 1; c < quota.size(); ++c) {
      if (quota[c] > quota[best]) best = c;
    }
    if (quota[best] <= 1) throw std::invalid_argument("stratification impossible");
    --quota[best];
    --total;
  }

  SemiSupervisedSplit split;
  split.dataset = &data;
  for (int c = 0; c < C; ++c) {
    std::vector<int> pool = by_class[static_cast<std::size_t>(c)];
    Rng rng(mix64(seed, 0x5eedU, static_cast<std::uint64_t>(c)));
    rng.shuffle(pool);
    split.labeled_idx.insert(split.labeled_idx.end(), pool.begin(),
                             pool.begin() + static_cast<std::ptrdiff_t>(quota[c]));
  }
  std::sort(split.labeled_idx.begin(), split.labeled_idx.end());

  std::vector<char> is_labeled(n, 0);
  for (int i : split.labeled_idx) is_labeled[static_cast<std::size_t>(i)] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_labeled[i]) split.unlabeled_idx.push_back(static_cast<int>(i));
  }
  split.validate();
  return split;
}

}  // namespace sswarm
