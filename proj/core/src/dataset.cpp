#include "odd/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "nlohmann/json.hpp"
#include "odd/rng.hpp"

namespace odd {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (ch != '\r') {
      cell += ch;
    }
  }
  cells.push_back(cell);
  return cells;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& cell, std::size_t row, const std::string& column) {
  const std::string t = trim(cell);
  try {
    std::size_t used = 0;
    double v = std::stod(t, &used);
    if (used == t.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  std::ostringstream msg;
  msg << "non-numeric value '" << cell << "' in column '" << column << "' at data row "
      << row << " (declare the column as categorical to one-hot encode it)";
  throw std::runtime_error(msg.str());
}

}  // namespace

Dataset::Dataset(std::vector<Sample> samples, std::vector<std::string> feature_names,
                 std::vector<std::string> class_names,
                 std::vector<FeatureRange> normalization)
    : samples_(std::move(samples)),
      feature_names_(std::move(feature_names)),
      class_names_(std::move(class_names)),
      normalization_(std::move(normalization)) {
  for (const auto& s : samples_) {
    if (s.features.size() != feature_names_.size())
      throw std::runtime_error("dataset: sample dimension does not match feature names");
    if (s.class_id < 0 || s.class_id >= static_cast<int>(class_names_.size()))
      throw std::runtime_error("dataset: class_id out of range");
  }
  if (!normalization_.empty() && normalization_.size() != feature_names_.size())
    throw std::runtime_error("dataset: normalization entry count != feature count");
}

std::vector<int> Dataset::class_histogram() const {
  std::vector<int> hist(static_cast<std::size_t>(n_classes()), 0);
  for (const auto& s : samples_) ++hist[static_cast<std::size_t>(s.class_id)];
  return hist;
}

Dataset Dataset::load_csv(const std::string& path, const std::string& class_column,
                          const std::vector<std::string>& categorical) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty dataset file: " + path);
  const std::vector<std::string> header = split_csv_line(line);

  int class_idx = -1;
  std::vector<int> cat_idx;  // column index -> position in `categorical`, or -1
  cat_idx.assign(header.size(), -1);
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name = trim(header[c]);
    if (name == class_column) class_idx = static_cast<int>(c);
    for (std::size_t k = 0; k < categorical.size(); ++k) {
      if (name == categorical[k]) cat_idx[c] = static_cast<int>(k);
    }
  }
  if (class_idx < 0)
    throw std::runtime_error("class column '" + class_column + "' not found in " + path);
  for (std::size_t k = 0; k < categorical.size(); ++k) {
    bool found = false;
    for (std::size_t c = 0; c < header.size(); ++c)
      if (cat_idx[c] == static_cast<int>(k)) found = true;
    if (!found)
      throw std::runtime_error("categorical column '" + categorical[k] + "' not found in " +
                               path);
  }

  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      std::ostringstream msg;
      msg << "row " << rows.size() + 1 << " has " << cells.size() << " cells, expected "
          << header.size();
      throw std::runtime_error(msg.str());
    }
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw std::runtime_error("no data rows in " + path);

  // Numeric columns keep file order; categorical columns expand into one
  // one-hot feature per distinct value (first-appearance order), appended
  // after the numeric block.
  std::vector<int> numeric_cols;
  std::vector<int> categorical_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (static_cast<int>(c) == class_idx) continue;
    if (cat_idx[c] >= 0)
      categorical_cols.push_back(static_cast<int>(c));
    else
      numeric_cols.push_back(static_cast<int>(c));
  }
  if (numeric_cols.empty() && categorical_cols.empty())
    throw std::runtime_error("no features: file contains only the class column");

  std::vector<std::string> feature_names;
  for (int c : numeric_cols) feature_names.push_back(trim(header[static_cast<std::size_t>(c)]));

  std::vector<std::vector<std::string>> categories(categorical_cols.size());
  std::vector<std::map<std::string, int>> category_pos(categorical_cols.size());
  for (const auto& cells : rows) {
    for (std::size_t k = 0; k < categorical_cols.size(); ++k) {
      const std::string v = trim(cells[static_cast<std::size_t>(categorical_cols[k])]);
      if (category_pos[k].emplace(v, static_cast<int>(categories[k].size())).second)
        categories[k].push_back(v);
    }
  }
  for (std::size_t k = 0; k < categorical_cols.size(); ++k) {
    const std::string base = trim(header[static_cast<std::size_t>(categorical_cols[k])]);
    for (const auto& cat : categories[k]) feature_names.push_back(base + "=" + cat);
  }

  std::vector<std::string> class_names;
  std::map<std::string, int> class_ids;
  std::vector<Sample> samples;
  samples.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    Sample s;
    s.features.reserve(feature_names.size());
    for (int c : numeric_cols)
      s.features.push_back(parse_number(cells[static_cast<std::size_t>(c)], r + 1,
                                        trim(header[static_cast<std::size_t>(c)])));
    for (std::size_t k = 0; k < categorical_cols.size(); ++k) {
      const std::string v = trim(cells[static_cast<std::size_t>(categorical_cols[k])]);
      const int pos = category_pos[k].at(v);
      for (std::size_t j = 0; j < categories[k].size(); ++j)
        s.features.push_back(j == static_cast<std::size_t>(pos) ? 1.0 : 0.0);
    }
    const std::string label = trim(cells[static_cast<std::size_t>(class_idx)]);
    auto [it, inserted] = class_ids.emplace(label, static_cast<int>(class_names.size()));
    if (inserted) class_names.push_back(label);
    s.class_id = it->second;
    samples.push_back(std::move(s));
  }
  return Dataset(std::move(samples), std::move(feature_names), std::move(class_names));
}

Dataset normalize(const Dataset& ds) {
  const int d = ds.dimension();
  if (ds.size() == 0 || d == 0) return ds;
  std::vector<FeatureRange> ranges(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    double lo = ds.sample(0).features[static_cast<std::size_t>(j)];
    double hi = lo;
    for (const auto& s : ds.samples()) {
      lo = std::min(lo, s.features[static_cast<std::size_t>(j)]);
      hi = std::max(hi, s.features[static_cast<std::size_t>(j)]);
    }
    ranges[static_cast<std::size_t>(j)] = {lo, hi};
  }
  std::vector<Sample> scaled = ds.samples();
  for (auto& s : scaled) {
    for (int j = 0; j < d; ++j) {
      const auto& r = ranges[static_cast<std::size_t>(j)];
      auto& x = s.features[static_cast<std::size_t>(j)];
      x = r.max > r.min ? (x - r.min) / (r.max - r.min) : 0.0;
    }
  }
  return Dataset(std::move(scaled), ds.feature_names(), ds.class_names(), std::move(ranges));
}

Dataset apply_normalization(const Dataset& ds, const std::vector<FeatureRange>& ranges) {
  if (ranges.size() != static_cast<std::size_t>(ds.dimension()))
    throw std::runtime_error("apply_normalization: range count != feature count");
  std::vector<Sample> scaled = ds.samples();
  for (auto& s : scaled) {
    for (std::size_t j = 0; j < ranges.size(); ++j) {
      const auto& r = ranges[j];
      auto& x = s.features[j];
      x = r.max > r.min ? (x - r.min) / (r.max - r.min) : 0.0;
      x = std::clamp(x, 0.0, 1.0);
    }
  }
  return Dataset(std::move(scaled), ds.feature_names(), ds.class_names(),
                 std::vector<FeatureRange>(ranges));
}

void SplitSpec::validate() const {
  if (train < 0 || validation < 0 || test < 0)
    throw std::runtime_error("split proportions must be nonnegative");
  if (std::abs(train + validation + test - 1.0) > 1e-9)
    throw std::runtime_error("split proportions must sum to 1");
}

SplitResult split(const Dataset& ds, const SplitSpec& spec) {
  spec.validate();
  const int n = ds.size();
  if (n < 3) throw std::runtime_error("split: need at least 3 samples");

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  Rng rng(spec.seed);
  rng.shuffle(order);

  const int n_train = static_cast<int>(std::floor(spec.train * n));
  const int n_val = static_cast<int>(std::floor(spec.validation * n));

  auto take = [&](int begin, int count) {
    std::vector<int> ids(order.begin() + begin, order.begin() + begin + count);
    std::sort(ids.begin(), ids.end());  // keep original sample order inside parts
    std::vector<Sample> part;
    part.reserve(ids.size());
    for (int i : ids) part.push_back(ds.sample(i));
    return Dataset(std::move(part), ds.feature_names(), ds.class_names(),
                   ds.normalization());
  };
  return SplitResult{take(0, n_train), take(n_train, n_val),
                     take(n_train + n_val, n - n_train - n_val)};
}

Dataset subsample(const Dataset& ds, int max_n, std::uint64_t seed) {
  if (ds.size() <= max_n) return ds;
  Rng rng(seed);
  std::vector<int> ids = rng.sample(ds.size(), max_n);
  std::vector<Sample> part;
  part.reserve(ids.size());
  for (int i : ids) part.push_back(ds.sample(i));
  return Dataset(std::move(part), ds.feature_names(), ds.class_names(), ds.normalization());
}

std::string Dataset::to_json_text() const {
  nlohmann::json doc;
  doc["feature_names"] = feature_names_;
  doc["class_names"] = class_names_;
  auto& norm = doc["normalization"] = nlohmann::json::array();
  for (const auto& r : normalization_) norm.push_back({r.min, r.max});
  auto& rows = doc["samples"] = nlohmann::json::array();
  for (const auto& s : samples_)
    rows.push_back({{"features", s.features}, {"class_id", s.class_id}});
  return doc.dump(2) + "\n";
}

Dataset Dataset::from_json_text(const std::string& text) {
  const nlohmann::json doc = nlohmann::json::parse(text);
  std::vector<std::string> feature_names =
      doc.at("feature_names").get<std::vector<std::string>>();
  std::vector<std::string> class_names =
      doc.at("class_names").get<std::vector<std::string>>();
  std::vector<FeatureRange> ranges;
  for (const auto& r : doc.at("normalization"))
    ranges.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
  std::vector<Sample> samples;
  for (const auto& row : doc.at("samples")) {
    Sample s;
    s.features = row.at("features").get<std::vector<double>>();
    s.class_id = row.at("class_id").get<int>();
    samples.push_back(std::move(s));
  }
  return Dataset(std::move(samples), std::move(feature_names), std::move(class_names),
                 std::move(ranges));
}

Dataset Dataset::load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

void Dataset::save_json(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  out << to_json_text();
}

}  // namespace odd
