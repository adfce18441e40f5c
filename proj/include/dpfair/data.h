// Copyright 2026 The dpfair Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Categorical tabular data: schemas with a designated protected attribute
// and binary label, recipe-driven CSV loading, train/test splitting and
// one-hot encoding.

#ifndef DPFAIR_DATA_H_
#define DPFAIR_DATA_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"

namespace dpfair {

// One categorical attribute. Category index i always means values[i].
struct AttributeDomain {
  std::string name;
  std::vector<std::string> values;

  int cardinality() const { return static_cast<int>(values.size()); }
  std::optional<int> IndexOf(std::string_view value) const;
};

class Schema {
 public:
  // Validates: unique names, every attribute has >= 2 unique values,
  // designations in range, protected attribute != label attribute, and the
  // label attribute is binary.
  static absl::StatusOr<Schema> Create(std::vector<AttributeDomain> attributes,
                                       int protected_attribute,
                                       int privileged_value,
                                       int label_attribute, int positive_value);

  const std::vector<AttributeDomain>& attributes() const { return attributes_; }
  int num_attributes() const { return static_cast<int>(attributes_.size()); }
  const AttributeDomain& attribute(int i) const { return attributes_[i]; }
  int cardinality(int i) const { return attributes_[i].cardinality(); }
  std::vector<int> cardinalities() const;
  std::optional<int> IndexOf(std::string_view name) const;

  int protected_attribute() const { return protected_attribute_; }
  int privileged_value() const { return privileged_value_; }
  int label_attribute() const { return label_attribute_; }
  int positive_value() const { return positive_value_; }

  // Product of all cardinalities, saturating at UINT64_MAX.
  uint64_t DomainSize() const;

  // Stable hash of attribute names and value lists.
  std::string Fingerprint() const;

  friend bool operator==(const Schema&, const Schema&);

 private:
  Schema() = default;

  std::vector<AttributeDomain> attributes_;
  int protected_attribute_ = 0;
  int privileged_value_ = 0;
  int label_attribute_ = 0;
  int positive_value_ = 0;
};

nlohmann::json SchemaToJson(const Schema& schema);
absl::StatusOr<Schema> SchemaFromJson(const nlohmann::json& json);

// Immutable table of category indices, one row per record.
class Dataset {
 public:
  // cells holds rows back to back; its size must be a multiple of the
  // attribute count and every index must be below its attribute cardinality.
  static absl::StatusOr<Dataset> Create(std::shared_ptr<const Schema> schema,
                                        std::vector<int> cells);

  const Schema& schema() const { return *schema_; }
  const std::shared_ptr<const Schema>& shared_schema() const { return schema_; }
  size_t size() const { return num_rows_; }
  bool empty() const { return num_rows_ == 0; }
  int width() const { return schema_->num_attributes(); }

  std::span<const int> row(size_t i) const {
    return {cells_.data() + i * width(), static_cast<size_t>(width())};
  }
  int at(size_t i, int attribute) const { return cells_[i * width() + attribute]; }
  const std::vector<int>& cells() const { return cells_; }

  // 1 when the row's label equals the positive value.
  int label(size_t i) const {
    return at(i, schema_->label_attribute()) == schema_->positive_value() ? 1 : 0;
  }
  // 1 when the row belongs to the privileged group, 0 otherwise.
  int group(size_t i) const {
    return at(i, schema_->protected_attribute()) == schema_->privileged_value()
               ? 1
               : 0;
  }
  std::vector<int> Labels() const;
  std::vector<int> Groups() const;

  Dataset Subset(std::span<const size_t> indices) const;

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return *a.schema_ == *b.schema_ && a.cells_ == b.cells_;
  }

 private:
  Dataset(std::shared_ptr<const Schema> schema, std::vector<int> cells,
          size_t num_rows)
      : schema_(std::move(schema)), cells_(std::move(cells)), num_rows_(num_rows) {}

  std::shared_ptr<const Schema> schema_;
  std::vector<int> cells_;
  size_t num_rows_ = 0;
};

// How a raw CSV cell becomes a category index.
//  - Categorical: the trimmed cell must equal one of the values.
//  - Numeric: cut points c_1 < ... < c_k split the real line into k + 1
//    buckets (-inf, c_1], (c_1, c_2], ..., (c_k, inf). A cell that equals a
//    bucket label is accepted as that bucket, which lets already-binned data
//    (for example synthetic output) load through the same recipe.
struct BinningRule {
  enum class Kind { kCategorical, kNumeric };

  std::string column;
  Kind kind = Kind::kCategorical;
  std::vector<std::string> values;  // categorical values or bucket labels
  std::vector<double> cuts;         // numeric only

  std::optional<int> Map(std::string_view cell) const;
};

// A dataset preparation recipe: binning per attribute plus designations.
struct Recipe {
  std::string id;
  std::string description;
  std::vector<BinningRule> rules;
  std::string protected_attribute;
  std::string privileged_value;
  std::string label_attribute;
  std::string positive_value;
  bool massage = false;

  absl::StatusOr<Schema> BuildSchema() const;
};

absl::StatusOr<Recipe> RecipeFromJson(const nlohmann::json& json);
absl::StatusOr<Recipe> LoadRecipe(const std::string& path);

struct LoadReport {
  size_t rows_read = 0;
  size_t rows_dropped = 0;
  // Drops keyed by the first column that failed to map.
  std::map<std::string, size_t> drops_by_column;
};

struct LoadedData {
  Dataset data;
  LoadReport report;
};

// Parses RFC-4180 text (quoted fields, doubled quotes, CRLF or LF).
absl::StatusOr<std::vector<std::vector<std::string>>> ParseCsv(
    std::string_view text);

// Loads a CSV with a header row. Every recipe column must appear in the
// header (extra columns are ignored; the first occurrence of a duplicated
// column name wins). Rows with a cell that does not map are dropped and
// counted. Fails on a missing file, a missing column, or when every row is
// dropped.
absl::StatusOr<LoadedData> LoadCsv(const std::string& path, const Recipe& recipe);
absl::StatusOr<LoadedData> LoadCsvText(std::string_view text,
                                       const Recipe& recipe);

// Shuffles with `seed` and puts the first round(fraction * n) records into
// the training part. Requires n >= 2 and fraction in (0, 1).
absl::StatusOr<std::pair<Dataset, Dataset>> SplitTrainTest(const Dataset& data,
                                                           double fraction,
                                                           uint64_t seed);

// Rows of a {0,1} matrix with exactly one active column per encoded
// attribute, stored as the active column indices.
class FeatureMatrix {
 public:
  FeatureMatrix(size_t rows, int width, int blocks, std::vector<int> active)
      : rows_(rows), width_(width), blocks_(blocks), active_(std::move(active)) {}

  size_t rows() const { return rows_; }
  int width() const { return width_; }
  int blocks() const { return blocks_; }
  std::span<const int> active(size_t i) const {
    return {active_.data() + i * blocks_, static_cast<size_t>(blocks_)};
  }
  double at(size_t i, int column) const;
  std::vector<double> DenseRow(size_t i) const;

 private:
  size_t rows_;
  int width_;
  int blocks_;
  std::vector<int> active_;
};

struct OneHotData {
  FeatureMatrix features;
  std::vector<int> labels;
  // Attribute encoded by each block, and the first column of each block.
  std::vector<int> block_attributes;
  std::vector<int> block_offsets;
};

// Encodes every attribute (optionally except the label) with one column per
// category, in schema order.
OneHotData OneHot(const Dataset& data, bool exclude_label = true);

// Writes the dataset with category labels under the schema's attribute names.
std::string DatasetToCsv(const Dataset& data);
absl::Status WriteDatasetCsv(const Dataset& data, const std::string& path);

// The prepared-dataset file: schema, rows and provenance in one JSON object.
nlohmann::json PreparedToJson(const Dataset& data, const std::string& recipe_id,
                              const nlohmann::json& provenance);
absl::StatusOr<Dataset> PreparedFromJson(const nlohmann::json& json);
absl::StatusOr<Dataset> LoadPrepared(const std::string& path);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, std::string_view contents);

}  // namespace dpfair

#endif  // DPFAIR_DATA_H_
