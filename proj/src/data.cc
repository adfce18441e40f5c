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

#include "dpfair/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dpfair/random.h"

namespace dpfair {

std::optional<int> AttributeDomain::IndexOf(std::string_view value) const {
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] == value) return static_cast<int>(i);
  }
  return std::nullopt;
}

absl::StatusOr<Schema> Schema::Create(std::vector<AttributeDomain> attributes,
                                      int protected_attribute,
                                      int privileged_value, int label_attribute,
                                      int positive_value) {
  if (attributes.empty()) {
    return absl::InvalidArgumentError("schema has no attributes");
  }
  std::set<std::string> names;
  for (const AttributeDomain& attribute : attributes) {
    if (!names.insert(attribute.name).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate attribute name '", attribute.name, "'"));
    }
    if (attribute.values.size() < 2) {
      return absl::InvalidArgumentError(absl::StrCat(
          "attribute '", attribute.name, "' needs at least two categories"));
    }
    std::set<std::string> values(attribute.values.begin(), attribute.values.end());
    if (values.size() != attribute.values.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "attribute '", attribute.name, "' has duplicate category labels"));
    }
  }
  const int count = static_cast<int>(attributes.size());
  if (protected_attribute < 0 || protected_attribute >= count ||
      label_attribute < 0 || label_attribute >= count) {
    return absl::InvalidArgumentError("designation out of range");
  }
  if (protected_attribute == label_attribute) {
    return absl::InvalidArgumentError(
        "protected attribute and label must differ");
  }
  if (privileged_value < 0 ||
      privileged_value >= attributes[protected_attribute].cardinality()) {
    return absl::InvalidArgumentError("privileged value out of range");
  }
  if (attributes[label_attribute].cardinality() != 2) {
    return absl::InvalidArgumentError("label attribute must be binary");
  }
  if (positive_value < 0 || positive_value >= 2) {
    return absl::InvalidArgumentError("positive value out of range");
  }
  Schema schema;
  schema.attributes_ = std::move(attributes);
  schema.protected_attribute_ = protected_attribute;
  schema.privileged_value_ = privileged_value;
  schema.label_attribute_ = label_attribute;
  schema.positive_value_ = positive_value;
  return schema;
}

std::vector<int> Schema::cardinalities() const {
  std::vector<int> result;
  result.reserve(attributes_.size());
  for (const AttributeDomain& a : attributes_) result.push_back(a.cardinality());
  return result;
}

std::optional<int> Schema::IndexOf(std::string_view name) const {
  for (size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

uint64_t Schema::DomainSize() const {
  uint64_t size = 1;
  for (const AttributeDomain& a : attributes_) {
    const uint64_t d = static_cast<uint64_t>(a.cardinality());
    if (size > std::numeric_limits<uint64_t>::max() / d) {
      return std::numeric_limits<uint64_t>::max();
    }
    size *= d;
  }
  return size;
}

std::string Schema::Fingerprint() const {
  std::string text;
  for (const AttributeDomain& a : attributes_) {
    absl::StrAppend(&text, a.name, "=");
    for (const std::string& v : a.values) absl::StrAppend(&text, v, "\x1f");
    absl::StrAppend(&text, "\x1e");
  }
  return absl::StrFormat("%016x", StableHash(text));
}

bool operator==(const Schema& a, const Schema& b) {
  if (a.attributes_.size() != b.attributes_.size()) return false;
  for (size_t i = 0; i < a.attributes_.size(); ++i) {
    if (a.attributes_[i].name != b.attributes_[i].name ||
        a.attributes_[i].values != b.attributes_[i].values) {
      return false;
    }
  }
  return a.protected_attribute_ == b.protected_attribute_ &&
         a.privileged_value_ == b.privileged_value_ &&
         a.label_attribute_ == b.label_attribute_ &&
         a.positive_value_ == b.positive_value_;
}

nlohmann::json SchemaToJson(const Schema& schema) {
  nlohmann::json attributes = nlohmann::json::array();
  for (const AttributeDomain& a : schema.attributes()) {
    attributes.push_back({{"name", a.name}, {"values", a.values}});
  }
  return {
      {"attributes", attributes},
      {"protected",
       {{"attribute", schema.protected_attribute()},
        {"privileged", schema.privileged_value()}}},
      {"label",
       {{"attribute", schema.label_attribute()},
        {"positive", schema.positive_value()}}},
  };
}

absl::StatusOr<Schema> SchemaFromJson(const nlohmann::json& json) {
  try {
    std::vector<AttributeDomain> attributes;
    for (const auto& a : json.at("attributes")) {
      attributes.push_back({a.at("name").get<std::string>(),
                            a.at("values").get<std::vector<std::string>>()});
    }
    return Schema::Create(std::move(attributes),
                          json.at("protected").at("attribute").get<int>(),
                          json.at("protected").at("privileged").get<int>(),
                          json.at("label").at("attribute").get<int>(),
                          json.at("label").at("positive").get<int>());
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad schema json: ", e.what()));
  }
}

absl::StatusOr<Dataset> Dataset::Create(std::shared_ptr<const Schema> schema,
                                        std::vector<int> cells) {
  if (schema == nullptr) return absl::InvalidArgumentError("null schema");
  const size_t width = static_cast<size_t>(schema->num_attributes());
  if (cells.size() % width != 0) {
    return absl::InvalidArgumentError("cell count is not a multiple of width");
  }
  const std::vector<int> cards = schema->cardinalities();
  for (size_t i = 0; i < cells.size(); ++i) {
    const int value = cells[i];
    if (value < 0 || value >= cards[i % width]) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "row %d attribute '%s': category index %d out of range",
          i / width, schema->attribute(i % width).name, value));
    }
  }
  const size_t rows = cells.size() / width;
  return Dataset(std::move(schema), std::move(cells), rows);
}

std::vector<int> Dataset::Labels() const {
  std::vector<int> labels(num_rows_);
  for (size_t i = 0; i < num_rows_; ++i) labels[i] = label(i);
  return labels;
}

std::vector<int> Dataset::Groups() const {
  std::vector<int> groups(num_rows_);
  for (size_t i = 0; i < num_rows_; ++i) groups[i] = group(i);
  return groups;
}

Dataset Dataset::Subset(std::span<const size_t> indices) const {
  std::vector<int> cells;
  cells.reserve(indices.size() * width());
  for (size_t i : indices) {
    const auto r = row(i);
    cells.insert(cells.end(), r.begin(), r.end());
  }
  return Dataset(schema_, std::move(cells), indices.size());
}

namespace {

std::optional<double> ParseDouble(std::string_view text) {
  if (text.empty()) return std::nullopt;
  // std::from_chars for double is not available on every toolchain we target.
  std::string copy(text);
  char* end = nullptr;
  const double value = std::strtod(copy.c_str(), &end);
  if (end != copy.c_str() + copy.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

std::optional<int> BinningRule::Map(std::string_view cell) const {
  const absl::string_view stripped =
      absl::StripAsciiWhitespace(absl::string_view(cell.data(), cell.size()));
  const std::string_view trimmed(stripped.data(), stripped.size());
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] == trimmed) return static_cast<int>(i);
  }
  if (kind == Kind::kCategorical) return std::nullopt;
  const std::optional<double> x = ParseDouble(trimmed);
  if (!x.has_value()) return std::nullopt;
  const auto it = std::lower_bound(cuts.begin(), cuts.end(), *x);
  return static_cast<int>(it - cuts.begin());
}

absl::StatusOr<Schema> Recipe::BuildSchema() const {
  std::vector<AttributeDomain> attributes;
  for (const BinningRule& rule : rules) {
    attributes.push_back({rule.column, rule.values});
  }
  int protected_index = -1;
  int label_index = -1;
  for (size_t i = 0; i < rules.size(); ++i) {
    if (rules[i].column == protected_attribute) protected_index = static_cast<int>(i);
    if (rules[i].column == label_attribute) label_index = static_cast<int>(i);
  }
  if (protected_index < 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "protected attribute '", protected_attribute, "' is not in the recipe"));
  }
  if (label_index < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("label '", label_attribute, "' is not in the recipe"));
  }
  const std::optional<int> privileged =
      attributes[protected_index].IndexOf(privileged_value);
  const std::optional<int> positive = attributes[label_index].IndexOf(positive_value);
  if (!privileged.has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown privileged value '", privileged_value, "'"));
  }
  if (!positive.has_value()) {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown positive value '", positive_value, "'"));
  }
  return Schema::Create(std::move(attributes), protected_index, *privileged,
                        label_index, *positive);
}

absl::StatusOr<Recipe> RecipeFromJson(const nlohmann::json& json) {
  Recipe recipe;
  try {
    recipe.id = json.at("id").get<std::string>();
    recipe.description = json.value("description", "");
    for (const auto& a : json.at("attributes")) {
      BinningRule rule;
      rule.column = a.at("name").get<std::string>();
      const std::string type = a.at("type").get<std::string>();
      if (type == "categorical") {
        rule.kind = BinningRule::Kind::kCategorical;
        rule.values = a.at("values").get<std::vector<std::string>>();
      } else if (type == "numeric") {
        rule.kind = BinningRule::Kind::kNumeric;
        rule.cuts = a.at("cuts").get<std::vector<double>>();
        if (rule.cuts.empty()) {
          return absl::InvalidArgumentError(
              absl::StrCat("numeric attribute '", rule.column, "' has no cuts"));
        }
        for (size_t i = 1; i < rule.cuts.size(); ++i) {
          if (!(rule.cuts[i] > rule.cuts[i - 1])) {
            return absl::InvalidArgumentError(absl::StrCat(
                "cut points of '", rule.column, "' must be strictly increasing"));
          }
        }
        if (a.contains("labels")) {
          rule.values = a.at("labels").get<std::vector<std::string>>();
        } else {
          for (size_t i = 0; i <= rule.cuts.size(); ++i) {
            rule.values.push_back(absl::StrCat("bin", i));
          }
        }
        if (rule.values.size() != rule.cuts.size() + 1) {
          return absl::InvalidArgumentError(absl::StrCat(
              "attribute '", rule.column, "' needs one label per bucket"));
        }
      } else {
        return absl::InvalidArgumentError(
            absl::StrCat("unknown attribute type '", type, "'"));
      }
      recipe.rules.push_back(std::move(rule));
    }
    recipe.protected_attribute =
        json.at("protected").at("attribute").get<std::string>();
    recipe.privileged_value = json.at("protected").at("privileged").get<std::string>();
    recipe.label_attribute = json.at("label").at("attribute").get<std::string>();
    recipe.positive_value = json.at("label").at("positive").get<std::string>();
    recipe.massage = json.value("massage", false);
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad recipe: ", e.what()));
  }
  if (absl::StatusOr<Schema> schema = recipe.BuildSchema(); !schema.ok()) {
    return schema.status();
  }
  return recipe;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open '", path, "'"));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return absl::PermissionDeniedError(absl::StrCat("cannot write '", path, "'"));
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) return absl::InternalError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<Recipe> LoadRecipe(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  nlohmann::json json = nlohmann::json::parse(*text, nullptr, false);
  if (json.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat("recipe '", path, "' is not JSON"));
  }
  return RecipeFromJson(json);
}

absl::StatusOr<std::vector<std::vector<std::string>>> ParseCsv(
    std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  size_t i = 0;
  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    // A lone empty field is a blank line, not a record.
    if (!(record.size() == 1 && record[0].empty() && !field_started)) {
      records.push_back(std::move(record));
    }
    record.clear();
    field_started = false;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_record();
    } else {
      field.push_back(c);
      field_started = true;
    }
    ++i;
  }
  if (in_quotes) return absl::InvalidArgumentError("unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

absl::StatusOr<LoadedData> LoadCsvText(std::string_view text,
                                       const Recipe& recipe) {
  absl::StatusOr<Schema> schema = recipe.BuildSchema();
  if (!schema.ok()) return schema.status();
  absl::StatusOr<std::vector<std::vector<std::string>>> records = ParseCsv(text);
  if (!records.ok()) return records.status();
  if (records->empty()) return absl::InvalidArgumentError("CSV has no header row");

  const std::vector<std::string>& header = records->front();
  std::vector<size_t> column_of_rule;
  for (const BinningRule& rule : recipe.rules) {
    auto it = std::find_if(header.begin(), header.end(), [&](const std::string& h) {
      return absl::StripAsciiWhitespace(h) == rule.column;
    });
    if (it == header.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("header mismatch: column '", rule.column, "' not found"));
    }
    column_of_rule.push_back(static_cast<size_t>(it - header.begin()));
  }

  LoadReport report;
  std::vector<int> cells;
  cells.reserve((records->size() - 1) * recipe.rules.size());
  std::vector<int> row(recipe.rules.size());
  for (size_t r = 1; r < records->size(); ++r) {
    const std::vector<std::string>& record = (*records)[r];
    ++report.rows_read;
    bool keep = true;
    for (size_t j = 0; j < recipe.rules.size(); ++j) {
      const size_t column = column_of_rule[j];
      std::optional<int> value;
      if (column < record.size()) value = recipe.rules[j].Map(record[column]);
      if (!value.has_value()) {
        ++report.drops_by_column[recipe.rules[j].column];
        keep = false;
        break;
      }
      row[j] = *value;
    }
    if (keep) {
      cells.insert(cells.end(), row.begin(), row.end());
    } else {
      ++report.rows_dropped;
    }
  }
  if (cells.empty()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "all rows dropped (%d read)", report.rows_read));
  }
  absl::StatusOr<Dataset> data = Dataset::Create(
      std::make_shared<const Schema>(*std::move(schema)), std::move(cells));
  if (!data.ok()) return data.status();
  return LoadedData{*std::move(data), std::move(report)};
}

absl::StatusOr<LoadedData> LoadCsv(const std::string& path, const Recipe& recipe) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return LoadCsvText(*text, recipe);
}

absl::StatusOr<std::pair<Dataset, Dataset>> SplitTrainTest(const Dataset& data,
                                                           double fraction,
                                                           uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("split fraction must be in (0, 1), got ", fraction));
  }
  const size_t n = data.size();
  if (n < 2) return absl::InvalidArgumentError("need at least two records to split");
  const size_t train_size =
      static_cast<size_t>(std::llround(fraction * static_cast<double>(n)));
  if (train_size == 0 || train_size == n) {
    return absl::InvalidArgumentError("split would leave one side empty");
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(seed);
  for (size_t i = n - 1; i > 0; --i) {
    std::swap(order[i], order[rng.Index(i + 1)]);
  }
  const std::span<const size_t> all(order);
  return std::make_pair(data.Subset(all.first(train_size)),
                        data.Subset(all.subspan(train_size)));
}

double FeatureMatrix::at(size_t i, int column) const {
  for (int c : active(i)) {
    if (c == column) return 1.0;
  }
  return 0.0;
}

std::vector<double> FeatureMatrix::DenseRow(size_t i) const {
  std::vector<double> dense(static_cast<size_t>(width_), 0.0);
  for (int c : active(i)) dense[static_cast<size_t>(c)] = 1.0;
  return dense;
}

OneHotData OneHot(const Dataset& data, bool exclude_label) {
  const Schema& schema = data.schema();
  std::vector<int> block_attributes;
  std::vector<int> block_offsets;
  int width = 0;
  for (int a = 0; a < schema.num_attributes(); ++a) {
    if (exclude_label && a == schema.label_attribute()) continue;
    block_attributes.push_back(a);
    block_offsets.push_back(width);
    width += schema.cardinality(a);
  }
  const int blocks = static_cast<int>(block_attributes.size());
  std::vector<int> active(data.size() * static_cast<size_t>(blocks));
  for (size_t i = 0; i < data.size(); ++i) {
    for (int b = 0; b < blocks; ++b) {
      active[i * blocks + b] = block_offsets[b] + data.at(i, block_attributes[b]);
    }
  }
  return OneHotData{FeatureMatrix(data.size(), width, blocks, std::move(active)),
                    data.Labels(), std::move(block_attributes),
                    std::move(block_offsets)};
}

namespace {

std::string CsvEscape(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted.push_back('"');
    quoted.push_back(c);
  }
  quoted.push_back('"');
  return quoted;
}

}  // namespace

std::string DatasetToCsv(const Dataset& data) {
  const Schema& schema = data.schema();
  std::string out;
  for (int a = 0; a < schema.num_attributes(); ++a) {
    if (a > 0) out.push_back(',');
    out += CsvEscape(schema.attribute(a).name);
  }
  out.push_back('\n');
  for (size_t i = 0; i < data.size(); ++i) {
    for (int a = 0; a < schema.num_attributes(); ++a) {
      if (a > 0) out.push_back(',');
      out += CsvEscape(schema.attribute(a).values[data.at(i, a)]);
    }
    out.push_back('\n');
  }
  return out;
}

absl::Status WriteDatasetCsv(const Dataset& data, const std::string& path) {
  return WriteFile(path, DatasetToCsv(data));
}

nlohmann::json PreparedToJson(const Dataset& data, const std::string& recipe_id,
                              const nlohmann::json& provenance) {
  nlohmann::json rows = nlohmann::json::array();
  for (size_t i = 0; i < data.size(); ++i) {
    const auto r = data.row(i);
    rows.push_back(std::vector<int>(r.begin(), r.end()));
  }
  return {{"format", "dpfair-prepared-v1"},
          {"recipe", recipe_id},
          {"schema", SchemaToJson(data.schema())},
          {"provenance", provenance},
          {"rows", std::move(rows)}};
}

absl::StatusOr<Dataset> PreparedFromJson(const nlohmann::json& json) {
  if (!json.is_object() || json.value("format", "") != "dpfair-prepared-v1") {
    return absl::InvalidArgumentError("not a prepared dataset file");
  }
  absl::StatusOr<Schema> schema = SchemaFromJson(json.at("schema"));
  if (!schema.ok()) return schema.status();
  std::vector<int> cells;
  try {
    for (const auto& row : json.at("rows")) {
      if (row.size() != static_cast<size_t>(schema->num_attributes())) {
        return absl::InvalidArgumentError("row width does not match schema");
      }
      for (const auto& v : row) cells.push_back(v.get<int>());
    }
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad rows: ", e.what()));
  }
  return Dataset::Create(std::make_shared<const Schema>(*std::move(schema)),
                         std::move(cells));
}

absl::StatusOr<Dataset> LoadPrepared(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  nlohmann::json json = nlohmann::json::parse(*text, nullptr, false);
  if (json.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat("'", path, "' is not JSON"));
  }
  return PreparedFromJson(json);
}

}  // namespace dpfair
