#include "ccffs/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace ccffs {

namespace {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC 4180: quoted fields may contain commas, newlines and doubled quotes.
CsvTable parse_csv_text(const std::string& text, const std::string& path) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;

  auto end_field = [&] {
    record.push_back(field);
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      if (!field.empty())
        throw error("malformed CSV in '" + path + "': quote inside unquoted field");
      in_quotes = true;
      field_was_quoted = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      if (!field.empty() || field_was_quoted || !record.empty()) end_record();
    } else if (c == '\r') {
      // consumed; handled with the following '\n' or record end
      if (i + 1 >= text.size() || text[i + 1] != '\n') {
        if (!field.empty() || field_was_quoted || !record.empty()) end_record();
      }
    } else {
      field += c;
    }
    ++i;
  }
  if (in_quotes) throw error("malformed CSV in '" + path + "': unterminated quote");
  if (!field.empty() || field_was_quoted || !record.empty()) end_record();

  if (records.empty()) throw error("empty CSV file '" + path + "'");
  CsvTable table;
  table.header = records.front();
  table.rows.assign(records.begin() + 1, records.end());
  if (table.rows.empty()) throw error("CSV file '" + path + "' has no data rows");
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != table.header.size())
      throw error("CSV file '" + path + "': row " + std::to_string(r + 1) + " has " +
                  std::to_string(table.rows[r].size()) + " fields, header has " +
                  std::to_string(table.header.size()));
  }
  return table;
}

std::string trimmed(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& field, double& out) {
  const std::string t = trimmed(field);
  if (t.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) return false;
  if (!std::isfinite(v)) return false;
  out = v;
  return true;
}

// 53-bit mantissa draw; identical across platforms for a given engine state.
double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

EncodedDataset load_csv(const std::string& path,
                        const std::vector<std::string>& target_columns,
                        const CsvOptions&) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const CsvTable table = parse_csv_text(buf.str(), path);

  if (target_columns.empty()) throw error("at least one target column is required");

  std::unordered_map<std::string, std::size_t> col_index;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (!col_index.emplace(table.header[c], c).second)
      throw error("duplicate column name '" + table.header[c] + "' in '" + path + "'");
  }

  std::vector<std::size_t> target_idx;
  for (const std::string& name : target_columns) {
    auto it = col_index.find(name);
    if (it == col_index.end()) throw error("unknown target column '" + name + "'");
    target_idx.push_back(it->second);
  }

  std::vector<std::size_t> feature_idx;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (std::find(target_idx.begin(), target_idx.end(), c) == target_idx.end())
      feature_idx.push_back(c);
  }
  if (feature_idx.empty()) throw error("no feature columns left in '" + path + "'");

  const Eigen::Index n_rows = static_cast<Eigen::Index>(table.rows.size());

  auto check_missing = [&](std::size_t col) {
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      if (trimmed(table.rows[r][col]).empty())
        throw error("missing value at row " + std::to_string(r + 1) + ", column '" +
                    table.header[col] + "'");
    }
  };
  auto column_is_numeric = [&](std::size_t col) {
    double v = 0.0;
    for (const auto& row : table.rows)
      if (!parse_number(row[col], v)) return false;
    return true;
  };

  EncodedDataset out;
  out.x.values.resize(n_rows, static_cast<Eigen::Index>(feature_idx.size()));
  for (std::size_t f = 0; f < feature_idx.size(); ++f) {
    const std::size_t col = feature_idx[f];
    check_missing(col);
    out.x.col_names.push_back(table.header[col]);
    FeatureEncoding enc;
    if (column_is_numeric(col)) {
      enc.kind = FeatureEncoding::Kind::numeric;
      for (Eigen::Index r = 0; r < n_rows; ++r) {
        double v = 0.0;
        parse_number(table.rows[static_cast<std::size_t>(r)][col], v);
        out.x.values(r, static_cast<Eigen::Index>(f)) = v;
      }
    } else {
      enc.kind = FeatureEncoding::Kind::ordinal;
      std::unordered_map<std::string, int> codes;
      for (Eigen::Index r = 0; r < n_rows; ++r) {
        const std::string cat = trimmed(table.rows[static_cast<std::size_t>(r)][col]);
        auto it = codes.find(cat);
        if (it == codes.end()) {
          it = codes.emplace(cat, static_cast<int>(enc.categories.size())).first;
          enc.categories.push_back(cat);
        }
        out.x.values(r, static_cast<Eigen::Index>(f)) = it->second;
      }
    }
    out.feature_encodings.push_back(std::move(enc));
  }

  for (std::size_t t = 0; t < target_idx.size(); ++t) check_missing(target_idx[t]);

  const bool all_targets_numeric =
      std::all_of(target_idx.begin(), target_idx.end(), column_is_numeric);
  if (all_targets_numeric) {
    out.response_encoding.kind = ResponseEncoding::Kind::numeric;
    out.y.values.resize(n_rows, static_cast<Eigen::Index>(target_idx.size()));
    for (std::size_t t = 0; t < target_idx.size(); ++t) {
      out.y.col_names.push_back(table.header[target_idx[t]]);
      for (Eigen::Index r = 0; r < n_rows; ++r) {
        double v = 0.0;
        parse_number(table.rows[static_cast<std::size_t>(r)][target_idx[t]], v);
        out.y.values(r, static_cast<Eigen::Index>(t)) = v;
      }
    }
  } else {
    if (target_idx.size() > 1)
      throw error("non-numeric targets require a single target column");
    std::vector<std::string> labels;
    labels.reserve(table.rows.size());
    for (const auto& row : table.rows) labels.push_back(trimmed(row[target_idx[0]]));
    out.y = dummy_encode(labels, table.header[target_idx[0]]);
    out.response_encoding.kind = ResponseEncoding::Kind::dummy;
    std::vector<std::string> classes;
    for (const std::string& l : labels)
      if (std::find(classes.begin(), classes.end(), l) == classes.end())
        classes.push_back(l);
    out.response_encoding.classes = classes;
    out.response_encoding.reference_class = classes.back();
  }

  out.x.validate();
  out.y.validate();
  return out;
}

DataMatrix dummy_encode(const std::vector<std::string>& labels,
                        const std::string& base_name) {
  if (labels.empty()) throw dimension_error("dummy_encode: no labels");
  std::vector<std::string> classes;
  std::unordered_map<std::string, int> codes;
  for (const std::string& l : labels) {
    if (codes.emplace(l, static_cast<int>(classes.size())).second) classes.push_back(l);
  }
  const std::size_t c = classes.size();
  if (c < 2)
    throw degenerate_input_error("dummy_encode: a single class carries no signal");

  DataMatrix out;
  out.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()),
                                     static_cast<Eigen::Index>(c - 1));
  for (std::size_t r = 0; r < labels.size(); ++r) {
    const int code = codes[labels[r]];
    if (code < static_cast<int>(c) - 1)
      out.values(static_cast<Eigen::Index>(r), code) = 1.0;
  }
  for (std::size_t k = 0; k + 1 < c; ++k)
    out.col_names.push_back(base_name.empty() ? classes[k] : base_name + "=" + classes[k]);
  return out;
}

DataMatrix zscore(const DataMatrix& m) {
  m.validate();
  if (m.rows() < 2) throw dimension_error("zscore: need at least two rows");
  DataMatrix out = m;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double mean = m.values.col(c).mean();
    const Eigen::VectorXd centered = m.values.col(c).array() - mean;
    const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(m.rows() - 1));
    const double max_abs = m.values.col(c).cwiseAbs().maxCoeff();
    if (sd <= 1e-12 * std::max(max_abs, 1.0)) {
      const std::string name = m.col_names.empty()
                                   ? "#" + std::to_string(c)
                                   : "'" + m.col_names[static_cast<std::size_t>(c)] + "'";
      throw degenerate_input_error("zscore: column " + name + " has zero variance");
    }
    out.values.col(c) = centered / sd;
  }
  return out;
}

EncodedDataset synthetic_uniform(Eigen::Index n_instances, Eigen::Index n_features,
                                 Eigen::Index n_responses, std::uint64_t seed) {
  if (n_instances < 1 || n_features < 1 || n_responses < 1)
    throw dimension_error("synthetic_uniform: all dimensions must be at least 1");

  std::mt19937_64 gen(seed);
  EncodedDataset out;
  out.x.values.resize(n_instances, n_features);
  out.y.values.resize(n_instances, n_responses);
  for (Eigen::Index c = 0; c < n_features; ++c)
    for (Eigen::Index r = 0; r < n_instances; ++r) out.x.values(r, c) = uniform01(gen);
  for (Eigen::Index c = 0; c < n_responses; ++c)
    for (Eigen::Index r = 0; r < n_instances; ++r) out.y.values(r, c) = uniform01(gen);

  for (Eigen::Index c = 0; c < n_features; ++c)
    out.x.col_names.push_back("x" + std::to_string(c));
  for (Eigen::Index c = 0; c < n_responses; ++c)
    out.y.col_names.push_back("y" + std::to_string(c));
  out.feature_encodings.assign(static_cast<std::size_t>(n_features), FeatureEncoding{});
  out.response_encoding.kind = ResponseEncoding::Kind::numeric;
  return out;
}

std::pair<EncodedDataset, EncodedDataset> shuffle_split(const EncodedDataset& data,
                                                        double test_fraction,
                                                        std::uint64_t seed) {
  const Eigen::Index n = data.n_instances();
  const Eigen::Index n_test = static_cast<Eigen::Index>(
      std::llround(test_fraction * static_cast<double>(n)));
  if (n_test < 1 || n_test >= n)
    throw dimension_error("shuffle_split: split leaves an empty side");

  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  // explicit Fisher-Yates; std::shuffle is not specified bit-for-bit
  std::mt19937_64 gen(seed);
  for (Eigen::Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Eigen::Index>(gen() % static_cast<std::uint64_t>(i + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }

  auto take = [&](Eigen::Index begin, Eigen::Index count) {
    EncodedDataset part;
    part.x.col_names = data.x.col_names;
    part.y.col_names = data.y.col_names;
    part.feature_encodings = data.feature_encodings;
    part.response_encoding = data.response_encoding;
    part.x.values.resize(count, data.n_features());
    part.y.values.resize(count, data.n_responses());
    for (Eigen::Index i = 0; i < count; ++i) {
      part.x.values.row(i) = data.x.values.row(perm[static_cast<std::size_t>(begin + i)]);
      part.y.values.row(i) = data.y.values.row(perm[static_cast<std::size_t>(begin + i)]);
    }
    return part;
  };
  return {take(0, n - n_test), take(n - n_test, n_test)};
}

std::string summary_json(const EncodedDataset& data) {
  nlohmann::ordered_json j;
  j["n_instances"] = data.n_instances();
  j["n_features"] = data.n_features();
  j["n_responses"] = data.n_responses();

  nlohmann::ordered_json features = nlohmann::ordered_json::array();
  for (std::size_t f = 0; f < data.feature_encodings.size(); ++f) {
    nlohmann::ordered_json fe;
    fe["name"] = f < data.x.col_names.size() ? data.x.col_names[f] : "x" + std::to_string(f);
    if (data.feature_encodings[f].kind == FeatureEncoding::Kind::numeric) {
      fe["kind"] = "numeric";
    } else {
      fe["kind"] = "ordinal";
      fe["categories"] = data.feature_encodings[f].categories;
    }
    features.push_back(std::move(fe));
  }
  nlohmann::ordered_json response;
  if (data.response_encoding.kind == ResponseEncoding::Kind::numeric) {
    response["kind"] = "numeric";
  } else {
    response["kind"] = "dummy";
    response["classes"] = data.response_encoding.classes;
    response["reference_class"] = data.response_encoding.reference_class;
  }
  j["encodings"] = {{"features", std::move(features)}, {"response", std::move(response)}};
  return j.dump(2);
}

}  // namespace ccffs
