#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ccffs/linalg.hpp"

namespace ccffs {

// Generator used for synthetic data and splits; recorded in bench output.
inline constexpr const char* rng_name = "mt19937_64";

struct FeatureEncoding {
  enum class Kind { numeric, ordinal };
  Kind kind = Kind::numeric;
  std::vector<std::string> categories;  // ordinal: code = first-appearance index
};

struct ResponseEncoding {
  enum class Kind { numeric, dummy };
  Kind kind = Kind::numeric;
  std::vector<std::string> classes;  // dummy: first c-1 classes map to unit rows
  std::string reference_class;       // dummy: encodes as the all-zero row
};

struct EncodedDataset {
  DataMatrix x;  // N x n features
  DataMatrix y;  // N x m responses
  std::vector<FeatureEncoding> feature_encodings;
  ResponseEncoding response_encoding;

  Eigen::Index n_instances() const { return x.rows(); }
  Eigen::Index n_features() const { return x.cols(); }
  Eigen::Index n_responses() const { return y.cols(); }
};

struct CsvOptions {};  // format fixed: RFC 4180, comma, UTF-8, header row

/// Loads a CSV, splitting columns into features and the named targets.
/// Numeric columns parse as reals; non-numeric feature columns are
/// ordinal-encoded by first appearance; a single non-numeric target is
/// dummy-encoded; multiple targets must all be numeric. Missing values are a
/// hard error naming the row and column.
EncodedDataset load_csv(const std::string& path,
                        const std::vector<std::string>& target_columns,
                        const CsvOptions& options = {});

/// c distinct classes -> N x (c-1) indicator matrix. Class k (in
/// first-appearance order, k < c-1) becomes unit row e_k; the last class is
/// the all-zero reference row.
DataMatrix dummy_encode(const std::vector<std::string>& labels,
                        const std::string& base_name = {});

/// Columns rescaled to mean 0 and sample standard deviation 1 (divisor N-1).
DataMatrix zscore(const DataMatrix& m);

/// Uniform [0,1) entries, bit-identical for a fixed seed (mt19937_64 with a
/// 53-bit mantissa draw). Columns x0..x{n-1} and y0..y{m-1}.
EncodedDataset synthetic_uniform(Eigen::Index n_instances, Eigen::Index n_features,
                                 Eigen::Index n_responses, std::uint64_t seed);

/// Seeded row shuffle-split; returns (train, test). Both sides keep the
/// encodings and must end up non-empty.
std::pair<EncodedDataset, EncodedDataset> shuffle_split(const EncodedDataset& data,
                                                        double test_fraction,
                                                        std::uint64_t seed);

/// JSON summary with fields n_instances, n_features, n_responses, encodings.
std::string summary_json(const EncodedDataset& data);

}  // namespace ccffs
