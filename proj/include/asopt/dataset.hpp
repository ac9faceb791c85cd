#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include "json.hpp"

namespace asopt {

// Raised for ingestion and shape problems with tabular data.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class FeatureGroup { influent, effluent, reactor_operation, env_geo };

enum class TaxonomicLevel { phylum, class_level, order, custom };

std::string to_string(FeatureGroup g);
FeatureGroup parse_feature_group(const std::string& s);
std::string to_string(TaxonomicLevel level);
TaxonomicLevel parse_taxonomic_level(const std::string& s);

// OTU count for the three taxonomic levels (21 / 51 / 171); 0 for custom.
std::size_t target_count(TaxonomicLevel level);

struct FeatureSchema {
    std::vector<std::string> feature_names;
    std::vector<FeatureGroup> groups;
    TaxonomicLevel level = TaxonomicLevel::custom;
    std::vector<std::string> target_names;

    // The 37-column WWTP schema. Target names default to OTU_1..OTU_N.
    static FeatureSchema wwtp(TaxonomicLevel level, std::vector<std::string> target_names = {});

    // A schema with generic names (x0.., y0..) and every feature in `group`.
    static FeatureSchema generic(std::size_t features, std::size_t targets,
                                 FeatureGroup group = FeatureGroup::env_geo);

    // Throws DataError if names/groups disagree or the level count is violated.
    void validate() const;

    // Column indices of the features tagged with `group`.
    std::vector<std::size_t> columns_in(FeatureGroup group) const;

    bool operator==(const FeatureSchema&) const = default;
};

enum class NormState { raw, minmax };

struct Dataset {
    Eigen::MatrixXd features; // n x M, row-major sample order
    Eigen::MatrixXd targets;  // n x N
    FeatureSchema schema;
    NormState norm_state = NormState::raw;

    std::size_t rows() const { return static_cast<std::size_t>(features.rows()); }
    std::size_t feature_count() const { return static_cast<std::size_t>(features.cols()); }
    std::size_t target_count() const { return static_cast<std::size_t>(targets.cols()); }

    // Row sums of the target block. Not forced to 1.
    Eigen::VectorXd target_row_sums() const { return targets.rowwise().sum(); }

    // Copy restricted to the given row indices, in the given order.
    Dataset select_rows(const std::vector<std::size_t>& indices) const;

    // Copy restricted to a subset of feature columns (targets kept).
    Dataset select_features(const std::vector<std::size_t>& columns) const;
};

// Vertical concatenation; schemas must match.
Dataset concat(const Dataset& a, const Dataset& b);

// Reads a CSV whose header is feature_names followed by target_names.
// If schema.target_names is empty, the remaining header columns become the
// target names (their count must still match the level).
Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema);

void save_csv(const std::filesystem::path& path, const Dataset& d);

struct ColumnRange {
    double min = 0.0;
    double max = 0.0;
    bool constant() const { return !(max > min); }
};

// Per-feature min/max captured by minmax_normalize.
struct NormParams {
    std::vector<std::string> names;
    std::vector<ColumnRange> ranges;

    nlohmann::json to_json() const;
    static NormParams from_json(const nlohmann::json& j);
};

// Fits per-column min/max and maps features into [0, 1]. Constant columns map
// to 0.5. Targets are left untouched.
std::pair<Dataset, NormParams> minmax_normalize(const Dataset& d);

// Applies previously fitted parameters (e.g. train-fold ranges to a test fold).
// Values outside the fitted range fall outside [0, 1].
Dataset apply_minmax(const Dataset& d, const NormParams& params);

// Inverse of the feature map; constant columns return their recorded value.
Eigen::MatrixXd denormalize_features(const Eigen::MatrixXd& normalized, const NormParams& params);

// Half-open fraction interval over row order selecting the test rows.
struct SplitSpec {
    double lo = 0.8;
    double hi = 1.0;
};

// test = rows [floor(lo*n), floor(hi*n)); train = the complement. Order kept.
std::pair<Dataset, Dataset> split(const Dataset& d, const SplitSpec& s);

// The three test windows used in the prediction study: 80-100%, 0-20%, 60-80%.
std::vector<SplitSpec> study_splits();

struct BlobData {
    Dataset data;
    std::vector<int> labels;
    Eigen::MatrixXd centers; // k x dim
};

// Isotropic unit-variance Gaussian blobs with pairwise center distance
// >= separation. Deterministic per seed. Rows are ordered cluster by cluster.
BlobData synth_blobs(std::size_t k, std::size_t per_cluster, std::size_t dim,
                     double separation, std::uint64_t seed);

// Inputs uniform in [0,1]; targets a smooth nonlinear map of the inputs plus
// Gaussian noise. The map depends only on (in_dim, out_dim, seed).
Dataset synth_regression(std::size_t n, std::size_t in_dim, std::size_t out_dim,
                         double noise, std::uint64_t seed);

} // namespace asopt
