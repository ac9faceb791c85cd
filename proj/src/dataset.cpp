#include "asopt/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "asopt/io.hpp"
#include "asopt/rng.hpp"

namespace asopt {

std::string to_string(FeatureGroup g)
{
    switch (g) {
    case FeatureGroup::influent: return "influent";
    case FeatureGroup::effluent: return "effluent";
    case FeatureGroup::reactor_operation: return "reactor_operation";
    case FeatureGroup::env_geo: return "env_geo";
    }
    return "unknown";
}

FeatureGroup parse_feature_group(const std::string& s)
{
    for (auto g : {FeatureGroup::influent, FeatureGroup::effluent,
                   FeatureGroup::reactor_operation, FeatureGroup::env_geo}) {
        if (to_string(g) == s) {
            return g;
        }
    }
    throw DataError("unknown feature group '" + s
                    + "' (expected influent, effluent, reactor_operation or env_geo)");
}

std::string to_string(TaxonomicLevel level)
{
    switch (level) {
    case TaxonomicLevel::phylum: return "phylum";
    case TaxonomicLevel::class_level: return "class";
    case TaxonomicLevel::order: return "order";
    case TaxonomicLevel::custom: return "custom";
    }
    return "unknown";
}

TaxonomicLevel parse_taxonomic_level(const std::string& s)
{
    for (auto l : {TaxonomicLevel::phylum, TaxonomicLevel::class_level,
                   TaxonomicLevel::order, TaxonomicLevel::custom}) {
        if (to_string(l) == s) {
            return l;
        }
    }
    throw DataError("unknown taxonomic level '" + s + "' (expected phylum, class, order or custom)");
}

std::size_t target_count(TaxonomicLevel level)
{
    switch (level) {
    case TaxonomicLevel::phylum: return 21;
    case TaxonomicLevel::class_level: return 51;
    case TaxonomicLevel::order: return 171;
    case TaxonomicLevel::custom: return 0;
    }
    return 0;
}

namespace {

struct WwtpColumn {
    const char* name;
    FeatureGroup group;
};

constexpr FeatureGroup kInf = FeatureGroup::influent;
constexpr FeatureGroup kEff = FeatureGroup::effluent;
constexpr FeatureGroup kOp = FeatureGroup::reactor_operation;
constexpr FeatureGroup kEnv = FeatureGroup::env_geo;

// Column order of the WWTP survey table.
constexpr WwtpColumn kWwtpColumns[] = {
    {"temp_annual_avg", kEnv},        {"temp_annual_daily_max", kEnv},
    {"temp_annual_daily_min", kEnv},  {"temp_sampling_month_avg", kEnv},
    {"temp_sampling_moment", kEnv},   {"precip_annual", kEnv},
    {"precip_sampling_month", kEnv},  {"gdp_per_capita", kEnv},
    {"city_population", kEnv},        {"inf_rate_actual", kOp},
    {"hrt_plant", kOp},               {"hrt_aeration_tank", kOp},
    {"srt", kOp},                     {"bod_inf", kInf},
    {"bod_inf_recycle", kInf},        {"bod_aeration_inf", kInf},
    {"bod_removal", kEff},            {"cod_inf", kInf},
    {"cod_inf_recycle", kInf},        {"cod_aeration_inf", kInf},
    {"cod_removal", kEff},            {"nh4_inf", kInf},
    {"nh4_aeration_inf", kInf},       {"nh4_removal", kEff},
    {"tn_inf", kInf},                 {"tn_aeration_inf", kInf},
    {"tn_removal", kEff},             {"tp_inf", kInf},
    {"tp_aeration_inf", kInf},        {"tp_removal", kEff},
    {"percentage", kOp},              {"mlss", kOp},
    {"do", kOp},                      {"ph", kOp},
    {"mixed_liquor_temp", kOp},       {"conductivity", kOp},
    {"svi", kOp},
};

static_assert(std::size(kWwtpColumns) == 37);

bool parse_double(const std::string& s, double& out)
{
    if (s.empty()) {
        return false;
    }
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (*first == '+') {
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && std::isfinite(out);
}

} // namespace

FeatureSchema FeatureSchema::wwtp(TaxonomicLevel level, std::vector<std::string> target_names)
{
    FeatureSchema s;
    for (const auto& c : kWwtpColumns) {
        s.feature_names.emplace_back(c.name);
        s.groups.push_back(c.group);
    }
    s.level = level;
    if (target_names.empty()) {
        for (std::size_t i = 0; i < target_count(level); ++i) {
            target_names.push_back("OTU_" + std::to_string(i + 1));
        }
    }
    s.target_names = std::move(target_names);
    return s;
}

FeatureSchema FeatureSchema::generic(std::size_t features, std::size_t targets, FeatureGroup group)
{
    FeatureSchema s;
    for (std::size_t i = 0; i < features; ++i) {
        s.feature_names.push_back("x" + std::to_string(i));
        s.groups.push_back(group);
    }
    for (std::size_t i = 0; i < targets; ++i) {
        s.target_names.push_back("y" + std::to_string(i));
    }
    s.level = TaxonomicLevel::custom;
    return s;
}

void FeatureSchema::validate() const
{
    if (feature_names.size() != groups.size()) {
        throw DataError("schema has " + std::to_string(feature_names.size()) + " feature names but "
                        + std::to_string(groups.size()) + " group tags");
    }
    if (feature_names.empty()) {
        throw DataError("schema has no features");
    }
    const std::size_t expected = target_count(level);
    if (expected != 0 && target_names.size() != expected) {
        throw DataError("level " + to_string(level) + " requires " + std::to_string(expected)
                        + " targets, schema has " + std::to_string(target_names.size()));
    }
}

std::vector<std::size_t> FeatureSchema::columns_in(FeatureGroup group) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (groups[i] == group) {
            out.push_back(i);
        }
    }
    return out;
}

Dataset Dataset::select_rows(const std::vector<std::size_t>& indices) const
{
    Dataset out;
    out.schema = schema;
    out.norm_state = norm_state;
    out.features.resize(static_cast<Eigen::Index>(indices.size()), features.cols());
    out.targets.resize(static_cast<Eigen::Index>(indices.size()), targets.cols());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const auto src = static_cast<Eigen::Index>(indices[r]);
        out.features.row(static_cast<Eigen::Index>(r)) = features.row(src);
        out.targets.row(static_cast<Eigen::Index>(r)) = targets.row(src);
    }
    return out;
}

Dataset Dataset::select_features(const std::vector<std::size_t>& columns) const
{
    Dataset out;
    out.norm_state = norm_state;
    out.targets = targets;
    out.schema.level = schema.level;
    out.schema.target_names = schema.target_names;
    out.features.resize(features.rows(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c] >= feature_count()) {
            throw DataError("feature column " + std::to_string(columns[c]) + " out of range");
        }
        out.features.col(static_cast<Eigen::Index>(c)) = features.col(static_cast<Eigen::Index>(columns[c]));
        out.schema.feature_names.push_back(schema.feature_names[columns[c]]);
        out.schema.groups.push_back(schema.groups[columns[c]]);
    }
    return out;
}

Dataset concat(const Dataset& a, const Dataset& b)
{
    if (a.feature_count() != b.feature_count() || a.target_count() != b.target_count()) {
        throw DataError("concat: column counts differ");
    }
    Dataset out;
    out.schema = a.schema;
    out.norm_state = a.norm_state;
    out.features.resize(a.features.rows() + b.features.rows(), a.features.cols());
    out.features << a.features, b.features;
    out.targets.resize(a.targets.rows() + b.targets.rows(), a.targets.cols());
    if (out.targets.size() > 0) {
        out.targets << a.targets, b.targets;
    }
    return out;
}

Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema_in)
{
    if (!std::filesystem::exists(path)) {
        throw DataError("data file not found: '" + path.string() + "'");
    }
    const CsvTable table = read_csv(path);
    FeatureSchema schema = schema_in;
    const std::size_t m = schema.feature_names.size();

    // header check: features first, then targets
    std::vector<std::string> problems;
    for (std::size_t c = 0; c < m; ++c) {
        if (c >= table.header.size()) {
            problems.push_back("missing column '" + schema.feature_names[c] + "'");
        } else if (table.header[c] != schema.feature_names[c]) {
            problems.push_back("column " + std::to_string(c + 1) + ": expected '"
                               + schema.feature_names[c] + "', found '" + table.header[c] + "'");
        }
    }
    if (schema.target_names.empty() && table.header.size() > m) {
        schema.target_names.assign(table.header.begin() + static_cast<std::ptrdiff_t>(m), table.header.end());
    }
    for (std::size_t t = 0; t < schema.target_names.size(); ++t) {
        const std::size_t c = m + t;
        if (c >= table.header.size()) {
            problems.push_back("missing column '" + schema.target_names[t] + "'");
        } else if (table.header[c] != schema.target_names[t]) {
            problems.push_back("column " + std::to_string(c + 1) + ": expected '"
                               + schema.target_names[t] + "', found '" + table.header[c] + "'");
        }
    }
    const std::size_t width = m + schema.target_names.size();
    if (table.header.size() > width) {
        for (std::size_t c = width; c < table.header.size(); ++c) {
            problems.push_back("unexpected column '" + table.header[c] + "'");
        }
    }
    if (!problems.empty()) {
        std::ostringstream msg;
        msg << "header mismatch in '" << path.string() << "':";
        for (const auto& p : problems) {
            msg << "\n  " << p;
        }
        throw DataError(msg.str());
    }
    schema.validate();

    if (table.rows.empty()) {
        throw DataError("'" + path.string() + "' has no data rows");
    }

    Dataset d;
    d.schema = schema;
    const auto n = static_cast<Eigen::Index>(table.rows.size());
    d.features.resize(n, static_cast<Eigen::Index>(m));
    d.targets.resize(n, static_cast<Eigen::Index>(schema.target_names.size()));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != width) {
            throw DataError("row " + std::to_string(r + 1) + ": expected " + std::to_string(width)
                            + " cells, found " + std::to_string(row.size()));
        }
        for (std::size_t c = 0; c < width; ++c) {
            double v = 0.0;
            if (!parse_double(row[c], v)) {
                throw DataError("row " + std::to_string(r + 1) + ", column " + std::to_string(c + 1)
                                + " ('" + table.header[c] + "'): cannot parse '" + row[c] + "' as a finite number");
            }
            if (c < m) {
                d.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
            } else {
                if (v < 0.0) {
                    throw DataError("row " + std::to_string(r + 1) + ", column " + std::to_string(c + 1)
                                    + " ('" + table.header[c] + "'): negative target value");
                }
                d.targets(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c - m)) = v;
            }
        }
    }
    return d;
}

void save_csv(const std::filesystem::path& path, const Dataset& d)
{
    std::vector<std::string> header = d.schema.feature_names;
    header.insert(header.end(), d.schema.target_names.begin(), d.schema.target_names.end());
    CsvWriter w(path, header);
    for (Eigen::Index r = 0; r < d.features.rows(); ++r) {
        for (Eigen::Index c = 0; c < d.features.cols(); ++c) {
            w.cell(d.features(r, c));
        }
        for (Eigen::Index c = 0; c < d.targets.cols(); ++c) {
            w.cell(d.targets(r, c));
        }
        w.end_row();
    }
}

nlohmann::json NormParams::to_json() const
{
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t i = 0; i < names.size(); ++i) {
        j[names[i]] = {{"min", ranges[i].min}, {"max", ranges[i].max}};
    }
    return j;
}

NormParams NormParams::from_json(const nlohmann::json& j)
{
    NormParams p;
    for (const auto& [name, range] : j.items()) {
        p.names.push_back(name);
        p.ranges.push_back({range.at("min").get<double>(), range.at("max").get<double>()});
    }
    return p;
}

Dataset apply_minmax(const Dataset& d, const NormParams& params)
{
    if (params.ranges.size() != d.feature_count()) {
        throw DataError("normalization parameters cover " + std::to_string(params.ranges.size())
                        + " features, data has " + std::to_string(d.feature_count()));
    }
    Dataset out = d;
    for (Eigen::Index c = 0; c < out.features.cols(); ++c) {
        const ColumnRange& range = params.ranges[static_cast<std::size_t>(c)];
        if (range.constant()) {
            out.features.col(c).setConstant(0.5);
        } else {
            const double span = range.max - range.min;
            out.features.col(c) = (out.features.col(c).array() - range.min) / span;
        }
    }
    out.norm_state = NormState::minmax;
    return out;
}

std::pair<Dataset, NormParams> minmax_normalize(const Dataset& d)
{
    NormParams params;
    params.names = d.schema.feature_names;
    params.names.resize(d.feature_count());
    for (Eigen::Index c = 0; c < d.features.cols(); ++c) {
        if (params.names[static_cast<std::size_t>(c)].empty()) {
            params.names[static_cast<std::size_t>(c)] = "x" + std::to_string(c);
        }
        ColumnRange range;
        if (d.features.rows() > 0) {
            range.min = d.features.col(c).minCoeff();
            range.max = d.features.col(c).maxCoeff();
        }
        params.ranges.push_back(range);
    }
    return {apply_minmax(d, params), params};
}

Eigen::MatrixXd denormalize_features(const Eigen::MatrixXd& normalized, const NormParams& params)
{
    if (static_cast<std::size_t>(normalized.cols()) != params.ranges.size()) {
        throw DataError("denormalize: column count mismatch");
    }
    Eigen::MatrixXd out = normalized;
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        const ColumnRange& range = params.ranges[static_cast<std::size_t>(c)];
        if (range.constant()) {
            out.col(c).setConstant(range.min);
        } else {
            out.col(c) = out.col(c).array() * (range.max - range.min) + range.min;
        }
    }
    return out;
}

std::pair<Dataset, Dataset> split(const Dataset& d, const SplitSpec& s)
{
    if (!(s.lo >= 0.0 && s.lo < s.hi && s.hi <= 1.0)) {
        throw DataError("split interval must satisfy 0 <= lo < hi <= 1");
    }
    const std::size_t n = d.rows();
    const auto lo = static_cast<std::size_t>(std::floor(s.lo * static_cast<double>(n)));
    const auto hi = static_cast<std::size_t>(std::floor(s.hi * static_cast<double>(n)));
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
    for (std::size_t r = 0; r < n; ++r) {
        (r >= lo && r < hi ? test_idx : train_idx).push_back(r);
    }
    if (test_idx.empty()) {
        throw DataError("split produces an empty test set");
    }
    if (train_idx.empty()) {
        throw DataError("split produces an empty training set");
    }
    return {d.select_rows(train_idx), d.select_rows(test_idx)};
}

std::vector<SplitSpec> study_splits()
{
    return {{0.8, 1.0}, {0.0, 0.2}, {0.6, 0.8}};
}

BlobData synth_blobs(std::size_t k, std::size_t per_cluster, std::size_t dim,
                     double separation, std::uint64_t seed)
{
    if (k < 2 || dim < 1 || !(separation > 0.0)) {
        throw std::invalid_argument("synth_blobs requires k >= 2, dim >= 1, separation > 0");
    }
    Rng center_rng = Rng::stream(seed, "blobs.centers");
    Rng point_rng = Rng::stream(seed, "blobs.points");

    Eigen::MatrixXd centers(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(dim));
    double box = separation * static_cast<double>(k);
    for (std::size_t c = 0; c < k; ++c) {
        int attempts = 0;
        while (true) {
            for (std::size_t j = 0; j < dim; ++j) {
                centers(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j)) = center_rng.uniform(0.0, box);
            }
            bool ok = true;
            for (std::size_t o = 0; o < c && ok; ++o) {
                ok = (centers.row(static_cast<Eigen::Index>(c)) - centers.row(static_cast<Eigen::Index>(o))).norm()
                     >= separation;
            }
            if (ok) {
                break;
            }
            if (++attempts % 1000 == 0) {
                box *= 1.5;
            }
        }
    }

    BlobData out;
    out.centers = centers;
    out.data.schema = FeatureSchema::generic(dim, 0);
    const auto n = static_cast<Eigen::Index>(k * per_cluster);
    out.data.features.resize(n, static_cast<Eigen::Index>(dim));
    out.data.targets.resize(n, 0);
    Eigen::Index r = 0;
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t p = 0; p < per_cluster; ++p, ++r) {
            for (std::size_t j = 0; j < dim; ++j) {
                out.data.features(r, static_cast<Eigen::Index>(j))
                    = centers(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j)) + point_rng.normal();
            }
            out.labels.push_back(static_cast<int>(c));
        }
    }
    return out;
}

Dataset synth_regression(std::size_t n, std::size_t in_dim, std::size_t out_dim,
                         double noise, std::uint64_t seed)
{
    if (in_dim < 1 || out_dim < 1) {
        throw std::invalid_argument("synth_regression requires in_dim, out_dim >= 1");
    }
    const auto m = static_cast<Eigen::Index>(in_dim);
    const auto k = static_cast<Eigen::Index>(out_dim);
    Rng map_rng = Rng::stream(seed, "regression.map");
    Rng x_rng = Rng::stream(seed, "regression.x");
    Rng noise_rng = Rng::stream(seed, "regression.noise");

    const double scale = 1.0 / std::sqrt(static_cast<double>(in_dim));
    Eigen::MatrixXd a(k, m);
    Eigen::MatrixXd b(k, m);
    Eigen::VectorXd offset(k);
    for (Eigen::Index o = 0; o < k; ++o) {
        for (Eigen::Index j = 0; j < m; ++j) {
            a(o, j) = map_rng.normal() * scale;
        }
        for (Eigen::Index j = 0; j < m; ++j) {
            b(o, j) = map_rng.normal() * scale;
        }
        offset(o) = 0.5 * map_rng.normal();
    }

    Dataset d;
    d.schema = (in_dim == 37 && (out_dim == 21 || out_dim == 51 || out_dim == 171))
                   ? FeatureSchema::wwtp(out_dim == 21   ? TaxonomicLevel::phylum
                                          : out_dim == 51 ? TaxonomicLevel::class_level
                                                          : TaxonomicLevel::order)
                   : FeatureSchema::generic(in_dim, out_dim);
    d.features.resize(static_cast<Eigen::Index>(n), m);
    d.targets.resize(static_cast<Eigen::Index>(n), k);
    for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(n); ++r) {
        for (Eigen::Index j = 0; j < m; ++j) {
            d.features(r, j) = x_rng.uniform();
        }
    }
    for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(n); ++r) {
        const Eigen::VectorXd x = d.features.row(r).transpose();
        const Eigen::VectorXd centred = x.array() - 0.5;
        for (Eigen::Index o = 0; o < k; ++o) {
            const double smooth = 0.5 + 0.25 * std::tanh(2.0 * a.row(o).dot(centred) + offset(o))
                                  + 0.1 * std::sin(std::numbers::pi * b.row(o).dot(x));
            d.targets(r, o) = smooth + noise * noise_rng.normal();
        }
    }
    return d;
}

} // namespace asopt
