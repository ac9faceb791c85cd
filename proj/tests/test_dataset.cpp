#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>

#include "asopt/dataset.hpp"
#include "asopt/io.hpp"

using namespace asopt;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "asopt_tests";
    fs::create_directories(dir);
    return dir / name;
}

Dataset wwtp_rows(std::size_t n)
{
    Dataset d;
    d.schema = FeatureSchema::wwtp(TaxonomicLevel::phylum);
    d.features = Eigen::MatrixXd::Random(static_cast<Eigen::Index>(n), 37);
    d.targets = Eigen::MatrixXd::Random(static_cast<Eigen::Index>(n), 21).cwiseAbs();
    return d;
}

Dataset column(std::initializer_list<double> values)
{
    Dataset d;
    d.schema = FeatureSchema::generic(1, 1);
    d.features.resize(static_cast<Eigen::Index>(values.size()), 1);
    Eigen::Index i = 0;
    for (double v : values) {
        d.features(i++, 0) = v;
    }
    d.targets = Eigen::MatrixXd::Zero(d.features.rows(), 1);
    return d;
}

std::vector<std::size_t> test_rows(std::size_t n, SplitSpec s)
{
    Dataset d = column({});
    d.features = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(n), 0, static_cast<double>(n) - 1);
    d.targets = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), 1);
    const auto test = split(d, s).second;
    std::vector<std::size_t> rows;
    for (Eigen::Index i = 0; i < test.features.rows(); ++i) {
        rows.push_back(static_cast<std::size_t>(test.features(i, 0)));
    }
    return rows;
}

} // namespace

TEST_CASE("wwtp schema shape and level counts")
{
    const auto s = FeatureSchema::wwtp(TaxonomicLevel::phylum);
    CHECK(s.feature_names.size() == 37);
    CHECK(s.target_names.size() == 21);
    CHECK(FeatureSchema::wwtp(TaxonomicLevel::class_level).target_names.size() == 51);
    CHECK(FeatureSchema::wwtp(TaxonomicLevel::order).target_names.size() == 171);
    std::size_t grouped = 0;
    for (auto g : {FeatureGroup::influent, FeatureGroup::effluent, FeatureGroup::reactor_operation,
                   FeatureGroup::env_geo}) {
        grouped += s.columns_in(g).size();
    }
    CHECK(grouped == 37);
}

TEST_CASE("load_csv round trip and errors")
{
    const Dataset d = wwtp_rows(3);
    const fs::path p = temp_file("three.csv");
    save_csv(p, d);
    const Dataset back = load_csv(p, d.schema);
    CHECK(back.rows() == 3);
    CHECK(back.feature_count() == 37);
    CHECK((back.features - d.features).cwiseAbs().maxCoeff() == 0.0);

    SUBCASE("renamed header column")
    {
        std::ifstream in(p);
        std::string header;
        std::getline(in, header);
        std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        const std::string first = d.schema.feature_names[4];
        header.replace(header.find(first), first.size(), "renamed");
        const fs::path q = temp_file("renamed.csv");
        std::ofstream(q) << header << "\n" << rest;
        try {
            load_csv(q, d.schema);
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find("renamed") != std::string::npos);
        }
    }
    SUBCASE("non-numeric cell")
    {
        auto table = read_csv(p);
        std::ofstream out(temp_file("abc.csv"));
        for (std::size_t c = 0; c < table.header.size(); ++c) {
            out << (c ? "," : "") << table.header[c];
        }
        out << "\n";
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            for (std::size_t c = 0; c < table.rows[r].size(); ++c) {
                out << (c ? "," : "") << (r == 1 && c == 2 ? "abc" : table.rows[r][c]);
            }
            out << "\n";
        }
        out.close();
        CHECK_THROWS_AS(load_csv(temp_file("abc.csv"), d.schema), DataError);
    }
}

TEST_CASE("minmax_normalize examples")
{
    const auto [n, params] = minmax_normalize(column({2, 4, 6}));
    CHECK(n.features(0, 0) == 0.0);
    CHECK(n.features(1, 0) == doctest::Approx(0.5));
    CHECK(n.features(2, 0) == 1.0);

    const auto c = minmax_normalize(column({7, 7, 7})).first;
    CHECK((c.features.array() == 0.5).all());

    const Dataset d = wwtp_rows(20);
    const auto [dn, p] = minmax_normalize(d);
    CHECK((dn.features.array() >= 0.0).all());
    CHECK((dn.features.array() <= 1.0).all());
    CHECK((denormalize_features(dn.features, p) - d.features).cwiseAbs().maxCoeff() < 1e-12);

    const auto again = minmax_normalize(dn).first;
    CHECK((again.features - dn.features).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("contiguous splits")
{
    CHECK(test_rows(10, {0.8, 1.0}) == std::vector<std::size_t>{8, 9});
    CHECK(test_rows(10, {0.0, 0.2}) == std::vector<std::size_t>{0, 1});
    CHECK(test_rows(10, {0.6, 0.8}) == std::vector<std::size_t>{6, 7});

    const Dataset d = wwtp_rows(37);
    for (const auto& s : study_splits()) {
        const auto [train, test] = split(d, s);
        CHECK(train.rows() + test.rows() == d.rows());
        std::set<std::vector<double>> seen;
        for (const Dataset* part : {&train, &test}) {
            for (Eigen::Index i = 0; i < part->features.rows(); ++i) {
                Eigen::RowVectorXd row = part->features.row(i);
                seen.insert(std::vector<double>(row.data(), row.data() + row.size()));
            }
        }
        CHECK(seen.size() == d.rows());
    }
}

TEST_CASE("synth_blobs")
{
    const BlobData b = synth_blobs(3, 50, 2, 10.0, 1);
    CHECK(b.data.rows() == 150);
    CHECK(std::set<int>(b.labels.begin(), b.labels.end()).size() == 3);
    const BlobData again = synth_blobs(3, 50, 2, 10.0, 1);
    CHECK(again.data.features == b.data.features);
    CHECK(again.labels == b.labels);

    for (Eigen::Index a = 0; a < b.centers.rows(); ++a) {
        for (Eigen::Index c = a + 1; c < b.centers.rows(); ++c) {
            CHECK((b.centers.row(a) - b.centers.row(c)).norm() >= 10.0);
        }
    }
    std::size_t correct = 0;
    for (Eigen::Index i = 0; i < b.data.features.rows(); ++i) {
        Eigen::Index best = 0;
        (b.centers.rowwise() - b.data.features.row(i)).rowwise().squaredNorm().minCoeff(&best);
        correct += static_cast<int>(best) == b.labels[static_cast<std::size_t>(i)];
    }
    CHECK(correct == 150);
}

TEST_CASE("synth_regression")
{
    const Dataset a = synth_regression(200, 37, 21, 0.0, 4);
    const Dataset b = synth_regression(200, 37, 21, 0.0, 4);
    CHECK(a.features == b.features);
    CHECK(a.targets == b.targets);
    CHECK(a.feature_count() == 37);
    CHECK(a.target_count() == 21);

    const Dataset noisy = synth_regression(200, 37, 21, 0.1, 4);
    auto variance = [](const Eigen::MatrixXd& m) {
        const Eigen::RowVectorXd mu = m.colwise().mean();
        return (m.rowwise() - mu).array().square().mean();
    };
    CHECK(variance(noisy.targets) > variance(a.targets));
}
