#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "asopt/commands.hpp"
#include "asopt/config.hpp"

using namespace asopt;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / "asopt_unit" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

json small(const fs::path& out)
{
    json u;
    u["output"] = out.string();
    u["data"]["synthetic"] = {{"kind", "regression"}, {"n", 50}, {"features", 4}, {"targets", 2}};
    u["gd"] = {{"num_epoch", 20}};
    u["de"] = {{"pop_size", 5}, {"max_gen", 2}};
    u["gan"] = {{"hidden_dim", 5}, {"iterations", 2}, {"ae_epochs", 2}, {"sup_epochs", 2}, {"batch_size", 16}};
    return merge_config(default_config(), u);
}

std::size_t line_count(const fs::path& p)
{
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) {
        n += !line.empty();
    }
    return n;
}

} // namespace

TEST_CASE("merge_config rejects unknown keys and type mismatches")
{
    CHECK_THROWS_AS(merge_config(default_config(), json{{"sed", 1}}), ConfigError);
    CHECK_THROWS_AS(merge_config(default_config(), json{{"gd", {{"num_epochs", 3}}}}), ConfigError);
    CHECK_THROWS_AS(merge_config(default_config(), json{{"gd", {{"num_epoch", "many"}}}}), ConfigError);
    try {
        merge_config(default_config(), json{{"epmc", {{"bogus", 1}}}});
        FAIL("accepted an unknown key");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("epmc.bogus") != std::string::npos);
    }
    const json ok = merge_config(default_config(), json{{"gd", {{"num_epoch", 7}}}});
    CHECK(ok["gd"]["num_epoch"] == 7);
    CHECK(ok["gd"]["learn_rate"] == default_config()["gd"]["learn_rate"]);
}

TEST_CASE("apply_override")
{
    json cfg = default_config();
    apply_override(cfg, "gd.num_epoch=12");
    CHECK(cfg["gd"]["num_epoch"] == 12);
    apply_override(cfg, "cluster.algo=epmc");
    CHECK(cfg["cluster"]["algo"] == "epmc");
    apply_override(cfg, "de.enabled=false");
    CHECK(cfg["de"]["enabled"] == false);
    CHECK_THROWS_AS(apply_override(cfg, "gd.nope=1"), ConfigError);
    CHECK_THROWS(apply_override(cfg, "no_equals_sign"));
    CHECK(de_config(cfg["de"]).max_gen == 0);
}

TEST_CASE("load_config layers file then overrides")
{
    const fs::path dir = scratch("load");
    {
        std::ofstream f(dir / "c.json");
        f << R"({"seed": 9, "gd": {"num_epoch": 3}})";
    }
    const json cfg = load_config(dir / "c.json", {"gd.num_epoch=4"});
    CHECK(cfg["seed"] == 9);
    CHECK(cfg["gd"]["num_epoch"] == 4);
    CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
}

TEST_CASE("predict writes one result row per split and model")
{
    const fs::path out = scratch("predict");
    const CommandOutput r = run_command(Command::predict, small(out));
    CHECK(fs::exists(out / "resolved_config.json"));
    REQUIRE(fs::exists(out / "results.csv"));
    CHECK(line_count(out / "results.csv") == 1 + 3 * 2);
    for (const auto& f : r.files) {
        CHECK(fs::exists(out / f));
    }
}

TEST_CASE("cluster with a single run has no summary")
{
    const fs::path out = scratch("cluster");
    json cfg = small(out);
    cfg["data"]["synthetic"] = merge_config(cfg["data"]["synthetic"], json{{"kind", "blobs"}, {"per_cluster", 10}, {"dim", 3}});
    cfg["epmc"]["np"] = 6;
    cfg["epmc"]["iterations"] = 10;
    cfg["epmc"]["clusters"] = 3;
    cfg["epmc"]["runs"] = 1;
    cfg["dpng"]["max_gen"] = 10;
    const CommandOutput r = run_command(Command::cluster, cfg);
    CHECK_FALSE(r.files.empty());
    CHECK_FALSE(fs::exists(out / "summary.csv"));
    CHECK(fs::exists(out / "centroids_dpng.csv"));
}

TEST_CASE("generate and augment write their tables")
{
    const fs::path gen = scratch("generate");
    json cfg = small(gen);
    cfg["generate"]["n"] = 15;
    run_command(Command::generate, cfg);
    REQUIRE(fs::exists(gen / "generated.csv"));
    CHECK(line_count(gen / "generated.csv") == 16);
    CHECK(fs::exists(gen / "losses.csv"));

    const fs::path aug = scratch("augment");
    json acfg = small(aug);
    acfg["augment"]["sizes"] = {0, 5};
    acfg["augment"]["seeds"] = {1};
    run_command(Command::augment, acfg);
    REQUIRE(fs::exists(aug / "augment_cells.csv"));
    CHECK(line_count(aug / "augment_cells.csv") == 1 + 2 * 2);
}

TEST_CASE("run_seed is deterministic and distinct")
{
    CHECK(run_seed(6, 0) == run_seed(6, 0));
    CHECK(run_seed(6, 0) != run_seed(6, 1));
    CHECK(run_seed(6, 0) != run_seed(7, 0));
}
