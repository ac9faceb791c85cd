// asopt <predict|cluster|generate|augment|analyze|bench> --config FILE [--set key=value ...]

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "asopt/commands.hpp"
#include "asopt/config.hpp"
#include "asopt/verify/acceptance.hpp"

namespace {

namespace fs = std::filesystem;

int run_bench(const nlohmann::json& cfg)
{
    const fs::path dir = cfg.at("output").get<std::string>();
    fs::create_directories(dir);
    std::ofstream(dir / "resolved_config.json") << cfg.dump(2) << "\n";
    const auto ids = cfg.at("bench").at("criteria").get<std::vector<int>>();
    std::vector<asopt::CriterionResult> results;
    for (int id : ids.empty() ? asopt::criterion_ids() : ids) {
        results.push_back(asopt::run_criterion(id, dir / "scratch"));
        std::cout << asopt::format_result(results.back()) << std::endl;
    }
    const nlohmann::json report = asopt::results_json(results);
    std::ofstream(dir / "bench.json") << report.dump(2) << "\n";
    std::cout << "wrote " << (dir / "bench.json").string() << "\n";
    return report.at("pass").get<bool>() ? EXIT_SUCCESS : EXIT_FAILURE;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Activated-sludge microbiome prediction, clustering and augmentation"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"predict", "train BPNN and DE-BP on the configured splits"},
        {"cluster", "run EPMC and/or DPNG-EPMC clustering"},
        {"generate", "train the GAN and sample synthetic rows"},
        {"augment", "augmentation experiment over generated-row counts"},
        {"analyze", "MSE tables, PCA, mutual information and core communities from CSV inputs"},
        {"bench", "run the acceptance criteria and write bench.json"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--set", overrides, "override a config value, e.g. --set gd.num_epoch=200");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const nlohmann::json cfg = asopt::load_config(config_path, overrides);
        const asopt::Command cmd = asopt::parse_command(app.get_subcommands().front()->get_name());
        if (cmd == asopt::Command::bench) {
            return run_bench(cfg);
        }
        const asopt::CommandOutput out = asopt::run_command(cmd, cfg);
        for (const auto& f : out.files) {
            std::cout << (out.dir / f).string() << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "asopt: " << e.what() << "\n";
        return EXIT_FAILURE;
    }
    return EXIT_SUCCESS;
}
