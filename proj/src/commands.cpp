#include "asopt/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>

#include "asopt/analysis.hpp"
#include "asopt/config.hpp"
#include "asopt/debp.hpp"
#include "asopt/dpng.hpp"
#include "asopt/epmc.hpp"
#include "asopt/io.hpp"
#include "asopt/parallel.hpp"
#include "asopt/sitgan.hpp"

namespace asopt {

using nlohmann::json;
namespace fs = std::filesystem;

std::string to_string(Command c)
{
    switch (c) {
    case Command::predict:
        return "predict";
    case Command::cluster:
        return "cluster";
    case Command::generate:
        return "generate";
    case Command::augment:
        return "augment";
    case Command::analyze:
        return "analyze";
    case Command::bench:
        return "bench";
    }
    return "?";
}

Command parse_command(const std::string& s)
{
    for (Command c : {Command::predict, Command::cluster, Command::generate, Command::augment, Command::analyze,
                      Command::bench}) {
        if (to_string(c) == s) {
            return c;
        }
    }
    throw ConfigError("unknown command '" + s + "'");
}

std::uint64_t run_seed(std::uint64_t root, std::size_t r)
{
    return Rng::stream(root, "cluster.run", r).next();
}

namespace {

// Collects output files and writes them under one directory.
class OutputDir {
public:
    explicit OutputDir(const json& cfg)
    {
        out_.dir = cfg.at("output").get<std::string>();
        if (out_.dir.empty()) {
            throw ConfigError("config: 'output' must name a directory");
        }
        fs::create_directories(out_.dir);
        std::ofstream f(path("resolved_config.json"));
        f << cfg.dump(2) << '\n';
    }

    fs::path path(const std::string& name)
    {
        out_.files.push_back(name);
        return out_.dir / name;
    }

    const fs::path& dir() const { return out_.dir; }

    CommandOutput done()
    {
        std::sort(out_.files.begin(), out_.files.end());
        return out_;
    }

private:
    CommandOutput out_;
};

void write_json(const fs::path& p, const json& j)
{
    std::ofstream f(p);
    if (!f) {
        throw std::runtime_error("cannot write '" + p.string() + "'");
    }
    f << j.dump(2) << '\n';
}

std::uint64_t root_seed(const json& cfg)
{
    return cfg.at("seed").get<std::uint64_t>();
}

std::vector<SplitSpec> splits_of(const json& cfg)
{
    const json& s = cfg.at("split");
    const auto mode = s.at("mode").get<std::string>();
    if (mode == "threefold") {
        return study_splits();
    }
    if (mode == "single") {
        return {{s.at("lo").get<double>(), s.at("hi").get<double>()}};
    }
    throw ConfigError("config: split.mode must be 'threefold' or 'single', got '" + mode + "'");
}

std::vector<Trainer> models_of(const std::string& kind)
{
    if (kind == "both") {
        return {Trainer::bpnn, Trainer::debp};
    }
    return {parse_trainer(kind)};
}

DebpConfig debp_config(const json& cfg, const Dataset& train)
{
    DebpConfig c;
    c.de = de_config(cfg.at("de"));
    c.gd = gd_config(cfg.at("gd"));
    c.de.seed = c.gd.seed = root_seed(cfg);
    const int alpha = cfg.at("model").at("alpha").get<int>();
    c.shape = {train.feature_count(), hidden_size_rule(train.feature_count(), train.target_count(), alpha),
               train.target_count()};
    return c;
}

struct NumericTable {
    std::vector<std::string> header;
    Eigen::MatrixXd values;
};

NumericTable read_numeric(const fs::path& p)
{
    if (!fs::exists(p)) {
        throw DataError("file not found: '" + p.string() + "'");
    }
    const CsvTable t = read_csv(p);
    NumericTable out;
    out.header = t.header;
    out.values.resize(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(t.header.size()));
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (t.rows[r].size() != t.header.size()) {
            throw DataError(p.string() + ": row " + std::to_string(r + 2) + " has " + std::to_string(t.rows[r].size())
                            + " fields, header has " + std::to_string(t.header.size()));
        }
        for (std::size_t c = 0; c < t.header.size(); ++c) {
            try {
                std::size_t used = 0;
                const double v = std::stod(t.rows[r][c], &used);
                if (used != t.rows[r][c].size()) {
                    throw std::invalid_argument("trailing characters");
                }
                out.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
            } catch (const std::exception&) {
                throw DataError(p.string() + ": row " + std::to_string(r + 2) + ", column '" + t.header[c]
                                + "': not a number: '" + t.rows[r][c] + "'");
            }
        }
    }
    return out;
}

std::vector<std::string> numbered(const std::string& prefix, std::size_t n)
{
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i) {
        v.push_back(prefix + std::to_string(i + 1));
    }
    return v;
}

// "0", "1", ... matching assignment labels.
std::vector<std::string> cluster_ids(std::size_t n)
{
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i) {
        v.push_back(std::to_string(i));
    }
    return v;
}

void write_pca(OutputDir& out, const std::string& stem, const PcaModel& model,
               const std::vector<std::string>& feature_names)
{
    write_matrix_csv(out.path(stem + "_components.csv"), model.components, feature_names, "component",
                     numbered("PC", static_cast<std::size_t>(model.components.rows())));
    CsvWriter ev(out.path(stem + "_eigenvalues.csv"), {"component", "eigenvalue", "explained"});
    for (Eigen::Index i = 0; i < model.eigenvalues.size(); ++i) {
        ev.cell("PC" + std::to_string(i + 1))
            .cell(model.eigenvalues(i))
            .cell(model.total_variance > 0.0 ? model.eigenvalues(i) / model.total_variance : 0.0);
        ev.end_row();
    }
}

void write_core_community(OutputDir& out, const std::string& stem, const CoreCommunity& cc,
                          const std::vector<std::string>& otu_names, double floor)
{
    const auto clusters = static_cast<std::size_t>(cc.mean.rows());
    const auto rows = cluster_ids(clusters);
    write_matrix_csv(out.path(stem + ".csv"), cc.mean, otu_names, "cluster", rows);
    write_matrix_csv(out.path(stem + "_log10.csv"), log10_view(cc.mean, floor), otu_names, "cluster", rows);
    CsvWriter e(out.path(stem + "_empty.csv"), {"cluster", "empty"});
    for (std::size_t c = 0; c < clusters; ++c) {
        e.cell(c).cell(static_cast<int>(cc.empty[c]));
        e.end_row();
    }
}

} // namespace

Dataset load_data(const json& cfg)
{
    const json& d = cfg.at("data");
    const json& syn = d.at("synthetic");
    const auto kind = syn.at("kind").get<std::string>();
    if (kind == "regression") {
        return synth_regression(syn.at("n").get<std::size_t>(), syn.at("features").get<std::size_t>(),
                                syn.at("targets").get<std::size_t>(), syn.at("noise").get<double>(),
                                syn.at("seed").get<std::uint64_t>());
    }
    if (kind == "blobs") {
        return synth_blobs(syn.at("clusters").get<std::size_t>(), syn.at("per_cluster").get<std::size_t>(),
                           syn.at("dim").get<std::size_t>(), syn.at("separation").get<double>(),
                           syn.at("seed").get<std::uint64_t>())
            .data;
    }
    if (kind != "none") {
        throw ConfigError("config: data.synthetic.kind must be none, regression or blobs; got '" + kind + "'");
    }

    const fs::path path = d.at("path").get<std::string>();
    if (path.empty()) {
        throw ConfigError("config: data.path is empty and no synthetic data is configured");
    }
    const auto schema_kind = d.at("schema").get<std::string>();
    FeatureSchema schema;
    if (schema_kind == "wwtp") {
        schema = FeatureSchema::wwtp(parse_taxonomic_level(d.at("level").get<std::string>()));
        schema.target_names.clear(); // taken from the header
    } else if (schema_kind == "generic") {
        const auto m = d.at("feature_count").get<std::size_t>();
        if (!fs::exists(path)) {
            throw DataError("data file not found: '" + path.string() + "'");
        }
        const CsvTable head = read_csv(path);
        if (m == 0 || m > head.header.size()) {
            throw ConfigError("config: data.feature_count must be in [1, " + std::to_string(head.header.size())
                              + "]");
        }
        schema = FeatureSchema::generic(m, head.header.size() - m);
        schema.feature_names.assign(head.header.begin(), head.header.begin() + static_cast<std::ptrdiff_t>(m));
        schema.target_names.clear();
    } else {
        throw ConfigError("config: data.schema must be 'wwtp' or 'generic', got '" + schema_kind + "'");
    }
    return load_csv(path, schema);
}

CommandOutput cmd_predict(const json& cfg)
{
    OutputDir out(cfg);
    const Dataset data = load_data(cfg);
    const auto splits = splits_of(cfg);
    const auto models = models_of(cfg.at("model").at("kind").get<std::string>());

    struct Job {
        std::size_t split = 0;
        Trainer model = Trainer::bpnn;
        double train_mse = 0.0;
        double test_mse = 0.0;
    };
    std::vector<Job> jobs;
    for (std::size_t s = 0; s < splits.size(); ++s) {
        for (Trainer m : models) {
            jobs.push_back({s, m});
        }
    }

    struct Fold {
        Dataset train;
        Dataset test;
    };
    std::vector<Fold> folds;
    for (const auto& s : splits) {
        auto [train, test] = split(data, s);
        auto [train_n, params] = minmax_normalize(train);
        folds.push_back({std::move(train_n), apply_minmax(test, params)});
    }

    std::vector<std::string> names(jobs.size());
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        names[j] = to_string(jobs[j].model) + "_split" + std::to_string(jobs[j].split + 1);
        for (const char* kind : {"net_", "curve_", "pred_", "mse_", "garson_", "obs_pred_"}) {
            out.path(kind + names[j] + (std::string(kind) == "net_" ? ".json" : ".csv"));
        }
    }

    const fs::path dir = out.dir();
    parallel_for(jobs.size(), [&](std::size_t j) {
        Job& job = jobs[j];
        const Fold& f = folds[job.split];
        const DebpConfig dc = debp_config(cfg, f.train);
        MlpNetwork net;
        {
            CsvWriter curve(dir / ("curve_" + names[j] + ".csv"), {"stage", "step", "mse"});
            if (job.model == Trainer::bpnn) {
                const TrainResult r = train_bpnn(f.train.features, f.train.targets, dc.shape, dc.gd);
                for (std::size_t e = 0; e < r.error_curve.size(); ++e) {
                    curve.cell("gd").cell(e).cell(r.error_curve[e]);
                    curve.end_row();
                }
                net = r.net;
            } else {
                const DebpResult r = train_debp(f.train.features, f.train.targets, dc);
                for (std::size_t g = 0; g < r.de_history.size(); ++g) {
                    curve.cell("de").cell(g).cell(r.de_history[g]);
                    curve.end_row();
                }
                for (std::size_t e = 0; e < r.gd_curve.size(); ++e) {
                    curve.cell("gd").cell(e).cell(r.gd_curve[e]);
                    curve.end_row();
                }
                net = r.net;
            }
        }
        write_json(dir / ("net_" + names[j] + ".json"), net.to_json());
        const Eigen::MatrixXd pred = forward_batch(net, f.test.features);
        write_matrix_csv(dir / ("pred_" + names[j] + ".csv"), pred, f.test.schema.target_names);
        const MseTable table = mse_table(pred, f.test.targets);
        {
            CsvWriter w(dir / ("mse_" + names[j] + ".csv"), {"otu", "mse"});
            for (Eigen::Index c = 0; c < table.per_column.size(); ++c) {
                w.cell(f.test.schema.target_names[static_cast<std::size_t>(c)]).cell(table.per_column(c));
                w.end_row();
            }
            w.cell("overall").cell(table.overall);
            w.end_row();
        }
        {
            const Eigen::VectorXd imp = garson_importance(net);
            CsvWriter w(dir / ("garson_" + names[j] + ".csv"), {"feature", "group", "importance"});
            for (Eigen::Index c = 0; c < imp.size(); ++c) {
                const auto k = static_cast<std::size_t>(c);
                w.cell(f.train.schema.feature_names[k]).cell(to_string(f.train.schema.groups[k])).cell(imp(c));
                w.end_row();
            }
        }
        write_obs_pred(dir / ("obs_pred_" + names[j] + ".csv"), pred, f.test.targets, f.test.schema.target_names);
        job.train_mse = mse(forward_batch(net, f.train.features), f.train.targets);
        job.test_mse = table.overall;
    });

    CsvWriter w(out.path("results.csv"), {"split", "test_lo", "test_hi", "model", "train_mse", "test_mse"});
    for (const auto& job : jobs) {
        w.cell(job.split + 1)
            .cell(splits[job.split].lo)
            .cell(splits[job.split].hi)
            .cell(to_string(job.model))
            .cell(job.train_mse)
            .cell(job.test_mse);
        w.end_row();
    }
    return out.done();
}

CommandOutput cmd_cluster(const json& cfg)
{
    OutputDir out(cfg);
    const json& cc = cfg.at("cluster");
    const Dataset data = load_data(cfg);

    const auto group = cc.at("features").get<std::string>();
    Dataset selected = data;
    if (group != "all") {
        const auto cols = data.schema.columns_in(parse_feature_group(group));
        if (cols.empty()) {
            throw ConfigError("config: no feature columns in group '" + group + "'");
        }
        selected = data.select_features(cols);
    }
    const Eigen::MatrixXd x = minmax_normalize(selected).first.features;

    const DpngConfig dpng = dpng_config(cfg.at("epmc"), cfg.at("dpng"));
    const EpmcConfig& epmc = dpng.base;
    const auto algo = cc.at("algo").get<std::string>();
    std::vector<std::string> algos;
    if (algo == "both") {
        algos = {"epmc", "dpng"};
    } else if (algo == "epmc" || algo == "dpng") {
        algos = {algo};
    } else {
        throw ConfigError("config: cluster.algo must be epmc, dpng or both; got '" + algo + "'");
    }
    const std::size_t runs = epmc.runs;
    if (runs == 0) {
        throw ConfigError("config: epmc.runs must be >= 1");
    }

    std::map<std::string, std::vector<ClusterRunResult>> results;
    for (const auto& a : algos) {
        auto& res = results[a];
        res.resize(runs);
        parallel_for(runs, [&](std::size_t r) {
            DpngConfig c = dpng;
            c.base.seed = run_seed(root_seed(cfg), r);
            res[r] = a == "epmc" ? run_epmc(x, c.base) : run_dpng_epmc(x, c);
        });
    }

    {
        CsvWriter w(out.path("runs.csv"), {"algo", "run", "seed", "best_fit", "evaluations", "iterations"});
        for (const auto& a : algos) {
            for (std::size_t r = 0; r < runs; ++r) {
                const auto& res = results[a][r];
                w.cell(a)
                    .cell(r)
                    .cell(std::to_string(run_seed(root_seed(cfg), r)))
                    .cell(res.best.fit)
                    .cell(res.evaluations)
                    .cell(res.iterations_run);
                w.end_row();
            }
        }
    }
    if (runs > 1) {
        CsvWriter w(out.path("summary.csv"), {"algo", "runs", "median_fit", "mean_fit", "best_fit", "worst_fit"});
        for (const auto& a : algos) {
            std::vector<double> fits;
            for (const auto& res : results[a]) {
                fits.push_back(res.best.fit);
            }
            std::sort(fits.begin(), fits.end());
            const std::size_t m = fits.size() / 2;
            const double median = fits.size() % 2 ? fits[m] : 0.5 * (fits[m - 1] + fits[m]);
            const double mean = std::accumulate(fits.begin(), fits.end(), 0.0) / static_cast<double>(fits.size());
            w.cell(a).cell(runs).cell(median).cell(mean).cell(fits.front()).cell(fits.back());
            w.end_row();
        }
    }
    if (algos.size() == 2) {
        CsvWriter w(out.path("comparison.csv"), {"run", "seed", "epmc_fit", "dpng_fit"});
        for (std::size_t r = 0; r < runs; ++r) {
            w.cell(r)
                .cell(std::to_string(run_seed(root_seed(cfg), r)))
                .cell(results["epmc"][r].best.fit)
                .cell(results["dpng"][r].best.fit);
            w.end_row();
        }
    }

    const auto& feature_names = selected.schema.feature_names;
    for (const auto& a : algos) {
        const auto& res = results[a];
        std::size_t best = 0;
        for (std::size_t r = 1; r < runs; ++r) {
            if (res[r].best.fit < res[best].best.fit) {
                best = r;
            }
        }
        const ClusterRunResult& b = res[best];
        {
            CsvWriter w(out.path("history_" + a + ".csv"),
                        {"iteration", "best_fit", "mean_fit", "n_elite", "w", "sigma", "mean_pc", "mean_pm"});
            for (const auto& h : b.history) {
                w.cell(h.iteration).cell(h.best_fit).cell(h.mean_fit).cell(h.n_elite).cell(h.w).cell(h.sigma);
                w.cell(h.mean_pc).cell(h.mean_pm);
                w.end_row();
            }
        }
        const Eigen::MatrixXd& centroids = b.best.centroids;
        write_matrix_csv(out.path("centroids_" + a + ".csv"), centroids, feature_names, "cluster",
                         cluster_ids(static_cast<std::size_t>(centroids.rows())));
        const std::vector<int> labels = assign(x, centroids);
        {
            CsvWriter w(out.path("assignment_" + a + ".csv"), {"row", "label"});
            for (std::size_t i = 0; i < labels.size(); ++i) {
                w.cell(i).cell(labels[i]);
                w.end_row();
            }
        }

        const auto pcs = std::min<std::size_t>(cc.at("pca_components").get<std::size_t>(), feature_names.size());
        const auto pca_on = cc.at("pca_on").get<std::string>();
        if (pca_on != "centroids" && pca_on != "instances") {
            throw ConfigError("config: cluster.pca_on must be centroids or instances");
        }
        const Eigen::MatrixXd& basis = pca_on == "centroids" ? centroids : x;
        if (pcs > 0 && basis.rows() >= 2 && pcs <= static_cast<std::size_t>(basis.rows())) {
            const PcaModel model = pca_fit(basis, pcs);
            write_pca(out, "pca_" + a, model, feature_names);
            const Eigen::MatrixXd inst = pca_project(model, x);
            CsvWriter w(out.path("pca_" + a + "_instances.csv"), [&] {
                std::vector<std::string> h{"row", "label"};
                auto pc = numbered("PC", pcs);
                h.insert(h.end(), pc.begin(), pc.end());
                return h;
            }());
            for (Eigen::Index i = 0; i < inst.rows(); ++i) {
                w.cell(static_cast<long long>(i)).cell(labels[static_cast<std::size_t>(i)]);
                for (Eigen::Index k = 0; k < inst.cols(); ++k) {
                    w.cell(inst(i, k));
                }
                w.end_row();
            }
            write_matrix_csv(out.path("pca_" + a + "_centroids.csv"), pca_project(model, centroids),
                             numbered("PC", pcs), "cluster",
                             cluster_ids(static_cast<std::size_t>(centroids.rows())));
        }

        if (data.target_count() > 0) {
            const CoreCommunity core = core_community(labels, data.targets, static_cast<std::size_t>(centroids.rows()));
            write_core_community(out, "core_" + a + "_" + to_string(data.schema.level), core,
                                 data.schema.target_names, cc.at("log_floor").get<double>());
        }
    }

    if (data.target_count() > 0) {
        const Eigen::MatrixXd mi
            = mutual_information_matrix(selected.features, data.targets, cc.at("mi_bins").get<std::size_t>());
        write_matrix_csv(out.path("mi.csv"), mi, data.schema.target_names, "feature", feature_names);
    }
    return out.done();
}

namespace {

GanConfig seeded_gan(const json& cfg)
{
    GanConfig g = gan_config(cfg.at("gan"));
    g.seed = root_seed(cfg);
    g.generative_samples = cfg.at("generate").at("n").get<std::size_t>();
    return g;
}

void write_losses(const fs::path& p, const std::vector<LossRecord>& losses)
{
    CsvWriter w(p, {"phase", "step", "L_Re", "L_S", "L_U"});
    for (const auto& l : losses) {
        w.cell(l.phase).cell(l.step).cell(l.l_re).cell(l.l_s).cell(l.l_u);
        w.end_row();
    }
}

} // namespace

CommandOutput cmd_generate(const json& cfg)
{
    OutputDir out(cfg);
    const Dataset data = load_data(cfg);
    const GanConfig g = seeded_gan(cfg);
    const GanTrainResult trained = train_sitgan(data, g);
    write_losses(out.path("losses.csv"), trained.losses);

    Rng rng = Rng::stream(g.seed, "generate");
    if (cfg.at("generate").at("denormalize").get<bool>()) {
        save_csv(out.path("generated.csv"), generate(trained.quartet, g.generative_samples, rng));
    } else {
        std::vector<std::string> names = data.schema.feature_names;
        names.insert(names.end(), data.schema.target_names.begin(), data.schema.target_names.end());
        write_matrix_csv(out.path("generated.csv"), generate_normalized(trained.quartet, g.generative_samples, rng),
                         names);
    }
    return out.done();
}

CommandOutput cmd_augment(const json& cfg)
{
    OutputDir out(cfg);
    const Dataset data = load_data(cfg);
    const SplitSpec s = splits_of(cfg).front();
    auto [train_raw, test_raw] = split(data, s);
    auto [train, params] = minmax_normalize(train_raw);
    const Dataset test = apply_minmax(test_raw, params);

    const GanConfig g = seeded_gan(cfg);
    const GanTrainResult trained = train_sitgan(train, g);
    write_losses(out.path("losses.csv"), trained.losses);

    const json& a = cfg.at("augment");
    const auto sizes = a.at("sizes").get<std::vector<std::size_t>>();
    const auto seeds = a.at("seeds").get<std::vector<std::uint64_t>>();
    std::vector<Trainer> models;
    for (const auto& m : a.at("models").get<std::vector<std::string>>()) {
        models.push_back(parse_trainer(m));
    }
    if (sizes.empty() || seeds.empty() || models.empty()) {
        throw ConfigError("config: augment.sizes, augment.seeds and augment.models must be non-empty");
    }
    const AugmentReport report
        = augmentation_experiment(train, test, trained.quartet, sizes, models, seeds, debp_config(cfg, train));

    {
        CsvWriter w(out.path("augment_cells.csv"), {"size", "seed", "model", "test_mse"});
        for (const auto& c : report.cells) {
            w.cell(c.size).cell(std::to_string(c.seed)).cell(to_string(c.model)).cell(c.test_mse);
            w.end_row();
        }
    }
    {
        CsvWriter w(out.path("augment_means.csv"), {"size", "model", "mean_test_mse"});
        for (const auto& m : report.means) {
            w.cell(m.size).cell(to_string(m.model)).cell(m.mean_test_mse);
            w.end_row();
        }
    }
    {
        std::vector<std::string> header{"model"};
        for (auto size : sizes) {
            header.push_back("size_" + std::to_string(size));
        }
        CsvWriter w(out.path("augment_table.csv"), header);
        for (Trainer m : models) {
            w.cell(to_string(m));
            for (auto size : sizes) {
                for (const auto& mean : report.means) {
                    if (mean.size == size && mean.model == m) {
                        w.cell(mean.mean_test_mse);
                        break;
                    }
                }
            }
            w.end_row();
        }
    }
    return out.done();
}

CommandOutput cmd_analyze(const json& cfg)
{
    OutputDir out(cfg);
    const json& a = cfg.at("analyze");
    const auto path_of = [&](const char* key) { return fs::path(a.at(key).get<std::string>()); };
    bool any = false;

    if (!path_of("predicted").empty() || !path_of("observed").empty()) {
        if (path_of("predicted").empty() || path_of("observed").empty()) {
            throw ConfigError("config: analyze.predicted and analyze.observed must be given together");
        }
        const NumericTable pred = read_numeric(path_of("predicted"));
        const NumericTable obs = read_numeric(path_of("observed"));
        if (pred.values.rows() != obs.values.rows() || pred.values.cols() != obs.values.cols()) {
            throw DataError("analyze: predicted and observed tables differ in shape");
        }
        const MseTable t = mse_table(pred.values, obs.values);
        CsvWriter w(out.path("mse_table.csv"), {"otu", "mse"});
        for (Eigen::Index c = 0; c < t.per_column.size(); ++c) {
            w.cell(obs.header[static_cast<std::size_t>(c)]).cell(t.per_column(c));
            w.end_row();
        }
        w.cell("overall").cell(t.overall);
        w.end_row();
        const LineFit fit = write_obs_pred(out.path("obs_pred.csv"), pred.values, obs.values, obs.header);
        CsvWriter f(out.path("obs_pred_fit.csv"), {"slope", "intercept"});
        f.cell(fit.slope).cell(fit.intercept);
        f.end_row();
        any = true;
    }

    if (!path_of("matrix").empty()) {
        const NumericTable m = read_numeric(path_of("matrix"));
        const auto pcs = std::min<std::size_t>(cfg.at("cluster").at("pca_components").get<std::size_t>(),
                                               static_cast<std::size_t>(m.values.cols()));
        const PcaModel model = pca_fit(m.values, pcs);
        write_pca(out, "pca", model, m.header);
        write_matrix_csv(out.path("pca_scores.csv"), pca_project(model, m.values), numbered("PC", pcs));
        if (!path_of("targets").empty()) {
            const NumericTable t = read_numeric(path_of("targets"));
            const Eigen::MatrixXd mi
                = mutual_information_matrix(m.values, t.values, cfg.at("cluster").at("mi_bins").get<std::size_t>());
            write_matrix_csv(out.path("mi.csv"), mi, t.header, "feature", m.header);
        }
        any = true;
    }

    if (!path_of("labels").empty()) {
        if (path_of("targets").empty()) {
            throw ConfigError("config: analyze.labels needs analyze.targets");
        }
        const NumericTable l = read_numeric(path_of("labels"));
        const NumericTable t = read_numeric(path_of("targets"));
        if (l.values.cols() == 0 || l.values.rows() != t.values.rows()) {
            throw DataError("analyze: labels and targets differ in row count");
        }
        std::vector<int> labels;
        int max_label = -1;
        for (Eigen::Index i = 0; i < l.values.rows(); ++i) {
            labels.push_back(static_cast<int>(l.values(i, l.values.cols() - 1)));
            max_label = std::max(max_label, labels.back());
        }
        auto clusters = a.at("clusters").get<std::size_t>();
        if (clusters == 0) {
            clusters = static_cast<std::size_t>(max_label + 1);
        }
        write_core_community(out, "core_community", core_community(labels, t.values, clusters), t.header,
                             cfg.at("cluster").at("log_floor").get<double>());
        any = true;
    }

    if (!any) {
        throw ConfigError("config: analyze needs predicted/observed, matrix, or labels/targets paths");
    }
    return out.done();
}

CommandOutput run_command(Command c, const json& cfg)
{
    switch (c) {
    case Command::predict:
        return cmd_predict(cfg);
    case Command::cluster:
        return cmd_cluster(cfg);
    case Command::generate:
        return cmd_generate(cfg);
    case Command::augment:
        return cmd_augment(cfg);
    case Command::analyze:
        return cmd_analyze(cfg);
    case Command::bench:
        break;
    }
    throw ConfigError("run_command: bench is dispatched by the acceptance suite");
}

} // namespace asopt
