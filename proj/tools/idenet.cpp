// Command-line front end: model reasoning, data generation, training,
// evaluation and experiment suites, all driven by JSON configs. Exit codes:
// 0 success or affirmative verdict, 1 negative verdict, 2 usage/input error.

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "idenet/datagen.hpp"
#include "idenet/estimator.hpp"
#include "idenet/io.hpp"
#include "idenet/metrics.hpp"
#include "idenet/nagg.hpp"
#include "idenet/netgen.hpp"
#include "json.hpp"

namespace {

using namespace idenet;
using nlohmann::json;

constexpr int kExitNegative = 1;
constexpr int kExitError = 2;

std::vector<rel::RelationalVariable> parse_rv_list(const rel::Schema& schema, const json& doc,
                                                   const std::string& key) {
    std::vector<rel::RelationalVariable> out;
    if (!doc.contains(key)) return out;
    for (const auto& item : doc.at(key))
        out.push_back(rel::parse_relational_variable(schema, item.get<std::string>()));
    return out;
}

int cmd_reason(const std::string& model_path, const std::string& query_path) {
    const rel::Nscm model = rel::nscm_from_json_file(model_path);
    const json query = json::parse(io::read_text_file(query_path));
    const std::string kind = query.at("query").get<std::string>();

    const rel::Nagg nagg = rel::build_nagg(model, rel::ItemClass::Entity);
    const rel::Schema& schema = model.schema;

    if (kind == "dsep") {
        const auto x = parse_rv_list(schema, query, "x");
        const auto y = parse_rv_list(schema, query, "y");
        const auto z = parse_rv_list(schema, query, "z");
        if (x.empty() || y.empty())
            throw rel::ParseError("dsep query needs non-empty x and y");
        const bool separated = rel::d_separated(nagg, x, y, z);
        json out;
        out["query"] = "dsep";
        out["separated"] = separated;
        std::cout << out.dump() << "\n";
        return separated ? 0 : kExitNegative;
    }
    if (kind == "adjust") {
        const auto x = parse_rv_list(schema, query, "x");
        const auto y = parse_rv_list(schema, query, "y");
        const auto z = parse_rv_list(schema, query, "z");
        if (x.size() != 1 || y.size() != 1)
            throw rel::ParseError("adjust query needs singleton x (treatment) and y (outcome)");
        if (x[0].path.length() != 1 || y[0].path.length() != 1)
            throw rel::ParseError("treatment and outcome must be canonical [E].Attr variables");
        const auto result =
            rel::find_ide_adjustment(nagg, x[0].attribute, y[0].attribute, z);
        json out;
        out["query"] = "adjust";
        out["identifiable"] = result.identifiable;
        if (result.identifiable) {
            json set = json::array();
            for (const auto& rv : result.adjustment_set) set.push_back(rv.to_string(schema));
            out["adjustment_set"] = std::move(set);
        } else {
            out["failure_case"] = rel::to_string(result.failure_case);
            json trail = json::array();
            for (const auto& rv : result.witness_path) trail.push_back(rv.to_string(schema));
            out["witness_path"] = std::move(trail);
        }
        std::cout << out.dump() << "\n";
        return result.identifiable ? 0 : kExitNegative;
    }
    throw rel::ParseError("query kind must be 'dsep' or 'adjust', got '" + kind + "'");
}

int cmd_gen_data(const std::string& config_path, const std::string& out_dir,
                 std::optional<uint64_t> seed_override) {
    const json config = json::parse(io::read_text_file(config_path));
    const uint64_t seed =
        seed_override ? *seed_override : config.value("seed", uint64_t{1});

    const json& net_cfg = config.at("network");
    const std::string model = net_cfg.at("model").get<std::string>();
    AttributedNetwork net;
    if (model == "ba") {
        net = generate_ba(net_cfg.at("n").get<int64_t>(), net_cfg.at("m").get<int64_t>(), seed);
    } else if (model == "ws") {
        net = generate_ws(net_cfg.at("n").get<int64_t>(), net_cfg.at("k").get<int64_t>(),
                          net_cfg.value("p_rewire", 0.5), seed);
    } else {
        throw std::invalid_argument("network.model must be 'ba' or 'ws'");
    }

    GenConfig outcome;
    if (config.contains("outcome"))
        outcome = gen_config_from_json_text(config.at("outcome").dump());
    if (config.contains("treatment") && config.at("treatment").contains("tau_c"))
        outcome.tau_c = config.at("treatment").at("tau_c").get<double>();

    GeneratedDataset data;
    if (config.contains("features")) {
        const auto table = io::read_csv(config.at("features").get<std::string>());
        std::vector<std::vector<double>> features(table.rows.begin(), table.rows.end());
        data = semi_synthetic(features, net, outcome, seed);
    } else {
        sample_attributes(net, seed);
        const auto x = assign_treatments(net, outcome.tau_c, seed);
        data = generate_outcomes(net, x, outcome, seed);
    }
    save_network(data.network, out_dir);
    save_dataset(data, out_dir);
    std::cout << "dataset written to " << out_dir << " (n=" << data.network.n
              << ", edges=" << data.network.edge_count() << ")\n";
    return 0;
}

int cmd_train(const std::string& config_path, const std::string& out_dir,
              std::optional<uint64_t> seed_override) {
    const json config = json::parse(io::read_text_file(config_path));
    const std::string dataset_dir = config.at("dataset").get<std::string>();
    const auto data = load_dataset(dataset_dir);

    nn::TrainConfig train_config = nn::train_config_from_json_text(config.dump());
    if (seed_override) train_config.seed = *seed_override;
    const nn::Variant variant =
        nn::variant_from_string(config.value("variant", std::string("ide_net")));

    auto model = nn::train(data, train_config, variant);
    std::filesystem::create_directories(out_dir);
    nn::save_model(model, out_dir + "/model.json");
    io::write_text_file(out_dir + "/train_config.json",
                        nn::train_config_to_json_text(train_config));
    std::cout << "trained " << nn::to_string(variant) << " (lambda=" << model.selected_lambda
              << ", val mse=" << model.validation_mse << ") -> " << out_dir << "/model.json\n";
    return 0;
}

int cmd_evaluate(const std::string& config_path, const std::string& out_dir) {
    const json config = json::parse(io::read_text_file(config_path));
    const auto data = load_dataset(config.at("dataset").get<std::string>());
    auto model = nn::load_model(config.at("model").get<std::string>());

    const auto estimate = nn::predict(model, data);
    std::filesystem::create_directories(out_dir);

    std::ostringstream tau;
    tau << "id,tau_hat,y0_hat,y1_hat\n";
    for (size_t i = 0; i < estimate.tau_hat.size(); ++i)
        tau << i << "," << io::format_double(estimate.tau_hat[i]) << ","
            << io::format_double(estimate.y0_hat[i]) << ","
            << io::format_double(estimate.y1_hat[i]) << "\n";
    io::write_text_file(out_dir + "/tau_hat.csv", tau.str());

    json metrics;
    metrics["pehe"] = ev::pehe(data.tau_true, estimate.tau_hat);
    metrics["ate_error"] = ev::ate_error(data.tau_true, estimate.tau_hat);
    io::write_text_file(out_dir + "/metrics.json", metrics.dump(2) + "\n");
    std::cout << metrics.dump() << "\n";
    return 0;
}

int cmd_run_suite(const std::string& config_path, const std::string& out_dir,
                  std::optional<uint64_t> seed_override) {
    auto grid = ev::grid_from_json_text(io::read_text_file(config_path));
    if (seed_override) grid.seed = *seed_override;
    const auto table = ev::run_grid(grid, out_dir);
    int missing = 0;
    for (const auto& cell : table.cells) missing += cell.error.has_value();
    std::cout << "suite complete: " << table.cells.size() << " cells, " << missing
              << " degenerate -> " << out_dir << "/results.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"IDE-Net: causal reasoning on attributed networks and individual "
                 "direct-effect estimation under heterogeneous peer influence"};
    app.require_subcommand(1);

    std::string nscm_file, query_file;
    auto* reason = app.add_subcommand("reason", "d-separation / adjustment-set queries on an NSCM");
    reason->add_option("model", nscm_file, "NSCM spec JSON")->required();
    reason->add_option("query", query_file, "query JSON")->required();

    std::string config_path, out_dir = ".";
    std::optional<uint64_t> seed;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "config JSON file")->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", seed, "override the config seed");
    };
    auto* gen = app.add_subcommand("gen-data", "generate a synthetic or semi-synthetic dataset");
    add_common(gen);
    auto* train = app.add_subcommand("train", "train an estimator on a dataset directory");
    add_common(train);
    auto* evaluate = app.add_subcommand("evaluate", "predict effects and report metrics");
    add_common(evaluate);
    auto* suite = app.add_subcommand("run-suite", "run a full experiment grid");
    add_common(suite);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (reason->parsed()) return cmd_reason(nscm_file, query_file);
        if (gen->parsed()) return cmd_gen_data(config_path, out_dir, seed);
        if (train->parsed()) return cmd_train(config_path, out_dir, seed);
        if (evaluate->parsed()) return cmd_evaluate(config_path, out_dir);
        if (suite->parsed()) return cmd_run_suite(config_path, out_dir, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
