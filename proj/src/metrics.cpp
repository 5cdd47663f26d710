#include "idenet/metrics.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <thread>

#include "idenet/io.hpp"
#include "idenet/netgen.hpp"
#include "idenet/rng.hpp"
#include "json.hpp"

namespace idenet::ev {

double pehe(const std::vector<double>& tau_true, const std::vector<double>& tau_hat) {
    if (tau_true.size() != tau_hat.size() || tau_true.empty())
        throw LengthMismatch("pehe: vectors must have equal nonzero length");
    double acc = 0.0;
    for (size_t i = 0; i < tau_true.size(); ++i) {
        const double d = tau_true[i] - tau_hat[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(tau_true.size()));
}

double ate_error(const std::vector<double>& tau_true, const std::vector<double>& tau_hat) {
    if (tau_true.size() != tau_hat.size() || tau_true.empty())
        throw LengthMismatch("ate_error: vectors must have equal nonzero length");
    double mean_true = 0.0, mean_hat = 0.0;
    for (size_t i = 0; i < tau_true.size(); ++i) {
        mean_true += tau_true[i];
        mean_hat += tau_hat[i];
    }
    return std::abs(mean_true / tau_true.size() - mean_hat / tau_hat.size());
}

std::string NetworkSpec::label() const {
    std::ostringstream out;
    if (model == "ba") out << "ba_n" << n << "_m" << m;
    else out << "ws_n" << n << "_k" << k;
    return out.str();
}

namespace {

using nlohmann::json;

NetworkSpec network_from_json(const json& doc) {
    NetworkSpec spec;
    spec.model = doc.at("model").get<std::string>();
    if (spec.model != "ba" && spec.model != "ws")
        throw std::invalid_argument("network model must be 'ba' or 'ws'");
    spec.n = doc.value("n", spec.n);
    spec.m = doc.value("m", spec.m);
    spec.k = doc.value("k", spec.k);
    spec.p_rewire = doc.value("p_rewire", spec.p_rewire);
    return spec;
}

AttributedNetwork generate_topology(const NetworkSpec& spec, uint64_t seed) {
    return spec.model == "ba" ? generate_ba(spec.n, spec.m, seed)
                              : generate_ws(spec.n, spec.k, spec.p_rewire, seed);
}

json cell_to_json(const CellResult& cell, const std::vector<nn::Variant>& variants) {
    json doc;
    doc["index"] = cell.index;
    doc["network"] = cell.key.network;
    doc["mechanism"] = cell.key.mechanism;
    doc["tau_p"] = cell.key.tau_p;
    if (cell.error) doc["error"] = *cell.error;
    json per_variant = json::object();
    for (size_t v = 0; v < variants.size(); ++v) {
        per_variant[nn::to_string(variants[v])] = {{"pehe", cell.pehe_values[v]},
                                                   {"ate", cell.ate_values[v]}};
    }
    doc["metrics"] = std::move(per_variant);
    return doc;
}

std::optional<CellResult> cell_from_json_file(const std::string& path,
                                              const std::vector<nn::Variant>& variants) {
    if (!std::filesystem::exists(path)) return std::nullopt;
    CellResult cell;
    try {
        const json doc = json::parse(io::read_text_file(path));
        cell.index = doc.at("index").get<size_t>();
        cell.key.network = doc.at("network").get<std::string>();
        cell.key.mechanism = doc.at("mechanism").get<std::string>();
        cell.key.tau_p = doc.at("tau_p").get<double>();
        if (doc.contains("error")) cell.error = doc.at("error").get<std::string>();
        for (const auto& variant : variants) {
            const auto& entry = doc.at("metrics").at(nn::to_string(variant));
            cell.pehe_values.push_back(entry.at("pehe").get<std::vector<double>>());
            cell.ate_values.push_back(entry.at("ate").get<std::vector<double>>());
        }
    } catch (const std::exception&) {
        return std::nullopt;  // partial write from an interrupted run, recompute
    }
    return cell;
}

}  // namespace

ExperimentGrid grid_from_json_text(const std::string& text) {
    const json doc = json::parse(text);
    ExperimentGrid grid;
    grid.seed = doc.value("seed", grid.seed);
    for (const auto& n : doc.at("networks")) grid.networks.push_back(network_from_json(n));
    for (const auto& m : doc.at("mechanisms"))
        grid.mechanisms.push_back(mechanism_from_string(m.get<std::string>()));
    grid.tau_p_values = doc.at("tau_p").get<std::vector<double>>();
    grid.seeds_per_cell = doc.value("seeds_per_cell", 1);
    if (grid.seeds_per_cell < 1) throw std::invalid_argument("seeds_per_cell must be >= 1");
    for (const auto& v : doc.at("variants"))
        grid.variants.push_back(nn::variant_from_string(v.get<std::string>()));
    if (grid.variants.empty()) throw std::invalid_argument("at least one variant required");
    if (doc.contains("outcome"))
        grid.outcome = gen_config_from_json_text(doc.at("outcome").dump());
    if (doc.contains("train"))
        grid.train = nn::train_config_from_json_text(doc.at("train").dump());
    return grid;
}

namespace {

CellResult run_cell(const ExperimentGrid& grid, size_t index, const CellKey& key,
                    const NetworkSpec& spec, Mechanism mechanism, double tau_p) {
    CellResult cell;
    cell.index = index;
    cell.key = key;
    cell.pehe_values.assign(grid.variants.size(), {});
    cell.ate_values.assign(grid.variants.size(), {});

    for (int replicate = 0; replicate < grid.seeds_per_cell; ++replicate) {
        const uint64_t seed = Rng::derive(Rng::derive(grid.seed, index),
                                          static_cast<uint64_t>(replicate));
        GenConfig outcome = grid.outcome;
        outcome.mechanism = mechanism;
        outcome.tau_p = tau_p;

        try {
            auto net = generate_topology(spec, seed);
            sample_attributes(net, seed);
            const auto x = assign_treatments(net, outcome.tau_c, seed);
            const auto data = generate_outcomes(net, x, outcome, seed);

            for (size_t v = 0; v < grid.variants.size(); ++v) {
                nn::TrainConfig train_config = grid.train;
                train_config.seed = seed;
                auto model = nn::train(data, train_config, grid.variants[v]);
                const auto estimate = nn::predict(model, data);
                cell.pehe_values[v].push_back(pehe(data.tau_true, estimate.tau_hat));
                cell.ate_values[v].push_back(ate_error(data.tau_true, estimate.tau_hat));
            }
        } catch (const nn::Degenerate& e) {
            cell.error = e.what();
        }
    }
    return cell;
}

}  // namespace

std::string ResultsTable::to_csv() const {
    std::ostringstream out;
    out << "network,mechanism,tau_p,estimator,metric,mean,std,n_seeds\n";
    for (const auto& row : rows) {
        out << row.key.network << "," << row.key.mechanism << ","
            << io::format_double(row.key.tau_p) << "," << row.estimator << "," << row.metric
            << "," << io::format_double(row.mean) << "," << io::format_double(row.stddev) << ","
            << row.n_seeds << "\n";
    }
    return out.str();
}

std::string ResultsTable::to_json() const {
    json cells_json = json::array();
    for (const auto& cell : cells) {
        json doc;
        doc["index"] = cell.index;
        doc["network"] = cell.key.network;
        doc["mechanism"] = cell.key.mechanism;
        doc["tau_p"] = cell.key.tau_p;
        if (cell.error) doc["error"] = *cell.error;
        doc["pehe"] = cell.pehe_values;
        doc["ate"] = cell.ate_values;
        cells_json.push_back(std::move(doc));
    }
    return cells_json.dump(2) + "\n";
}

ResultsTable run_grid(const ExperimentGrid& grid, const std::string& out_dir, int threads) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir + "/cells");

    if (threads <= 0) {
        threads = 1;
        if (const char* env = std::getenv("IDE_NET_THREADS")) {
            threads = std::max(1, std::atoi(env));
        }
    }

    struct CellPlan {
        CellKey key;
        NetworkSpec spec;
        Mechanism mechanism;
        double tau_p;
    };
    std::vector<CellPlan> plan;
    for (const auto& spec : grid.networks)
        for (const auto mechanism : grid.mechanisms)
            for (const double tau_p : grid.tau_p_values)
                plan.push_back({{spec.label(), to_string(mechanism), tau_p}, spec, mechanism,
                                tau_p});

    std::vector<CellResult> cells(plan.size());
    std::atomic<size_t> next{0};

    auto worker = [&] {
        for (;;) {
            const size_t index = next.fetch_add(1);
            if (index >= plan.size()) return;
            const std::string cell_path =
                out_dir + "/cells/cell_" + std::to_string(index) + ".json";
            if (auto cached = cell_from_json_file(cell_path, grid.variants)) {
                cells[index] = std::move(*cached);
                continue;
            }
            cells[index] = run_cell(grid, index, plan[index].key, plan[index].spec,
                                    plan[index].mechanism, plan[index].tau_p);
            io::write_text_file(cell_path,
                                cell_to_json(cells[index], grid.variants).dump(2) + "\n");
        }
    };

    if (threads <= 1 || plan.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    ResultsTable table;
    table.cells = std::move(cells);
    for (const auto& cell : table.cells) {
        for (size_t v = 0; v < grid.variants.size(); ++v) {
            for (const std::string metric : {"pehe", "ate"}) {
                const auto& values = metric == "pehe" ? cell.pehe_values[v] : cell.ate_values[v];
                if (values.empty()) continue;
                double mean = 0.0;
                for (const double x : values) mean += x;
                mean /= values.size();
                double var = 0.0;
                for (const double x : values) var += (x - mean) * (x - mean);
                const double sd = values.size() > 1 ? std::sqrt(var / (values.size() - 1)) : 0.0;
                table.rows.push_back({cell.key, nn::to_string(grid.variants[v]), metric, mean,
                                      sd, static_cast<int>(values.size())});
            }
        }
    }
    io::write_text_file(out_dir + "/results.csv", table.to_csv());
    io::write_text_file(out_dir + "/results.json", table.to_json());
    return table;
}

}  // namespace idenet::ev
