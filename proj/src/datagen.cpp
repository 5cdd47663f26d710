#include "idenet/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "idenet/io.hpp"
#include "idenet/netgen.hpp"
#include "idenet/rng.hpp"
#include "json.hpp"

namespace idenet {

Mechanism mechanism_from_string(const std::string& name) {
    if (name == "tie_strength") return Mechanism::TieStrength;
    if (name == "similarity") return Mechanism::Similarity;
    if (name == "mutual_friends") return Mechanism::MutualFriends;
    if (name == "peer_degree") return Mechanism::PeerDegree;
    if (name == "combined") return Mechanism::Combined;
    throw std::invalid_argument("unknown mechanism '" + name + "'");
}

std::string to_string(Mechanism m) {
    switch (m) {
        case Mechanism::TieStrength: return "tie_strength";
        case Mechanism::Similarity: return "similarity";
        case Mechanism::MutualFriends: return "mutual_friends";
        case Mechanism::PeerDegree: return "peer_degree";
        case Mechanism::Combined: return "combined";
    }
    return "?";
}

void GenConfig::validate() const {
    if (tau_c < 0.0 || tau_c > 1.0) throw std::invalid_argument("tau_c outside [0,1]");
    if (percentile_p < 0.0 || percentile_p > 100.0)
        throw std::invalid_argument("percentile_p outside [0,100]");
    if (noise_sd < 0.0) throw std::invalid_argument("negative noise_sd");
}

namespace {

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// linear-interpolation percentile of a sorted copy
double percentile(std::vector<double> values, double p) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const double rank = p / 100.0 * static_cast<double>(values.size() - 1);
    const size_t lo = static_cast<size_t>(rank);
    const size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

}  // namespace

std::vector<double> assign_treatments(const AttributedNetwork& net,
                                      const std::vector<const std::vector<double>*>& confounders,
                                      const std::vector<double>& weights, double tau_c,
                                      Activation activation, uint64_t seed) {
    if (confounders.size() != weights.size())
        throw DimensionMismatch("confounder column count differs from weight count");
    Rng rng(Rng::derive(seed, "treatments"));

    std::vector<double> x(net.n, 0.0);
    for (int64_t i = 0; i < net.n; ++i) {
        double own = 0.0;
        for (size_t d = 0; d < weights.size(); ++d) own += weights[d] * (*confounders[d])[i];

        double peer = 0.0;
        const int64_t deg = net.degree(i);
        if (deg > 0) {
            for (size_t d = 0; d < weights.size(); ++d) {
                double total = 0.0;
                for (int64_t k = net.row_offsets[i]; k < net.row_offsets[i + 1]; ++k)
                    total += (*confounders[d])[net.col_indices[k]];
                peer += weights[d] * total / static_cast<double>(deg);
            }
        }
        const double score = tau_c * peer + (1.0 - tau_c) * own;
        const double propensity =
            activation == Activation::Sigmoid ? sigmoid(score) : clamp01(score);
        x[i] = rng.bernoulli(propensity) ? 1.0 : 0.0;
    }
    return x;
}

std::vector<double> assign_treatments(const AttributedNetwork& net, double tau_c, uint64_t seed) {
    return assign_treatments(net, {&net.node_column("C")}, {1.0}, tau_c, Activation::Identity,
                             seed);
}

namespace {

// per-directed-slot mechanism weights, row-grouped like the CSR
std::vector<double> mechanism_weights(const AttributedNetwork& net, const GenConfig& config) {
    const int64_t slots = static_cast<int64_t>(net.col_indices.size());
    std::vector<double> w(slots, 0.0);

    const bool use_zr = config.mechanism == Mechanism::TieStrength ||
                        config.mechanism == Mechanism::Combined;
    const bool use_sim = config.mechanism == Mechanism::Similarity ||
                         config.mechanism == Mechanism::Combined;
    const bool use_mutual = config.mechanism == Mechanism::MutualFriends ||
                            config.mechanism == Mechanism::Combined;

    const std::vector<double>* zr = use_zr ? &net.edge_column("Z_r") : nullptr;
    const std::vector<double>* z = use_sim ? &net.node_column("Z") : nullptr;
    std::vector<double> mutual;
    if (use_mutual) mutual = net.mutual_neighbor_counts();

    for (int64_t i = 0; i < net.n; ++i) {
        for (int64_t k = net.row_offsets[i]; k < net.row_offsets[i + 1]; ++k) {
            const int32_t j = net.col_indices[k];
            const int64_t e = net.payload_index[k];
            double weight = 0.0;
            if (use_zr) weight += config.tau_Zr * (*zr)[e] * (*zr)[e];
            if (use_sim) {
                // one-hot categories have squared distance 0 or 2
                const double dist2 = config.z_categorical
                                         ? ((*z)[i] == (*z)[j] ? 0.0 : 2.0)
                                         : ((*z)[i] - (*z)[j]) * ((*z)[i] - (*z)[j]);
                weight += config.tau_Zmi * std::exp(-config.rbf_gamma * dist2);
            }
            if (use_mutual) weight += config.tau_Emr * std::sqrt(mutual[e]);
            if (config.mechanism == Mechanism::PeerDegree)
                weight = static_cast<double>(net.degree(j));
            w[k] = weight;
        }
    }
    return w;
}

}  // namespace

std::vector<double> true_exposure(const AttributedNetwork& net, const std::vector<double>& x,
                                  const GenConfig& config) {
    if (static_cast<int64_t>(x.size()) != net.n)
        throw DimensionMismatch("treatment vector length differs from node count");
    const auto weights = mechanism_weights(net, config);

    std::vector<double> exposure(net.n, 0.0);
    for (int64_t i = 0; i < net.n; ++i) {
        double total = 0.0, treated = 0.0;
        for (int64_t k = net.row_offsets[i]; k < net.row_offsets[i + 1]; ++k) {
            total += weights[k];
            treated += weights[k] * x[net.col_indices[k]];
        }
        exposure[i] = total != 0.0 ? treated / total : 0.0;
    }
    return exposure;
}

GeneratedDataset generate_outcomes(const AttributedNetwork& net, const std::vector<double>& x,
                                   const GenConfig& config, uint64_t seed) {
    config.validate();
    if (static_cast<int64_t>(x.size()) != net.n)
        throw DimensionMismatch("treatment vector length differs from node count");
    Rng rng(Rng::derive(seed, "outcomes"));

    const auto& c = net.node_column("C");
    const auto& z = net.node_column("Z");
    const auto exposure = true_exposure(net, x, config);

    // network effect modifier: own degree above the p-th percentile of
    // neighbour degrees; isolated nodes take 0
    std::vector<double> net_mod(net.n, 0.0);
    for (int64_t i = 0; i < net.n; ++i) {
        const int64_t deg = net.degree(i);
        if (deg == 0) continue;
        std::vector<double> peer_degrees;
        peer_degrees.reserve(deg);
        for (int64_t k = net.row_offsets[i]; k < net.row_offsets[i + 1]; ++k)
            peer_degrees.push_back(static_cast<double>(net.degree(net.col_indices[k])));
        net_mod[i] =
            static_cast<double>(deg) > percentile(std::move(peer_degrees), config.percentile_p)
                ? 1.0
                : 0.0;
    }

    GeneratedDataset data;
    data.network = net;
    data.config = config;
    data.x = x;
    data.exposure_true = exposure;
    data.y0.resize(net.n);
    data.y1.resize(net.n);
    data.y.resize(net.n);
    data.tau_true.resize(net.n);

    for (int64_t i = 0; i < net.n; ++i) {
        const double noise = config.noise_sd > 0.0 ? rng.normal(0.0, config.noise_sd) : 0.0;
        const double base = config.tau_0 + config.tau_c1 * c[i] + noise +
                            config.tau_p * exposure[i];

        auto arm = [&](double xi) {
            double value = base + config.tau_d * xi + config.tau_a * xi * z[i] +
                           config.tau_n * xi * net_mod[i];
            if (config.exposure_modifies_effect) value += config.tau_p * exposure[i] * xi;
            return value;
        };
        data.y0[i] = arm(0.0);
        data.y1[i] = arm(1.0);
        data.y[i] = x[i] * data.y1[i] + (1.0 - x[i]) * data.y0[i];
        data.tau_true[i] = data.y1[i] - data.y0[i];
    }
    return data;
}

GeneratedDataset semi_synthetic(const std::vector<std::vector<double>>& features,
                                const AttributedNetwork& net, const GenConfig& config,
                                uint64_t seed) {
    config.validate();
    if (static_cast<int64_t>(features.size()) != net.n)
        throw DimensionMismatch("feature row count differs from node count");
    const size_t dim = features.empty() ? 0 : features.front().size();
    for (const auto& row : features)
        if (row.size() != dim) throw DimensionMismatch("ragged feature matrix");

    Rng rng(Rng::derive(seed, "semi-synthetic-weights"));
    std::vector<int> mask_x(dim), mask_y(dim);
    std::vector<double> w_x(dim), w_y(dim);
    for (size_t d = 0; d < dim; ++d) mask_x[d] = rng.bernoulli(0.6) ? 1 : 0;
    for (size_t d = 0; d < dim; ++d) mask_y[d] = rng.bernoulli(0.6) ? 1 : 0;
    for (size_t d = 0; d < dim; ++d) w_x[d] = mask_x[d] * rng.uniform(-3.0, 3.0);
    for (size_t d = 0; d < dim; ++d) w_y[d] = mask_y[d] * rng.uniform(-3.0, 3.0);

    // column views of the features for the treatment model
    std::vector<std::vector<double>> columns(dim, std::vector<double>(net.n));
    for (int64_t i = 0; i < net.n; ++i)
        for (size_t d = 0; d < dim; ++d) columns[d][i] = features[i][d];
    std::vector<const std::vector<double>*> column_ptrs;
    for (const auto& col : columns) column_ptrs.push_back(&col);

    const auto x = assign_treatments(net, column_ptrs, w_x, config.tau_c, Activation::Sigmoid,
                                     seed);

    GenConfig cfg = config;
    cfg.z_categorical = false;

    // confounding term W_y . C over treatment-affecting features, attribute
    // effect modifier over the M_x = 0, M_y = 1 features
    AttributedNetwork enriched = net;
    enriched.node_attr_names.clear();
    enriched.node_attrs.clear();
    enriched.add_node_column("C");
    enriched.add_node_column("Z");
    auto& c_col = enriched.mutable_node_column("C");
    auto& z_col = enriched.mutable_node_column("Z");
    for (int64_t i = 0; i < net.n; ++i) {
        double confound = 0.0, modifier = 0.0;
        for (size_t d = 0; d < dim; ++d) {
            if (mask_x[d]) confound += w_y[d] * features[i][d];
            if (!mask_x[d] && mask_y[d]) modifier += w_y[d] * features[i][d];
        }
        c_col[i] = confound;
        z_col[i] = modifier;
    }

    return generate_outcomes(enriched, x, cfg, seed);
}

void save_dataset(const GeneratedDataset& data, const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::ostringstream treatments;
    treatments << "id,X\n";
    for (size_t i = 0; i < data.x.size(); ++i)
        treatments << i << "," << static_cast<int>(data.x[i]) << "\n";
    io::write_text_file(dir + "/treatments.csv", treatments.str());

    std::ostringstream outcomes;
    outcomes << "id,Y,Y0,Y1,tau_true\n";
    for (size_t i = 0; i < data.y.size(); ++i) {
        outcomes << i << "," << io::format_double(data.y[i]) << ","
                 << io::format_double(data.y0[i]) << "," << io::format_double(data.y1[i]) << ","
                 << io::format_double(data.tau_true[i]) << "\n";
    }
    io::write_text_file(dir + "/outcomes.csv", outcomes.str());
    io::write_text_file(dir + "/gen_config.json", gen_config_to_json_text(data.config));
}

GeneratedDataset load_dataset(const std::string& dir) {
    GeneratedDataset data;
    data.network = load_network(dir);
    data.config = gen_config_from_json_text(io::read_text_file(dir + "/gen_config.json"));

    const auto treatments = io::read_csv(dir + "/treatments.csv");
    data.x.assign(data.network.n, 0.0);
    for (const auto& row : treatments.rows)
        data.x[static_cast<size_t>(row[0])] = row[treatments.column("X")];

    const auto outcomes = io::read_csv(dir + "/outcomes.csv");
    data.y.assign(data.network.n, 0.0);
    data.y0.assign(data.network.n, 0.0);
    data.y1.assign(data.network.n, 0.0);
    data.tau_true.assign(data.network.n, 0.0);
    for (const auto& row : outcomes.rows) {
        const auto i = static_cast<size_t>(row[0]);
        data.y[i] = row[outcomes.column("Y")];
        data.y0[i] = row[outcomes.column("Y0")];
        data.y1[i] = row[outcomes.column("Y1")];
        data.tau_true[i] = row[outcomes.column("tau_true")];
    }
    data.exposure_true = true_exposure(data.network, data.x, data.config);
    return data;
}

std::string gen_config_to_json_text(const GenConfig& c) {
    nlohmann::json doc;
    doc["tau_0"] = c.tau_0;
    doc["tau_c1"] = c.tau_c1;
    doc["tau_d"] = c.tau_d;
    doc["tau_a"] = c.tau_a;
    doc["tau_n"] = c.tau_n;
    doc["tau_p"] = c.tau_p;
    doc["tau_Zr"] = c.tau_Zr;
    doc["tau_Zmi"] = c.tau_Zmi;
    doc["tau_Emr"] = c.tau_Emr;
    doc["tau_c"] = c.tau_c;
    doc["mechanism"] = to_string(c.mechanism);
    doc["exposure_modifies_effect"] = c.exposure_modifies_effect;
    doc["percentile_p"] = c.percentile_p;
    doc["rbf_gamma"] = c.rbf_gamma;
    doc["noise_sd"] = c.noise_sd;
    doc["z_categorical"] = c.z_categorical;
    return doc.dump(2) + "\n";
}

GenConfig gen_config_from_json_text(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    GenConfig c;
    c.tau_0 = doc.value("tau_0", c.tau_0);
    c.tau_c1 = doc.value("tau_c1", c.tau_c1);
    c.tau_d = doc.value("tau_d", c.tau_d);
    c.tau_a = doc.value("tau_a", c.tau_a);
    c.tau_n = doc.value("tau_n", c.tau_n);
    c.tau_p = doc.value("tau_p", c.tau_p);
    c.tau_Zr = doc.value("tau_Zr", c.tau_Zr);
    c.tau_Zmi = doc.value("tau_Zmi", c.tau_Zmi);
    c.tau_Emr = doc.value("tau_Emr", c.tau_Emr);
    c.tau_c = doc.value("tau_c", c.tau_c);
    if (doc.contains("mechanism"))
        c.mechanism = mechanism_from_string(doc.at("mechanism").get<std::string>());
    c.exposure_modifies_effect = doc.value("exposure_modifies_effect", c.exposure_modifies_effect);
    c.percentile_p = doc.value("percentile_p", c.percentile_p);
    c.rbf_gamma = doc.value("rbf_gamma", c.rbf_gamma);
    c.noise_sd = doc.value("noise_sd", c.noise_sd);
    c.z_categorical = doc.value("z_categorical", c.z_categorical);
    c.validate();
    return c;
}

}  // namespace idenet
