#include "idenet/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "idenet/io.hpp"
#include "idenet/rng.hpp"
#include "json.hpp"

namespace idenet::nn {

Variant variant_from_string(const std::string& name) {
    if (name == "ide_net") return Variant::Full;
    if (name == "ide_net_int") return Variant::HomogeneousExposure;
    if (name == "mlp") return Variant::NoInterference;
    throw std::invalid_argument("unknown estimator variant '" + name + "'");
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::Full: return "ide_net";
        case Variant::HomogeneousExposure: return "ide_net_int";
        case Variant::NoInterference: return "mlp";
    }
    return "?";
}

void TrainConfig::validate() const {
    if (maxiter < 1) throw std::invalid_argument("maxiter must be positive");
    if (val <= 0.0 || val >= 1.0) throw std::invalid_argument("val must lie in (0,1)");
    if (lambda_candidates.empty())
        throw std::invalid_argument("at least one smoothing lambda candidate required");
    if (fdim < 1 || edim < 1 || inlayers < 1 || hops < 1)
        throw std::invalid_argument("dimensions and layer counts must be positive");
    if (reg_warmup_fraction < 0.0 || reg_warmup_fraction > 1.0)
        throw std::invalid_argument("reg_warmup_fraction outside [0,1]");
}

GraphInputs build_graph_inputs(const GeneratedDataset& dataset) {
    const AttributedNetwork& net = dataset.network;
    GraphInputs g;
    g.n = net.n;
    g.slots = static_cast<int64_t>(net.col_indices.size());
    g.inv_sqrt_deg = inv_sqrt_degrees(net);
    g.tri_counts = triangle_count_per_edge(net);
    g.x = dataset.x;

    g.receiver.reserve(g.slots);
    g.neighbor.reserve(g.slots);
    for (int64_t i = 0; i < net.n; ++i)
        for (int64_t s = net.row_offsets[i]; s < net.row_offsets[i + 1]; ++s) {
            g.receiver.push_back(i);
            g.neighbor.push_back(net.col_indices[s]);
        }

    // node features: raw columns, with a categorical Z expanded one-hot
    std::vector<const std::vector<double>*> raw;
    int categories = 0;
    const std::vector<double>* z_col = nullptr;
    for (size_t c = 0; c < net.node_attr_names.size(); ++c) {
        if (net.node_attr_names[c] == "Z" && dataset.config.z_categorical) {
            z_col = &net.node_attrs[c];
            for (const double v : *z_col)
                categories = std::max(categories, static_cast<int>(v) + 1);
        } else {
            raw.push_back(&net.node_attrs[c]);
        }
    }
    g.node_dim = static_cast<int64_t>(raw.size()) + categories;
    g.node_feats.assign(g.n * g.node_dim, 0.0);
    for (int64_t i = 0; i < g.n; ++i) {
        int64_t col = 0;
        for (const auto* column : raw) g.node_feats[i * g.node_dim + col++] = (*column)[i];
        if (z_col) {
            const int cat = static_cast<int>((*z_col)[i]);
            g.node_feats[i * g.node_dim + col + cat] = 1.0;
        }
    }

    g.edge_dim = static_cast<int64_t>(net.edge_attrs.size());
    g.edge_feats.assign(g.slots * g.edge_dim, 0.0);
    for (int64_t s = 0; s < g.slots; ++s) {
        const int64_t payload = net.payload_index[s];
        for (int64_t c = 0; c < g.edge_dim; ++c)
            g.edge_feats[s * g.edge_dim + c] = net.edge_attrs[c][payload];
    }

    g.x_neighbor.resize(g.slots);
    for (int64_t s = 0; s < g.slots; ++s) g.x_neighbor[s] = dataset.x[g.neighbor[s]];

    g.frac_treated.assign(g.n, 0.0);
    for (int64_t i = 0; i < net.n; ++i) {
        const int64_t deg = net.degree(i);
        if (deg == 0) continue;
        double treated = 0.0;
        for (int64_t s = net.row_offsets[i]; s < net.row_offsets[i + 1]; ++s)
            treated += dataset.x[net.col_indices[s]];
        g.frac_treated[i] = treated / static_cast<double>(deg);
    }
    return g;
}

ParamTensor& EstimatorModel::param(const std::string& name) {
    for (auto& p : params)
        if (p.name == name) return p;
    throw std::out_of_range("no parameter tensor named '" + name + "'");
}

const ParamTensor& EstimatorModel::param(const std::string& name) const {
    for (const auto& p : params)
        if (p.name == name) return p;
    throw std::out_of_range("no parameter tensor named '" + name + "'");
}

namespace {

void add_mlp_params(EstimatorModel& model, Rng& rng, const std::string& prefix, int64_t in,
                    int64_t hidden, int layers, bool encoder_group) {
    int64_t width_in = in;
    for (int l = 0; l < layers; ++l) {
        ParamTensor w;
        w.name = prefix + ".w" + std::to_string(l);
        w.shape = {width_in, hidden};
        w.values.resize(width_in * hidden);
        const double bound = std::sqrt(6.0 / static_cast<double>(width_in + hidden));
        for (auto& v : w.values) v = rng.uniform(-bound, bound);
        w.encoder_group = encoder_group;
        model.params.push_back(std::move(w));

        ParamTensor b;
        b.name = prefix + ".b" + std::to_string(l);
        b.shape = {1, hidden};
        b.values.assign(hidden, 0.0);
        b.encoder_group = encoder_group;
        model.params.push_back(std::move(b));
        width_in = hidden;
    }
}

// applies prefix.w0/b0 ... with ReLU after every layer
Tensor apply_mlp(Tape& tape, ForwardResult& fw, const std::string& prefix, Tensor input,
                 int layers) {
    Tensor h = input;
    for (int l = 0; l < layers; ++l) {
        const Tensor w = fw.param_tensors.at(prefix + ".w" + std::to_string(l));
        const Tensor b = fw.param_tensors.at(prefix + ".b" + std::to_string(l));
        h = tape.relu(tape.add_rowvec(tape.matmul(h, w), b));
    }
    return h;
}

// head MLP: a hidden ReLU layer then a linear scalar output
Tensor apply_head(Tape& tape, ForwardResult& fw, const std::string& prefix, Tensor input) {
    const Tensor w0 = fw.param_tensors.at(prefix + ".w0");
    const Tensor b0 = fw.param_tensors.at(prefix + ".b0");
    Tensor h = tape.relu(tape.add_rowvec(tape.matmul(input, w0), b0));
    const Tensor w1 = fw.param_tensors.at(prefix + ".w1");
    const Tensor b1 = fw.param_tensors.at(prefix + ".b1");
    return tape.add_rowvec(tape.matmul(h, w1), b1);
}

int64_t feature_width(const EstimatorModel& model) {
    const int64_t fdim = model.config.fdim;
    const int64_t edim = model.config.edim;
    // h_i || h_-i || (h'_r || D^-1/2 A h'_r when edge features exist)
    return fdim + fdim + (model.edge_dim > 0 ? 2 * edim : 0);
}

int64_t exposure_width(const EstimatorModel& model) {
    const int64_t l = feature_width(model);
    // Theta(Z_e) || triangle counts || h_f[peer] || sim(h_f, h_f[peer])
    return (model.edge_dim > 0 ? model.config.edim : 0) + 1 + l + l;
}

}  // namespace

EstimatorModel init_model(const GraphInputs& inputs, const TrainConfig& config, Variant variant) {
    config.validate();
    EstimatorModel model;
    model.variant = variant;
    model.config = config;
    model.node_dim = inputs.node_dim;
    model.edge_dim = inputs.edge_dim;

    Rng rng(Rng::derive(config.seed, "init"));
    const int64_t fdim = config.fdim;
    const int64_t edim = config.edim;

    if (variant != Variant::NoInterference) {
        add_mlp_params(model, rng, "ego", inputs.node_dim, fdim, config.inlayers, true);
        add_mlp_params(model, rng, "peer", inputs.node_dim + inputs.edge_dim, fdim,
                       config.inlayers, true);
        if (inputs.edge_dim > 0)
            add_mlp_params(model, rng, "edge", inputs.edge_dim, edim, config.inlayers, true);
        for (int hop = 2; hop <= config.hops; ++hop)
            add_mlp_params(model, rng, "hop" + std::to_string(hop), feature_width(model),
                           feature_width(model), 1, true);
        if (variant == Variant::Full && inputs.edge_dim > 0)
            add_mlp_params(model, rng, "expw", inputs.edge_dim, edim, config.inlayers, true);
    } else {
        add_mlp_params(model, rng, "ego", inputs.node_dim, fdim, config.inlayers, true);
    }

    int64_t rep_in = 0;
    if (variant == Variant::Full) rep_in = feature_width(model) + exposure_width(model);
    else if (variant == Variant::HomogeneousExposure) rep_in = feature_width(model) + 1;
    else rep_in = fdim;

    add_mlp_params(model, rng, "shared", rep_in, fdim, 1, false);
    {
        ParamTensor gamma;
        gamma.name = "bn.gamma";
        gamma.shape = {1, fdim};
        gamma.values.assign(fdim, 1.0);
        gamma.encoder_group = false;
        model.params.push_back(std::move(gamma));
        ParamTensor beta;
        beta.name = "bn.beta";
        beta.shape = {1, fdim};
        beta.values.assign(fdim, 0.0);
        beta.encoder_group = false;
        model.params.push_back(std::move(beta));
    }
    for (const std::string head : {"head0", "head1"}) {
        add_mlp_params(model, rng, head, fdim, fdim, 1, false);
        ParamTensor w;
        w.name = head + ".w1";
        w.shape = {fdim, 1};
        w.values.resize(fdim);
        const double bound = std::sqrt(6.0 / static_cast<double>(fdim + 1));
        for (auto& v : w.values) v = rng.uniform(-bound, bound);
        w.encoder_group = false;
        model.params.push_back(std::move(w));
        ParamTensor b;
        b.name = head + ".b1";
        b.shape = {1, 1};
        b.values.assign(1, 0.0);
        b.encoder_group = false;
        model.params.push_back(std::move(b));
    }
    return model;
}

ForwardResult forward(EstimatorModel& model, const GraphInputs& inputs, Tape& tape,
                      bool training) {
    if (inputs.node_dim != model.node_dim || inputs.edge_dim != model.edge_dim)
        throw ShapeMismatch("dataset feature widths differ from the model's");

    ForwardResult fw;
    for (auto& p : model.params)
        fw.param_tensors.emplace(p.name, tape.parameter(p.shape, p.values.data()));

    const Tensor node_f = tape.constant({inputs.n, inputs.node_dim}, inputs.node_feats.data());
    const bool has_edges = inputs.edge_dim > 0;
    Tensor edge_f;
    if (has_edges)
        edge_f = tape.constant({inputs.slots, inputs.edge_dim}, inputs.edge_feats.data());

    Tensor rep_in;
    if (model.variant == Variant::NoInterference) {
        rep_in = apply_mlp(tape, fw, "ego", node_f, model.config.inlayers);
    } else {
        const Tensor h_i = apply_mlp(tape, fw, "ego", node_f, model.config.inlayers);

        const Tensor peer_nodes = tape.gather_rows(node_f, inputs.neighbor);
        const Tensor peer_in =
            has_edges ? tape.concat_cols({peer_nodes, edge_f}) : peer_nodes;
        const Tensor peer_mlp = apply_mlp(tape, fw, "peer", peer_in, model.config.inlayers);
        const Tensor h_mi = tape.scale_rows(
            tape.row_masked_aggregate(peer_mlp, inputs.receiver, inputs.n), inputs.inv_sqrt_deg);

        Tensor h_f;
        if (has_edges) {
            const Tensor edge_mlp =
                apply_mlp(tape, fw, "edge", edge_f, model.config.inlayers);
            const Tensor hr1 = tape.row_masked_aggregate(edge_mlp, inputs.receiver, inputs.n);
            const Tensor hr2 = tape.scale_rows(
                tape.row_masked_aggregate(tape.gather_rows(hr1, inputs.neighbor), inputs.receiver,
                                          inputs.n),
                inputs.inv_sqrt_deg);
            h_f = tape.concat_cols({h_i, h_mi, hr1, hr2});
        } else {
            h_f = tape.concat_cols({h_i, h_mi});
        }
        for (int hop = 2; hop <= model.config.hops; ++hop) {
            const Tensor mapped =
                apply_mlp(tape, fw, "hop" + std::to_string(hop), h_f, 1);
            h_f = tape.scale_rows(
                tape.row_masked_aggregate(tape.gather_rows(mapped, inputs.neighbor),
                                          inputs.receiver, inputs.n),
                inputs.inv_sqrt_deg);
        }

        if (model.variant == Variant::HomogeneousExposure) {
            const Tensor h_e =
                tape.constant({inputs.n, 1}, inputs.frac_treated.data());
            rep_in = tape.concat_cols({h_f, h_e});
        } else {
            std::vector<Tensor> channels;
            if (has_edges)
                channels.push_back(
                    apply_mlp(tape, fw, "expw", edge_f, model.config.inlayers));
            channels.push_back(tape.constant({inputs.slots, 1}, inputs.tri_counts.data()));
            const Tensor hf_peer = tape.gather_rows(h_f, inputs.neighbor);
            channels.push_back(hf_peer);
            channels.push_back(tape.sim_exp(tape.gather_rows(h_f, inputs.receiver), hf_peer));
            const Tensor h_w = tape.concat_cols(channels);

            const Tensor numer = tape.row_masked_aggregate(
                tape.scale_rows(h_w, inputs.x_neighbor), inputs.receiver, inputs.n);
            const Tensor denom = tape.row_masked_aggregate(h_w, inputs.receiver, inputs.n);
            const Tensor h_e = tape.safe_div(numer, denom);
            rep_in = tape.concat_cols({h_f, h_e});
        }
    }

    const Tensor lin = tape.add_rowvec(tape.matmul(rep_in, fw.param_tensors.at("shared.w0")),
                                       fw.param_tensors.at("shared.b0"));
    const Tensor normed = tape.batch_norm(lin, fw.param_tensors.at("bn.gamma"),
                                          fw.param_tensors.at("bn.beta"), model.bn, training);
    const Tensor h = tape.tanh(normed);

    fw.y0 = apply_head(tape, fw, "head0", h);
    fw.y1 = apply_head(tape, fw, "head1", h);
    fw.tau = tape.sub(fw.y1, fw.y0);

    const Tensor x_mask = tape.constant({inputs.n, 1}, inputs.x.data());
    std::vector<double> inverse(inputs.n);
    for (int64_t i = 0; i < inputs.n; ++i) inverse[i] = 1.0 - inputs.x[i];
    const Tensor x_inv = tape.constant({inputs.n, 1}, inverse.data());
    fw.factual = tape.add(tape.mul(x_mask, fw.y1), tape.mul(x_inv, fw.y0));
    return fw;
}

Tensor training_loss(Tape& tape, const ForwardResult& fw, const std::vector<double>& y,
                     const std::vector<int64_t>& rows, double lambda, double gamma) {
    std::vector<double> y_rows(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) y_rows[i] = y[rows[i]];
    const Tensor target = tape.constant({static_cast<int64_t>(rows.size()), 1}, y_rows.data());
    const Tensor pred = tape.gather_rows(fw.factual, rows);
    const Tensor mse = tape.mean_all(tape.square(tape.sub(pred, target)));
    if (lambda == 0.0) return mse;
    const Tensor tau_rows = tape.gather_rows(fw.tau, rows);
    const Tensor variance = tape.variance_all(tau_rows);
    const Tensor penalty =
        tape.scale(tape.mul(tape.exp(tape.scale(variance, -gamma)), variance), lambda);
    return tape.add(mse, penalty);
}

namespace {

struct Split {
    std::vector<int64_t> train;
    std::vector<int64_t> val;
};

Split stratified_split(const std::vector<double>& x, double val_fraction, uint64_t seed) {
    std::vector<int64_t> treated, control;
    for (size_t i = 0; i < x.size(); ++i) (x[i] > 0.5 ? treated : control).push_back(i);
    if (treated.empty() || control.empty())
        throw Degenerate("training data has a single treatment arm");

    Rng rng(Rng::derive(seed, "split"));
    Split split;
    for (auto* group : {&treated, &control}) {
        rng.shuffle(*group);
        const size_t n_val = static_cast<size_t>(val_fraction * group->size());
        for (size_t i = 0; i < group->size(); ++i)
            (i < n_val ? split.val : split.train).push_back((*group)[i]);
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.val.begin(), split.val.end());
    if (split.train.empty() || split.val.empty())
        throw Degenerate("validation split left an empty partition");
    return split;
}

double evaluate_mse(EstimatorModel& model, const GraphInputs& inputs,
                    const std::vector<double>& y, const std::vector<int64_t>& rows) {
    Tape tape;
    const ForwardResult fw = forward(model, inputs, tape, /*training=*/false);
    const auto& pred = tape.values(fw.factual);
    double mse = 0.0;
    for (const int64_t r : rows) mse += (pred[r] - y[r]) * (pred[r] - y[r]);
    return mse / static_cast<double>(rows.size());
}

EstimatorModel train_one(const GeneratedDataset& dataset, const GraphInputs& inputs,
                         const TrainConfig& config, Variant variant, double lambda,
                         const Split& split) {
    EstimatorModel model = init_model(inputs, config, variant);
    model.selected_lambda = lambda;
    const int warmup = static_cast<int>(config.reg_warmup_fraction * config.maxiter);

    for (int epoch = 0; epoch < config.maxiter; ++epoch) {
        Tape tape;
        ForwardResult fw = forward(model, inputs, tape, /*training=*/true);
        const double lam = (config.reg && epoch >= warmup) ? lambda : 0.0;
        const Tensor loss =
            training_loss(tape, fw, dataset.y, split.train, lam, config.smoothing_gamma);
        tape.backward(loss);

        const double decay = std::pow(config.lrgamma, epoch / config.lrstep);
        for (auto& p : model.params) {
            const double lr = (p.encoder_group ? config.lr : config.lrest) * decay;
            adam_step(p.values, tape.gradient(fw.param_tensors.at(p.name)), p.adam, lr,
                      config.weight_decay, config.clip);
        }
    }
    model.validation_mse = evaluate_mse(model, inputs, dataset.y, split.val);
    model.frozen = true;
    return model;
}

}  // namespace

EstimatorModel train(const GeneratedDataset& dataset, const TrainConfig& config, Variant variant) {
    config.validate();
    if (dataset.network.n < 10) throw Degenerate("need at least 10 nodes to split");
    const GraphInputs inputs = build_graph_inputs(dataset);
    const Split split = stratified_split(dataset.x, config.val, config.seed);

    EstimatorModel best;
    bool have_best = false;
    for (const double lambda : config.lambda_candidates) {
        EstimatorModel candidate = train_one(dataset, inputs, config, variant, lambda, split);
        if (!have_best || candidate.validation_mse < best.validation_mse) {
            best = std::move(candidate);
            have_best = true;
        }
    }
    return best;
}

EstimatorModel train_homogeneous(const GeneratedDataset& dataset, const TrainConfig& config) {
    return train(dataset, config, Variant::HomogeneousExposure);
}

EstimatorModel train_no_interference(const GeneratedDataset& dataset, const TrainConfig& config) {
    return train(dataset, config, Variant::NoInterference);
}

IdeEstimate predict(EstimatorModel& model, const GeneratedDataset& dataset) {
    const GraphInputs inputs = build_graph_inputs(dataset);
    Tape tape;
    const ForwardResult fw = forward(model, inputs, tape, /*training=*/false);
    IdeEstimate out;
    out.tau_hat = tape.values(fw.tau);
    out.y0_hat = tape.values(fw.y0);
    out.y1_hat = tape.values(fw.y1);
    return out;
}

namespace {

using nlohmann::json;

json config_to_json(const TrainConfig& c) {
    json doc;
    doc["maxiter"] = c.maxiter;
    doc["val"] = c.val;
    doc["lr"] = c.lr;
    doc["lrest"] = c.lrest;
    doc["lrstep"] = c.lrstep;
    doc["lrgamma"] = c.lrgamma;
    doc["clip"] = c.clip;
    doc["weight_decay"] = c.weight_decay;
    doc["fdim"] = c.fdim;
    doc["edim"] = c.edim;
    doc["inlayers"] = c.inlayers;
    doc["dropout"] = c.dropout;
    doc["alpha"] = c.alpha;
    doc["reg"] = c.reg;
    doc["smoothing_gamma"] = c.smoothing_gamma;
    doc["lambda_candidates"] = c.lambda_candidates;
    doc["reg_warmup_fraction"] = c.reg_warmup_fraction;
    doc["hops"] = c.hops;
    doc["seed"] = c.seed;
    return doc;
}

TrainConfig config_from_json(const json& doc) {
    TrainConfig c;
    c.maxiter = doc.value("maxiter", c.maxiter);
    c.val = doc.value("val", c.val);
    c.lr = doc.value("lr", c.lr);
    c.lrest = doc.value("lrest", c.lrest);
    c.lrstep = doc.value("lrstep", c.lrstep);
    c.lrgamma = doc.value("lrgamma", c.lrgamma);
    c.clip = doc.value("clip", c.clip);
    c.weight_decay = doc.value("weight_decay", c.weight_decay);
    c.fdim = doc.value("fdim", c.fdim);
    c.edim = doc.value("edim", c.edim);
    c.inlayers = doc.value("inlayers", c.inlayers);
    c.dropout = doc.value("dropout", c.dropout);
    c.alpha = doc.value("alpha", c.alpha);
    c.reg = doc.value("reg", c.reg);
    c.smoothing_gamma = doc.value("smoothing_gamma", c.smoothing_gamma);
    if (doc.contains("lambda_candidates"))
        c.lambda_candidates = doc.at("lambda_candidates").get<std::vector<double>>();
    c.reg_warmup_fraction = doc.value("reg_warmup_fraction", c.reg_warmup_fraction);
    c.hops = doc.value("hops", c.hops);
    c.seed = doc.value("seed", c.seed);
    c.validate();
    return c;
}

}  // namespace

TrainConfig train_config_from_json_text(const std::string& text) {
    return config_from_json(json::parse(text));
}

std::string train_config_to_json_text(const TrainConfig& config) {
    return config_to_json(config).dump(2) + "\n";
}

void save_model(const EstimatorModel& model, const std::string& path) {
    json doc;
    doc["variant"] = to_string(model.variant);
    doc["config"] = config_to_json(model.config);
    doc["node_dim"] = model.node_dim;
    doc["edge_dim"] = model.edge_dim;
    doc["selected_lambda"] = model.selected_lambda;
    doc["validation_mse"] = model.validation_mse;
    doc["bn"] = {{"running_mean", model.bn.running_mean},
                 {"running_var", model.bn.running_var},
                 {"initialized", model.bn.initialized}};
    json tensors = json::array();
    for (const auto& p : model.params) {
        tensors.push_back({{"name", p.name},
                           {"shape", {p.shape.rows, p.shape.cols}},
                           {"encoder_group", p.encoder_group},
                           {"data", p.values}});
    }
    doc["tensors"] = std::move(tensors);
    io::write_text_file(path, doc.dump() + "\n");
}

EstimatorModel load_model(const std::string& path) {
    const json doc = json::parse(io::read_text_file(path));
    EstimatorModel model;
    model.variant = variant_from_string(doc.at("variant").get<std::string>());
    model.config = config_from_json(doc.at("config"));
    model.node_dim = doc.at("node_dim").get<int64_t>();
    model.edge_dim = doc.at("edge_dim").get<int64_t>();
    model.selected_lambda = doc.value("selected_lambda", 0.0);
    model.validation_mse = doc.value("validation_mse", 0.0);
    model.bn.running_mean = doc.at("bn").at("running_mean").get<std::vector<double>>();
    model.bn.running_var = doc.at("bn").at("running_var").get<std::vector<double>>();
    model.bn.initialized = doc.at("bn").at("initialized").get<bool>();
    for (const auto& t : doc.at("tensors")) {
        ParamTensor p;
        p.name = t.at("name").get<std::string>();
        p.shape = {t.at("shape")[0].get<int64_t>(), t.at("shape")[1].get<int64_t>()};
        p.encoder_group = t.at("encoder_group").get<bool>();
        p.values = t.at("data").get<std::vector<double>>();
        if (static_cast<int64_t>(p.values.size()) != p.shape.size())
            throw std::runtime_error("checkpoint tensor size does not match its shape");
        model.params.push_back(std::move(p));
    }
    model.frozen = true;
    return model;
}

}  // namespace idenet::nn
