#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "idenet/adam.hpp"
#include "idenet/datagen.hpp"
#include "idenet/tape.hpp"

namespace idenet::nn {

enum class Variant { Full, HomogeneousExposure, NoInterference };

Variant variant_from_string(const std::string& name);
std::string to_string(Variant v);

struct TrainConfig {
    int maxiter = 300;
    double val = 0.2;
    double lr = 0.02;      // encoder: feature and exposure embeddings
    double lrest = 0.2;    // counterfactual heads
    int lrstep = 50;
    double lrgamma = 0.5;
    double clip = 3.0;
    double weight_decay = 1e-5;
    int fdim = 32;         // 64 for semi-synthetic data
    int edim = 4;
    int inlayers = 2;
    double dropout = 0.0;  // unused at the default; L2 + batch norm + smoothing instead
    double alpha = 0.0;    // representation balancing weight, 0 = TARNet
    bool reg = true;
    double smoothing_gamma = 3.0;
    std::vector<double> lambda_candidates{0.1, 1.0};
    double reg_warmup_fraction = 0.5;
    int hops = 1;          // 1 keeps h_f as printed; >1 adds D^-1/2 A Theta(h) layers
    uint64_t seed = 0;

    void validate() const;
};

TrainConfig train_config_from_json_text(const std::string& text);
std::string train_config_to_json_text(const TrainConfig& config);

struct ParamTensor {
    std::string name;
    Shape shape;
    std::vector<double> values;
    AdamState adam;
    bool encoder_group = true;
};

// Node/edge raw features plus the CSR companion arrays the embeddings
// consume. Directed slots are grouped by receiving node.
struct GraphInputs {
    int64_t n = 0;
    int64_t slots = 0;
    int64_t node_dim = 0;
    int64_t edge_dim = 0;
    std::vector<int64_t> receiver;
    std::vector<int64_t> neighbor;
    std::vector<double> node_feats;   // n x node_dim
    std::vector<double> edge_feats;   // slots x edge_dim
    std::vector<double> inv_sqrt_deg;
    std::vector<double> tri_counts;   // per slot
    std::vector<double> x;            // n
    std::vector<double> x_neighbor;   // per slot
    std::vector<double> frac_treated; // n
};

GraphInputs build_graph_inputs(const GeneratedDataset& dataset);

struct EstimatorModel {
    Variant variant = Variant::Full;
    TrainConfig config;
    int64_t node_dim = 0;
    int64_t edge_dim = 0;
    std::vector<ParamTensor> params;
    BatchNormState bn;
    double selected_lambda = 0.0;
    double validation_mse = 0.0;
    bool frozen = false;

    ParamTensor& param(const std::string& name);
    const ParamTensor& param(const std::string& name) const;
};

struct IdeEstimate {
    std::vector<double> tau_hat;
    std::vector<double> y0_hat;
    std::vector<double> y1_hat;
};

struct ForwardResult {
    Tensor y0, y1, tau, factual;
    std::map<std::string, Tensor> param_tensors;
};

class Degenerate : public std::runtime_error {
public:
    explicit Degenerate(const std::string& what) : std::runtime_error(what) {}
};

// Embeddings + TARNet heads on the given tape. `training` switches batch-norm
// mode; parameters are read from (and gradients flow back to) `model`.
ForwardResult forward(EstimatorModel& model, const GraphInputs& inputs, Tape& tape,
                      bool training);

// factual MSE plus the variance-smoothing penalty
// lambda * exp(-gamma * var(tau)) * var(tau) over the given rows
Tensor training_loss(Tape& tape, const ForwardResult& fw, const std::vector<double>& y,
                     const std::vector<int64_t>& rows, double lambda, double gamma);

// Glorot-initialized untrained model for the dataset's feature widths.
EstimatorModel init_model(const GraphInputs& inputs, const TrainConfig& config, Variant variant);

// 80/20 treatment-stratified split, step-decayed Adam with clipping and
// weight decay, smoothing regularization after the warmup fraction, one run
// per lambda candidate, lowest unregularized validation MSE wins.
EstimatorModel train(const GeneratedDataset& dataset, const TrainConfig& config,
                     Variant variant = Variant::Full);

EstimatorModel train_homogeneous(const GeneratedDataset& dataset, const TrainConfig& config);
EstimatorModel train_no_interference(const GeneratedDataset& dataset, const TrainConfig& config);

IdeEstimate predict(EstimatorModel& model, const GeneratedDataset& dataset);

void save_model(const EstimatorModel& model, const std::string& path);
EstimatorModel load_model(const std::string& path);

}  // namespace idenet::nn
