#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "idenet/attributed_network.hpp"

namespace idenet {

enum class Mechanism { TieStrength, Similarity, MutualFriends, PeerDegree, Combined };

Mechanism mechanism_from_string(const std::string& name);
std::string to_string(Mechanism m);

// Coefficients of the outcome equation plus the exposure-mechanism selection.
// tau_a scales the attribute effect modifier, tau_n the network effect
// modifier (degree above the p-th percentile of neighbour degrees), tau_p the
// peer exposure term; tau_Zr/tau_Zmi/tau_Emr weight tie strength, attribute
// similarity and mutual-friend contexts inside the exposure weights.
struct GenConfig {
    double tau_0 = 0.0;
    double tau_c1 = 1.0;
    double tau_d = -1.0;
    double tau_a = 0.0;
    double tau_n = 0.0;
    double tau_p = 0.0;
    double tau_Zr = 1.0;
    double tau_Zmi = 1.0;
    double tau_Emr = 1.0;
    double tau_c = 0.5;
    Mechanism mechanism = Mechanism::TieStrength;
    bool exposure_modifies_effect = false;
    double percentile_p = 50.0;
    double rbf_gamma = 2.0;
    double noise_sd = 1.0;
    // synthetic Z is a category index compared one-hot; semi-synthetic Z is a
    // continuous effect-modifier score compared by squared difference
    bool z_categorical = true;

    void validate() const;
};

struct GeneratedDataset {
    AttributedNetwork network;
    std::vector<double> x;              // binary treatments
    std::vector<double> y;              // factual outcomes
    std::vector<double> y0, y1;         // counterfactuals
    std::vector<double> tau_true;       // y1 - y0
    std::vector<double> exposure_true;  // normalized weighted peer exposure
    GenConfig config;
};

enum class Activation { Identity, Sigmoid };

// X_i ~ Bernoulli(a(tau_c * Wx . mean of neighbour confounders
//                    + (1 - tau_c) * Wx . own confounders)).
// `confounders` holds one column per confounder dimension; `weights` matches
// its width. Isolated nodes take a zero peer term; the propensity is clamped
// to [0,1].
std::vector<double> assign_treatments(const AttributedNetwork& network,
                                      const std::vector<const std::vector<double>*>& confounders,
                                      const std::vector<double>& weights, double tau_c,
                                      Activation activation, uint64_t seed);

// convenience for the synthetic design: C column, Wx = 1, identity activation
std::vector<double> assign_treatments(const AttributedNetwork& network, double tau_c,
                                      uint64_t seed);

// Normalized weighted fraction of treated neighbours; weights per mechanism:
// tie strength Z_r^2, similarity rbf(Z_i,Z_j), mutual friends sqrt(count),
// peer degree deg(j), combined the coefficient-weighted sum of the first
// three. Isolated nodes and zero total weight give 0.
std::vector<double> true_exposure(const AttributedNetwork& network, const std::vector<double>& x,
                                  const GenConfig& config);

// Evaluates the outcome equation at X_i = 0 and X_i = 1 with everything else
// held fixed; Y follows by consistency and tau_true by differencing. Noise is
// drawn once per node and shared between both arms.
GeneratedDataset generate_outcomes(const AttributedNetwork& network, const std::vector<double>& x,
                                   const GenConfig& config, uint64_t seed);

class DimensionMismatch : public std::invalid_argument {
public:
    explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// Semi-synthetic design over supplied features (n rows, 50 columns): masks
// M_x, M_y ~ Bernoulli(0.6), weights W = M * Uniform(-3,3); sigmoid treatment
// model on the masked features, outcome model with W_y-weighted confounding
// and the M_x=0, M_y=1 features as attribute effect modifiers.
GeneratedDataset semi_synthetic(const std::vector<std::vector<double>>& features,
                                const AttributedNetwork& network, const GenConfig& config,
                                uint64_t seed);

// Dataset directory: treatments.csv, outcomes.csv (Y,Y0,Y1,tau_true),
// gen_config.json next to the network files.
void save_dataset(const GeneratedDataset& data, const std::string& dir);
GeneratedDataset load_dataset(const std::string& dir);

GenConfig gen_config_from_json_text(const std::string& text);
std::string gen_config_to_json_text(const GenConfig& config);

}  // namespace idenet
