#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "idenet/datagen.hpp"
#include "idenet/estimator.hpp"

namespace idenet::ev {

class LengthMismatch : public std::invalid_argument {
public:
    explicit LengthMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// root mean squared deviation of estimated from true individual effects
double pehe(const std::vector<double>& tau_true, const std::vector<double>& tau_hat);
// absolute deviation of the average estimated effect
double ate_error(const std::vector<double>& tau_true, const std::vector<double>& tau_hat);

struct NetworkSpec {
    std::string model;  // "ba" or "ws"
    int64_t n = 3000;
    int64_t m = 5;        // ba attachment
    int64_t k = 6;        // ws mean degree
    double p_rewire = 0.5;

    std::string label() const;
};

struct ExperimentGrid {
    uint64_t seed = 1;
    std::vector<NetworkSpec> networks;
    std::vector<Mechanism> mechanisms;
    std::vector<double> tau_p_values;
    int seeds_per_cell = 1;
    std::vector<nn::Variant> variants;
    GenConfig outcome;       // per-cell mechanism and tau_p overwrite these
    nn::TrainConfig train;   // per-replicate seed overwrites this

    size_t cell_count() const {
        return networks.size() * mechanisms.size() * tau_p_values.size();
    }
};

ExperimentGrid grid_from_json_text(const std::string& text);

struct CellKey {
    std::string network;
    std::string mechanism;
    double tau_p = 0.0;
};

struct CellResult {
    size_t index = 0;
    CellKey key;
    // raw per-seed metric values, one inner vector per variant
    std::vector<std::vector<double>> pehe_values;
    std::vector<std::vector<double>> ate_values;
    std::optional<std::string> error;  // Degenerate cells record why
};

struct MetricRow {
    CellKey key;
    std::string estimator;
    std::string metric;
    double mean = 0.0;
    double stddev = 0.0;
    int n_seeds = 0;
};

struct ResultsTable {
    std::vector<CellResult> cells;
    std::vector<MetricRow> rows;

    std::string to_csv() const;
    std::string to_json() const;
};

// Runs every (network, mechanism, tau_p) cell for seeds_per_cell replicates
// and every variant. Per-cell seeds derive from (grid seed, cell index,
// replicate index). Finished cells are written to out_dir/cells/ as they
// complete and are skipped on resume. Degenerate cells are recorded, not
// fatal. threads <= 0 reads IDE_NET_THREADS, defaulting to 1.
ResultsTable run_grid(const ExperimentGrid& grid, const std::string& out_dir, int threads = 0);

}  // namespace idenet::ev
