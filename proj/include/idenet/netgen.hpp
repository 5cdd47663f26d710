#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "idenet/attributed_network.hpp"
#include "idenet/rng.hpp"

namespace idenet {

class InvalidParams : public std::invalid_argument {
public:
    explicit InvalidParams(const std::string& what) : std::invalid_argument(what) {}
};

// Barabasi-Albert preferential attachment, topology only. The seed core is m
// isolated nodes; the first arrival links to all of them, every later arrival
// attaches m edges with probability proportional to degree. Exactly
// m * (n - m) edges.
AttributedNetwork generate_ba(int64_t n, int64_t m, uint64_t seed);

// Watts-Strogatz ring lattice with k/2 neighbours per side; each lattice edge
// rewires its far endpoint with probability p_rewire, avoiding self loops and
// duplicates. Exactly n*k/2 edges.
AttributedNetwork generate_ws(int64_t n, int64_t k, double p_rewire, uint64_t seed);

// Fills node columns C ~ Beta(0.6,0.6) and Z ~ Categorical(5, p) with p drawn
// once per dataset from Dirichlet(5,...,5), and edge column Z_r ~ Uniform(1,10).
void sample_attributes(AttributedNetwork& network, uint64_t seed);

// Dataset directory layout: edges.csv (u,v,Z_r), nodes.csv (id,C,Z), meta.json.
void save_network(const AttributedNetwork& network, const std::string& dir);
AttributedNetwork load_network(const std::string& dir);

}  // namespace idenet
