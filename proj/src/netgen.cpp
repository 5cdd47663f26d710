#include "idenet/netgen.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "idenet/io.hpp"
#include "json.hpp"

namespace idenet {

AttributedNetwork generate_ba(int64_t n, int64_t m, uint64_t seed) {
    if (m < 1 || m >= n) throw InvalidParams("BA needs 1 <= m < n");
    Rng rng(Rng::derive(seed, "ba-topology"));

    AttributedNetwork net;
    net.n = n;
    net.rng_seed = seed;
    net.edges.reserve(static_cast<size_t>(m * (n - m)));

    // endpoint multiset; sampling an index uniformly is degree-proportional
    std::vector<int32_t> endpoints;
    endpoints.reserve(static_cast<size_t>(2 * m * (n - m)));

    for (int64_t v = m; v < n; ++v) {
        std::set<int32_t> targets;
        if (v == m) {
            for (int64_t u = 0; u < m; ++u) targets.insert(static_cast<int32_t>(u));
        } else {
            while (static_cast<int64_t>(targets.size()) < m)
                targets.insert(endpoints[rng.below(endpoints.size())]);
        }
        for (const int32_t u : targets) {
            net.edges.push_back({u, static_cast<int32_t>(v)});
            endpoints.push_back(u);
            endpoints.push_back(static_cast<int32_t>(v));
        }
    }
    net.finalize();
    return net;
}

AttributedNetwork generate_ws(int64_t n, int64_t k, double p_rewire, uint64_t seed) {
    if (k < 2 || k % 2 != 0 || k >= n) throw InvalidParams("WS needs even k with 2 <= k < n");
    if (p_rewire < 0.0 || p_rewire > 1.0) throw InvalidParams("rewiring probability outside [0,1]");
    Rng rng(Rng::derive(seed, "ws-topology"));

    std::set<std::pair<int32_t, int32_t>> edge_set;
    auto canon = [](int64_t a, int64_t b) {
        return a < b ? std::pair<int32_t, int32_t>{(int32_t)a, (int32_t)b}
                     : std::pair<int32_t, int32_t>{(int32_t)b, (int32_t)a};
    };
    for (int64_t i = 0; i < n; ++i)
        for (int64_t j = 1; j <= k / 2; ++j) edge_set.insert(canon(i, (i + j) % n));

    // visit lattice edges in construction order, rewiring the far endpoint
    for (int64_t i = 0; i < n; ++i) {
        for (int64_t j = 1; j <= k / 2; ++j) {
            if (!rng.bernoulli(p_rewire)) continue;
            const auto old_edge = canon(i, (i + j) % n);
            if (!edge_set.count(old_edge)) continue;  // already rewired away
            // skip if the node is saturated
            int64_t attempts = 0;
            while (attempts++ < 4 * n) {
                const int64_t w = static_cast<int64_t>(rng.below(n));
                if (w == i) continue;
                const auto candidate = canon(i, w);
                if (edge_set.count(candidate)) continue;
                edge_set.erase(old_edge);
                edge_set.insert(candidate);
                break;
            }
        }
    }

    AttributedNetwork net;
    net.n = n;
    net.rng_seed = seed;
    net.edges.assign(edge_set.begin(), edge_set.end());
    net.finalize();
    return net;
}

void sample_attributes(AttributedNetwork& net, uint64_t seed) {
    Rng rng(Rng::derive(seed, "attributes"));
    auto& c = net.add_node_column("C");
    for (int64_t i = 0; i < net.n; ++i) c[i] = rng.beta(0.6, 0.6);

    // category probabilities are dataset-level: one Dirichlet draw
    const auto p = rng.dirichlet({5, 5, 5, 5, 5});
    auto& z = net.add_node_column("Z");
    for (int64_t i = 0; i < net.n; ++i) z[i] = static_cast<double>(rng.categorical(p));

    auto& zr = net.add_edge_column("Z_r");
    for (size_t e = 0; e < net.edges.size(); ++e) zr[e] = rng.uniform(1.0, 10.0);
}

void save_network(const AttributedNetwork& net, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    std::ostringstream edges;
    edges << "u,v";
    for (const auto& name : net.edge_attr_names) edges << "," << name;
    edges << "\n";
    for (size_t e = 0; e < net.edges.size(); ++e) {
        edges << net.edges[e].first << "," << net.edges[e].second;
        for (const auto& col : net.edge_attrs) edges << "," << io::format_double(col[e]);
        edges << "\n";
    }
    io::write_text_file(dir + "/edges.csv", edges.str());

    std::ostringstream nodes;
    nodes << "id";
    for (const auto& name : net.node_attr_names) nodes << "," << name;
    nodes << "\n";
    for (int64_t i = 0; i < net.n; ++i) {
        nodes << i;
        for (const auto& col : net.node_attrs) nodes << "," << io::format_double(col[i]);
        nodes << "\n";
    }
    io::write_text_file(dir + "/nodes.csv", nodes.str());

    nlohmann::json meta;
    meta["n"] = net.n;
    meta["edges"] = net.edge_count();
    meta["seed"] = net.rng_seed;
    meta["node_attributes"] = net.node_attr_names;
    meta["edge_attributes"] = net.edge_attr_names;
    io::write_text_file(dir + "/meta.json", meta.dump(2) + "\n");
}

AttributedNetwork load_network(const std::string& dir) {
    const auto meta = nlohmann::json::parse(io::read_text_file(dir + "/meta.json"));
    AttributedNetwork net;
    net.n = meta.at("n").get<int64_t>();
    net.rng_seed = meta.at("seed").get<uint64_t>();

    const auto edges = io::read_csv(dir + "/edges.csv");
    for (const auto& row : edges.rows)
        net.edges.push_back({static_cast<int32_t>(row[0]), static_cast<int32_t>(row[1])});
    net.finalize();
    for (size_t c = 2; c < edges.header.size(); ++c) {
        auto& col = net.add_edge_column(edges.header[c]);
        for (size_t r = 0; r < edges.rows.size(); ++r) col[r] = edges.rows[r][c];
    }

    const auto nodes = io::read_csv(dir + "/nodes.csv");
    if (static_cast<int64_t>(nodes.rows.size()) != net.n)
        throw std::runtime_error("nodes.csv row count differs from meta.json n");
    for (size_t c = 1; c < nodes.header.size(); ++c) {
        auto& col = net.add_node_column(nodes.header[c]);
        for (size_t r = 0; r < nodes.rows.size(); ++r)
            col[static_cast<size_t>(nodes.rows[r][0])] = nodes.rows[r][c];
    }
    return net;
}

}  // namespace idenet
