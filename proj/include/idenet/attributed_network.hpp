#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace idenet {

// Undirected attributed graph in symmetric CSR form. Each undirected edge is
// stored once in `edges` with canonical (min,max) ordering; the CSR view
// enumerates both directions and maps every directed slot back to its
// undirected payload row in edge_attrs.
struct AttributedNetwork {
    int64_t n = 0;
    std::vector<std::pair<int32_t, int32_t>> edges;  // canonical u < v

    // CSR over directed edges, rebuilt by finalize()
    std::vector<int64_t> row_offsets;   // size n+1
    std::vector<int32_t> col_indices;   // neighbor ids, sorted per row
    std::vector<int64_t> payload_index; // directed slot -> undirected edge row

    std::vector<std::string> node_attr_names;
    std::vector<std::vector<double>> node_attrs;  // column major: [attr][node]
    std::vector<std::string> edge_attr_names;
    std::vector<std::vector<double>> edge_attrs;  // column major: [attr][edge]

    uint64_t rng_seed = 0;

    int64_t edge_count() const { return static_cast<int64_t>(edges.size()); }
    int64_t degree(int64_t v) const { return row_offsets[v + 1] - row_offsets[v]; }

    // sorts edges canonically, rejects duplicates/self-loops, rebuilds CSR
    void finalize();

    const std::vector<double>& node_column(const std::string& name) const;
    const std::vector<double>& edge_column(const std::string& name) const;
    // the returned reference is invalidated by the next add_*_column call
    std::vector<double>& add_node_column(const std::string& name);
    std::vector<double>& add_edge_column(const std::string& name);
    std::vector<double>& mutable_node_column(const std::string& name);

    // common neighbours of the endpoints, one entry per undirected edge
    std::vector<double> mutual_neighbor_counts() const;
};

}  // namespace idenet
