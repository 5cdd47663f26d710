#include "idenet/attributed_network.hpp"

#include <algorithm>
#include <stdexcept>

namespace idenet {

void AttributedNetwork::finalize() {
    for (auto& [u, v] : edges) {
        if (u == v) throw std::invalid_argument("self loop in edge list");
        if (u > v) std::swap(u, v);
        if (u < 0 || v >= n) throw std::invalid_argument("edge endpoint out of range");
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw std::invalid_argument("duplicate edge in edge list");

    row_offsets.assign(n + 1, 0);
    for (const auto& [u, v] : edges) {
        ++row_offsets[u + 1];
        ++row_offsets[v + 1];
    }
    for (int64_t i = 0; i < n; ++i) row_offsets[i + 1] += row_offsets[i];

    col_indices.assign(edges.size() * 2, 0);
    payload_index.assign(edges.size() * 2, 0);
    std::vector<int64_t> cursor(row_offsets.begin(), row_offsets.end() - 1);
    for (size_t e = 0; e < edges.size(); ++e) {
        const auto [u, v] = edges[e];
        col_indices[cursor[u]] = v;
        payload_index[cursor[u]++] = static_cast<int64_t>(e);
        col_indices[cursor[v]] = u;
        payload_index[cursor[v]++] = static_cast<int64_t>(e);
    }
    // edges are processed in sorted order, so each row's neighbors ascend for
    // u-slots but v-slots interleave; sort each row once
    for (int64_t i = 0; i < n; ++i) {
        const int64_t lo = row_offsets[i], hi = row_offsets[i + 1];
        std::vector<std::pair<int32_t, int64_t>> row;
        row.reserve(hi - lo);
        for (int64_t k = lo; k < hi; ++k) row.push_back({col_indices[k], payload_index[k]});
        std::sort(row.begin(), row.end());
        for (int64_t k = lo; k < hi; ++k) {
            col_indices[k] = row[k - lo].first;
            payload_index[k] = row[k - lo].second;
        }
    }
}

const std::vector<double>& AttributedNetwork::node_column(const std::string& name) const {
    for (size_t i = 0; i < node_attr_names.size(); ++i)
        if (node_attr_names[i] == name) return node_attrs[i];
    throw std::out_of_range("no node attribute column '" + name + "'");
}

const std::vector<double>& AttributedNetwork::edge_column(const std::string& name) const {
    for (size_t i = 0; i < edge_attr_names.size(); ++i)
        if (edge_attr_names[i] == name) return edge_attrs[i];
    throw std::out_of_range("no edge attribute column '" + name + "'");
}

std::vector<double>& AttributedNetwork::add_node_column(const std::string& name) {
    node_attr_names.push_back(name);
    node_attrs.emplace_back(n, 0.0);
    return node_attrs.back();
}

std::vector<double>& AttributedNetwork::add_edge_column(const std::string& name) {
    edge_attr_names.push_back(name);
    edge_attrs.emplace_back(edges.size(), 0.0);
    return edge_attrs.back();
}

std::vector<double>& AttributedNetwork::mutable_node_column(const std::string& name) {
    for (size_t i = 0; i < node_attr_names.size(); ++i)
        if (node_attr_names[i] == name) return node_attrs[i];
    throw std::out_of_range("no node attribute column '" + name + "'");
}

std::vector<double> AttributedNetwork::mutual_neighbor_counts() const {
    std::vector<double> out(edges.size(), 0.0);
    for (size_t e = 0; e < edges.size(); ++e) {
        const auto [u, v] = edges[e];
        int64_t iu = row_offsets[u], iv = row_offsets[v];
        const int64_t eu = row_offsets[u + 1], ev = row_offsets[v + 1];
        int64_t count = 0;
        while (iu < eu && iv < ev) {
            if (col_indices[iu] < col_indices[iv]) ++iu;
            else if (col_indices[iu] > col_indices[iv]) ++iv;
            else { ++count; ++iu; ++iv; }
        }
        out[e] = static_cast<double>(count);
    }
    return out;
}

}  // namespace idenet
