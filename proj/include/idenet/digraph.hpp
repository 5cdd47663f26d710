#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace idenet {

// Directed graph over dense integer node ids. Shared substrate for ground
// graphs and NAGGs; d-separation queries run on this representation.
class Digraph {
public:
    Digraph() = default;
    explicit Digraph(size_t n) : parents_(n), children_(n) {}

    size_t size() const { return parents_.size(); }
    size_t add_node() {
        parents_.emplace_back();
        children_.emplace_back();
        return parents_.size() - 1;
    }

    void add_arc(size_t from, size_t to) {
        children_[from].push_back(to);
        parents_[to].push_back(from);
    }

    const std::vector<size_t>& parents(size_t v) const { return parents_[v]; }
    const std::vector<size_t>& children(size_t v) const { return children_[v]; }

    bool is_acyclic() const;
    // nodes of one cycle, in order, when the graph is cyclic
    std::optional<std::vector<size_t>> find_cycle() const;

    std::vector<bool> ancestors_of(const std::vector<size_t>& seeds) const;
    std::vector<bool> descendants_of(const std::vector<size_t>& seeds) const;

private:
    std::vector<std::vector<size_t>> parents_;
    std::vector<std::vector<size_t>> children_;
};

struct DsepResult {
    bool separated = true;
    // an active trail from X to Y when not separated, as node ids
    std::vector<size_t> witness;
};

// Classical d-separation decided by reachability over (node, direction)
// states, opening colliders on ancestors of Z. O(|E|) per query.
DsepResult d_separated_with_witness(const Digraph& g, const std::vector<size_t>& x,
                                    const std::vector<size_t>& y, const std::vector<size_t>& z);

inline bool d_separated(const Digraph& g, const std::vector<size_t>& x,
                        const std::vector<size_t>& y, const std::vector<size_t>& z) {
    return d_separated_with_witness(g, x, y, z).separated;
}

}  // namespace idenet
