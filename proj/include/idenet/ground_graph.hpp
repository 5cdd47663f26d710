#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "idenet/digraph.hpp"
#include "idenet/relational.hpp"

namespace idenet::rel {

// An entity instance (id, -1) or a relationship instance (min id, max id).
struct Instance {
    int32_t a = -1;
    int32_t b = -1;

    static Instance entity(int32_t id) { return {id, -1}; }
    static Instance relationship(int32_t u, int32_t v) {
        return u < v ? Instance{u, v} : Instance{v, u};
    }
    bool is_entity() const { return b < 0; }
    ItemClass item_class() const { return is_entity() ? ItemClass::Entity : ItemClass::Relationship; }

    auto operator<=>(const Instance&) const = default;
};

// Def. 1 skeleton: entity instances plus relationship instances for every
// unordered pair (complete pairing; the Exists attribute carries the actual
// edge structure).
struct Skeleton {
    std::vector<int32_t> entity_ids;

    explicit Skeleton(int32_t n) {
        for (int32_t i = 0; i < n; ++i) entity_ids.push_back(i);
    }
    explicit Skeleton(std::vector<int32_t> ids) : entity_ids(std::move(ids)) {}

    size_t entity_count() const { return entity_ids.size(); }
    size_t relationship_count() const {
        return entity_ids.size() * (entity_ids.size() - 1) / 2;
    }
    std::vector<Instance> instances_of(ItemClass c) const;
    std::vector<Instance> all_instances() const;
};

// Terminal set under bridge-burning semantics: level-synchronous BFS over the
// complete skeleton that never revisits an instance seen at a shallower depth.
std::set<Instance> terminal_set(const Skeleton& skeleton, const Instance& base,
                                const RelationalPath& path);

// Lemma 1 check: pairwise-empty intersections of the paths' terminal sets.
bool terminal_sets_disjoint_check(const Skeleton& skeleton, const Instance& base,
                                  const std::vector<RelationalPath>& paths);

struct GroundNode {
    Instance instance;
    std::string attribute;
    auto operator<=>(const GroundNode&) const = default;
};

// Per-skeleton instantiation of an NSCM: one node per (instance, attribute),
// arcs grounded from explicit and implicit dependencies via terminal sets.
class GroundGraph {
public:
    const Digraph& graph() const { return graph_; }
    size_t node_id(const GroundNode& node) const;
    const GroundNode& node(size_t id) const { return nodes_[id]; }
    size_t node_count() const { return nodes_.size(); }
    bool is_acyclic() const { return graph_.is_acyclic(); }

    friend GroundGraph build_ground_graph(const Nscm& model, const Skeleton& skeleton);

private:
    Digraph graph_;
    std::vector<GroundNode> nodes_;
    std::map<GroundNode, size_t> index_;
};

GroundGraph build_ground_graph(const Nscm& model, const Skeleton& skeleton);

class UnknownNode : public std::runtime_error {
public:
    explicit UnknownNode(const std::string& what) : std::runtime_error(what) {}
};

// Classical d-separation on the ground graph. The brute-force oracle the NAGG
// reasoner is verified against.
bool d_sep_ground(const GroundGraph& gg, const std::vector<GroundNode>& x,
                  const std::vector<GroundNode>& y, const std::vector<GroundNode>& z);

}  // namespace idenet::rel
