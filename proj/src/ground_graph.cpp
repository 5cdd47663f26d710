#include "idenet/ground_graph.hpp"

#include <algorithm>
#include <functional>

namespace idenet::rel {

std::vector<Instance> Skeleton::instances_of(ItemClass c) const {
    std::vector<Instance> out;
    if (c == ItemClass::Entity) {
        for (const int32_t id : entity_ids) out.push_back(Instance::entity(id));
    } else {
        for (size_t i = 0; i < entity_ids.size(); ++i)
            for (size_t j = i + 1; j < entity_ids.size(); ++j)
                out.push_back(Instance::relationship(entity_ids[i], entity_ids[j]));
    }
    return out;
}

std::vector<Instance> Skeleton::all_instances() const {
    auto out = instances_of(ItemClass::Entity);
    auto rels = instances_of(ItemClass::Relationship);
    out.insert(out.end(), rels.begin(), rels.end());
    return out;
}

namespace {

// neighbors in the complete skeleton: an entity touches every relationship
// containing it, a relationship touches its two endpoints
void for_each_neighbor(const Skeleton& skeleton, const Instance& inst,
                       const std::function<void(Instance)>& fn) {
    if (inst.is_entity()) {
        for (const int32_t other : skeleton.entity_ids)
            if (other != inst.a) fn(Instance::relationship(inst.a, other));
    } else {
        fn(Instance::entity(inst.a));
        fn(Instance::entity(inst.b));
    }
}

}  // namespace

std::set<Instance> terminal_set(const Skeleton& skeleton, const Instance& base,
                                const RelationalPath& path) {
    if (base.item_class() != path.base())
        throw std::invalid_argument("base instance does not match the path's base item class");

    std::set<Instance> visited{base};
    std::set<Instance> frontier{base};
    for (size_t depth = 1; depth < path.length(); ++depth) {
        std::set<Instance> next;
        for (const auto& inst : frontier) {
            for_each_neighbor(skeleton, inst, [&](Instance nb) {
                if (!visited.count(nb)) next.insert(nb);
            });
        }
        // instances reached at this depth burn together, even when several
        // branches arrive at once
        visited.insert(next.begin(), next.end());
        frontier = std::move(next);
    }
    return frontier;
}

bool terminal_sets_disjoint_check(const Skeleton& skeleton, const Instance& base,
                                  const std::vector<RelationalPath>& paths) {
    std::set<Instance> seen;
    for (const auto& path : paths) {
        for (const auto& inst : terminal_set(skeleton, base, path)) {
            if (!seen.insert(inst).second) return false;
        }
    }
    return true;
}

size_t GroundGraph::node_id(const GroundNode& node) const {
    const auto it = index_.find(node);
    if (it == index_.end())
        throw UnknownNode("no ground node for instance/attribute " + node.attribute);
    return it->second;
}

GroundGraph build_ground_graph(const Nscm& model, const Skeleton& skeleton) {
    GroundGraph gg;
    const Schema& schema = model.schema;

    for (const auto& inst : skeleton.all_instances()) {
        for (const auto* attr : schema.attributes_of(inst.item_class())) {
            GroundNode node{inst, attr->name};
            gg.index_[node] = gg.nodes_.size();
            gg.nodes_.push_back(node);
            gg.graph_.add_node();
        }
    }

    auto ground = [&](const RelationalDependency& dep) {
        for (const auto& base : skeleton.instances_of(dep.effect.path.base())) {
            const size_t to = gg.node_id({base, dep.effect.attribute});
            for (const auto& cause_inst : terminal_set(skeleton, base, dep.cause.path)) {
                const size_t from = gg.node_id({cause_inst, dep.cause.attribute});
                gg.graph_.add_arc(from, to);
            }
        }
    };
    for (const auto& dep : model.explicit_deps) ground(dep);
    for (const auto& dep : implicit_dependencies(schema)) ground(dep);
    return gg;
}

bool d_sep_ground(const GroundGraph& gg, const std::vector<GroundNode>& x,
                  const std::vector<GroundNode>& y, const std::vector<GroundNode>& z) {
    auto ids = [&](const std::vector<GroundNode>& nodes) {
        std::vector<size_t> out;
        out.reserve(nodes.size());
        for (const auto& n : nodes) out.push_back(gg.node_id(n));
        return out;
    };
    return d_separated(gg.graph(), ids(x), ids(y), ids(z));
}

}  // namespace idenet::rel
