#include "idenet/nagg.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace idenet::rel {

std::set<RelationalPath> extend_path(const RelationalPath& original,
                                     const RelationalPath& extension) {
    if (original.terminal() != extension.base())
        throw std::invalid_argument("extend: original's terminal class must match extension's base");
    const auto& po = original.sequence();
    const auto& pe = extension.sequence();
    std::vector<ItemClass> rev(po.rbegin(), po.rend());

    std::set<RelationalPath> out;
    const size_t max_pivot = std::min(po.size(), pe.size());
    for (size_t i = 1; i <= max_pivot; ++i) {
        if (!std::equal(rev.begin(), rev.begin() + i, pe.begin())) continue;
        std::vector<ItemClass> cand(po.begin(), po.begin() + (po.size() - i + 1));
        cand.insert(cand.end(), pe.begin() + i, pe.end());
        if (RelationalPath::valid_sequence(cand)) out.insert(RelationalPath(std::move(cand)));
    }
    return out;
}

size_t Nagg::node_id(const RelationalVariable& rv) const {
    const auto it = index_.find(rv);
    if (it == index_.end())
        throw QueryError(QueryError::Kind::UnknownVariable,
                         "unknown relational variable " + rv.to_string(schema_));
    return it->second;
}

std::vector<size_t> Nagg::latent_set() const {
    std::vector<size_t> out;
    for (size_t i = 0; i < latent_.size(); ++i)
        if (latent_[i]) out.push_back(i);
    return out;
}

std::vector<size_t> Nagg::selection_set() const {
    std::vector<size_t> out;
    for (size_t i = 0; i < selection_.size(); ++i)
        if (selection_[i]) out.push_back(i);
    return out;
}

std::vector<std::pair<RelationalVariable, RelationalVariable>> Nagg::arcs() const {
    std::vector<std::pair<RelationalVariable, RelationalVariable>> out;
    for (size_t v = 0; v < graph_.size(); ++v)
        for (const size_t c : graph_.children(v)) out.push_back({nodes_[v], nodes_[c]});
    return out;
}

Nagg build_nagg(const Nscm& model, ItemClass perspective) {
    const ValidationReport report = validate_nscm(model);
    if (!report.ok()) throw ModelError(report.to_string());

    Nagg nagg;
    nagg.perspective_ = perspective;
    nagg.schema_ = model.schema;

    for (const auto& path : enumerate_paths(model.schema, perspective)) {
        for (const auto* attr : model.schema.attributes_of(path.terminal())) {
            RelationalVariable rv{path, attr->name};
            nagg.index_[rv] = nagg.nodes_.size();
            nagg.nodes_.push_back(std::move(rv));
            nagg.graph_.add_node();
            nagg.latent_.push_back(attr->role == AttrRole::Latent);
            nagg.selection_.push_back(attr->role == AttrRole::Selection);
        }
    }

    std::set<std::pair<size_t, size_t>> arcs;
    auto apply = [&](const RelationalDependency& dep) {
        for (const auto& rv : nagg.nodes_) {
            if (rv.path.terminal() != dep.effect.path.base() || rv.attribute != dep.effect.attribute)
                continue;
            for (const auto& cause_path : extend_path(rv.path, dep.cause.path)) {
                const size_t from = nagg.node_id({cause_path, dep.cause.attribute});
                arcs.insert({from, nagg.index_.at(rv)});
            }
        }
    };
    for (const auto& dep : model.explicit_deps) apply(dep);
    for (const auto& dep : implicit_dependencies(model.schema)) apply(dep);
    for (const auto& [from, to] : arcs) nagg.graph_.add_arc(from, to);

    if (!nagg.graph_.is_acyclic())
        throw ModelError("NAGG construction produced a cycle from an acyclic model");
    return nagg;
}

namespace {

std::vector<size_t> resolve(const Nagg& nagg, const std::vector<RelationalVariable>& rvs) {
    std::vector<size_t> out;
    out.reserve(rvs.size());
    for (const auto& rv : rvs) out.push_back(nagg.node_id(rv));
    return out;
}

void check_query_sets(const Nagg& nagg, const std::vector<size_t>& x,
                      const std::vector<size_t>& y, const std::vector<size_t>& z) {
    std::set<size_t> seen;
    for (const auto* group : {&x, &y, &z})
        for (const size_t id : *group)
            if (!seen.insert(id).second)
                throw QueryError(QueryError::Kind::MalformedQuery,
                                 "query sets must be disjoint; " +
                                     nagg.node(id).to_string(nagg.schema()) + " repeats");
    for (const size_t id : z)
        if (nagg.is_latent(id))
            throw QueryError(QueryError::Kind::LatentInConditioningSet,
                             "latent variable in conditioning set: " +
                                 nagg.node(id).to_string(nagg.schema()));
    std::set<size_t> zset(z.begin(), z.end());
    for (const size_t id : nagg.selection_set())
        if (!zset.count(id))
            throw QueryError(QueryError::Kind::SelectionNotConditioned,
                             "selection variable not conditioned on: " +
                                 nagg.node(id).to_string(nagg.schema()));
}

// directed reachability from src where every intermediate hop is a latent
// variable; ego_only further restricts intermediates to length-1 paths
std::vector<bool> latent_reach(const Digraph& g, const Nagg& nagg, size_t src, bool ego_only) {
    std::vector<bool> reached(g.size(), false);
    std::vector<bool> expanded(g.size(), false);
    std::deque<size_t> queue{src};
    expanded[src] = true;
    while (!queue.empty()) {
        const size_t v = queue.front();
        queue.pop_front();
        for (const size_t c : g.children(v)) {
            reached[c] = true;
            const bool can_continue =
                nagg.is_latent(c) && (!ego_only || nagg.node(c).path.length() == 1);
            if (can_continue && !expanded[c]) {
                expanded[c] = true;
                queue.push_back(c);
            }
        }
    }
    return reached;
}

bool has_opened_collider(const Digraph& g, const std::vector<size_t>& trail) {
    auto has_arc = [&](size_t from, size_t to) {
        const auto& ch = g.children(from);
        return std::find(ch.begin(), ch.end(), to) != ch.end();
    };
    for (size_t i = 1; i + 1 < trail.size(); ++i) {
        if (has_arc(trail[i - 1], trail[i]) && has_arc(trail[i + 1], trail[i])) return true;
    }
    return false;
}

}  // namespace

bool d_separated(const Nagg& nagg, const std::vector<RelationalVariable>& x,
                 const std::vector<RelationalVariable>& y,
                 const std::vector<RelationalVariable>& z) {
    const auto xi = resolve(nagg, x);
    const auto yi = resolve(nagg, y);
    const auto zi = resolve(nagg, z);
    check_query_sets(nagg, xi, yi, zi);
    return d_separated(nagg.graph(), xi, yi, zi);
}

std::string to_string(FailureCase c) {
    switch (c) {
        case FailureCase::CaseI: return "CaseI";
        case FailureCase::CaseII: return "CaseII";
        case FailureCase::CaseIII: return "CaseIII";
        default: return "Other";
    }
}

AdjustmentResult find_ide_adjustment(const Nagg& nagg, const std::string& treatment,
                                     const std::string& outcome,
                                     const std::vector<RelationalVariable>& extra_conditioning) {
    const Schema& schema = nagg.schema();
    if (nagg.perspective() != ItemClass::Entity)
        throw QueryError(QueryError::Kind::MalformedQuery,
                         "IDE adjustment queries need the entity-perspective NAGG");
    if (treatment == outcome)
        throw QueryError(QueryError::Kind::MalformedQuery, "treatment and outcome must differ");
    for (const auto& name : {treatment, outcome}) {
        const auto* attr = schema.find_attribute(name, ItemClass::Entity);
        if (!attr)
            throw QueryError(QueryError::Kind::UnknownVariable,
                             "no entity attribute named '" + name + "'");
        if (attr->role != AttrRole::Observed)
            throw QueryError(QueryError::Kind::MalformedQuery,
                             "treatment and outcome must be observed attributes; '" + name +
                                 "' is not");
    }

    const RelationalPath ego = RelationalPath::of_length(ItemClass::Entity, 1);
    const RelationalPath peer_path = RelationalPath::of_length(ItemClass::Entity, 3);
    const RelationalPath rel_path = RelationalPath::of_length(ItemClass::Entity, 2);
    const RelationalPath peer_rel_path = RelationalPath::of_length(ItemClass::Entity, 4);

    const size_t x_id = nagg.node_id({ego, treatment});
    const size_t y_id = nagg.node_id({ego, outcome});
    const size_t peer_y_id = nagg.node_id({peer_path, outcome});

    // Assumption 1: background attributes are non-descendants of treatment and
    // outcome, checked on the class projection of the NAGG.
    {
        std::map<std::pair<ItemClass, std::string>, size_t> attr_index;
        Digraph class_graph(schema.attributes.size());
        for (size_t i = 0; i < schema.attributes.size(); ++i)
            attr_index[{schema.attributes[i].item_class, schema.attributes[i].name}] = i;
        for (size_t v = 0; v < nagg.graph().size(); ++v) {
            const auto& from_rv = nagg.node(v);
            for (const size_t c : nagg.graph().children(v)) {
                const auto& to_rv = nagg.node(c);
                class_graph.add_arc(attr_index.at({from_rv.path.terminal(), from_rv.attribute}),
                                    attr_index.at({to_rv.path.terminal(), to_rv.attribute}));
            }
        }
        const size_t x_attr = attr_index.at({ItemClass::Entity, treatment});
        const size_t y_attr = attr_index.at({ItemClass::Entity, outcome});
        const auto desc = class_graph.descendants_of({x_attr, y_attr});
        for (size_t i = 0; i < schema.attributes.size(); ++i) {
            if (i == x_attr || i == y_attr || !desc[i]) continue;
            throw QueryError(QueryError::Kind::AssumptionViolated,
                             "background attribute '" + schema.attributes[i].name +
                                 "' is a descendant of the treatment or outcome");
        }
    }

    // G with arcs out of the ego treatment removed (backdoor test)
    Digraph mutilated(nagg.graph().size());
    for (size_t v = 0; v < nagg.graph().size(); ++v) {
        if (v == x_id) continue;
        for (const size_t c : nagg.graph().children(v)) mutilated.add_arc(v, c);
    }

    // maximal observed set {X_-i} u {Z_i, Z_r, Z_-i, Z_-r, E_r, E_-r}
    std::set<size_t> adjustment{nagg.node_id({peer_path, treatment})};
    for (const auto& attr : schema.attributes) {
        if (attr.role == AttrRole::Latent) continue;
        if (attr.item_class == ItemClass::Entity) {
            if (attr.name == treatment || attr.name == outcome) continue;
            adjustment.insert(nagg.node_id({ego, attr.name}));
            adjustment.insert(nagg.node_id({peer_path, attr.name}));
        } else {
            adjustment.insert(nagg.node_id({rel_path, attr.name}));
            adjustment.insert(nagg.node_id({peer_rel_path, attr.name}));
        }
    }

    std::set<size_t> conditioning = adjustment;
    for (const auto& rv : extra_conditioning) {
        const size_t id = nagg.node_id(rv);
        if (id == peer_y_id)
            throw QueryError(QueryError::Kind::PeerOutcomeConditioned,
                             "conditioning on peer outcomes " + rv.to_string(schema) +
                                 " can open colliders and is rejected");
        if (nagg.is_latent(id))
            throw QueryError(QueryError::Kind::LatentInConditioningSet,
                             "latent variable in conditioning set: " + rv.to_string(schema));
        if (id == x_id || id == y_id)
            throw QueryError(QueryError::Kind::MalformedQuery,
                             "cannot condition on the treatment or outcome itself");
        conditioning.insert(id);
    }

    const std::vector<size_t> zvec(conditioning.begin(), conditioning.end());
    const DsepResult verdict = d_separated_with_witness(mutilated, {x_id}, {y_id}, zvec);

    AdjustmentResult result;
    if (verdict.separated) {
        result.identifiable = true;
        for (const size_t id : adjustment) result.adjustment_set.push_back(nagg.node(id));
        std::sort(result.adjustment_set.begin(), result.adjustment_set.end());
        return result;
    }

    result.identifiable = false;
    for (const size_t id : verdict.witness) result.witness_path.push_back(nagg.node(id));

    // Proof-case classification. Case I is direct latent confounding: some
    // latent reaches both X_i and Y_i through ego-level latents alone. Case
    // III is confounding mediated by the peer side: a latent reaches X_i and
    // the peer outcome Y_-i. Case II is an opened collider on the trail.
    bool case1 = false, case3 = false;
    for (const size_t lv : nagg.latent_set()) {
        const auto ego_reach = latent_reach(mutilated, nagg, lv, /*ego_only=*/true);
        if (ego_reach[x_id] && ego_reach[y_id]) {
            case1 = true;
            break;
        }
    }
    if (!case1) {
        for (const size_t lv : nagg.latent_set()) {
            const auto reach = latent_reach(mutilated, nagg, lv, /*ego_only=*/false);
            if (reach[x_id] && reach[peer_y_id]) {
                case3 = true;
                break;
            }
        }
    }
    if (case1)
        result.failure_case = FailureCase::CaseI;
    else if (case3)
        result.failure_case = FailureCase::CaseIII;
    else if (has_opened_collider(mutilated, verdict.witness))
        result.failure_case = FailureCase::CaseII;
    else
        result.failure_case = FailureCase::Other;
    return result;
}

}  // namespace idenet::rel
