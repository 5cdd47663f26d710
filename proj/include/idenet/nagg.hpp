#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "idenet/digraph.hpp"
#include "idenet/relational.hpp"

namespace idenet::rel {

// Pivot-based path composition: all paths [B,...,Ik] through which a
// dependency with cause path `extension` reaches a variable on `original`.
// Precondition: original's terminal item class equals extension's base.
std::set<RelationalPath> extend_path(const RelationalPath& original,
                                     const RelationalPath& extension);

// DAG over relational variables for one perspective: nodes are every valid
// path times the attributes of its terminal class, arcs are the extend-closure
// of explicit and implicit dependencies.
class Nagg {
public:
    ItemClass perspective() const { return perspective_; }
    const Schema& schema() const { return schema_; }
    const Digraph& graph() const { return graph_; }

    const std::vector<RelationalVariable>& nodes() const { return nodes_; }
    size_t node_id(const RelationalVariable& rv) const;
    const RelationalVariable& node(size_t id) const { return nodes_[id]; }

    bool is_latent(size_t id) const { return latent_[id]; }
    bool is_selection(size_t id) const { return selection_[id]; }
    std::vector<size_t> latent_set() const;
    std::vector<size_t> selection_set() const;

    std::vector<std::pair<RelationalVariable, RelationalVariable>> arcs() const;

    friend Nagg build_nagg(const Nscm& model, ItemClass perspective);

private:
    ItemClass perspective_ = ItemClass::Entity;
    Schema schema_;
    Digraph graph_;
    std::vector<RelationalVariable> nodes_;
    std::map<RelationalVariable, size_t> index_;
    std::vector<bool> latent_;
    std::vector<bool> selection_;
};

class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

class QueryError : public std::runtime_error {
public:
    enum class Kind {
        LatentInConditioningSet,
        SelectionNotConditioned,
        PeerOutcomeConditioned,
        AssumptionViolated,
        UnknownVariable,
        MalformedQuery,
    };
    QueryError(Kind kind, const std::string& what) : std::runtime_error(what), kind(kind) {}
    Kind kind;
};

// Throws ModelError when validate_nscm fails.
Nagg build_nagg(const Nscm& model, ItemClass perspective);

// Relational d-separation: standard d-separation on the NAGG. The
// conditioning set may not contain latent variables and must contain every
// selection variable.
bool d_separated(const Nagg& nagg, const std::vector<RelationalVariable>& x,
                 const std::vector<RelationalVariable>& y,
                 const std::vector<RelationalVariable>& z);

enum class FailureCase { CaseI, CaseII, CaseIII, Other };

struct AdjustmentResult {
    bool identifiable = false;
    std::vector<RelationalVariable> adjustment_set;  // when identifiable
    FailureCase failure_case = FailureCase::Other;   // when not
    std::vector<RelationalVariable> witness_path;    // d-connecting trail when not
};

// Backdoor test for the individual direct effect of [E].treatment on
// [E].outcome: removes the arcs out of the ego treatment variable and checks
// whether the maximal observed set {peer treatments} u {Z_i, Z_r, Z_-i, Z_-r,
// E_r, E_-r} separates treatment from outcome. `extra_conditioning` adds
// user-declared observed variables; peer outcomes are rejected there because
// conditioning on them can open colliders.
AdjustmentResult find_ide_adjustment(const Nagg& nagg, const std::string& treatment,
                                     const std::string& outcome,
                                     const std::vector<RelationalVariable>& extra_conditioning = {});

std::string to_string(FailureCase c);

}  // namespace idenet::rel
