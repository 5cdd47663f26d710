#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace idenet::rel {

enum class ItemClass { Entity, Relationship };

enum class AttrRole { Observed, Latent, Selection };

enum class AttrDomainKind { Real, Binary, Categorical };

struct AttrDomain {
    AttrDomainKind kind = AttrDomainKind::Real;
    int categories = 0;  // for Categorical

    static AttrDomain real() { return {AttrDomainKind::Real, 0}; }
    static AttrDomain binary() { return {AttrDomainKind::Binary, 0}; }
    static AttrDomain categorical(int k) { return {AttrDomainKind::Categorical, k}; }

    bool operator==(const AttrDomain&) const = default;
};

struct AttributeDecl {
    std::string name;
    ItemClass item_class = ItemClass::Entity;
    AttrRole role = AttrRole::Observed;
    bool exists_indicator = false;
    AttrDomain domain = AttrDomain::real();
};

// Single-entity single-relationship (SESR) schema. Exactly one entity class
// and one relationship class; the relationship carries exactly one binary
// existence indicator.
struct Schema {
    std::string entity_class = "U";
    std::string relationship_class = "F";
    std::vector<AttributeDecl> attributes;

    Schema() = default;
    Schema(std::string entity, std::string relationship, std::vector<AttributeDecl> attrs);

    const std::string& class_name(ItemClass c) const {
        return c == ItemClass::Entity ? entity_class : relationship_class;
    }
    std::optional<ItemClass> class_of_name(const std::string& name) const;

    std::vector<const AttributeDecl*> attributes_of(ItemClass c) const;
    const AttributeDecl* find_attribute(const std::string& name, ItemClass c) const;
    const AttributeDecl& exists_attribute() const;

private:
    void validate() const;
};

// Alternating sequence of item classes starting at the base. Length is capped
// at 4 for an entity base and 5 for a relationship base; longer paths have
// empty terminal sets in every skeleton.
class RelationalPath {
public:
    explicit RelationalPath(std::vector<ItemClass> sequence);

    const std::vector<ItemClass>& sequence() const { return seq_; }
    size_t length() const { return seq_.size(); }
    ItemClass base() const { return seq_.front(); }
    ItemClass terminal() const { return seq_.back(); }

    static size_t max_length(ItemClass base) { return base == ItemClass::Entity ? 4 : 5; }
    static bool valid_sequence(const std::vector<ItemClass>& seq);

    // the unique alternating path with this base and length, SESR
    static RelationalPath of_length(ItemClass base, size_t length);

    std::string to_string(const Schema& schema) const;

    auto operator<=>(const RelationalPath&) const = default;

private:
    std::vector<ItemClass> seq_;
};

struct RelationalVariable {
    RelationalPath path;
    std::string attribute;

    std::string to_string(const Schema& schema) const;
    auto operator<=>(const RelationalVariable&) const = default;
};

// Canonical-form dependency: the effect path always has length one.
struct RelationalDependency {
    RelationalVariable cause;
    RelationalVariable effect;

    std::string to_string(const Schema& schema) const;
    auto operator<=>(const RelationalDependency&) const = default;
};

struct Nscm {
    Schema schema;
    std::vector<RelationalDependency> explicit_deps;
};

struct ValidationIssue {
    enum class Kind { CyclicModel, MalformedDependency };
    Kind kind;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string to_string() const;
};

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// All valid relational paths for the perspective, ordered by length:
// 4 paths for an entity base, 5 for a relationship base.
std::vector<RelationalPath> enumerate_paths(const Schema& schema, ItemClass perspective);

// {[R].Exists -> [R].Y} for every relationship attribute Y other than Exists.
std::vector<RelationalDependency> implicit_dependencies(const Schema& schema);

// Checks dependency well-formedness and acyclicity of the class dependency
// graph (attribute classes as nodes, explicit+implicit dependencies as arcs).
ValidationReport validate_nscm(const Nscm& model);

// "[U,F,U].Aff" -> RelationalVariable, resolved against the schema
RelationalVariable parse_relational_variable(const Schema& schema, const std::string& text);
// "[U,F,U].Aff -> [U].St"
RelationalDependency parse_dependency(const Schema& schema, const std::string& text);

// NSCM spec file: top-level keys entity, relationship, attributes,
// dependencies. Unknown keys are rejected.
Nscm nscm_from_json_text(const std::string& text);
Nscm nscm_from_json_file(const std::string& path);

}  // namespace idenet::rel
