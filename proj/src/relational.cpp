#include "idenet/relational.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "idenet/digraph.hpp"
#include "json.hpp"

namespace idenet::rel {

Schema::Schema(std::string entity, std::string relationship, std::vector<AttributeDecl> attrs)
    : entity_class(std::move(entity)),
      relationship_class(std::move(relationship)),
      attributes(std::move(attrs)) {
    validate();
}

void Schema::validate() const {
    if (entity_class.empty() || relationship_class.empty() || entity_class == relationship_class)
        throw ParseError("schema needs distinct, non-empty entity and relationship class names");
    int exists_count = 0;
    for (const auto& a : attributes) {
        if (a.exists_indicator) {
            ++exists_count;
            if (a.item_class != ItemClass::Relationship)
                throw ParseError("exists indicator '" + a.name + "' must be a relationship attribute");
            if (a.domain.kind != AttrDomainKind::Binary)
                throw ParseError("exists indicator '" + a.name + "' must have binary domain");
        }
        if (a.role == AttrRole::Latent && a.exists_indicator)
            throw ParseError("exists indicator '" + a.name + "' cannot be latent");
        for (const auto& b : attributes) {
            if (&a != &b && a.name == b.name && a.item_class == b.item_class)
                throw ParseError("duplicate attribute name '" + a.name + "'");
        }
    }
    if (exists_count != 1)
        throw ParseError("schema must declare exactly one relationship existence indicator");
}

std::optional<ItemClass> Schema::class_of_name(const std::string& name) const {
    if (name == entity_class) return ItemClass::Entity;
    if (name == relationship_class) return ItemClass::Relationship;
    return std::nullopt;
}

std::vector<const AttributeDecl*> Schema::attributes_of(ItemClass c) const {
    std::vector<const AttributeDecl*> out;
    for (const auto& a : attributes)
        if (a.item_class == c) out.push_back(&a);
    return out;
}

const AttributeDecl* Schema::find_attribute(const std::string& name, ItemClass c) const {
    for (const auto& a : attributes)
        if (a.item_class == c && a.name == name) return &a;
    return nullptr;
}

const AttributeDecl& Schema::exists_attribute() const {
    for (const auto& a : attributes)
        if (a.exists_indicator) return a;
    throw std::logic_error("schema has no exists indicator");
}

bool RelationalPath::valid_sequence(const std::vector<ItemClass>& seq) {
    if (seq.empty()) return false;
    for (size_t i = 1; i < seq.size(); ++i)
        if (seq[i] == seq[i - 1]) return false;
    return seq.size() <= max_length(seq.front());
}

RelationalPath::RelationalPath(std::vector<ItemClass> sequence) : seq_(std::move(sequence)) {
    if (!valid_sequence(seq_)) throw ParseError("invalid relational path");
}

RelationalPath RelationalPath::of_length(ItemClass base, size_t length) {
    std::vector<ItemClass> seq;
    seq.reserve(length);
    ItemClass c = base;
    for (size_t i = 0; i < length; ++i) {
        seq.push_back(c);
        c = (c == ItemClass::Entity) ? ItemClass::Relationship : ItemClass::Entity;
    }
    return RelationalPath(std::move(seq));
}

std::string RelationalPath::to_string(const Schema& schema) const {
    std::string out = "[";
    for (size_t i = 0; i < seq_.size(); ++i) {
        if (i) out += ",";
        out += schema.class_name(seq_[i]);
    }
    out += "]";
    return out;
}

std::string RelationalVariable::to_string(const Schema& schema) const {
    return path.to_string(schema) + "." + attribute;
}

std::string RelationalDependency::to_string(const Schema& schema) const {
    return cause.to_string(schema) + " -> " + effect.to_string(schema);
}

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    for (const auto& issue : issues) {
        out << (issue.kind == ValidationIssue::Kind::CyclicModel ? "CyclicModel"
                                                                 : "MalformedDependency")
            << ": " << issue.detail << "\n";
    }
    return out.str();
}

std::vector<RelationalPath> enumerate_paths(const Schema&, ItemClass perspective) {
    std::vector<RelationalPath> out;
    for (size_t len = 1; len <= RelationalPath::max_length(perspective); ++len)
        out.push_back(RelationalPath::of_length(perspective, len));
    return out;
}

std::vector<RelationalDependency> implicit_dependencies(const Schema& schema) {
    const auto& exists = schema.exists_attribute();
    const RelationalPath canon = RelationalPath::of_length(ItemClass::Relationship, 1);
    std::vector<RelationalDependency> out;
    for (const auto* attr : schema.attributes_of(ItemClass::Relationship)) {
        if (attr->exists_indicator) continue;
        out.push_back({{canon, exists.name}, {canon, attr->name}});
    }
    return out;
}

namespace {

std::string attr_class_name(const Schema& schema, ItemClass c, const std::string& attr) {
    return schema.class_name(c) + "." + attr;
}

}  // namespace

ValidationReport validate_nscm(const Nscm& model) {
    ValidationReport report;
    const Schema& schema = model.schema;

    for (const auto& dep : model.explicit_deps) {
        std::string where = dep.to_string(schema);
        if (dep.effect.path.length() != 1) {
            report.issues.push_back({ValidationIssue::Kind::MalformedDependency,
                                     where + ": effect path must be canonical (length 1)"});
            continue;
        }
        if (dep.cause.path.base() != dep.effect.path.base()) {
            report.issues.push_back({ValidationIssue::Kind::MalformedDependency,
                                     where + ": cause and effect must share the base item class"});
            continue;
        }
        const ItemClass cause_terminal = dep.cause.path.terminal();
        const ItemClass effect_terminal = dep.effect.path.terminal();
        if (!schema.find_attribute(dep.cause.attribute, cause_terminal) ||
            !schema.find_attribute(dep.effect.attribute, effect_terminal)) {
            report.issues.push_back({ValidationIssue::Kind::MalformedDependency,
                                     where + ": attribute not declared on the terminal item class"});
            continue;
        }
        if (cause_terminal == effect_terminal && dep.cause.attribute == dep.effect.attribute) {
            report.issues.push_back({ValidationIssue::Kind::MalformedDependency,
                                     where + ": cause and effect attribute must differ"});
            continue;
        }
    }
    if (!report.ok()) return report;

    // class dependency graph over attribute classes
    Digraph cdg(model.schema.attributes.size());
    std::map<std::pair<ItemClass, std::string>, size_t> index;
    for (size_t i = 0; i < schema.attributes.size(); ++i)
        index[{schema.attributes[i].item_class, schema.attributes[i].name}] = i;

    auto add_dep_arc = [&](const RelationalDependency& dep) {
        const size_t from = index.at({dep.cause.path.terminal(), dep.cause.attribute});
        const size_t to = index.at({dep.effect.path.terminal(), dep.effect.attribute});
        cdg.add_arc(from, to);
    };
    for (const auto& dep : model.explicit_deps) add_dep_arc(dep);
    for (const auto& dep : implicit_dependencies(schema)) add_dep_arc(dep);

    if (auto cycle = cdg.find_cycle()) {
        std::string detail = "attribute class cycle: ";
        for (size_t i = 0; i < cycle->size(); ++i) {
            const auto& a = schema.attributes[(*cycle)[i]];
            if (i) detail += " -> ";
            detail += attr_class_name(schema, a.item_class, a.name);
        }
        const auto& first = schema.attributes[cycle->front()];
        detail += " -> " + attr_class_name(schema, first.item_class, first.name);
        report.issues.push_back({ValidationIssue::Kind::CyclicModel, detail});
    }
    return report;
}

namespace {

std::string strip(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

}  // namespace

RelationalVariable parse_relational_variable(const Schema& schema, const std::string& text) {
    const std::string t = strip(text);
    if (t.empty() || t.front() != '[')
        throw ParseError("relational variable must start with '[': " + text);
    const size_t close = t.find(']');
    if (close == std::string::npos) throw ParseError("unterminated path in: " + text);
    if (close + 1 >= t.size() || t[close + 1] != '.')
        throw ParseError("missing '.attribute' in: " + text);

    std::vector<ItemClass> seq;
    std::stringstream inner(t.substr(1, close - 1));
    std::string item;
    while (std::getline(inner, item, ',')) {
        item = strip(item);
        const auto cls = schema.class_of_name(item);
        if (!cls) throw ParseError("unknown item class '" + item + "' in: " + text);
        seq.push_back(*cls);
    }
    if (!RelationalPath::valid_sequence(seq))
        throw ParseError("path is not a valid alternating sequence: " + text);
    RelationalPath path(seq);

    const std::string attr = strip(t.substr(close + 2));
    if (!schema.find_attribute(attr, path.terminal()))
        throw ParseError("attribute '" + attr + "' not declared on the terminal class of: " + text);
    return {std::move(path), attr};
}

RelationalDependency parse_dependency(const Schema& schema, const std::string& text) {
    const size_t arrow = text.find("->");
    if (arrow == std::string::npos) throw ParseError("dependency missing '->': " + text);
    RelationalVariable cause = parse_relational_variable(schema, text.substr(0, arrow));
    RelationalVariable effect = parse_relational_variable(schema, text.substr(arrow + 2));
    return {std::move(cause), std::move(effect)};
}

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw ParseError("unknown key '" + it.key() + "' in " + where);
    }
}

AttrDomain parse_domain(const std::string& text) {
    if (text == "real") return AttrDomain::real();
    if (text == "binary") return AttrDomain::binary();
    if (text.rfind("categorical(", 0) == 0 && text.back() == ')') {
        const int k = std::stoi(text.substr(12, text.size() - 13));
        if (k < 2) throw ParseError("categorical domain needs at least 2 categories");
        return AttrDomain::categorical(k);
    }
    throw ParseError("unknown attribute domain '" + text + "'");
}

AttrRole parse_role(const std::string& text) {
    if (text == "observed") return AttrRole::Observed;
    if (text == "latent") return AttrRole::Latent;
    if (text == "selection") return AttrRole::Selection;
    throw ParseError("unknown attribute role '" + text + "'");
}

}  // namespace

Nscm nscm_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("NSCM spec is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("NSCM spec must be a JSON object");
    reject_unknown_keys(doc, {"entity", "relationship", "attributes", "dependencies"},
                        "NSCM spec");

    const std::string entity = doc.at("entity").get<std::string>();
    const std::string relationship = doc.at("relationship").get<std::string>();

    std::vector<AttributeDecl> attrs;
    for (const auto& item : doc.at("attributes")) {
        reject_unknown_keys(item, {"name", "class", "role", "domain", "exists"}, "attribute");
        AttributeDecl a;
        a.name = item.at("name").get<std::string>();
        const std::string cls = item.at("class").get<std::string>();
        if (cls == "entity")
            a.item_class = ItemClass::Entity;
        else if (cls == "relationship")
            a.item_class = ItemClass::Relationship;
        else
            throw ParseError("attribute class must be 'entity' or 'relationship', got '" + cls + "'");
        if (item.contains("role")) a.role = parse_role(item.at("role").get<std::string>());
        if (item.contains("exists")) a.exists_indicator = item.at("exists").get<bool>();
        if (item.contains("domain"))
            a.domain = parse_domain(item.at("domain").get<std::string>());
        else if (a.exists_indicator)
            a.domain = AttrDomain::binary();
        attrs.push_back(std::move(a));
    }

    Schema schema(entity, relationship, std::move(attrs));
    Nscm model{std::move(schema), {}};
    if (doc.contains("dependencies")) {
        for (const auto& dep : doc.at("dependencies"))
            model.explicit_deps.push_back(parse_dependency(model.schema, dep.get<std::string>()));
    }
    return model;
}

Nscm nscm_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open NSCM spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return nscm_from_json_text(buf.str());
}

}  // namespace idenet::rel
