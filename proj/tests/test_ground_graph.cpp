#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "idenet/ground_graph.hpp"
#include "idenet/rng.hpp"

using namespace idenet::rel;
using idenet::Digraph;
using idenet::Rng;

namespace {

Schema user_friend_schema() {
    return Schema("U", "F",
                  {{"Dem", ItemClass::Entity, AttrRole::Observed, false, AttrDomain::real()},
                   {"Aff", ItemClass::Entity, AttrRole::Observed, false, AttrDomain::binary()},
                   {"St", ItemClass::Entity, AttrRole::Observed, false, AttrDomain::real()},
                   {"Ex", ItemClass::Relationship, AttrRole::Observed, true, AttrDomain::binary()},
                   {"Dur", ItemClass::Relationship, AttrRole::Observed, false, AttrDomain::real()}});
}

RelationalPath entity_path(size_t len) { return RelationalPath::of_length(ItemClass::Entity, len); }

// Independent d-separation oracle: moralize the ancestral subgraph of
// X u Y u Z, drop Z, and test undirected connectivity. Used only to
// cross-check the reachability implementation.
bool d_sep_moralization(const Digraph& g, const std::vector<size_t>& x,
                        const std::vector<size_t>& y, const std::vector<size_t>& z) {
    std::vector<size_t> seeds;
    seeds.insert(seeds.end(), x.begin(), x.end());
    seeds.insert(seeds.end(), y.begin(), y.end());
    seeds.insert(seeds.end(), z.begin(), z.end());
    const auto keep = g.ancestors_of(seeds);

    const size_t n = g.size();
    std::vector<std::set<size_t>> undirected(n);
    auto connect = [&](size_t a, size_t b) {
        undirected[a].insert(b);
        undirected[b].insert(a);
    };
    for (size_t v = 0; v < n; ++v) {
        if (!keep[v]) continue;
        for (const size_t p : g.parents(v)) {
            if (!keep[p]) continue;
            connect(p, v);
            for (const size_t q : g.parents(v)) {
                if (keep[q] && p < q) connect(p, q);
            }
        }
    }
    std::vector<bool> blocked(n, false);
    for (const size_t v : z) blocked[v] = true;

    std::vector<bool> reach(n, false);
    std::vector<size_t> stack;
    for (const size_t s : x) {
        if (!blocked[s]) {
            reach[s] = true;
            stack.push_back(s);
        }
    }
    while (!stack.empty()) {
        const size_t v = stack.back();
        stack.pop_back();
        for (const size_t w : undirected[v]) {
            if (!keep[w] || blocked[w] || reach[w]) continue;
            reach[w] = true;
            stack.push_back(w);
        }
    }
    for (const size_t t : y)
        if (reach[t]) return false;
    return true;
}

}  // namespace

TEST_CASE("terminal sets on the three-node skeleton") {
    const Skeleton sk(3);  // entities 0,1,2
    const Instance a = Instance::entity(0);

    CHECK(terminal_set(sk, a, entity_path(1)) == std::set<Instance>{a});
    CHECK(terminal_set(sk, a, entity_path(2)) ==
          std::set<Instance>{Instance::relationship(0, 1), Instance::relationship(0, 2)});
    CHECK(terminal_set(sk, a, entity_path(3)) ==
          std::set<Instance>{Instance::entity(1), Instance::entity(2)});
    // depth-1 burning removes rel(0,1), rel(0,2); only rel(1,2) remains
    CHECK(terminal_set(sk, a, entity_path(4)) == std::set<Instance>{Instance::relationship(1, 2)});
}

TEST_CASE("relationship-perspective terminal sets") {
    const Skeleton sk(4);
    const Instance base = Instance::relationship(0, 1);
    CHECK(terminal_set(sk, base, RelationalPath::of_length(ItemClass::Relationship, 1)) ==
          std::set<Instance>{base});
    CHECK(terminal_set(sk, base, RelationalPath::of_length(ItemClass::Relationship, 2)) ==
          std::set<Instance>{Instance::entity(0), Instance::entity(1)});
    CHECK(terminal_set(sk, base, RelationalPath::of_length(ItemClass::Relationship, 5)) ==
          std::set<Instance>{Instance::relationship(2, 3)});
}

TEST_CASE("terminal sets of all perspective paths partition the skeleton") {
    const Schema schema = user_friend_schema();
    Rng rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(5));  // 2..6
        const Skeleton sk(n);
        for (const ItemClass perspective : {ItemClass::Entity, ItemClass::Relationship}) {
            const auto paths = enumerate_paths(schema, perspective);
            for (const auto& base : sk.instances_of(perspective)) {
                CHECK(terminal_sets_disjoint_check(sk, base, paths));
                std::set<Instance> covered;
                for (const auto& p : paths) {
                    const auto ts = terminal_set(sk, base, p);
                    covered.insert(ts.begin(), ts.end());
                }
                CHECK(covered.size() == sk.entity_count() + sk.relationship_count());
            }
        }
    }
}

TEST_CASE("terminal_set is deterministic") {
    const Skeleton sk(5);
    const auto p = entity_path(3);
    const auto first = terminal_set(sk, Instance::entity(2), p);
    for (int i = 0; i < 5; ++i) CHECK(terminal_set(sk, Instance::entity(2), p) == first);
}

TEST_CASE("single path and two-node skeleton cases") {
    const Skeleton sk2(2);
    CHECK(terminal_sets_disjoint_check(sk2, Instance::entity(0), {entity_path(1)}));
    CHECK(terminal_set(sk2, Instance::entity(0), entity_path(4)).empty());
}

TEST_CASE("ground graph of a canonical self dependency") {
    const Schema schema = user_friend_schema();
    Nscm model{schema, {parse_dependency(schema, "[U].Aff -> [U].St")}};
    const GroundGraph gg = build_ground_graph(model, Skeleton(2));

    const size_t a_aff = gg.node_id({Instance::entity(0), "Aff"});
    const size_t a_st = gg.node_id({Instance::entity(0), "St"});
    const size_t b_st = gg.node_id({Instance::entity(1), "St"});
    const auto& arcs = gg.graph().children(a_aff);
    CHECK(arcs == std::vector<size_t>{a_st});
    CHECK(gg.graph().parents(b_st) ==
          std::vector<size_t>{gg.node_id({Instance::entity(1), "Aff"})});
}

TEST_CASE("ground graph of a peer dependency uses terminal sets") {
    const Schema schema = user_friend_schema();
    Nscm model{schema, {parse_dependency(schema, "[U,F,U].Aff -> [U].St")}};
    const GroundGraph gg = build_ground_graph(model, Skeleton(3));

    for (int i = 0; i < 3; ++i) {
        const auto parents = gg.graph().parents(gg.node_id({Instance::entity(i), "St"}));
        std::set<size_t> expected;
        for (int j = 0; j < 3; ++j)
            if (j != i) expected.insert(gg.node_id({Instance::entity(j), "Aff"}));
        CHECK(std::set<size_t>(parents.begin(), parents.end()) == expected);
    }
}

TEST_CASE("implicit existence dependency is grounded per relationship instance") {
    const Schema schema = user_friend_schema();
    Nscm model{schema, {}};
    const GroundGraph gg = build_ground_graph(model, Skeleton(2));
    const Instance rel = Instance::relationship(0, 1);
    CHECK(gg.graph().children(gg.node_id({rel, "Ex"})) ==
          std::vector<size_t>{gg.node_id({rel, "Dur"})});
}

TEST_CASE("ground graphs of acyclic models are acyclic") {
    const Schema schema = user_friend_schema();
    Rng rng(202);
    for (int trial = 0; trial < 30; ++trial) {
        // random acyclic model: attribute order Dem < Aff < St, causes point down
        std::vector<RelationalDependency> deps;
        const std::vector<std::string> order{"Dem", "Aff", "St"};
        for (size_t ei = 0; ei < order.size(); ++ei) {
            for (size_t ej = ei + 1; ej < order.size(); ++ej) {
                if (rng.bernoulli(0.5)) continue;
                const size_t len = 1 + 2 * rng.below(2);  // 1 or 3
                deps.push_back({{entity_path(len), order[ei]}, {entity_path(1), order[ej]}});
            }
        }
        Nscm model{schema, deps};
        REQUIRE(validate_nscm(model).ok());
        for (const int n : {2, 4, 6}) CHECK(build_ground_graph(model, Skeleton(n)).is_acyclic());
    }
}

TEST_CASE("d_sep_ground textbook cases") {
    // chain x -> m -> y and collider x -> c <- y on a 3-entity skeleton,
    // exercised through one model with Dem -> Aff -> St
    const Schema schema = user_friend_schema();
    Nscm chain{schema,
               {parse_dependency(schema, "[U].Dem -> [U].Aff"),
                parse_dependency(schema, "[U].Aff -> [U].St")}};
    const GroundGraph gg = build_ground_graph(chain, Skeleton(2));
    const GroundNode x{Instance::entity(0), "Dem"};
    const GroundNode m{Instance::entity(0), "Aff"};
    const GroundNode y{Instance::entity(0), "St"};
    CHECK(d_sep_ground(gg, {x}, {y}, {m}));
    CHECK_FALSE(d_sep_ground(gg, {x}, {y}, {}));

    Nscm collider{schema,
                  {parse_dependency(schema, "[U].Dem -> [U].St"),
                   parse_dependency(schema, "[U].Aff -> [U].St")}};
    const GroundGraph gg2 = build_ground_graph(collider, Skeleton(2));
    const GroundNode c{Instance::entity(0), "St"};
    CHECK(d_sep_ground(gg2, {{Instance::entity(0), "Dem"}}, {{Instance::entity(0), "Aff"}}, {}));
    CHECK_FALSE(
        d_sep_ground(gg2, {{Instance::entity(0), "Dem"}}, {{Instance::entity(0), "Aff"}}, {c}));
}

TEST_CASE("d_sep_ground rejects unknown nodes") {
    const Schema schema = user_friend_schema();
    const GroundGraph gg = build_ground_graph(Nscm{schema, {}}, Skeleton(2));
    CHECK_THROWS_AS(d_sep_ground(gg, {{Instance::entity(9), "Dem"}},
                                 {{Instance::entity(0), "St"}}, {}),
                    UnknownNode);
}

TEST_CASE("reachability d-separation agrees with moralization on random DAGs") {
    Rng rng(303);
    for (int trial = 0; trial < 500; ++trial) {
        const size_t n = 4 + rng.below(9);  // 4..12 nodes
        Digraph g(n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                if (rng.bernoulli(0.25)) g.add_arc(i, j);

        // disjoint singleton-or-pair X, Y and a random Z
        std::vector<size_t> ids(n);
        for (size_t i = 0; i < n; ++i) ids[i] = i;
        rng.shuffle(ids);
        const std::vector<size_t> x{ids[0]};
        const std::vector<size_t> y{ids[1]};
        std::vector<size_t> z;
        const size_t zn = rng.below(n - 1);
        for (size_t k = 0; k < zn && 2 + k < n; ++k) z.push_back(ids[2 + k]);

        CHECK(idenet::d_separated(g, x, y, z) == d_sep_moralization(g, x, y, z));
    }
}
