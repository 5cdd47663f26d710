#include "idenet/digraph.hpp"

#include <algorithm>
#include <deque>

namespace idenet {

bool Digraph::is_acyclic() const { return !find_cycle().has_value(); }

std::optional<std::vector<size_t>> Digraph::find_cycle() const {
    const size_t n = size();
    // 0 = white, 1 = on stack, 2 = done
    std::vector<uint8_t> color(n, 0);
    std::vector<size_t> parent(n, SIZE_MAX);

    for (size_t root = 0; root < n; ++root) {
        if (color[root] != 0) continue;
        std::vector<std::pair<size_t, size_t>> stack;  // (node, next child index)
        stack.push_back({root, 0});
        color[root] = 1;
        while (!stack.empty()) {
            auto& [v, idx] = stack.back();
            if (idx < children_[v].size()) {
                const size_t w = children_[v][idx++];
                if (color[w] == 0) {
                    color[w] = 1;
                    parent[w] = v;
                    stack.push_back({w, 0});
                } else if (color[w] == 1) {
                    std::vector<size_t> cycle{w};
                    for (size_t u = v; u != w; u = parent[u]) cycle.push_back(u);
                    std::reverse(cycle.begin() + 1, cycle.end());
                    return cycle;
                }
            } else {
                color[v] = 2;
                stack.pop_back();
            }
        }
    }
    return std::nullopt;
}

std::vector<bool> Digraph::ancestors_of(const std::vector<size_t>& seeds) const {
    std::vector<bool> mark(size(), false);
    std::deque<size_t> queue;
    for (const size_t s : seeds) {
        if (!mark[s]) {
            mark[s] = true;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const size_t v = queue.front();
        queue.pop_front();
        for (const size_t p : parents_[v]) {
            if (!mark[p]) {
                mark[p] = true;
                queue.push_back(p);
            }
        }
    }
    return mark;
}

std::vector<bool> Digraph::descendants_of(const std::vector<size_t>& seeds) const {
    std::vector<bool> mark(size(), false);
    std::deque<size_t> queue;
    for (const size_t s : seeds) {
        if (!mark[s]) {
            mark[s] = true;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const size_t v = queue.front();
        queue.pop_front();
        for (const size_t c : children_[v]) {
            if (!mark[c]) {
                mark[c] = true;
                queue.push_back(c);
            }
        }
    }
    return mark;
}

DsepResult d_separated_with_witness(const Digraph& g, const std::vector<size_t>& x,
                                    const std::vector<size_t>& y, const std::vector<size_t>& z) {
    const size_t n = g.size();
    std::vector<bool> in_y(n, false), in_z(n, false);
    for (const size_t v : y) in_y[v] = true;
    for (const size_t v : z) in_z[v] = true;
    const std::vector<bool> anc_z = g.ancestors_of(z);

    // state = node * 2 + dir, dir 0 = entered from a child (moving up),
    // dir 1 = entered from a parent (moving down)
    std::vector<bool> visited(2 * n, false);
    std::vector<size_t> pred(2 * n, SIZE_MAX);
    std::deque<size_t> queue;

    auto push = [&](size_t node, int dir, size_t from_state) {
        const size_t state = node * 2 + static_cast<size_t>(dir);
        if (visited[state]) return;
        visited[state] = true;
        pred[state] = from_state;
        queue.push_back(state);
    };

    for (const size_t s : x) push(s, 0, SIZE_MAX);

    while (!queue.empty()) {
        const size_t state = queue.front();
        queue.pop_front();
        const size_t v = state / 2;
        const int dir = static_cast<int>(state % 2);

        if (in_y[v]) {
            std::vector<size_t> trail;
            for (size_t s = state; s != SIZE_MAX; s = pred[s]) trail.push_back(s / 2);
            std::reverse(trail.begin(), trail.end());
            return {false, trail};
        }

        if (dir == 0) {
            if (!in_z[v]) {
                for (const size_t p : g.parents(v)) push(p, 0, state);
                for (const size_t c : g.children(v)) push(c, 1, state);
            }
        } else {
            if (!in_z[v]) {
                for (const size_t c : g.children(v)) push(c, 1, state);
            }
            if (anc_z[v]) {
                for (const size_t p : g.parents(v)) push(p, 0, state);
            }
        }
    }
    return {true, {}};
}

}  // namespace idenet
