#include "opf/graph_cycles.hpp"

#include <algorithm>
#include <map>
#include <queue>

namespace opf {

namespace {

std::pair<int, int> ordered(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

std::map<int, std::vector<int>> adjacency(const Network& net) {
    std::map<int, std::vector<int>> adj;
    for (const Bus& b : net.buses) adj[b.id];
    for (const Line& l : net.lines) {
        adj[l.from].push_back(l.to);
        adj[l.to].push_back(l.from);
    }
    for (auto& [id, nbrs] : adj) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
    return adj;
}

}  // namespace

Cycle make_cycle(std::vector<int> vertices,
                 const std::set<std::pair<int, int>>& real_pairs) {
    Cycle c;
    c.vertices = std::move(vertices);
    size_t n = c.vertices.size();
    for (size_t i = 0; i < n; ++i) {
        int u = c.vertices[i];
        int v = c.vertices[(i + 1) % n];
        c.arcs.push_back({u, v, real_pairs.count(ordered(u, v)) == 0});
    }
    return c;
}

Cycle rotate_to_lowest(const Cycle& c) {
    size_t n = c.vertices.size();
    size_t k = static_cast<size_t>(
        std::min_element(c.vertices.begin(), c.vertices.end()) - c.vertices.begin());
    Cycle out;
    for (size_t i = 0; i < n; ++i) {
        out.vertices.push_back(c.vertices[(k + i) % n]);
        out.arcs.push_back(c.arcs[(k + i) % n]);
    }
    return out;
}

std::set<std::pair<int, int>> spanning_tree(const Network& net, int root) {
    if (!net.has_bus(root)) throw UnknownBus("root bus not in network");
    auto adj = adjacency(net);
    std::set<std::pair<int, int>> tree;
    std::set<int> seen{root};
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj[u]) {
            if (seen.insert(v).second) {
                tree.insert({u, v});
                q.push(v);
            }
        }
    }
    if (seen.size() != net.buses.size())
        throw DisconnectedGraph("spanning tree does not reach every bus");
    return tree;
}

CycleBasis fundamental_cycle_basis(const Network& net, int root) {
    CycleBasis basis;
    basis.root = root;
    basis.tree_arcs = spanning_tree(net, root);

    std::map<int, int> parent;
    parent[root] = root;
    for (const auto& [u, v] : basis.tree_arcs) parent[v] = u;

    auto path_to_root = [&](int v) {
        std::vector<int> path{v};
        while (parent.at(v) != v) {
            v = parent.at(v);
            path.push_back(v);
        }
        return path;
    };

    std::set<std::pair<int, int>> edges, tree_edges, real_pairs;
    for (const Line& l : net.lines) {
        edges.insert(ordered(l.from, l.to));
        real_pairs.insert(ordered(l.from, l.to));
    }
    for (const auto& [u, v] : basis.tree_arcs) tree_edges.insert(ordered(u, v));

    for (const auto& [a, b] : edges) {
        if (tree_edges.count({a, b})) continue;
        std::vector<int> pa = path_to_root(a);
        std::vector<int> pb = path_to_root(b);
        // strip the common tail above the lowest common ancestor
        while (pa.size() > 1 && pb.size() > 1 && pa[pa.size() - 2] == pb[pb.size() - 2]) {
            pa.pop_back();
            pb.pop_back();
        }
        // pa = a..lca, pb = b..lca; cycle = a, b, (b-path up to lca), (lca-path down to a)
        std::vector<int> vertices{a};
        vertices.insert(vertices.end(), pb.begin(), pb.end());
        for (size_t i = pa.size() - 1; i >= 1; --i) vertices.push_back(pa[i - 1]);
        vertices.pop_back();  // final a closes implicitly
        basis.cycles.push_back(make_cycle(std::move(vertices), real_pairs));
    }
    return basis;
}

std::vector<Cycle> decompose_cycle(const Cycle& cycle, int anchor) {
    size_t n = cycle.length();
    if (n < 3) throw std::invalid_argument("cycle shorter than 3");
    if (cycle.vertices[0] != anchor)
        throw std::invalid_argument("anchor must be the first vertex of the cycle");
    if (n <= 4) return {cycle};

    // Elements of the arc partition as index ranges [i, j] into cycle.arcs.
    // Greedy consecutive 2-paths; an odd tail of 3 arcs splits 1+2 so that no
    // single-arc element touches the anchor.
    std::vector<std::pair<size_t, size_t>> elements;
    size_t i = 0;
    while (n - i > 3) {
        elements.push_back({i, i + 1});
        i += 2;
    }
    if (n - i == 3) {
        elements.push_back({i, i});
        elements.push_back({i + 1, i + 2});
    } else {
        elements.push_back({i, i + 1});
    }

    std::set<std::pair<int, int>> real_pairs;
    for (const CycleArc& a : cycle.arcs)
        if (!a.auxiliary) real_pairs.insert(ordered(a.from, a.to));

    int v1 = cycle.vertices[0];
    std::vector<Cycle> out;
    for (auto [lo, hi] : elements) {
        Cycle small;
        auto push_arc = [&](int u, int v, bool aux) {
            small.vertices.push_back(u);
            small.arcs.push_back({u, v, aux});
        };
        int start = cycle.vertices[lo];
        int end = cycle.vertices[(hi + 1) % n];
        if (lo != 0) push_arc(v1, start, real_pairs.count(ordered(v1, start)) == 0);
        for (size_t k = lo; k <= hi; ++k) {
            const CycleArc& a = cycle.arcs[k];
            push_arc(a.from, a.to, a.auxiliary);
        }
        if (end != v1) {
            small.vertices.push_back(end);
            small.arcs.push_back({end, v1, real_pairs.count(ordered(end, v1)) == 0});
        }
        out.push_back(std::move(small));
    }
    return out;
}

}  // namespace opf
