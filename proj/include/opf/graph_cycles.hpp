#ifndef OPF_GRAPH_CYCLES_HPP
#define OPF_GRAPH_CYCLES_HPP

#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "opf/network.hpp"

namespace opf {

struct DisconnectedGraph : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CycleArc {
    int from = 0, to = 0;
    bool auxiliary = false;
};

/// Closed walk (v1,...,vn) with arcs[i] = (v[i] -> v[i+1]) and the last arc
/// closing back to v1. Arcs between buses that are not joined by a line are
/// tagged auxiliary.
struct Cycle {
    std::vector<int> vertices;
    std::vector<CycleArc> arcs;

    size_t length() const { return vertices.size(); }
};

Cycle make_cycle(std::vector<int> vertices,
                 const std::set<std::pair<int, int>>& real_pairs);

/// Rotates so the lowest vertex id comes first, preserving arc order.
Cycle rotate_to_lowest(const Cycle& c);

struct CycleBasis {
    std::vector<Cycle> cycles;
    std::set<std::pair<int, int>> tree_arcs;  // (parent, child), parent side root
    int root = 0;
};

/// Breadth-first spanning tree, neighbors explored in ascending bus-id order.
std::set<std::pair<int, int>> spanning_tree(const Network& net, int root);

/// One cycle per non-tree edge: the edge plus the unique tree path between
/// its endpoints, oriented to start at the lower-id endpoint of the edge.
/// Parallel lines collapse onto one undirected edge.
CycleBasis fundamental_cycle_basis(const Network& net, int root);

/// Partition of the cycle's arcs into 1-/2-paths anchored at v1, each element
/// closed through auxiliary arcs to v1. Every output has length 3 or 4 and
/// the union of real arcs equals the input arc set. Cycles of length <= 4
/// are returned unchanged.
std::vector<Cycle> decompose_cycle(const Cycle& cycle, int anchor);

}  // namespace opf

#endif
