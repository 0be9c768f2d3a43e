#include "opf/network.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

namespace opf {

int Network::bus_index(int bus_id) const {
    if (index_cache_.size() != buses.size()) {
        index_cache_.clear();
        for (size_t i = 0; i < buses.size(); ++i)
            index_cache_[buses[i].id] = static_cast<int>(i);
    }
    auto it = index_cache_.find(bus_id);
    if (it == index_cache_.end())
        throw UnknownBus("no bus with id " + std::to_string(bus_id));
    return it->second;
}

bool Network::has_bus(int bus_id) const {
    for (const Bus& b : buses)
        if (b.id == bus_id) return true;
    return false;
}

std::vector<int> Network::generators_at(int bus_id) const {
    std::vector<int> out;
    for (size_t i = 0; i < generators.size(); ++i)
        if (generators[i].bus == bus_id) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> Network::lines_at(int bus_id) const {
    std::vector<int> out;
    for (size_t i = 0; i < lines.size(); ++i)
        if (lines[i].from == bus_id || lines[i].to == bus_id)
            out.push_back(static_cast<int>(i));
    return out;
}

void compute_branch_admittance(Line& line) {
    std::complex<double> ys = 1.0 / std::complex<double>(line.r, line.x);
    std::complex<double> ych(0.0, line.b_charge / 2.0);
    double tap = line.tap == 0.0 ? 1.0 : line.tap;
    std::complex<double> t = std::polar(tap, line.shift);
    line.y_ff = (ys + ych) / (tap * tap);
    line.y_ft = -ys / std::conj(t);
    line.y_tf = -ys / t;
    line.y_tt = ys + ych;
}

EffectiveAdmittance effective_admittance(const Line& line, Direction dir) {
    if (dir == Direction::Forward)
        return {line.y_ft.real(), line.y_ft.imag(), line.y_ff.real(), line.y_ff.imag()};
    return {line.y_tf.real(), line.y_tf.imag(), line.y_tt.real(), line.y_tt.imag()};
}

EffectiveAdmittance effective_admittance(const Network& net, const Line& line,
                                         Direction dir) {
    if (!net.has_bus(line.from) || !net.has_bus(line.to))
        throw UnknownBus("line endpoints are not buses of this network");
    return effective_admittance(line, dir);
}

Direction direction_from(const Line& line, int bus_id) {
    if (bus_id == line.from) return Direction::Forward;
    if (bus_id == line.to) return Direction::Reverse;
    throw UnknownBus("bus " + std::to_string(bus_id) + " is not an endpoint of line " +
                     std::to_string(line.from) + "-" + std::to_string(line.to));
}

bool is_connected(const Network& net) {
    if (net.buses.empty()) return true;
    std::unordered_map<int, std::vector<int>> adj;
    for (const Line& l : net.lines) {
        adj[l.from].push_back(l.to);
        adj[l.to].push_back(l.from);
    }
    std::set<int> seen;
    std::queue<int> q;
    q.push(net.buses[0].id);
    seen.insert(net.buses[0].id);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj[u])
            if (seen.insert(v).second) q.push(v);
    }
    return seen.size() == net.buses.size();
}

std::vector<Violation> validate(const Network& net) {
    std::vector<Violation> out;
    std::set<int> ids;
    for (const Bus& b : net.buses) {
        if (!ids.insert(b.id).second)
            out.push_back({"duplicate_bus", "bus id " + std::to_string(b.id) + " repeated"});
        if (!(b.v_min > 0.0) || b.v_min > b.v_max)
            out.push_back({"voltage_bounds", "bus " + std::to_string(b.id) +
                                                 ": need 0 < v_min <= v_max"});
    }
    for (size_t i = 0; i < net.generators.size(); ++i) {
        const Generator& g = net.generators[i];
        if (!ids.count(g.bus))
            out.push_back({"dangling_generator", "generator " + std::to_string(i) +
                                                     " references bus " +
                                                     std::to_string(g.bus)});
        if (g.p_min > g.p_max || g.q_min > g.q_max)
            out.push_back({"generator_bounds",
                           "generator " + std::to_string(i) + ": inverted output bounds"});
        if (g.cost_c2 < 0)
            out.push_back({"generator_cost",
                           "generator " + std::to_string(i) + ": negative quadratic cost"});
    }
    for (size_t i = 0; i < net.lines.size(); ++i) {
        const Line& l = net.lines[i];
        if (!ids.count(l.from) || !ids.count(l.to))
            out.push_back({"dangling_line", "line " + std::to_string(i) +
                                                " references a missing bus"});
        if (l.from == l.to)
            out.push_back({"self_loop", "line " + std::to_string(i) + " is a self loop"});
        if (l.theta_min > 0.0 || l.theta_max < 0.0)
            out.push_back({"angle_bounds", "line " + std::to_string(i) +
                                               ": need theta_min <= 0 <= theta_max"});
        if (!(l.eta > 0.0) || !(l.eta < M_PI / 2))
            out.push_back({"eta_bound", "line " + std::to_string(i) +
                                            ": need 0 < eta < pi/2"});
        if (!(l.u_thermal > 0.0))
            out.push_back({"thermal_limit",
                           "line " + std::to_string(i) + ": need u_thermal > 0"});
    }
    bool refs_ok = std::all_of(out.begin(), out.end(), [](const Violation& v) {
        return v.code != "dangling_line" && v.code != "dangling_generator" &&
               v.code != "duplicate_bus";
    });
    if (refs_ok && !is_connected(net))
        out.push_back({"disconnected", "network graph is not connected"});
    return out;
}

}  // namespace opf
