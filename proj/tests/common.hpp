#ifndef OPF_TESTS_COMMON_HPP
#define OPF_TESTS_COMMON_HPP

#include <cmath>
#include <random>
#include <string>

#include "opf/matpower.hpp"
#include "opf/network.hpp"

namespace opf::testing {

inline Bus make_bus(int id, double p_load = 0.0, double q_load = 0.0) {
    Bus b;
    b.id = id;
    b.v_min = 0.9;
    b.v_max = 1.1;
    b.p_load = p_load;
    b.q_load = q_load;
    return b;
}

inline Line make_line(int from, int to, double r = 0.01, double x = 0.1,
                      double b_charge = 0.0, double tap = 1.0, double shift = 0.0) {
    Line l;
    l.from = from;
    l.to = to;
    l.r = r;
    l.x = x;
    l.b_charge = b_charge;
    l.tap = tap;
    l.shift = shift;
    l.theta_min = -M_PI / 6;
    l.theta_max = M_PI / 6;
    l.eta = M_PI / 6;
    l.u_thermal = 25.0;
    compute_branch_admittance(l);
    return l;
}

inline Generator make_gen(int bus, double p_max = 5.0, double c1 = 10.0,
                          double c2 = 0.0) {
    Generator g;
    g.bus = bus;
    g.p_min = 0.0;
    g.p_max = p_max;
    g.q_min = -5.0;
    g.q_max = 5.0;
    g.cost_c2 = c2;
    g.cost_c1 = c1;
    g.cost_c0 = 0.0;
    return g;
}

/// Connected random network: a random tree plus `extra_edges` chords.
inline Network random_network(std::mt19937& rng, int n_buses, int extra_edges) {
    Network net;
    net.name = "random";
    std::uniform_real_distribution<double> rr(0.005, 0.05), xx(0.02, 0.2);
    std::uniform_real_distribution<double> load(0.0, 1.0);
    for (int i = 1; i <= n_buses; ++i)
        net.buses.push_back(make_bus(i, load(rng), load(rng) * 0.4));
    for (int i = 2; i <= n_buses; ++i) {
        std::uniform_int_distribution<int> pick(1, i - 1);
        net.lines.push_back(make_line(pick(rng), i, rr(rng), xx(rng)));
    }
    int added = 0, guard = 0;
    std::uniform_int_distribution<int> pick(1, n_buses);
    while (added < extra_edges && guard++ < 200) {
        int a = pick(rng), b = pick(rng);
        if (a == b) continue;
        bool dup = false;
        for (const Line& l : net.lines)
            dup = dup || (std::min(l.from, l.to) == std::min(a, b) &&
                          std::max(l.from, l.to) == std::max(a, b));
        if (dup) continue;
        net.lines.push_back(make_line(a, b, rr(rng), xx(rng)));
        ++added;
    }
    net.generators.push_back(make_gen(1, 30.0));
    return net;
}

/// Radial five-bus feeder: generators at buses 1 and 3, loads downstream.
inline std::string five_bus_feeder_case() {
    return R"(function mpc = feeder5
mpc.version = '2';
mpc.baseMVA = 100;
mpc.bus = [
 1 3 0  0  0 0 1 1 0 135 1 1.06 0.94;
 2 1 20 8  0 0 1 1 0 135 1 1.06 0.94;
 3 2 25 10 0 0 1 1 0 135 1 1.06 0.94;
 4 1 30 12 0 0 1 1 0 135 1 1.06 0.94;
 5 1 15 6  0 0 1 1 0 135 1 1.06 0.94;
];
mpc.gen = [
 1 0 0 60 -60 1 100 1 120 0 0 0 0 0 0 0 0 0 0 0 0;
 3 0 0 30 -30 1 100 1 40  0 0 0 0 0 0 0 0 0 0 0 0;
];
mpc.branch = [
 1 2 0.02 0.08 0 120 0 0 0 0 1 -360 360;
 2 3 0.025 0.09 0 100 0 0 0 0 1 -360 360;
 3 4 0.03 0.1  0 100 0 0 0 0 1 -360 360;
 4 5 0.02 0.07 0 60  0 0 0 0 1 -360 360;
];
mpc.gencost = [
 2 0 0 3 0.05 12 0;
 2 0 0 3 0.08 25 0;
];
)";
}

inline std::string data_path(const std::string& file) {
    return std::string(OPF_DATA_DIR) + "/" + file;
}

inline Network load_case(const std::string& file) {
    return parse_case(read_file(data_path(file)));
}

}  // namespace opf::testing

#endif
