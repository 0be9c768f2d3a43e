#include "opf/recovery.hpp"

#include <cmath>
#include <queue>

namespace opf {

namespace {
double wrap_pi(double a) {
    double r = std::remainder(a, 2.0 * M_PI);
    return r <= -M_PI ? r + 2.0 * M_PI : r;
}
}  // namespace

std::map<int, double> recover_magnitudes(const std::map<int, double>& c_diag) {
    std::map<int, double> out;
    for (const auto& [bus, c] : c_diag) {
        if (c < -1e-9)
            throw NegativeDiagonal("c_" + std::to_string(bus) + "," +
                                   std::to_string(bus) + " = " + std::to_string(c));
        out[bus] = std::sqrt(std::max(c, 0.0));
    }
    return out;
}

double pair_angle(double c, double s) {
    if (std::hypot(c, s) < 1e-300) throw ZeroPair("pair variables both zero");
    return std::atan2(s, c);
}

std::map<int, double> recover_angles(const Network& net,
                                     const std::map<std::pair<int, int>, double>& theta,
                                     int root) {
    auto tree = spanning_tree(net, root);  // throws DisconnectedGraph
    std::map<int, std::vector<int>> children;
    for (const auto& [u, v] : tree) children[u].push_back(v);

    auto theta_dir = [&](int k, int m) {
        auto it = theta.find({std::min(k, m), std::max(k, m)});
        if (it == theta.end())
            throw std::invalid_argument("missing pair angle for tree arc " +
                                        std::to_string(k) + "," + std::to_string(m));
        return k < m ? it->second : -it->second;
    };

    std::map<int, double> delta;
    delta[root] = 0.0;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
        int k = q.front();
        q.pop();
        for (int m : children[k]) {
            delta[m] = wrap_pi(delta[k] - theta_dir(k, m));
            q.push(m);
        }
    }
    return delta;
}

PolarPoint recover_polar_point(const Network& net, const JabrVariables& vars,
                               const std::vector<double>& values, int root) {
    std::map<int, double> c_diag;
    for (const Bus& b : net.buses)
        c_diag[b.id] = values[static_cast<size_t>(vars.registry.c_diag(b.id))];

    std::map<std::pair<int, int>, double> theta;
    for (const auto& key : vars.pair_keys) {
        auto dp = vars.registry.directed(key.first, key.second);
        theta[key] = pair_angle(values[static_cast<size_t>(dp.c)],
                                values[static_cast<size_t>(dp.s)]);
    }

    PolarPoint pt;
    pt.v_mag = recover_magnitudes(c_diag);
    pt.delta = recover_angles(net, theta, root);
    for (size_t gi = 0; gi < net.generators.size(); ++gi) {
        pt.p_gen.push_back(values[static_cast<size_t>(vars.p_gen[gi])]);
        pt.q_gen.push_back(values[static_cast<size_t>(vars.q_gen[gi])]);
    }
    return pt;
}

ExactnessReport certify(const Network& net, const JabrVariables& vars,
                        const std::vector<double>& values, const CycleBasis& basis,
                        const RecoveryTolerances& tol) {
    ExactnessReport rep;
    rep.soc_residuals = jabr_tightness(vars, values);
    // auxiliary pairs are free lifting variables; their slack does not affect
    // feasibility of the recovered polar point
    for (const auto& [key, r] : rep.soc_residuals)
        if (!vars.auxiliary_pairs.count(key))
            rep.max_soc = std::max(rep.max_soc, std::abs(r));

    for (const Cycle& cyc : basis.cycles) {
        double sum = 0.0;
        for (const CycleArc& a : cyc.arcs) {
            auto dp = vars.registry.directed(a.from, a.to);
            sum += dp.s_sign * pair_angle(values[static_cast<size_t>(dp.c)],
                                          values[static_cast<size_t>(dp.s)]) *
                   1.0;
        }
        rep.cycle_residuals.push_back(std::abs(std::remainder(sum, 2.0 * M_PI)));
    }
    for (double r : rep.cycle_residuals) rep.max_cycle = std::max(rep.max_cycle, r);

    PolarPoint pt = recover_polar_point(net, vars, values, basis.root);
    rep.polar_residual_inf = polar_residuals(net, pt).inf_norm();

    rep.exact = rep.max_soc <= tol.soc && rep.max_cycle <= tol.cycle &&
                rep.polar_residual_inf <= tol.polar;
    return rep;
}

}  // namespace opf
