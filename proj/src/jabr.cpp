#include "opf/jabr.hpp"

#include <algorithm>
#include <cmath>

namespace opf {

namespace {

std::pair<int, int> ordered(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

struct PairBounds {
    double c_lo, c_hi, s_lo, s_hi;
    double tan_eta = 0.0;  // 0 when no real line on the pair
    bool real = false;
};

}  // namespace

JabrBuild build_jabr_socp(const Network& net,
                          const std::set<std::pair<int, int>>& extra_pairs,
                          ObjectiveMode objective_mode) {
    JabrBuild out;
    ConicProgram& prog = out.program;
    JabrVariables& vars = out.vars;

    // angle interval and eta per real pair, intersected over parallel lines
    std::map<std::pair<int, int>, std::pair<double, double>> angle;
    std::map<std::pair<int, int>, double> eta;
    for (const Line& l : net.lines) {
        auto key = ordered(l.from, l.to);
        double lo = l.from < l.to ? l.theta_min : -l.theta_max;
        double hi = l.from < l.to ? l.theta_max : -l.theta_min;
        auto it = angle.find(key);
        if (it == angle.end()) {
            angle[key] = {lo, hi};
            eta[key] = l.eta;
        } else {
            it->second.first = std::max(it->second.first, lo);
            it->second.second = std::min(it->second.second, hi);
            eta[key] = std::min(eta[key], l.eta);
        }
    }

    for (const Bus& b : net.buses) {
        double lo = b.v_min * b.v_min, hi = b.v_max * b.v_max;
        if (!std::isfinite(lo) || !std::isfinite(hi) || hi <= 0)
            throw UnboundedBox("voltage box unusable at bus " + std::to_string(b.id));
        int id = prog.add_var("cjj_" + std::to_string(b.id), lo, hi);
        vars.registry.register_diag(b.id, id);
    }

    auto add_pair = [&](std::pair<int, int> key, bool real) {
        if (vars.registry.has_pair(key.first, key.second)) return;
        const Bus& bk = net.bus(key.first);
        const Bus& bm = net.bus(key.second);
        double vv_max = bk.v_max * bm.v_max;
        double vv_min = bk.v_min * bm.v_min;
        PairBounds pb;
        pb.real = real;
        if (real) {
            auto [tlo, thi] = angle.at(key);
            pb.c_lo = std::max(0.0, vv_min * std::min(std::cos(tlo), std::cos(thi)));
            pb.c_hi = vv_max;
            pb.s_lo = vv_max * std::sin(tlo);
            pb.s_hi = vv_max * std::sin(thi);
            pb.tan_eta = std::tan(eta.at(key));
        } else {
            pb.c_lo = -vv_max;
            pb.c_hi = vv_max;
            pb.s_lo = -vv_max;
            pb.s_hi = vv_max;
        }
        if (!std::isfinite(pb.c_lo) || !std::isfinite(pb.s_lo) || !std::isfinite(pb.c_hi))
            throw UnboundedBox("pair box unusable for " + std::to_string(key.first) +
                               "," + std::to_string(key.second));
        std::string tag = std::to_string(key.first) + "_" + std::to_string(key.second);
        int c_id = prog.add_var("c_" + tag, pb.c_lo, pb.c_hi);
        int s_id = prog.add_var("s_" + tag, pb.s_lo, pb.s_hi);
        vars.registry.register_pair(key.first, key.second, c_id, s_id);
        vars.pair_keys.push_back(key);
        if (!real) vars.auxiliary_pairs.insert(key);

        int ckk = vars.registry.c_diag(key.first);
        int cmm = vars.registry.c_diag(key.second);
        prog.add_cone(ConeKind::Rotated, {ckk, cmm, c_id, s_id});
        if (real) {
            prog.add_ineq({{{s_id, 1.0}, {c_id, -pb.tan_eta}}, 0.0});
            prog.add_ineq({{{s_id, -1.0}, {c_id, -pb.tan_eta}}, 0.0});
        }
    };

    for (const Line& l : net.lines) add_pair(ordered(l.from, l.to), true);
    for (const auto& key : extra_pairs) {
        if (key.first == key.second || !net.has_bus(key.first) || !net.has_bus(key.second))
            throw UnknownBus("auxiliary pair references a missing bus");
        add_pair(ordered(key.first, key.second), false);
    }

    for (size_t li = 0; li < net.lines.size(); ++li) {
        const Line& l = net.lines[li];
        std::string tag = std::to_string(li);
        vars.p_flow_fwd.push_back(prog.add_var("pf_" + tag));
        vars.q_flow_fwd.push_back(prog.add_var("qf_" + tag));
        vars.p_flow_rev.push_back(prog.add_var("pr_" + tag));
        vars.q_flow_rev.push_back(prog.add_var("qr_" + tag));

        auto dp = vars.registry.directed(l.from, l.to);
        int ckk = vars.registry.c_diag(l.from);
        int cmm = vars.registry.c_diag(l.to);
        EffectiveAdmittance f = effective_admittance(l, Direction::Forward);
        EffectiveAdmittance r = effective_admittance(l, Direction::Reverse);
        // P_km = Gff c_kk + Gft c_km + Bft s_km, with s_km = s_sign * s_var
        prog.add_eq({{{vars.p_flow_fwd[li], 1.0},
                      {ckk, -f.g_kk},
                      {dp.c, -f.g_km},
                      {dp.s, -f.b_km * dp.s_sign}},
                     0.0});
        prog.add_eq({{{vars.q_flow_fwd[li], 1.0},
                      {ckk, f.b_kk},
                      {dp.c, f.b_km},
                      {dp.s, -f.g_km * dp.s_sign}},
                     0.0});
        // reverse direction sees s_mk = -s_km
        prog.add_eq({{{vars.p_flow_rev[li], 1.0},
                      {cmm, -r.g_kk},
                      {dp.c, -r.g_km},
                      {dp.s, r.b_km * dp.s_sign}},
                     0.0});
        prog.add_eq({{{vars.q_flow_rev[li], 1.0},
                      {cmm, r.b_kk},
                      {dp.c, r.b_km},
                      {dp.s, r.g_km * dp.s_sign}},
                     0.0});

        double top = std::sqrt(l.u_thermal);
        if (!std::isfinite(top) || top <= 0)
            throw UnboundedBox("thermal limit unusable on line " + tag);
        int tvar = prog.add_var("smax_" + tag, top, top);
        prog.add_cone(ConeKind::SecondOrder,
                      {tvar, vars.p_flow_fwd[li], vars.q_flow_fwd[li]});
        int tvar2 = prog.add_var("smaxr_" + tag, top, top);
        prog.add_cone(ConeKind::SecondOrder,
                      {tvar2, vars.p_flow_rev[li], vars.q_flow_rev[li]});
        vars.thermal_top_fwd.push_back(tvar);
        vars.thermal_top_rev.push_back(tvar2);
    }

    for (size_t gi = 0; gi < net.generators.size(); ++gi) {
        const Generator& g = net.generators[gi];
        std::string tag = std::to_string(gi);
        vars.p_gen.push_back(prog.add_var("pg_" + tag, g.p_min, g.p_max));
        vars.q_gen.push_back(prog.add_var("qg_" + tag, g.q_min, g.q_max));
    }

    for (const Bus& b : net.buses) {
        LinearRow prow, qrow;
        for (int li : net.lines_at(b.id)) {
            const Line& l = net.lines[static_cast<size_t>(li)];
            if (l.from == b.id) {
                prow.coeffs.push_back({vars.p_flow_fwd[static_cast<size_t>(li)], 1.0});
                qrow.coeffs.push_back({vars.q_flow_fwd[static_cast<size_t>(li)], 1.0});
            }
            if (l.to == b.id) {
                prow.coeffs.push_back({vars.p_flow_rev[static_cast<size_t>(li)], 1.0});
                qrow.coeffs.push_back({vars.q_flow_rev[static_cast<size_t>(li)], 1.0});
            }
        }
        int cjj = vars.registry.c_diag(b.id);
        if (b.g_shunt != 0.0) prow.coeffs.push_back({cjj, b.g_shunt});
        if (b.b_shunt != 0.0) qrow.coeffs.push_back({cjj, -b.b_shunt});
        for (int gi : net.generators_at(b.id)) {
            prow.coeffs.push_back({vars.p_gen[static_cast<size_t>(gi)], -1.0});
            qrow.coeffs.push_back({vars.q_gen[static_cast<size_t>(gi)], -1.0});
        }
        prow.rhs = -b.p_load;
        qrow.rhs = -b.q_load;
        prog.add_eq(std::move(prow));
        prog.add_eq(std::move(qrow));
    }

    bool any_quadratic = std::any_of(net.generators.begin(), net.generators.end(),
                                     [](const Generator& g) { return g.cost_c2 > 0; });
    if (objective_mode == ObjectiveMode::Linear && any_quadratic)
        throw InvalidObjective("quadratic cost coefficients present in linear mode");

    for (size_t gi = 0; gi < net.generators.size(); ++gi) {
        const Generator& g = net.generators[gi];
        prog.obj[static_cast<size_t>(vars.p_gen[gi])] += g.cost_c1;
        prog.obj_constant += g.cost_c0;
        if (objective_mode == ObjectiveMode::Quadratic && g.cost_c2 > 0) {
            if (vars.unit_var < 0) vars.unit_var = prog.add_var("one", 1.0, 1.0);
            int epi = prog.add_var("tg_" + std::to_string(gi), 0.0, kInf);
            int rg = prog.add_var("rg_" + std::to_string(gi));
            prog.add_eq({{{rg, 1.0}, {vars.p_gen[gi], -std::sqrt(g.cost_c2)}}, 0.0});
            prog.add_cone(ConeKind::Rotated, {epi, vars.unit_var, rg});
            prog.obj[static_cast<size_t>(epi)] += 1.0;
            vars.cost_epi.push_back(epi);
            vars.cost_lin.push_back(rg);
        } else {
            vars.cost_epi.push_back(-1);
            vars.cost_lin.push_back(-1);
        }
    }

    vars.base_var_count = prog.num_vars();
    return out;
}

double PolarResiduals::inf_norm() const {
    double m = 0.0;
    for (const auto* grp :
         {&p_balance, &q_balance, &gen_bounds, &voltage_bounds, &angle_bounds, &thermal})
        for (double v : *grp) m = std::max(m, std::abs(v));
    return m;
}

PolarResiduals polar_residuals(const Network& net, const PolarPoint& point) {
    PolarResiduals res;
    auto vm = [&](int bus) { return point.v_mag.at(bus); };
    auto dl = [&](int bus) { return point.delta.at(bus); };

    // directed flows from the branch model
    std::vector<double> pf(net.lines.size()), qf(net.lines.size()),
        pr(net.lines.size()), qr(net.lines.size());
    for (size_t li = 0; li < net.lines.size(); ++li) {
        const Line& l = net.lines[li];
        double vk = vm(l.from), vmag = vm(l.to);
        double th = dl(l.from) - dl(l.to);
        EffectiveAdmittance f = effective_admittance(l, Direction::Forward);
        EffectiveAdmittance r = effective_admittance(l, Direction::Reverse);
        pf[li] = f.g_kk * vk * vk + vk * vmag * (f.g_km * std::cos(th) + f.b_km * std::sin(th));
        qf[li] = -f.b_kk * vk * vk + vk * vmag * (f.g_km * std::sin(th) - f.b_km * std::cos(th));
        pr[li] = r.g_kk * vmag * vmag + vmag * vk * (r.g_km * std::cos(th) - r.b_km * std::sin(th));
        qr[li] = -r.b_kk * vmag * vmag + vmag * vk * (-r.g_km * std::sin(th) - r.b_km * std::cos(th));
    }

    for (const Bus& b : net.buses) {
        double p = b.p_load + b.g_shunt * vm(b.id) * vm(b.id);
        double q = b.q_load - b.b_shunt * vm(b.id) * vm(b.id);
        for (int li : net.lines_at(b.id)) {
            if (net.lines[static_cast<size_t>(li)].from == b.id) {
                p += pf[static_cast<size_t>(li)];
                q += qf[static_cast<size_t>(li)];
            }
            if (net.lines[static_cast<size_t>(li)].to == b.id) {
                p += pr[static_cast<size_t>(li)];
                q += qr[static_cast<size_t>(li)];
            }
        }
        for (int gi : net.generators_at(b.id)) {
            p -= point.p_gen.at(static_cast<size_t>(gi));
            q -= point.q_gen.at(static_cast<size_t>(gi));
        }
        res.p_balance.push_back(p);
        res.q_balance.push_back(q);
    }

    for (size_t gi = 0; gi < net.generators.size(); ++gi) {
        const Generator& g = net.generators[gi];
        double pv = point.p_gen.at(gi), qv = point.q_gen.at(gi);
        double viol = std::max({0.0, g.p_min - pv, pv - g.p_max, g.q_min - qv, qv - g.q_max});
        res.gen_bounds.push_back(viol);
    }
    for (const Bus& b : net.buses)
        res.voltage_bounds.push_back(
            std::max({0.0, b.v_min - vm(b.id), vm(b.id) - b.v_max}));
    for (const Line& l : net.lines) {
        double th = dl(l.from) - dl(l.to);
        res.angle_bounds.push_back(std::max({0.0, l.theta_min - th, th - l.theta_max}));
    }
    for (size_t li = 0; li < net.lines.size(); ++li) {
        const Line& l = net.lines[li];
        res.thermal.push_back(std::max(0.0, pf[li] * pf[li] + qf[li] * qf[li] - l.u_thermal));
        res.thermal.push_back(std::max(0.0, pr[li] * pr[li] + qr[li] * qr[li] - l.u_thermal));
    }
    return res;
}

std::map<std::pair<int, int>, double> jabr_tightness(const JabrVariables& vars,
                                                     const std::vector<double>& values) {
    std::map<std::pair<int, int>, double> out;
    for (const auto& key : vars.pair_keys) {
        auto dp = vars.registry.directed(key.first, key.second);
        double ckk = values[static_cast<size_t>(vars.registry.c_diag(key.first))];
        double cmm = values[static_cast<size_t>(vars.registry.c_diag(key.second))];
        double c = values[static_cast<size_t>(dp.c)];
        double s = values[static_cast<size_t>(dp.s)];
        out[key] = ckk * cmm - c * c - s * s;
    }
    return out;
}

std::vector<double> lift_polar(const Network& net, const JabrVariables& vars,
                               const PolarPoint& point) {
    std::vector<double> x(static_cast<size_t>(vars.base_var_count), 0.0);
    auto vm = [&](int bus) { return point.v_mag.at(bus); };
    auto dl = [&](int bus) { return point.delta.at(bus); };

    for (const Bus& b : net.buses)
        x[static_cast<size_t>(vars.registry.c_diag(b.id))] = vm(b.id) * vm(b.id);
    for (const auto& key : vars.pair_keys) {
        auto dp = vars.registry.directed(key.first, key.second);
        double th = dl(key.first) - dl(key.second);
        double vv = vm(key.first) * vm(key.second);
        x[static_cast<size_t>(dp.c)] = vv * std::cos(th);
        x[static_cast<size_t>(dp.s)] = vv * std::sin(th);
    }
    for (size_t li = 0; li < net.lines.size(); ++li) {
        const Line& l = net.lines[li];
        double vk = vm(l.from), vmt = vm(l.to);
        double th = dl(l.from) - dl(l.to);
        EffectiveAdmittance f = effective_admittance(l, Direction::Forward);
        EffectiveAdmittance r = effective_admittance(l, Direction::Reverse);
        x[static_cast<size_t>(vars.p_flow_fwd[li])] =
            f.g_kk * vk * vk + vk * vmt * (f.g_km * std::cos(th) + f.b_km * std::sin(th));
        x[static_cast<size_t>(vars.q_flow_fwd[li])] =
            -f.b_kk * vk * vk + vk * vmt * (f.g_km * std::sin(th) - f.b_km * std::cos(th));
        x[static_cast<size_t>(vars.p_flow_rev[li])] =
            r.g_kk * vmt * vmt + vmt * vk * (r.g_km * std::cos(th) - r.b_km * std::sin(th));
        x[static_cast<size_t>(vars.q_flow_rev[li])] =
            -r.b_kk * vmt * vmt + vmt * vk * (-r.g_km * std::sin(th) - r.b_km * std::cos(th));
    }
    for (size_t gi = 0; gi < net.generators.size(); ++gi) {
        x[static_cast<size_t>(vars.p_gen[gi])] = point.p_gen.at(gi);
        x[static_cast<size_t>(vars.q_gen[gi])] = point.q_gen.at(gi);
    }
    for (size_t li = 0; li < net.lines.size(); ++li) {
        double top = std::sqrt(net.lines[li].u_thermal);
        x[static_cast<size_t>(vars.thermal_top_fwd[li])] = top;
        x[static_cast<size_t>(vars.thermal_top_rev[li])] = top;
    }
    if (vars.unit_var >= 0) x[static_cast<size_t>(vars.unit_var)] = 1.0;
    for (size_t gi = 0; gi < net.generators.size(); ++gi) {
        if (vars.cost_epi[gi] < 0) continue;
        double c2 = net.generators[gi].cost_c2;
        double pg = point.p_gen.at(gi);
        x[static_cast<size_t>(vars.cost_epi[gi])] = c2 * pg * pg;
        x[static_cast<size_t>(vars.cost_lin[gi])] = std::sqrt(c2) * pg;
    }
    return x;
}

}  // namespace opf
