#include "opf/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace opf {

const char* to_string(Strengthening s) {
    switch (s) {
        case Strengthening::None: return "none";
        case Strengthening::Mc34: return "mc34";
        case Strengthening::Dual34: return "dual34";
    }
    return "?";
}

std::optional<Strengthening> parse_strengthening(const std::string& name) {
    if (name == "none") return Strengthening::None;
    if (name == "mc34") return Strengthening::Mc34;
    if (name == "dual34") return Strengthening::Dual34;
    return std::nullopt;
}

int default_root(const Network& net) {
    int best = net.buses.empty() ? 0 : net.buses.front().id;
    bool found = false;
    for (const Generator& g : net.generators) {
        if (!found || g.bus < best) {
            best = g.bus;
            found = true;
        }
    }
    return best;
}

namespace {

void merge(ConicProgram& prog, const LinearRelaxation& rel) {
    std::vector<LinearRelaxation::NewVar> ordered = rel.new_vars;
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    for (const auto& nv : ordered) {
        int id = prog.add_var("w" + std::to_string(nv.id), nv.lo, nv.hi);
        if (id != nv.id)
            throw std::logic_error("relaxation variable ids out of sync with program");
    }
    for (const auto& row : rel.equalities) prog.add_eq(row);
    for (const auto& row : rel.inequalities) prog.add_ineq(row);
}

struct SmallCycles {
    std::vector<Cycle> three, four;
    std::set<std::pair<int, int>> aux_pairs;
};

SmallCycles collect_small_cycles(const CycleBasis& basis, CycleSource source) {
    SmallCycles out;
    for (const Cycle& cyc : basis.cycles) {
        Cycle anchored = rotate_to_lowest(cyc);
        std::vector<Cycle> smalls;
        if (source == CycleSource::BasisDecomposed)
            smalls = decompose_cycle(anchored, anchored.vertices[0]);
        else if (anchored.length() <= 4)
            smalls = {anchored};
        for (Cycle& sc : smalls) {
            for (const CycleArc& a : sc.arcs)
                if (a.auxiliary)
                    out.aux_pairs.insert({std::min(a.from, a.to), std::max(a.from, a.to)});
            if (sc.length() == 3)
                out.three.push_back(std::move(sc));
            else
                out.four.push_back(std::move(sc));
        }
    }
    return out;
}

Hyperbox box_from_program(const ConicProgram& prog, const JabrVariables& vars) {
    Hyperbox box;
    for (const auto& [bus, id] : vars.registry.diagonals())
        box.set(id, prog.lb[static_cast<size_t>(id)], prog.ub[static_cast<size_t>(id)]);
    for (const auto& [key, cs] : vars.registry.pairs()) {
        box.set(cs.first, prog.lb[static_cast<size_t>(cs.first)],
                prog.ub[static_cast<size_t>(cs.first)]);
        box.set(cs.second, prog.lb[static_cast<size_t>(cs.second)],
                prog.ub[static_cast<size_t>(cs.second)]);
    }
    return box;
}

}  // namespace

RelaxationReport run(const Network& net, const std::string& case_name,
                     const VariantSpec& variant, const ReferenceObjectives& refs,
                     std::optional<int> root_override) {
    auto violations = validate(net);
    if (!violations.empty()) {
        std::string msg = "network failed validation:";
        for (const auto& v : violations) msg += " [" + v.code + "] " + v.message;
        throw std::invalid_argument(msg);
    }

    RelaxationReport rep;
    rep.case_name = case_name;
    rep.variant = to_string(variant.strengthening);
    rep.root = root_override.value_or(default_root(net));

    CycleBasis basis = fundamental_cycle_basis(net, rep.root);

    SmallCycles smalls;
    if (variant.strengthening != Strengthening::None)
        smalls = collect_small_cycles(basis, variant.cycle_source);

    JabrBuild build = build_jabr_socp(net, smalls.aux_pairs, variant.objective_mode);
    ConicProgram& prog = build.program;
    const JabrVariables& vars = build.vars;

    int base_rows = static_cast<int>(prog.eq.size() + prog.ineq.size());
    if (variant.strengthening != Strengthening::None) {
        Hyperbox box = box_from_program(prog, vars);
        std::vector<MultilinearExpr> exprs;
        std::vector<MultilinearExpr> three_exprs, four_exprs;
        for (const Cycle& c : smalls.three) {
            auto [q1, q2] = three_cycle_system(c, vars.registry);
            exprs.push_back(q1);
            exprs.push_back(q2);
            three_exprs.push_back(std::move(q1));
            three_exprs.push_back(std::move(q2));
        }
        for (const Cycle& c : smalls.four) {
            auto [q1, q2] = four_cycle_system(c, vars.registry);
            exprs.push_back(q1);
            exprs.push_back(q2);
            four_exprs.push_back(std::move(q1));
            four_exprs.push_back(std::move(q2));
        }

        IdAllocator ids(prog.num_vars());
        merge(prog, relax_system_mccormick(exprs, box, ids));
        if (variant.strengthening == Strengthening::Dual34) {
            for (const auto& e : three_exprs) {
                LinearRelaxation rel = grouped_dual_formulation(e, {}, box, ids);
                rel.equalities.push_back({{{*rel.value_var, 1.0}}, 0.0});
                merge(prog, rel);
            }
            for (const auto& e : four_exprs) {
                LinearRelaxation rel = dual_hull_formulation(e, box, ids);
                rel.equalities.push_back({{{*rel.value_var, 1.0}}, 0.0});
                merge(prog, rel);
            }
        }
    }
    rep.num_cuts = static_cast<int>(prog.eq.size() + prog.ineq.size()) - base_rows;
    rep.num_vars = prog.num_vars();
    rep.num_cones = static_cast<int>(prog.cones.size());
    {
        std::ostringstream note;
        note << "basis_cycles=" << basis.cycles.size() << " small3=" << smalls.three.size()
             << " small4=" << smalls.four.size() << " aux_pairs=" << smalls.aux_pairs.size();
        rep.note = note.str();
    }

    SolverSettings settings;
    settings.tol = variant.solver_tol;
    auto t0 = std::chrono::steady_clock::now();
    Solution sol = solve(prog, settings);
    auto t1 = std::chrono::steady_clock::now();
    rep.solve_time_sec = std::chrono::duration<double>(t1 - t0).count();
    rep.status = sol.status;
    if (sol.status != SolveStatus::Optimal) return rep;

    rep.lower_bound = sol.objective;
    rep.solver_residual = sol.max_residual;
    if (refs.has(case_name)) {
        double ref = refs.at(case_name);
        rep.reference = ref;
        rep.gap_percent = 100.0 * (ref - sol.objective) / ref;
    }
    rep.exactness = certify(net, vars, sol.primal, basis, variant.recovery_tol);
    return rep;
}

namespace {

nlohmann::json exactness_to_json(const ExactnessReport& ex) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [key, r] : ex.soc_residuals)
        pairs.push_back({{"from", key.first}, {"to", key.second}, {"residual", r}});
    return {
        {"exact", ex.exact},
        {"max_soc_residual", ex.max_soc},
        {"max_cycle_residual", ex.max_cycle},
        {"polar_residual_inf", ex.polar_residual_inf},
        {"cycle_residuals", ex.cycle_residuals},
        {"soc_residuals", pairs},
    };
}

}  // namespace

std::string reports_to_json(const std::vector<RelaxationReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) {
        nlohmann::json j{
            {"schema", 1},
            {"case", r.case_name},
            {"variant", r.variant},
            {"status", to_string(r.status)},
            {"lower_bound", r.lower_bound},
            {"solve_time_sec", r.solve_time_sec},
            {"solver_residual", r.solver_residual},
            {"num_vars", r.num_vars},
            {"num_cones", r.num_cones},
            {"num_cuts", r.num_cuts},
            {"root", r.root},
            {"note", r.note},
        };
        if (r.reference) j["reference"] = *r.reference;
        if (r.gap_percent) j["gap_percent"] = *r.gap_percent;
        if (r.status == SolveStatus::Optimal) j["exactness"] = exactness_to_json(r.exactness);
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

std::string reports_to_csv(const std::vector<RelaxationReport>& reports) {
    std::ostringstream out;
    out << "case,variant,status,lower_bound,reference,gap_percent,solve_time_sec,"
           "num_vars,num_cones,num_cuts,exact,max_soc_residual,max_cycle_residual,"
           "polar_residual_inf\n";
    out.precision(12);
    for (const auto& r : reports) {
        out << r.case_name << "," << r.variant << "," << to_string(r.status) << ","
            << r.lower_bound << ",";
        if (r.reference) out << *r.reference;
        out << ",";
        if (r.gap_percent) out << *r.gap_percent;
        out << "," << r.solve_time_sec << "," << r.num_vars << "," << r.num_cones << ","
            << r.num_cuts << "," << (r.exactness.exact ? 1 : 0) << ","
            << r.exactness.max_soc << "," << r.exactness.max_cycle << ","
            << r.exactness.polar_residual_inf << "\n";
    }
    return out.str();
}

}  // namespace opf
