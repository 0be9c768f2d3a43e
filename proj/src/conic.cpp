#include "opf/conic.hpp"

#include <algorithm>
#include <locale>
#include <ostream>
#include <set>

namespace opf {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::NumericalFailure: return "numerical_failure";
    }
    return "unknown";
}

static void check_block(const ConeBlock& blk, int num_vars) {
    size_t min_size = blk.kind == ConeKind::Rotated ? 3 : 2;
    if (blk.members.size() < min_size)
        throw MalformedCone("cone block too small");
    std::set<int> seen;
    for (int v : blk.members) {
        if (v < 0 || v >= num_vars)
            throw MalformedCone("cone member references unknown variable");
        if (!seen.insert(v).second)
            throw MalformedCone("cone member repeated within a block");
    }
}

ConicProgram normalize(const ConicProgram& prog) {
    for (const ConeBlock& blk : prog.cones) check_block(blk, prog.num_vars());

    bool any_rotated = std::any_of(prog.cones.begin(), prog.cones.end(),
        [](const ConeBlock& b) { return b.kind == ConeKind::Rotated; });
    if (!any_rotated) return prog;

    ConicProgram out = prog;
    out.cones.clear();
    for (const ConeBlock& blk : prog.cones) {
        if (blk.kind == ConeKind::SecondOrder) {
            out.cones.push_back(blk);
            continue;
        }
        int u = blk.members[0];
        int v = blk.members[1];
        // u*v >= ||z||^2  <=>  ||(z, (u-v)/2)|| <= (u+v)/2
        int half_sum = out.add_var(out.names[u] + "+" + out.names[v]);
        int half_diff = out.add_var(out.names[u] + "-" + out.names[v]);
        out.add_eq({{{half_sum, 1.0}, {u, -0.5}, {v, -0.5}}, 0.0});
        out.add_eq({{{half_diff, 1.0}, {u, -0.5}, {v, 0.5}}, 0.0});
        std::vector<int> members;
        members.push_back(half_sum);
        members.insert(members.end(), blk.members.begin() + 2, blk.members.end());
        members.push_back(half_diff);
        out.cones.push_back(ConeBlock{ConeKind::SecondOrder, std::move(members)});
        out.lb[u] = std::max(out.lb[u], 0.0);
        out.lb[v] = std::max(out.lb[v], 0.0);
    }
    return out;
}

static void print_row(const ConicProgram& p, const LinearRow& row, const char* rel,
                      std::ostream& out) {
    bool first = true;
    for (const auto& [var, coef] : row.coeffs) {
        if (!first) out << " + ";
        out << coef << "*" << p.names[var];
        first = false;
    }
    if (first) out << "0";
    out << " " << rel << " " << row.rhs << "\n";
}

void dump(const ConicProgram& p, std::ostream& out) {
    std::locale saved = out.imbue(std::locale::classic());
    out << "min";
    for (int i = 0; i < p.num_vars(); ++i)
        if (p.obj[i] != 0.0) out << " + " << p.obj[i] << "*" << p.names[i];
    if (p.obj_constant != 0.0) out << " + " << p.obj_constant;
    out << "\n";
    for (int i = 0; i < p.num_vars(); ++i) {
        if (p.lb[i] == -kInf && p.ub[i] == kInf) continue;
        out << p.lb[i] << " <= " << p.names[i] << " <= " << p.ub[i] << "\n";
    }
    for (const auto& row : p.eq) print_row(p, row, "==", out);
    for (const auto& row : p.ineq) print_row(p, row, "<=", out);
    for (const auto& blk : p.cones) {
        out << (blk.kind == ConeKind::Rotated ? "rotated(" : "soc(");
        for (size_t i = 0; i < blk.members.size(); ++i)
            out << (i ? ", " : "") << p.names[blk.members[i]];
        out << ")\n";
    }
    out.imbue(saved);
}

}  // namespace opf
