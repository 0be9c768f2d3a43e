#include "opf/cycle_constraints.hpp"

#include <cmath>

namespace opf {

void PairRegistry::register_pair(int a, int b, int c_id, int s_id) {
    if (a == b) throw std::invalid_argument("pair endpoints must differ");
    auto key = std::minmax(a, b);
    pair_vars_[{key.first, key.second}] = {c_id, s_id};
}

int PairRegistry::c_diag(int bus) const {
    auto it = diag_.find(bus);
    if (it == diag_.end())
        throw UnknownPair("no diagonal variable for bus " + std::to_string(bus));
    return it->second;
}

bool PairRegistry::has_pair(int a, int b) const {
    auto key = std::minmax(a, b);
    return pair_vars_.count({key.first, key.second}) > 0;
}

PairRegistry::DirectedPair PairRegistry::directed(int from, int to) const {
    auto key = std::minmax(from, to);
    auto it = pair_vars_.find({key.first, key.second});
    if (it == pair_vars_.end())
        throw UnknownPair("no pair variables for buses " + std::to_string(from) + "," +
                          std::to_string(to));
    DirectedPair dp;
    dp.c = it->second.first;
    dp.s = it->second.second;
    dp.s_sign = from < to ? 1.0 : -1.0;
    return dp;
}

MultilinearExpr cycle_polynomial(const Cycle& cycle, const PairRegistry& reg) {
    int n = static_cast<int>(cycle.length());
    if (n < 3) throw WrongLength("cycle shorter than 3");
    if (n > 12) throw WrongLength("cycle polynomial capped at length 12");

    std::vector<PairRegistry::DirectedPair> dp;
    for (const CycleArc& a : cycle.arcs) dp.push_back(reg.directed(a.from, a.to));

    MultilinearExpr out;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        int card = __builtin_popcount(mask);
        if (card % 2 != 0) continue;
        double sign = ((card / 2) % 2 == 0) ? 1.0 : -1.0;
        std::vector<int> vars;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                sign *= dp[static_cast<size_t>(i)].s_sign;
                vars.push_back(dp[static_cast<size_t>(i)].s);
            } else {
                vars.push_back(dp[static_cast<size_t>(i)].c);
            }
        }
        out.add_term(sign, std::move(vars));
    }
    std::vector<int> diags;
    for (int v : cycle.vertices) diags.push_back(reg.c_diag(v));
    out.add_term(-1.0, std::move(diags));
    return out;
}

std::pair<MultilinearExpr, MultilinearExpr> three_cycle_system(
    const Cycle& cycle, const PairRegistry& reg) {
    if (cycle.length() != 3) throw WrongLength("three_cycle_system needs length 3");
    auto ab = reg.directed(cycle.arcs[0].from, cycle.arcs[0].to);
    auto bc = reg.directed(cycle.arcs[1].from, cycle.arcs[1].to);
    auto ca = reg.directed(cycle.arcs[2].from, cycle.arcs[2].to);
    int ccc = reg.c_diag(cycle.vertices[2]);

    MultilinearExpr q1;  // sin(t_ab) + sin(t_bc + t_ca) = 0, lifted
    q1.add_term(ab.s_sign, {ab.s, ccc});
    q1.add_term(bc.s_sign, {bc.s, ca.c});
    q1.add_term(ca.s_sign, {bc.c, ca.s});

    MultilinearExpr q2;  // cos(t_ab) - cos(t_bc + t_ca) = 0, lifted
    q2.add_term(1.0, {ab.c, ccc});
    q2.add_term(-1.0, {bc.c, ca.c});
    q2.add_term(bc.s_sign * ca.s_sign, {bc.s, ca.s});
    return {q1, q2};
}

std::pair<MultilinearExpr, MultilinearExpr> four_cycle_system(
    const Cycle& cycle, const PairRegistry& reg) {
    if (cycle.length() != 4) throw WrongLength("four_cycle_system needs length 4");
    auto ab = reg.directed(cycle.arcs[0].from, cycle.arcs[0].to);
    auto bc = reg.directed(cycle.arcs[1].from, cycle.arcs[1].to);
    auto cd = reg.directed(cycle.arcs[2].from, cycle.arcs[2].to);
    auto da = reg.directed(cycle.arcs[3].from, cycle.arcs[3].to);

    MultilinearExpr q1;  // sin(t_ab + t_cd) + sin(t_bc + t_da) = 0, lifted
    q1.add_term(ab.s_sign, {ab.s, cd.c});
    q1.add_term(cd.s_sign, {ab.c, cd.s});
    q1.add_term(bc.s_sign, {bc.s, da.c});
    q1.add_term(da.s_sign, {bc.c, da.s});

    MultilinearExpr q2;  // cos(t_ab + t_cd) - cos(t_bc + t_da) = 0, lifted
    q2.add_term(1.0, {ab.c, cd.c});
    q2.add_term(-ab.s_sign * cd.s_sign, {ab.s, cd.s});
    q2.add_term(-1.0, {bc.c, da.c});
    q2.add_term(bc.s_sign * da.s_sign, {bc.s, da.s});
    return {q1, q2};
}

bool check_cycle_condition(const std::vector<double>& theta, double tol) {
    double sum = 0.0;
    for (double t : theta) sum += t;
    return std::abs(std::remainder(sum, 2.0 * M_PI)) <= tol;
}

}  // namespace opf
