#include "opf/convexify.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace opf {

void Hyperbox::set(int var, double lo, double hi) {
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw std::invalid_argument("hyperbox bounds must be finite and ordered");
    bounds_[var] = {lo, hi};
}

double Hyperbox::lower(int var) const {
    auto it = bounds_.find(var);
    if (it == bounds_.end())
        throw std::out_of_range("no bounds for variable " + std::to_string(var));
    return it->second.first;
}

double Hyperbox::upper(int var) const {
    auto it = bounds_.find(var);
    if (it == bounds_.end())
        throw std::out_of_range("no bounds for variable " + std::to_string(var));
    return it->second.second;
}

std::vector<LinearRow> mccormick_bilinear(int x_id, double xlo, double xhi, int y_id,
                                          double ylo, double yhi, int w_id) {
    std::vector<LinearRow> rows;
    rows.push_back({{{w_id, -1.0}, {x_id, ylo}, {y_id, xlo}}, xlo * ylo});
    rows.push_back({{{w_id, -1.0}, {x_id, yhi}, {y_id, xhi}}, xhi * yhi});
    rows.push_back({{{w_id, 1.0}, {x_id, -ylo}, {y_id, -xhi}}, -xhi * ylo});
    rows.push_back({{{w_id, 1.0}, {x_id, -yhi}, {y_id, -xlo}}, -xlo * yhi});
    return rows;
}

LinearRelaxation relax_system_mccormick(const std::vector<MultilinearExpr>& exprs,
                                        const Hyperbox& box, IdAllocator& ids) {
    for (const auto& e : exprs)
        if (e.max_degree() > 2)
            throw DegreeTooHigh("McCormick relaxation needs degree <= 2");

    LinearRelaxation out;
    std::map<std::pair<int, int>, int> aux;  // unordered pair -> w id
    for (const auto& e : exprs) {
        for (const auto& t : e.terms) {
            if (t.vars.size() != 2) continue;
            std::pair<int, int> key{t.vars[0], t.vars[1]};
            if (aux.count(key)) continue;
            double xlo = box.lower(key.first), xhi = box.upper(key.first);
            double ylo = box.lower(key.second), yhi = box.upper(key.second);
            int w = ids.fresh();
            aux[key] = w;
            double corners[4] = {xlo * ylo, xlo * yhi, xhi * ylo, xhi * yhi};
            out.new_vars.push_back({w, *std::min_element(corners, corners + 4),
                                    *std::max_element(corners, corners + 4)});
            for (auto& row : mccormick_bilinear(key.first, xlo, xhi, key.second, ylo,
                                                yhi, w))
                out.inequalities.push_back(std::move(row));
            out.aux_pairs[w] = key;
        }
    }
    for (const auto& e : exprs) {
        LinearRow row;
        for (const auto& t : e.terms) {
            if (t.vars.size() == 2)
                row.coeffs.push_back({aux.at({t.vars[0], t.vars[1]}), t.coef});
            else if (t.vars.size() == 1)
                row.coeffs.push_back({t.vars[0], t.coef});
        }
        row.rhs = -e.constant;
        out.equalities.push_back(std::move(row));
    }
    return out;
}

namespace {

// vertex v of the box over `vars`, bit i choosing the upper bound of vars[i]
std::vector<double> box_vertex(const std::vector<int>& vars, const Hyperbox& box,
                               unsigned mask) {
    std::vector<double> v(vars.size());
    for (size_t i = 0; i < vars.size(); ++i)
        v[i] = (mask & (1u << i)) ? box.upper(vars[i]) : box.lower(vars[i]);
    return v;
}

double eval_at(const MultilinearExpr& e, const std::vector<int>& vars,
               const std::vector<double>& vals) {
    return e.eval([&](int var) {
        auto it = std::lower_bound(vars.begin(), vars.end(), var);
        return vals[static_cast<size_t>(it - vars.begin())];
    });
}

}  // namespace

LinearRelaxation dual_hull_formulation(const MultilinearExpr& expr, const Hyperbox& box,
                                       IdAllocator& ids) {
    std::vector<int> vars = expr.distinct_vars();
    int k = static_cast<int>(vars.size());
    if (k > 16) throw DimensionTooLarge("dual formulation capped at 16 variables");

    LinearRelaxation out;
    unsigned count = 1u << k;
    std::vector<int> lambda(count);
    std::vector<double> phi(count);
    double phi_lo = kInf, phi_hi = -kInf;
    for (unsigned m = 0; m < count; ++m) {
        lambda[m] = ids.fresh();
        out.new_vars.push_back({lambda[m], 0.0, 1.0});
        phi[m] = eval_at(expr, vars, box_vertex(vars, box, m));
        phi_lo = std::min(phi_lo, phi[m]);
        phi_hi = std::max(phi_hi, phi[m]);
    }
    int w = ids.fresh();
    out.new_vars.push_back({w, phi_lo, phi_hi});
    out.value_var = w;

    for (int i = 0; i < k; ++i) {
        LinearRow row;
        for (unsigned m = 0; m < count; ++m) {
            double vi = (m & (1u << i)) ? box.upper(vars[static_cast<size_t>(i)])
                                        : box.lower(vars[static_cast<size_t>(i)]);
            row.coeffs.push_back({lambda[m], vi});
        }
        row.coeffs.push_back({vars[static_cast<size_t>(i)], -1.0});
        out.equalities.push_back(std::move(row));
    }
    LinearRow wrow;
    for (unsigned m = 0; m < count; ++m) wrow.coeffs.push_back({lambda[m], phi[m]});
    wrow.coeffs.push_back({w, -1.0});
    out.equalities.push_back(std::move(wrow));
    LinearRow sum;
    for (unsigned m = 0; m < count; ++m) sum.coeffs.push_back({lambda[m], 1.0});
    sum.rhs = 1.0;
    out.equalities.push_back(std::move(sum));
    return out;
}

LinearRelaxation grouped_dual_formulation(const MultilinearExpr& expr,
                                          const std::vector<int>& shared_vars,
                                          const Hyperbox& box, IdAllocator& ids) {
    std::set<int> shared(shared_vars.begin(), shared_vars.end());
    std::set<int> used_private;
    for (const auto& t : expr.terms) {
        int in_shared = 0;
        for (int v : t.vars)
            if (shared.count(v)) ++in_shared;
        if (in_shared > 1)
            throw DecompositionInvalid("monomial nonlinear in the shared variables");
        for (int v : t.vars) {
            if (shared.count(v)) continue;
            if (!used_private.insert(v).second)
                throw DecompositionInvalid("private variable sets overlap");
        }
    }

    LinearRelaxation out;
    int w = ids.fresh();
    out.value_var = w;
    LinearRow total{{{w, -1.0}}, -expr.constant};

    double w_lo = expr.constant, w_hi = expr.constant;
    std::vector<LinearRelaxation::NewVar> w_parts;
    for (const auto& t : expr.terms) {
        std::vector<int> block_vars(shared.begin(), shared.end());
        for (int v : t.vars)
            if (!shared.count(v)) block_vars.push_back(v);
        std::sort(block_vars.begin(), block_vars.end());
        int kb = static_cast<int>(block_vars.size());
        if (kb > 16) throw DimensionTooLarge("grouped block exceeds 16 variables");

        MultilinearExpr mono;
        mono.add_term(t.coef, t.vars);

        unsigned count = 1u << kb;
        std::vector<int> lambda(count);
        std::vector<double> phi(count);
        double lo = kInf, hi = -kInf;
        for (unsigned m = 0; m < count; ++m) {
            lambda[m] = ids.fresh();
            out.new_vars.push_back({lambda[m], 0.0, 1.0});
            phi[m] = eval_at(mono, block_vars, box_vertex(block_vars, box, m));
            lo = std::min(lo, phi[m]);
            hi = std::max(hi, phi[m]);
        }
        int wi = ids.fresh();
        out.new_vars.push_back({wi, lo, hi});
        w_lo += lo;
        w_hi += hi;

        for (int i = 0; i < kb; ++i) {
            LinearRow row;
            for (unsigned m = 0; m < count; ++m) {
                double vi = (m & (1u << i)) ? box.upper(block_vars[static_cast<size_t>(i)])
                                            : box.lower(block_vars[static_cast<size_t>(i)]);
                row.coeffs.push_back({lambda[m], vi});
            }
            row.coeffs.push_back({block_vars[static_cast<size_t>(i)], -1.0});
            out.equalities.push_back(std::move(row));
        }
        LinearRow wrow;
        for (unsigned m = 0; m < count; ++m) wrow.coeffs.push_back({lambda[m], phi[m]});
        wrow.coeffs.push_back({wi, -1.0});
        out.equalities.push_back(std::move(wrow));
        LinearRow sum;
        for (unsigned m = 0; m < count; ++m) sum.coeffs.push_back({lambda[m], 1.0});
        sum.rhs = 1.0;
        out.equalities.push_back(std::move(sum));

        total.coeffs.push_back({wi, 1.0});
    }
    out.new_vars.push_back({w, w_lo, w_hi});
    out.equalities.push_back(std::move(total));
    return out;
}

namespace {

struct MembershipLp {
    ConicProgram lp;
    std::vector<int> link_rows;  // rows matching (x..., w...) order
    int sum_row = -1;
    double scale = 1.0;
};

double point_value(const std::vector<PointValue>& pt, int var) {
    for (const auto& pv : pt)
        if (pv.var == var) return pv.value;
    throw std::invalid_argument("point is missing variable " + std::to_string(var));
}

MembershipLp build_membership_lp(const std::vector<PointValue>& x_point,
                                 const std::vector<double>& w_values,
                                 const std::vector<MultilinearExpr>& exprs,
                                 const Hyperbox& box) {
    std::set<int> var_set;
    for (const auto& e : exprs) {
        auto dv = e.distinct_vars();
        var_set.insert(dv.begin(), dv.end());
    }
    std::vector<int> vars(var_set.begin(), var_set.end());
    int k = static_cast<int>(vars.size());
    if (k > 16) throw DimensionTooLarge("membership LP capped at 16 variables");

    MembershipLp out;
    ConicProgram& lp = out.lp;
    unsigned count = 1u << k;
    std::vector<int> lambda(count);
    for (unsigned m = 0; m < count; ++m)
        lambda[m] = lp.add_var("l" + std::to_string(m), 0.0, 1.0);

    std::vector<LinearRow> rows;
    std::vector<double> targets;
    for (int i = 0; i < k; ++i) {
        LinearRow row;
        for (unsigned m = 0; m < count; ++m) {
            double vi = (m & (1u << i)) ? box.upper(vars[static_cast<size_t>(i)])
                                        : box.lower(vars[static_cast<size_t>(i)]);
            row.coeffs.push_back({lambda[m], vi});
        }
        rows.push_back(std::move(row));
        targets.push_back(point_value(x_point, vars[static_cast<size_t>(i)]));
    }
    for (size_t e = 0; e < exprs.size(); ++e) {
        LinearRow row;
        for (unsigned m = 0; m < count; ++m)
            row.coeffs.push_back(
                {lambda[m], eval_at(exprs[e], vars, box_vertex(vars, box, m))});
        rows.push_back(std::move(row));
        targets.push_back(w_values[e]);
    }

    double scale = 1.0;
    for (double t : targets) scale = std::max(scale, std::abs(t));
    for (const auto& row : rows)
        for (const auto& [v, a] : row.coeffs) scale = std::max(scale, std::abs(a));
    out.scale = scale;

    for (size_t r = 0; r < rows.size(); ++r) {
        int plus = lp.add_var("p" + std::to_string(r), 0.0, kInf);
        int minus = lp.add_var("n" + std::to_string(r), 0.0, kInf);
        lp.obj[static_cast<size_t>(plus)] = 1.0;
        lp.obj[static_cast<size_t>(minus)] = 1.0;
        LinearRow row = rows[r];
        row.coeffs.push_back({plus, 1.0});
        row.coeffs.push_back({minus, -1.0});
        row.rhs = targets[r];
        out.link_rows.push_back(static_cast<int>(lp.eq.size()));
        lp.add_eq(std::move(row));
    }
    LinearRow sum;
    for (unsigned m = 0; m < count; ++m) sum.coeffs.push_back({lambda[m], 1.0});
    sum.rhs = 1.0;
    out.sum_row = static_cast<int>(lp.eq.size());
    lp.add_eq(std::move(sum));
    return out;
}

constexpr double kMembershipTol = 1e-7;

}  // namespace

bool joint_hull_membership(const std::vector<PointValue>& x_point,
                           const std::vector<double>& w_values,
                           const std::vector<MultilinearExpr>& exprs,
                           const Hyperbox& box) {
    MembershipLp mlp = build_membership_lp(x_point, w_values, exprs, box);
    Solution sol = solve(mlp.lp);
    if (sol.status != SolveStatus::Optimal)
        throw SolverFailure("membership LP did not solve");
    return sol.objective <= kMembershipTol * mlp.scale;
}

bool hull_membership(const std::vector<PointValue>& x_point, double w_value,
                     const MultilinearExpr& expr, const Hyperbox& box) {
    return joint_hull_membership(x_point, {w_value}, {expr}, box);
}

std::optional<ValidInequality> separate_point(const std::vector<PointValue>& x_point,
                                              double w_value,
                                              const MultilinearExpr& expr,
                                              const Hyperbox& box) {
    MembershipLp mlp = build_membership_lp(x_point, {w_value}, {expr}, box);
    Solution sol = solve(mlp.lp);
    if (sol.status != SolveStatus::Optimal)
        throw SolverFailure("membership LP did not solve");
    if (sol.objective <= kMembershipTol * mlp.scale) return std::nullopt;

    std::vector<int> vars = expr.distinct_vars();
    int k = static_cast<int>(vars.size());
    // Farkas direction from the dual: a = -y_link, valid since every lambda
    // column has nonnegative reduced cost.
    ValidInequality cut;
    cut.a.resize(static_cast<size_t>(k) + 1);
    for (int i = 0; i <= k; ++i)
        cut.a[static_cast<size_t>(i)] =
            -sol.dual_eq[static_cast<size_t>(mlp.link_rows[static_cast<size_t>(i)])];
    double norm = 0.0;
    for (double ai : cut.a) norm = std::max(norm, std::abs(ai));
    if (norm < 1e-12) throw SolverFailure("degenerate separating direction");
    for (double& ai : cut.a) ai /= norm;

    // exact right-hand side: supported on the vertices
    double b = -kInf;
    for (unsigned m = 0; m < (1u << k); ++m) {
        std::vector<double> v = box_vertex(vars, box, m);
        double lhs = 0.0;
        for (int i = 0; i < k; ++i) lhs += cut.a[static_cast<size_t>(i)] * v[static_cast<size_t>(i)];
        lhs += cut.a[static_cast<size_t>(k)] * eval_at(expr, vars, v);
        b = std::max(b, lhs);
    }
    cut.b = b;
    double at_point = 0.0;
    for (int i = 0; i < k; ++i)
        at_point += cut.a[static_cast<size_t>(i)] * point_value(x_point, vars[static_cast<size_t>(i)]);
    at_point += cut.a[static_cast<size_t>(k)] * w_value;
    cut.violation = at_point - b;
    return cut;
}

InteractionGraph interaction_graph(const std::vector<MultilinearExpr>& exprs) {
    std::set<int> nodes;
    std::set<std::pair<int, int>> edges;
    for (const auto& e : exprs) {
        if (e.max_degree() > 2)
            throw DegreeTooHigh("interaction graph needs degree <= 2 expressions");
        for (const auto& t : e.terms) {
            for (int v : t.vars) nodes.insert(v);
            if (t.vars.size() == 2) edges.insert({t.vars[0], t.vars[1]});
        }
    }
    InteractionGraph g;
    g.nodes.assign(nodes.begin(), nodes.end());
    g.edges.assign(edges.begin(), edges.end());

    std::map<int, int> parent;
    for (int v : g.nodes) parent[v] = v;
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    g.is_tree = true;
    for (const auto& [a, b] : g.edges) {
        int ra = find(a), rb = find(b);
        if (ra == rb) {
            g.is_tree = false;
            break;
        }
        parent[ra] = rb;
    }
    return g;
}

}  // namespace opf
