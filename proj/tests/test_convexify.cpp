#include <doctest.h>

#include <cmath>
#include <random>

#include "opf/convexify.hpp"
#include "opf/cycle_constraints.hpp"

using namespace opf;

namespace {

double eval_rows_max(const std::vector<LinearRow>& rows,
                     const std::function<double(int)>& value) {
    double worst = -kInf;
    for (const auto& r : rows) {
        double acc = -r.rhs;
        for (const auto& [v, c] : r.coeffs) acc += c * value(v);
        worst = std::max(worst, acc);
    }
    return worst;  // <= 0 iff all rows hold
}

MultilinearExpr bilinear(int x, int y) {
    MultilinearExpr e;
    e.add_term(1.0, {x, y});
    return e;
}

}  // namespace

TEST_CASE("mccormick on the unit box gives the four standard inequalities") {
    auto rows = mccormick_bilinear(0, 0, 1, 1, 0, 1, 2);
    REQUIRE(rows.size() == 4);
    auto holds = [&](double x, double y, double w) {
        return eval_rows_max(rows, [&](int id) {
                   return id == 0 ? x : id == 1 ? y : w;
               }) <= 1e-12;
    };
    // w >= 0, w >= x+y-1, w <= x, w <= y
    CHECK(holds(0.5, 0.5, 0.25));
    CHECK(holds(0.5, 0.5, 0.5));     // w = min(x, y) allowed
    CHECK(holds(0.5, 0.5, 0.0));     // w = 0 allowed
    CHECK_FALSE(holds(0.5, 0.5, 0.6));
    CHECK_FALSE(holds(0.9, 0.9, 0.7));  // below x+y-1
}

TEST_CASE("mccormick on [-1,1]^2 implies w in [-1,1] at the origin") {
    auto rows = mccormick_bilinear(0, -1, 1, 1, -1, 1, 2);
    auto worst = [&](double w) {
        return eval_rows_max(rows, [&](int id) { return id == 2 ? w : 0.0; });
    };
    CHECK(worst(1.0) <= 1e-12);
    CHECK(worst(-1.0) <= 1e-12);
    CHECK(worst(1.01) > 0);
    CHECK(worst(-1.01) > 0);
}

TEST_CASE("mccormick with a fixed factor collapses to w = a*y") {
    double a = 0.75;
    auto rows = mccormick_bilinear(0, a, a, 1, -2, 3, 2);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> yd(-2, 3);
    for (int i = 0; i < 50; ++i) {
        double y = yd(rng);
        CHECK(eval_rows_max(rows, [&](int id) {
                  return id == 0 ? a : id == 1 ? y : a * y;
              }) <= 1e-12);
        CHECK(eval_rows_max(rows, [&](int id) {
                  return id == 0 ? a : id == 1 ? y : a * y + 0.01;
              }) > 1e-13);
        CHECK(eval_rows_max(rows, [&](int id) {
                  return id == 0 ? a : id == 1 ? y : a * y - 0.01;
              }) > 1e-13);
    }
}

TEST_CASE("relax_system_mccormick on the 3-cycle q-system: shared auxiliaries") {
    // variables: diag c33 and pairs (1,2), (2,3), (1,3)
    PairRegistry reg;
    reg.register_diag(1, 0);
    reg.register_diag(2, 1);
    reg.register_diag(3, 2);
    reg.register_pair(1, 2, 3, 4);
    reg.register_pair(2, 3, 5, 6);
    reg.register_pair(1, 3, 7, 8);
    std::set<std::pair<int, int>> real{{1, 2}, {2, 3}, {1, 3}};
    Cycle cyc = make_cycle({1, 2, 3}, real);
    auto [q1, q2] = three_cycle_system(cyc, reg);

    Hyperbox box;
    for (int v = 0; v <= 2; ++v) box.set(v, 0.81, 1.21);
    for (int v = 3; v <= 8; ++v) box.set(v, -1.21, 1.21);
    IdAllocator ids(9);
    LinearRelaxation rel = relax_system_mccormick({q1, q2}, box, ids);
    CHECK(rel.new_vars.size() == 6);
    CHECK(rel.inequalities.size() == 24);
    CHECK(rel.equalities.size() == 2);
}

TEST_CASE("relax_system_mccormick rejects degree three") {
    MultilinearExpr e;
    e.add_term(1.0, {0, 1, 2});
    Hyperbox box;
    for (int v = 0; v <= 2; ++v) box.set(v, 0, 1);
    IdAllocator ids(3);
    CHECK_THROWS_AS(relax_system_mccormick({e}, box, ids), DegreeTooHigh);
}

TEST_CASE("dual hull membership on w = xy over the unit box") {
    MultilinearExpr e = bilinear(0, 1);
    Hyperbox box;
    box.set(0, 0, 1);
    box.set(1, 0, 1);
    std::vector<PointValue> pt{{0, 0.5}, {1, 0.5}};
    CHECK(hull_membership(pt, 0.25, e, box));
    CHECK_FALSE(hull_membership(pt, 0.6, e, box));
    // vertex with its own value and box center with the vertex mean
    std::vector<PointValue> vx{{0, 1.0}, {1, 1.0}};
    CHECK(hull_membership(vx, 1.0, e, box));
    CHECK(hull_membership(pt, 0.25, e, box));
}

TEST_CASE("dual hull formulation rejects 17 variables") {
    MultilinearExpr e;
    std::vector<int> vars;
    Hyperbox box;
    for (int i = 0; i < 17; ++i) {
        vars.push_back(i);
        box.set(i, 0, 1);
    }
    e.add_term(1.0, {0, 1});
    for (int i = 2; i < 17; ++i) e.add_term(1.0, {i - 1, i});
    IdAllocator ids(17);
    CHECK_THROWS_AS(dual_hull_formulation(e, box, ids), DimensionTooLarge);
}

TEST_CASE("grouped dual formulation block sizes for x0x1 + x0x2") {
    MultilinearExpr e;
    e.add_term(1.0, {0, 1});
    e.add_term(1.0, {0, 2});
    Hyperbox box;
    for (int i = 0; i < 3; ++i) box.set(i, 0, 1);
    IdAllocator ids(3);
    LinearRelaxation rel = grouped_dual_formulation(e, {0}, box, ids);
    // two lambda blocks of 4 plus two block values plus the total
    CHECK(rel.new_vars.size() == 4 + 4 + 2 + 1);
    REQUIRE(rel.value_var.has_value());
}

TEST_CASE("grouped dual formulation validates its decomposition") {
    Hyperbox box;
    for (int i = 0; i < 4; ++i) box.set(i, 0, 1);
    IdAllocator ids(4);
    MultilinearExpr shared_quad;
    shared_quad.add_term(1.0, {0, 1});  // both shared
    CHECK_THROWS_AS(grouped_dual_formulation(shared_quad, {0, 1}, box, ids),
                    DecompositionInvalid);
    MultilinearExpr overlap;
    overlap.add_term(1.0, {0, 1});
    overlap.add_term(1.0, {1, 2});  // private sets overlap at 1
    CHECK_THROWS_AS(grouped_dual_formulation(overlap, {}, box, ids),
                    DecompositionInvalid);
}

TEST_CASE("separate_point returns valid violated cuts") {
    MultilinearExpr e = bilinear(0, 1);
    Hyperbox box;
    box.set(0, 0, 1);
    box.set(1, 0, 1);
    std::vector<PointValue> pt{{0, 0.5}, {1, 0.5}};
    CHECK_FALSE(separate_point(pt, 0.25, e, box).has_value());

    auto cut = separate_point(pt, 0.6, e, box);
    REQUIRE(cut.has_value());
    CHECK(cut->violation >= 0.09);
    double norm = 0;
    for (double a : cut->a) norm = std::max(norm, std::abs(a));
    CHECK(norm == doctest::Approx(1.0));
    // validity at every vertex
    for (int m = 0; m < 4; ++m) {
        double x = (m & 1) ? 1.0 : 0.0;
        double y = (m & 2) ? 1.0 : 0.0;
        double lhs = cut->a[0] * x + cut->a[1] * y + cut->a[2] * (x * y);
        CHECK(lhs <= cut->b + 1e-9);
    }
}

TEST_CASE("interaction graph: single pair is a tree") {
    auto g = interaction_graph({bilinear(0, 1)});
    CHECK(g.edges.size() == 1);
    CHECK(g.is_tree);
}

// The union graph of both 3-cycle split equations contains the 4-cycle
// (c23, s13, s23, c13); running the acyclicity oracle reports not-a-tree.
// Each single equation alone is a forest of disjoint edges.
TEST_CASE("interaction graph of the 3-cycle q-system") {
    PairRegistry reg;
    reg.register_diag(1, 0);
    reg.register_diag(2, 1);
    reg.register_diag(3, 2);
    reg.register_pair(1, 2, 3, 4);
    reg.register_pair(2, 3, 5, 6);
    reg.register_pair(1, 3, 7, 8);
    std::set<std::pair<int, int>> real{{1, 2}, {2, 3}, {1, 3}};
    Cycle cyc = make_cycle({1, 2, 3}, real);
    auto [q1, q2] = three_cycle_system(cyc, reg);
    CHECK(interaction_graph({q1}).is_tree);
    CHECK(interaction_graph({q2}).is_tree);
    auto joint = interaction_graph({q1, q2});
    CHECK(joint.edges.size() == 6);
    CHECK_FALSE(joint.is_tree);
}

TEST_CASE("interaction graph of the 4-cycle q-system is not a tree") {
    PairRegistry reg;
    for (int i = 1; i <= 4; ++i) reg.register_diag(i, i - 1);
    int next = 4;
    reg.register_pair(1, 2, next++, next++);
    reg.register_pair(2, 3, next++, next++);
    reg.register_pair(3, 4, next++, next++);
    reg.register_pair(1, 4, next++, next++);
    std::set<std::pair<int, int>> real{{1, 2}, {2, 3}, {3, 4}, {1, 4}};
    Cycle cyc = make_cycle({1, 2, 3, 4}, real);
    auto [q1, q2] = four_cycle_system(cyc, reg);
    CHECK(interaction_graph({q1}).is_tree);
    CHECK_FALSE(interaction_graph({q1, q2}).is_tree);
}

TEST_CASE("hull sandwich: graph points are hull members, hull implies mccormick") {
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> bnd(-2.0, 2.0), unit(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        double lo0 = bnd(rng), lo1 = bnd(rng);
        Hyperbox box;
        double hi0 = lo0 + unit(rng) + 0.1, hi1 = lo1 + unit(rng) + 0.1;
        box.set(0, lo0, hi0);
        box.set(1, lo1, hi1);
        MultilinearExpr e = bilinear(0, 1);
        auto rows = mccormick_bilinear(0, lo0, hi0, 1, lo1, hi1, 2);
        for (int rep = 0; rep < 30; ++rep) {
            double x = lo0 + unit(rng) * (hi0 - lo0);
            double y = lo1 + unit(rng) * (hi1 - lo1);
            std::vector<PointValue> pt{{0, x}, {1, y}};
            // the graph point itself is a member
            CHECK(hull_membership(pt, x * y, e, box));
            // any hull member satisfies the envelopes
            double w = x * y + (unit(rng) - 0.5) * 0.4;
            bool in_hull = hull_membership(pt, w, e, box);
            bool in_mc = eval_rows_max(rows, [&](int id) {
                             return id == 0 ? x : id == 1 ? y : w;
                         }) <= 1e-9;
            if (in_hull) CHECK(in_mc);
        }
    }
}

TEST_CASE("single bilinear equation: one auxiliary, four envelopes, one row") {
    MultilinearExpr e = bilinear(0, 1);
    Hyperbox box;
    box.set(0, 0, 1);
    box.set(1, 0, 1);
    IdAllocator ids(2);
    LinearRelaxation rel = relax_system_mccormick({e}, box, ids);
    CHECK(rel.new_vars.size() == 1);
    CHECK(rel.inequalities.size() == 4);
    CHECK(rel.equalities.size() == 1);
}

TEST_CASE("box center with the vertex mean is a hull member") {
    MultilinearExpr e;
    e.add_term(1.0, {0, 1, 2});
    Hyperbox box;
    double mean = 0.0;
    std::vector<PointValue> pt;
    for (int i = 0; i < 3; ++i) {
        box.set(i, -1.0 + i * 0.25, 2.0 - i * 0.5);
        pt.push_back({i, (box.lower(i) + box.upper(i)) / 2.0});
    }
    for (unsigned m = 0; m < 8; ++m) {
        double prod = 1.0;
        for (int i = 0; i < 3; ++i)
            prod *= (m & (1u << i)) ? box.upper(i) : box.lower(i);
        mean += prod / 8.0;
    }
    CHECK(hull_membership(pt, mean, e, box));
}
