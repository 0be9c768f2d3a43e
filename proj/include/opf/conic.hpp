#ifndef OPF_CONIC_HPP
#define OPF_CONIC_HPP

#include <cmath>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace opf {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Sparse linear row: sum_i coeffs[i].second * x[coeffs[i].first]  (=|<=)  rhs.
struct LinearRow {
    std::vector<std::pair<int, double>> coeffs;
    double rhs = 0.0;
};

enum class ConeKind {
    SecondOrder,  // members (t, z1..zm):     ||z|| <= t
    Rotated       // members (u, v, z1..zm):  u*v >= ||z||^2, u >= 0, v >= 0
};

struct ConeBlock {
    ConeKind kind;
    std::vector<int> members;  // variable ids
};

struct MalformedCone : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Solver-agnostic conic program, always a minimization.
/// Cone members are variable ids; affine cone arguments must be
/// materialized as variables with defining equality rows.
class ConicProgram {
  public:
    int add_var(std::string name, double lo = -kInf, double hi = kInf) {
        names.push_back(std::move(name));
        lb.push_back(lo);
        ub.push_back(hi);
        obj.push_back(0.0);
        return static_cast<int>(lb.size()) - 1;
    }
    int num_vars() const { return static_cast<int>(lb.size()); }

    void add_eq(LinearRow row) { eq.push_back(std::move(row)); }
    void add_ineq(LinearRow row) { ineq.push_back(std::move(row)); }
    void add_cone(ConeKind k, std::vector<int> members) {
        cones.push_back(ConeBlock{k, std::move(members)});
    }

    std::vector<std::string> names;
    std::vector<double> lb, ub;
    std::vector<double> obj;
    double obj_constant = 0.0;
    std::vector<LinearRow> eq;
    std::vector<LinearRow> ineq;
    std::vector<ConeBlock> cones;
};

/// Replaces every rotated block (u, v, z) by a standard second-order block
///   ||(z, (u-v)/2)|| <= (u+v)/2
/// through two fresh variables carrying the half sum/difference.
/// The feasible set is unchanged.
ConicProgram normalize(const ConicProgram& prog);

/// Plain-text dump, one constraint per line, for cross-solver diffing.
void dump(const ConicProgram& prog, std::ostream& out);

enum class SolveStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

const char* to_string(SolveStatus s);

struct Solution {
    SolveStatus status = SolveStatus::NumericalFailure;
    double objective = std::nan("");
    std::vector<double> primal;      // present iff status == Optimal
    double max_residual = std::nan("");
    int iterations = 0;

    // Dual values, populated for cone-free programs (LPs) only.
    // Convention: at optimality  c + A' y_eq + C' y_ineq + (bound rows) = 0,
    // with y_ineq >= 0 for rows C x <= d.
    std::vector<double> dual_eq;
    std::vector<double> dual_ineq;

    double value(int var) const { return primal.at(static_cast<size_t>(var)); }
};

struct SolverUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverSettings {
    double tol = 1e-8;       // relative feasibility/gap tolerance
    int max_iters = 120;
    bool verbose = false;
};

/// Solves the program with the built-in primal-dual interior-point method.
/// Deterministic for identical inputs. Numerical trouble is surfaced as
/// status NumericalFailure, never as an exception.
Solution solve(const ConicProgram& prog, const SolverSettings& settings = {});

}  // namespace opf

#endif
