#ifndef OPF_CONVEXIFY_HPP
#define OPF_CONVEXIFY_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "opf/conic.hpp"
#include "opf/multilinear.hpp"

namespace opf {

struct DegreeTooHigh : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DimensionTooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DecompositionInvalid : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Finite per-variable bounds keyed by variable id.
class Hyperbox {
  public:
    void set(int var, double lo, double hi);
    double lower(int var) const;
    double upper(int var) const;
    bool has(int var) const { return bounds_.count(var) > 0; }

  private:
    std::map<int, std::pair<double, double>> bounds_;
};

/// Fresh-variable source so relaxation blocks can be merged into a program.
class IdAllocator {
  public:
    explicit IdAllocator(int next) : next_(next) {}
    int fresh() { return next_++; }
    int next() const { return next_; }

  private:
    int next_;
};

/// Linear relaxation block: fresh variables with bounds, linear rows over
/// original + fresh ids. For dual formulations, value_var is the variable
/// standing for the relaxed expression's value.
struct LinearRelaxation {
    struct NewVar {
        int id;
        double lo, hi;
    };
    std::vector<NewVar> new_vars;
    std::vector<LinearRow> equalities;
    std::vector<LinearRow> inequalities;
    std::optional<int> value_var;
    // per aux monomial variable, the variable pair it stands for
    std::map<int, std::pair<int, int>> aux_pairs;
};

/// The four envelope inequalities of w = x*y over a box, written over
/// (x_id, y_id, w_id).
std::vector<LinearRow> mccormick_bilinear(int x_id, double xlo, double xhi, int y_id,
                                          double ylo, double yhi, int w_id);

/// McCormick relaxation of a system of degree-<=2 equalities expr = 0:
/// one shared auxiliary variable per distinct unordered variable pair across
/// all expressions, envelope inequalities per auxiliary, one linear equality
/// per input expression.
LinearRelaxation relax_system_mccormick(const std::vector<MultilinearExpr>& exprs,
                                        const Hyperbox& box, IdAllocator& ids);

/// Vertex (lambda) extended formulation of conv{(x, Phi(x)) : x in box}.
/// Vertices enumerate little-endian over ascending variable ids.
LinearRelaxation dual_hull_formulation(const MultilinearExpr& expr, const Hyperbox& box,
                                       IdAllocator& ids);

/// Same hull split per monomial: valid when each monomial is linear in the
/// shared variables and the monomials' private variable sets are pairwise
/// disjoint. One lambda block per monomial over V(H0) x V(Hi).
LinearRelaxation grouped_dual_formulation(const MultilinearExpr& expr,
                                          const std::vector<int>& shared_vars,
                                          const Hyperbox& box, IdAllocator& ids);

struct PointValue {
    int var;
    double value;
};

/// LP feasibility of the lambda system at a fixed point (x, w).
bool hull_membership(const std::vector<PointValue>& x_point, double w_value,
                     const MultilinearExpr& expr, const Hyperbox& box);

/// Joint-hull membership for a system of expressions at (x, w_1..w_k).
bool joint_hull_membership(const std::vector<PointValue>& x_point,
                           const std::vector<double>& w_values,
                           const std::vector<MultilinearExpr>& exprs,
                           const Hyperbox& box);

/// Valid inequality a.(x, w) <= b for conv(graph Phi), violated at the
/// queried point; empty when the point is inside. Coefficients are ordered
/// as (expr.distinct_vars()..., w) and normalized to max-norm 1, and the
/// right-hand side is tightened to the exact vertex maximum.
struct ValidInequality {
    std::vector<double> a;
    double b = 0.0;
    double violation = 0.0;
};

std::optional<ValidInequality> separate_point(const std::vector<PointValue>& x_point,
                                              double w_value,
                                              const MultilinearExpr& expr,
                                              const Hyperbox& box);

/// Simple graph with one node per variable and one edge per distinct
/// bilinear pair; is_tree means every connected component is acyclic.
struct InteractionGraph {
    std::vector<int> nodes;
    std::vector<std::pair<int, int>> edges;
    bool is_tree = false;
};

InteractionGraph interaction_graph(const std::vector<MultilinearExpr>& exprs);

}  // namespace opf

#endif
