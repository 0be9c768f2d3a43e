#ifndef OPF_JABR_HPP
#define OPF_JABR_HPP

#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "opf/conic.hpp"
#include "opf/cycle_constraints.hpp"
#include "opf/network.hpp"

namespace opf {

struct UnboundedBox : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidObjective : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ObjectiveMode { Linear, Quadratic };

/// Variable index map of a built Jabr program. Pair variables are stored once
/// per unordered pair with c_km = c_mk, s_km = -s_mk applied at access time
/// through the registry; s_kk is eliminated, c_kk lives in the registry
/// diagonal.
struct JabrVariables {
    PairRegistry registry;
    std::vector<std::pair<int, int>> pair_keys;          // canonical (lo, hi)
    std::set<std::pair<int, int>> auxiliary_pairs;       // subset of pair_keys
    std::vector<int> p_flow_fwd, q_flow_fwd;             // per line
    std::vector<int> p_flow_rev, q_flow_rev;
    std::vector<int> thermal_top_fwd, thermal_top_rev;   // per line, fixed sqrt(U)
    std::vector<int> p_gen, q_gen;                       // per generator
    std::vector<int> cost_epi, cost_lin;                 // per generator, -1 when absent
    int unit_var = -1;                                   // fixed to 1 in quadratic mode
    int base_var_count = 0;                              // vars before strengthening
};

struct JabrBuild {
    ConicProgram program;
    JabrVariables vars;
};

/// Jabr-SOCP relaxation: power balance, branch flow definitions on the
/// MATPOWER branch model, generator/voltage boxes, thermal cones per
/// direction, the tan(eta) angle rows and c >= 0 for real lines, and one
/// rotated cone per pair (real lines plus the requested auxiliary pairs).
JabrBuild build_jabr_socp(const Network& net,
                          const std::set<std::pair<int, int>>& extra_pairs,
                          ObjectiveMode objective_mode);

struct PolarPoint {
    std::map<int, double> v_mag;  // by bus id
    std::map<int, double> delta;  // by bus id, radians
    std::vector<double> p_gen, q_gen;  // by generator index
};

/// Signed equality residuals and inequality violation amounts of the polar
/// formulation, with branch flows computed from the point.
struct PolarResiduals {
    std::vector<double> p_balance, q_balance;   // per bus, signed
    std::vector<double> gen_bounds;             // per generator, violation
    std::vector<double> voltage_bounds;         // per bus, violation
    std::vector<double> angle_bounds;           // per line, violation
    std::vector<double> thermal;                // per line per direction, violation
    double inf_norm() const;
};

PolarResiduals polar_residuals(const Network& net, const PolarPoint& point);

/// Per-pair slack c_kk*c_mm - c^2 - s^2; nonnegative at SOCP-feasible points,
/// zero exactly where the equality relaxation binds.
std::map<std::pair<int, int>, double> jabr_tightness(const JabrVariables& vars,
                                                     const std::vector<double>& values);

/// Lifted image of a polar point: values for every base program variable.
std::vector<double> lift_polar(const Network& net, const JabrVariables& vars,
                               const PolarPoint& point);

}  // namespace opf

#endif
