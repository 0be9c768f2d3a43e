#ifndef OPF_RECOVERY_HPP
#define OPF_RECOVERY_HPP

#include <map>
#include <stdexcept>
#include <vector>

#include "opf/graph_cycles.hpp"
#include "opf/jabr.hpp"
#include "opf/network.hpp"

namespace opf {

struct NegativeDiagonal : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ZeroPair : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// |V_k| = sqrt(c_kk) per bus.
std::map<int, double> recover_magnitudes(const std::map<int, double>& c_diag);

/// Two-argument arctangent of (s, c) in (-pi, pi]; voltage magnitudes cancel.
double pair_angle(double c, double s);

/// Angles from per-pair values along the BFS tree: delta_root = 0 and
/// delta_child = delta_parent - theta(parent, child), reduced to (-pi, pi]
/// after every step. theta is keyed by canonical (lo, hi) pair and holds the
/// lo -> hi angle.
std::map<int, double> recover_angles(const Network& net,
                                     const std::map<std::pair<int, int>, double>& theta,
                                     int root);

struct ExactnessReport {
    std::map<std::pair<int, int>, double> soc_residuals;  // per pair
    std::vector<double> cycle_residuals;                  // per basis cycle, rad
    double polar_residual_inf = 0.0;
    bool exact = false;
    double max_soc = 0.0;
    double max_cycle = 0.0;
};

struct RecoveryTolerances {
    double soc = 1e-6;
    double cycle = 1e-5;
    double polar = 1e-5;
};

/// Recovers a polar point from an optimal Jabr solution and reports the three
/// residual families. On radial networks the cycle family is empty and
/// exactness reduces to cone tightness plus the polar residual.
ExactnessReport certify(const Network& net, const JabrVariables& vars,
                        const std::vector<double>& values, const CycleBasis& basis,
                        const RecoveryTolerances& tol = {});

/// The recovered polar point itself (magnitudes, tree angles, generator
/// outputs read off the solution).
PolarPoint recover_polar_point(const Network& net, const JabrVariables& vars,
                               const std::vector<double>& values, int root);

}  // namespace opf

#endif
