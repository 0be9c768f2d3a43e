#ifndef OPF_BENCH_HPP
#define OPF_BENCH_HPP

#include <optional>
#include <string>
#include <vector>

#include "opf/convexify.hpp"
#include "opf/jabr.hpp"
#include "opf/matpower.hpp"
#include "opf/recovery.hpp"

namespace opf {

enum class Strengthening { None, Mc34, Dual34 };
enum class CycleSource { Basis, BasisDecomposed };

struct VariantSpec {
    Strengthening strengthening = Strengthening::None;
    CycleSource cycle_source = CycleSource::BasisDecomposed;
    ObjectiveMode objective_mode = ObjectiveMode::Quadratic;
    double solver_tol = 1e-8;
    RecoveryTolerances recovery_tol;
};

const char* to_string(Strengthening s);
std::optional<Strengthening> parse_strengthening(const std::string& name);

struct RelaxationReport {
    std::string case_name;
    std::string variant;
    SolveStatus status = SolveStatus::NumericalFailure;
    double lower_bound = 0.0;
    std::optional<double> reference;
    std::optional<double> gap_percent;
    double solve_time_sec = 0.0;
    double solver_residual = 0.0;
    ExactnessReport exactness;
    int num_vars = 0;
    int num_cones = 0;
    int num_cuts = 0;   // strengthening rows added on top of the plain SOCP
    int root = 0;
    std::string note;   // decomposition summary for reproducibility
};

/// Builds the requested variant, solves, certifies, and reports. mc34 adds
/// the McCormick relaxation of the 3-/4-cycle systems of every (decomposed)
/// basis cycle; dual34 additionally adds the vertex-hull lambda blocks
/// (grouped for 3-cycle systems, full for 4-cycle systems).
RelaxationReport run(const Network& net, const std::string& case_name,
                     const VariantSpec& variant, const ReferenceObjectives& refs,
                     std::optional<int> root_override = std::nullopt);

/// Lowest-id bus carrying a generator.
int default_root(const Network& net);

std::string reports_to_json(const std::vector<RelaxationReport>& reports);
std::string reports_to_csv(const std::vector<RelaxationReport>& reports);

}  // namespace opf

#endif
