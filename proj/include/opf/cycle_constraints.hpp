#ifndef OPF_CYCLE_CONSTRAINTS_HPP
#define OPF_CYCLE_CONSTRAINTS_HPP

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "opf/graph_cycles.hpp"
#include "opf/multilinear.hpp"

namespace opf {

struct UnknownPair : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WrongLength : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// One canonical (c, s) variable per unordered bus pair plus one diagonal
/// variable per bus. Stored for the (low, high) orientation; querying the
/// opposite direction flips the sign carried by the sine variable:
/// s_km = -s_mk, c_km = c_mk.
class PairRegistry {
  public:
    struct DirectedPair {
        int c = -1;
        int s = -1;
        double s_sign = 1.0;
    };

    void register_diag(int bus, int var_id) { diag_[bus] = var_id; }
    void register_pair(int a, int b, int c_id, int s_id);

    int c_diag(int bus) const;
    DirectedPair directed(int from, int to) const;  // throws UnknownPair
    bool has_pair(int a, int b) const;
    const std::map<std::pair<int, int>, std::pair<int, int>>& pairs() const {
        return pair_vars_;
    }
    const std::map<int, int>& diagonals() const { return diag_; }

  private:
    std::map<int, int> diag_;
    std::map<std::pair<int, int>, std::pair<int, int>> pair_vars_;  // (lo,hi) -> (c,s)
};

/// Full cycle polynomial: cos-expansion over the cycle's directed angles
/// minus the product of diagonal variables. Zero (with positive voltages)
/// exactly when the angles around the cycle sum to a multiple of 2*pi.
/// Refuses cycles longer than 12 (term count 2^(n-1)); decompose first.
MultilinearExpr cycle_polynomial(const Cycle& cycle, const PairRegistry& reg);

/// Bilinear split of the 3-cycle condition, both expressions vanishing at
/// every consistent lifted point.
std::pair<MultilinearExpr, MultilinearExpr> three_cycle_system(
    const Cycle& cycle, const PairRegistry& reg);

/// Bilinear split of the 4-cycle condition, grouping (theta12 + theta34)
/// against -(theta23 + theta41).
std::pair<MultilinearExpr, MultilinearExpr> four_cycle_system(
    const Cycle& cycle, const PairRegistry& reg);

/// True iff the angle sum is within tol of a multiple of 2*pi.
bool check_cycle_condition(const std::vector<double>& theta, double tol);

}  // namespace opf

#endif
