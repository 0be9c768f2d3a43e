#ifndef OPF_NETWORK_HPP
#define OPF_NETWORK_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace opf {

// All quantities per-unit on the system base; costs in $/h per p.u.

struct Bus {
    int id = 0;
    double g_shunt = 0.0;
    double b_shunt = 0.0;
    double v_min = 0.9;
    double v_max = 1.1;
    double p_load = 0.0;
    double q_load = 0.0;
};

struct Generator {
    int bus = 0;
    double p_min = 0.0, p_max = 0.0;
    double q_min = 0.0, q_max = 0.0;
    double cost_c2 = 0.0;  // $/h per p.u.^2
    double cost_c1 = 0.0;  // $/h per p.u.
    double cost_c0 = 0.0;  // $/h
};

struct Line {
    int from = 0, to = 0;
    // 2x2 branch admittance entries, MATPOWER model with tap and shift folded in
    std::complex<double> y_ff, y_ft, y_tf, y_tt;
    double theta_min = 0.0, theta_max = 0.0;  // rad, bounds on delta_from - delta_to
    double eta = 0.0;          // symmetric angle bound for the tan(eta) constraint
    double u_thermal = 0.0;    // squared apparent-power limit (p.u.^2)
    // raw branch data, kept for the debug round-trip
    double r = 0.0, x = 0.0, b_charge = 0.0, tap = 1.0, shift = 0.0, rate_a = 0.0;
};

struct Network {
    std::string name;
    double base_mva = 100.0;
    std::vector<Bus> buses;
    std::vector<Generator> generators;
    std::vector<Line> lines;

    int bus_index(int bus_id) const;          // throws UnknownBus
    const Bus& bus(int bus_id) const { return buses[static_cast<size_t>(bus_index(bus_id))]; }
    bool has_bus(int bus_id) const;
    std::vector<int> generators_at(int bus_id) const;   // generator indices
    std::vector<int> lines_at(int bus_id) const;        // line indices

  private:
    mutable std::unordered_map<int, int> index_cache_;
};

struct UnknownBus : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Direction { Forward, Reverse };

/// Off-diagonal nodal admittance entry for the requested direction plus this
/// line's contribution to the diagonal entry at the sending bus.
struct EffectiveAdmittance {
    double g_km, b_km;          // off-diagonal Y_km = g + ib
    double g_kk, b_kk;          // sending-end diagonal contribution
};

EffectiveAdmittance effective_admittance(const Line& line, Direction dir);

/// Same, with the membership precondition checked against the network.
EffectiveAdmittance effective_admittance(const Network& net, const Line& line,
                                         Direction dir);

/// Direction seen from `bus_id` as the sending end; throws UnknownBus if the
/// bus is not an endpoint of the line.
Direction direction_from(const Line& line, int bus_id);

/// Fills the four admittance entries of a line from raw branch data.
void compute_branch_admittance(Line& line);

struct Violation {
    std::string code;
    std::string message;
};

/// All invariant violations; empty means the network is well formed.
std::vector<Violation> validate(const Network& net);

bool is_connected(const Network& net);

}  // namespace opf

#endif
