#ifndef OPF_MATPOWER_HPP
#define OPF_MATPOWER_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "opf/network.hpp"

namespace opf {

struct MalformedCase : std::runtime_error {
    MalformedCase(const std::string& what, int line, int col)
        : std::runtime_error(what + " at line " + std::to_string(line) + ", column " +
                             std::to_string(col)),
          line(line), col(col) {}
    int line, col;
};

struct MalformedReference : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raw MATPOWER tables before network construction.
struct CaseFile {
    std::string name;
    double base_mva = 100.0;
    std::vector<std::vector<double>> bus_table;
    std::vector<std::vector<double>> gen_table;
    std::vector<std::vector<double>> branch_table;
    std::vector<std::vector<double>> gencost_table;
    std::map<std::string, std::vector<int>> table_row_lines;
};

CaseFile parse_case_file(const std::string& text);

/// Network from a MATPOWER case script. Out-of-service branches and
/// generators are dropped, everything converted to per-unit, costs to
/// $/h per p.u. Angle bounds absent from the file default to +-pi/6.
Network parse_case(const std::string& text);

/// Best-known AC-feasible objective values, keyed by case name.
struct ReferenceObjectives {
    std::map<std::string, double> values;
    bool has(const std::string& name) const { return values.count(name) > 0; }
    double at(const std::string& name) const { return values.at(name); }
};

/// Whitespace-separated "name value" lines; '#' starts a comment.
ReferenceObjectives load_reference_objectives(const std::string& text);

/// Debug serialization back to the MATPOWER subset read by parse_case.
std::string debug_serialize(const Network& net);

std::string read_file(const std::string& path);

}  // namespace opf

#endif
