#include "opf/matpower.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <locale>
#include <sstream>

namespace opf {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDefaultAngle = kPi / 6.0;

struct Cursor {
    const std::string& text;
    size_t pos = 0;
    int line = 1, col = 1;

    bool done() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    void advance() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }
    void skip_noise() {
        while (!done()) {
            char c = peek();
            if (c == '%') {
                while (!done() && peek() != '\n') advance();
            } else if (c == '.' && pos + 2 < text.size() && text[pos + 1] == '.' &&
                       text[pos + 2] == '.') {
                while (!done() && peek() != '\n') advance();  // line continuation
            } else if (isspace(static_cast<unsigned char>(c)) || c == ',') {
                advance();
            } else {
                return;
            }
        }
    }
};

bool starts_number(char c) { return isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.'; }

double read_number(Cursor& cur) {
    cur.skip_noise();
    int line = cur.line, col = cur.col;
    size_t start = cur.pos;
    if (!cur.done() && (cur.peek() == '-' || cur.peek() == '+')) cur.advance();
    bool digits = false;
    while (!cur.done() && (isdigit(static_cast<unsigned char>(cur.peek())) || cur.peek() == '.')) {
        digits = digits || isdigit(static_cast<unsigned char>(cur.peek()));
        cur.advance();
    }
    if (!cur.done() && (cur.peek() == 'e' || cur.peek() == 'E')) {
        cur.advance();
        if (!cur.done() && (cur.peek() == '-' || cur.peek() == '+')) cur.advance();
        while (!cur.done() && isdigit(static_cast<unsigned char>(cur.peek()))) cur.advance();
    }
    if (!digits) throw MalformedCase("expected a number", line, col);
    double value = 0.0;
    const char* first = cur.text.data() + start;
    auto [end, ec] = std::from_chars(first, cur.text.data() + cur.pos, value);
    if (ec != std::errc() || end != cur.text.data() + cur.pos)
        throw MalformedCase("unparseable number", line, col);
    return value;
}

void expect(Cursor& cur, char c) {
    cur.skip_noise();
    if (cur.done() || cur.peek() != c)
        throw MalformedCase(std::string("expected '") + c + "'", cur.line, cur.col);
    cur.advance();
}

std::vector<std::vector<double>> read_matrix(Cursor& cur, std::vector<int>& row_lines) {
    expect(cur, '[');
    std::vector<std::vector<double>> rows;
    std::vector<double> row;
    int row_line = cur.line;
    while (true) {
        cur.skip_noise();
        if (cur.done()) throw MalformedCase("unterminated matrix", cur.line, cur.col);
        char c = cur.peek();
        if (c == ']') {
            cur.advance();
            if (!row.empty()) {
                rows.push_back(std::move(row));
                row_lines.push_back(row_line);
            }
            return rows;
        }
        if (c == ';') {
            cur.advance();
            if (!row.empty()) {
                rows.push_back(std::move(row));
                row_lines.push_back(row_line);
            }
            row.clear();
            continue;
        }
        if (!starts_number(c))
            throw MalformedCase("unexpected character in matrix", cur.line, cur.col);
        if (row.empty()) row_line = cur.line;
        row.push_back(read_number(cur));
    }
}

}  // namespace

CaseFile parse_case_file(const std::string& text) {
    CaseFile cf;
    bool saw_base = false, saw_bus = false, saw_gen = false, saw_branch = false,
         saw_cost = false;
    Cursor cur{text};
    while (true) {
        cur.skip_noise();
        if (cur.done()) break;
        if (!isalpha(static_cast<unsigned char>(cur.peek())) && cur.peek() != '_') {
            cur.advance();
            continue;
        }
        size_t start = cur.pos;
        while (!cur.done() && (isalnum(static_cast<unsigned char>(cur.peek())) ||
                               cur.peek() == '_' || cur.peek() == '.'))
            cur.advance();
        std::string ident = text.substr(start, cur.pos - start);
        if (ident == "function") {
            // function mpc = <name>
            cur.skip_noise();
            while (!cur.done() && cur.peek() != '=') cur.advance();
            if (!cur.done()) cur.advance();
            cur.skip_noise();
            size_t ns = cur.pos;
            while (!cur.done() && (isalnum(static_cast<unsigned char>(cur.peek())) ||
                                   cur.peek() == '_'))
                cur.advance();
            cf.name = text.substr(ns, cur.pos - ns);
        } else if (ident == "mpc.baseMVA") {
            expect(cur, '=');
            cf.base_mva = read_number(cur);
            saw_base = true;
        } else if (ident == "mpc.bus") {
            expect(cur, '=');
            cf.bus_table = read_matrix(cur, cf.table_row_lines["bus"]);
            saw_bus = true;
        } else if (ident == "mpc.gen") {
            expect(cur, '=');
            cf.gen_table = read_matrix(cur, cf.table_row_lines["gen"]);
            saw_gen = true;
        } else if (ident == "mpc.branch") {
            expect(cur, '=');
            cf.branch_table = read_matrix(cur, cf.table_row_lines["branch"]);
            saw_branch = true;
        } else if (ident == "mpc.gencost") {
            expect(cur, '=');
            cf.gencost_table = read_matrix(cur, cf.table_row_lines["gencost"]);
            saw_cost = true;
        } else if (ident == "mpc.version") {
            cur.skip_noise();
            while (!cur.done() && cur.peek() != ';') cur.advance();
        }
    }
    if (!saw_base) throw MalformedCase("missing mpc.baseMVA", 1, 1);
    if (!saw_bus) throw MalformedCase("missing mpc.bus", 1, 1);
    if (!saw_gen) throw MalformedCase("missing mpc.gen", 1, 1);
    if (!saw_branch) throw MalformedCase("missing mpc.branch", 1, 1);
    if (!saw_cost) throw MalformedCase("missing mpc.gencost", 1, 1);
    return cf;
}

Network parse_case(const std::string& text) {
    CaseFile cf = parse_case_file(text);
    double base = cf.base_mva;
    if (!(base > 0)) throw MalformedCase("baseMVA must be positive", 1, 1);

    Network net;
    net.name = cf.name;
    net.base_mva = base;

    for (size_t ri = 0; ri < cf.bus_table.size(); ++ri) {
        const auto& row = cf.bus_table[ri];
        if (row.size() < 13)
            throw MalformedCase("bus row needs 13 columns",
                                cf.table_row_lines.at("bus")[ri], 1);
        Bus b;
        b.id = static_cast<int>(row[0]);
        b.p_load = row[2] / base;
        b.q_load = row[3] / base;
        b.g_shunt = row[4] / base;
        b.b_shunt = row[5] / base;
        b.v_max = row[11];
        b.v_min = row[12];
        net.buses.push_back(b);
    }

    if (cf.gencost_table.size() < cf.gen_table.size())
        throw MalformedCase("gencost has fewer rows than gen", 1, 1);
    for (size_t i = 0; i < cf.gen_table.size(); ++i) {
        const auto& row = cf.gen_table[i];
        int at_line = cf.table_row_lines.at("gen")[i];
        if (row.size() < 10)
            throw MalformedCase("gen row needs 10 columns", at_line, 1);
        if (row[7] <= 0) continue;  // out of service
        Generator g;
        g.bus = static_cast<int>(row[0]);
        g.q_max = row[3] / base;
        g.q_min = row[4] / base;
        g.p_max = row[8] / base;
        g.p_min = row[9] / base;

        const auto& cost = cf.gencost_table[i];
        int cost_line = cf.table_row_lines.at("gencost")[i];
        if (cost.size() < 4)
            throw MalformedCase("gencost row needs 4+ columns", cost_line, 1);
        int model = static_cast<int>(cost[0]);
        if (model != 2)
            throw MalformedCase("piecewise-linear gencost (model 1) is not supported",
                                cost_line, 1);
        int ncoef = static_cast<int>(cost[3]);
        if (cost.size() < 4 + static_cast<size_t>(ncoef))
            throw MalformedCase("gencost row shorter than its coefficient count",
                                cost_line, 1);
        std::vector<double> coef(cost.begin() + 4, cost.begin() + 4 + ncoef);
        for (int k = 0; k + 3 < ncoef; ++k)
            if (coef[static_cast<size_t>(k)] != 0.0)
                throw MalformedCase("gencost degree above quadratic is not supported",
                                    cost_line, 1);
        double c2 = ncoef >= 3 ? coef[ncoef - 3] : 0.0;
        double c1 = ncoef >= 2 ? coef[ncoef - 2] : 0.0;
        double c0 = ncoef >= 1 ? coef[ncoef - 1] : 0.0;
        g.cost_c2 = c2 * base * base;
        g.cost_c1 = c1 * base;
        g.cost_c0 = c0;
        net.generators.push_back(g);
    }

    for (size_t ri = 0; ri < cf.branch_table.size(); ++ri) {
        const auto& row = cf.branch_table[ri];
        if (row.size() < 13)
            throw MalformedCase("branch row needs 13 columns",
                                cf.table_row_lines.at("branch")[ri], 1);
        if (row[10] == 0) continue;  // out of service
        Line l;
        l.from = static_cast<int>(row[0]);
        l.to = static_cast<int>(row[1]);
        l.r = row[2];
        l.x = row[3];
        l.b_charge = row[4];
        l.rate_a = row[5];
        l.tap = row[8] == 0.0 ? 1.0 : row[8];
        l.shift = row[9] * kPi / 180.0;
        double ang_lo = row[11] * kPi / 180.0;
        double ang_hi = row[12] * kPi / 180.0;
        bool absent = (row[11] == 0 && row[12] == 0) || row[11] <= -360 || row[12] >= 360;
        l.theta_min = absent ? -kDefaultAngle : ang_lo;
        l.theta_max = absent ? kDefaultAngle : ang_hi;
        l.eta = std::max(std::abs(l.theta_min), l.theta_max);
        compute_branch_admittance(l);
        if (row[5] > 0) {
            double s = row[5] / base;
            l.u_thermal = s * s;
        } else {
            // loose but valid bound from voltage caps and admittance magnitudes
            double vk = 1.1, vm = 1.1;
            for (const Bus& b : net.buses) {
                if (b.id == l.from) vk = b.v_max;
                if (b.id == l.to) vm = b.v_max;
            }
            double sf = vk * (std::abs(l.y_ff) * vk + std::abs(l.y_ft) * vm);
            double st = vm * (std::abs(l.y_tt) * vm + std::abs(l.y_tf) * vk);
            double s = std::max(sf, st);
            l.u_thermal = s * s;
        }
        net.lines.push_back(l);
    }
    return net;
}

ReferenceObjectives load_reference_objectives(const std::string& text) {
    ReferenceObjectives refs;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::string name, value;
        if (!(ls >> name)) continue;
        if (!(ls >> value))
            throw MalformedReference("missing objective value for '" + name + "'");
        double v = 0.0;
        auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc() || end != value.data() + value.size() || !std::isfinite(v))
            throw MalformedReference("non-numeric objective '" + value + "' for '" +
                                     name + "'");
        refs.values[name] = v;
    }
    return refs;
}

std::string debug_serialize(const Network& net) {
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out.precision(17);
    double base = net.base_mva;
    out << "function mpc = " << (net.name.empty() ? "unnamed" : net.name) << "\n";
    out << "mpc.version = '2';\n";
    out << "mpc.baseMVA = " << base << ";\n";
    out << "mpc.bus = [\n";
    for (const Bus& b : net.buses)
        out << "\t" << b.id << "\t1\t" << b.p_load * base << "\t" << b.q_load * base
            << "\t" << b.g_shunt * base << "\t" << b.b_shunt * base << "\t1\t1\t0\t0\t1\t"
            << b.v_max << "\t" << b.v_min << ";\n";
    out << "];\n";
    out << "mpc.gen = [\n";
    for (const Generator& g : net.generators)
        out << "\t" << g.bus << "\t0\t0\t" << g.q_max * base << "\t" << g.q_min * base
            << "\t1\t" << base << "\t1\t" << g.p_max * base << "\t" << g.p_min * base
            << ";\n";
    out << "];\n";
    out << "mpc.branch = [\n";
    for (const Line& l : net.lines)
        out << "\t" << l.from << "\t" << l.to << "\t" << l.r << "\t" << l.x << "\t"
            << l.b_charge << "\t" << l.rate_a << "\t0\t0\t" << l.tap << "\t"
            << l.shift * 180.0 / kPi << "\t1\t" << l.theta_min * 180.0 / kPi << "\t"
            << l.theta_max * 180.0 / kPi << ";\n";
    out << "];\n";
    out << "mpc.gencost = [\n";
    for (const Generator& g : net.generators)
        out << "\t2\t0\t0\t3\t" << g.cost_c2 / (base * base) << "\t" << g.cost_c1 / base
            << "\t" << g.cost_c0 << ";\n";
    out << "];\n";
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace opf
