#include "opf/multilinear.hpp"

#include <algorithm>
#include <set>

namespace opf {

void MultilinearExpr::add_term(double coef, std::vector<int> vars) {
    std::sort(vars.begin(), vars.end());
    if (std::adjacent_find(vars.begin(), vars.end()) != vars.end())
        throw std::invalid_argument("variable repeated within a multilinear term");
    if (vars.empty()) {
        constant += coef;
        return;
    }
    for (Term& t : terms) {
        if (t.vars == vars) {
            t.coef += coef;
            return;
        }
    }
    terms.push_back({coef, std::move(vars)});
}

int MultilinearExpr::max_degree() const {
    int deg = 0;
    for (const Term& t : terms) deg = std::max(deg, static_cast<int>(t.vars.size()));
    return deg;
}

std::vector<int> MultilinearExpr::distinct_vars() const {
    std::set<int> s;
    for (const Term& t : terms) s.insert(t.vars.begin(), t.vars.end());
    return {s.begin(), s.end()};
}

double MultilinearExpr::eval(const std::function<double(int)>& value) const {
    double acc = constant;
    for (const Term& t : terms) {
        double prod = t.coef;
        for (int v : t.vars) prod *= value(v);
        acc += prod;
    }
    return acc;
}

double MultilinearExpr::eval(const std::vector<double>& dense) const {
    return eval([&](int v) { return dense[static_cast<size_t>(v)]; });
}

namespace {

MultilinearExpr sum_expansion(int n, const std::vector<int>& sin_vars,
                              const std::vector<int>& cos_vars, bool odd_subsets) {
    if (n < 1) throw std::invalid_argument("need n >= 1");
    if (n > 25) throw std::invalid_argument("expansion too large");
    if (sin_vars.size() != static_cast<size_t>(n) ||
        cos_vars.size() != static_cast<size_t>(n))
        throw std::invalid_argument("variable lists must have length n");

    MultilinearExpr out;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        int card = __builtin_popcount(mask);
        if ((card % 2 == 1) != odd_subsets) continue;
        int ell = odd_subsets ? (card - 1) / 2 : card / 2;
        double sign = (ell % 2 == 0) ? 1.0 : -1.0;
        std::vector<int> vars;
        for (int i = 0; i < n; ++i)
            vars.push_back(mask & (1u << i) ? sin_vars[static_cast<size_t>(i)]
                                            : cos_vars[static_cast<size_t>(i)]);
        out.add_term(sign, std::move(vars));
    }
    return out;
}

}  // namespace

MultilinearExpr sin_sum_expansion(int n, const std::vector<int>& sin_vars,
                                  const std::vector<int>& cos_vars) {
    return sum_expansion(n, sin_vars, cos_vars, true);
}

MultilinearExpr cos_sum_expansion(int n, const std::vector<int>& sin_vars,
                                  const std::vector<int>& cos_vars) {
    return sum_expansion(n, sin_vars, cos_vars, false);
}

}  // namespace opf
