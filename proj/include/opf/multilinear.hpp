#ifndef OPF_MULTILINEAR_HPP
#define OPF_MULTILINEAR_HPP

#include <functional>
#include <stdexcept>
#include <vector>

namespace opf {

/// Signed combination of monomials in distinct variables:
///   constant + sum_t coef_t * prod_{j in vars_t} x_j
/// No variable repeats within a term; terms with equal variable sets merge.
struct MultilinearExpr {
    struct Term {
        double coef = 0.0;
        std::vector<int> vars;  // sorted, distinct
    };
    std::vector<Term> terms;
    double constant = 0.0;

    void add_term(double coef, std::vector<int> vars);
    int max_degree() const;
    std::vector<int> distinct_vars() const;  // sorted

    double eval(const std::function<double(int)>& value) const;
    double eval(const std::vector<double>& dense) const;
};

/// sin(sum theta_i) written over variables bound to sin(theta_i), cos(theta_i):
/// odd-size subsets A with sign (-1)^((|A|-1)/2).
MultilinearExpr sin_sum_expansion(int n, const std::vector<int>& sin_vars,
                                  const std::vector<int>& cos_vars);

/// cos(sum theta_i): even-size subsets A with sign (-1)^(|A|/2).
MultilinearExpr cos_sum_expansion(int n, const std::vector<int>& sin_vars,
                                  const std::vector<int>& cos_vars);

}  // namespace opf

#endif
