#ifndef SPECSEQ_ERRORS_HPP
#define SPECSEQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace specseq {

struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

struct division_by_zero : error {
    division_by_zero() : error("division by zero") {}
};

struct not_a_perfect_square : error {
    explicit not_a_perfect_square(const std::string& r)
        : error("no rational square root of " + r) {}
};

struct syntax_error : error {
    std::size_t position;
    syntax_error(const std::string& what, std::size_t pos)
        : error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

struct unknown_variable : error {
    explicit unknown_variable(const std::string& name)
        : error("unknown variable '" + name + "'") {}
};

struct variable_table_mismatch : error {
    variable_table_mismatch() : error("operands use different variable tables") {}
};

struct not_a_state_variable : error {
    explicit not_a_state_variable(const std::string& name)
        : error("'" + name + "' is not a STATE variable") {}
};

struct missing_image : error {
    explicit missing_image(const std::string& name)
        : error("no substitution image for variable '" + name + "'") {}
};

struct dimension_mismatch : error {
    dimension_mismatch() : error("dimension mismatch") {}
};

struct not_homogeneous : error {
    not_homogeneous() : error("vector field is not homogeneous") {}
};

struct chart_mismatch : error {
    chart_mismatch() : error("polynomial does not live on the given chart") {}
};

struct chart_failure : error {
    explicit chart_failure(const std::string& what) : error(what) {}
};

struct not_in_complex_chart : error {
    not_in_complex_chart() : error("monomial is not in the complex chart") {}
};

struct zero_weight_monomial : error {
    std::string monomial;
    explicit zero_weight_monomial(const std::string& m)
        : error("monomial " + m + " has weight 0 (generates coker ad(H0))"), monomial(m) {}
};

struct singular_hessian : error {
    singular_hessian() : error("Hessian is singular") {}
};

struct irrational_spectrum : error {
    irrational_spectrum() : error("spectrum leaves the coefficient field; specialize parameters") {}
};

struct odd_dimension : error {
    odd_dimension() : error("component count is odd; no symplectic structure") {}
};

struct filtration_violation : error {
    explicit filtration_violation(const std::string& label)
        : error("filtration violated at basis element " + label) {}
};

struct invalid_representative : error {
    invalid_representative() : error("representative violates the Z-membership window") {}
};

struct hypothesis_failure : error {
    int level;
    explicit hypothesis_failure(int lvl)
        : error("shift-0 component fails the extension hypothesis at level " + std::to_string(lvl)),
          level(lvl) {}
};

}  // namespace specseq

#endif
