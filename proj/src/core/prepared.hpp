#ifndef MONOFORGE_CORE_PREPARED_HPP
#define MONOFORGE_CORE_PREPARED_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "germ.hpp"
#include "germ_io.hpp"

namespace monoforge {

enum class prepared_tag {
    one_pt,       // u = x^a,             v = P(x) + x^c y
    two_pt,       // u = (x^a y^b)^m,     v = P(x^a y^b) + x^c y^d
    two_pt_free,  // u = (x^a y^b)^m,     v = P(x^a y^b) + x^c y^d z
    three_pt,     // u = (x^a y^b z^c)^m, v = P(...) + x^d y^e z^f
    split_xy,     // u = x^a, v = y^b            (uv = 0 cuts E_X)
    split_x_yz,   // u = x^a, v = y^b z^c
    split_xy_yz,  // u = x^a y^b, v = y^c z^d
    not_prepared,
};

const char* prepared_tag_name(prepared_tag t);

// A strongly prepared germ in certified coordinates. For the u-side forms
// (one_pt..three_pt) `mon`/`factor`/`P` describe u = mon^m and
// v = P(mon) + factor * (1 | z); for the uv-side forms `mon`/`vmon` hold the
// two monomials.
struct prepared_class {
    prepared_tag tag = prepared_tag::not_prepared;
    int point_type = 0;
    base_kind base = base_kind::one_point;
    long m = 1;
    expv mon{0, 0, 0};
    expv factor{0, 0, 0};
    expv vmon{0, 0, 0}; // uv-side forms: the monomial of v
    int zvar = -1;      // residual coordinate (the free y or z of the form)
    std::vector<rational> P;
    long p_precision = 0;
    bool swapped = false; // matched with u and v interchanged
    map_germ canonical;
    std::string why_not;

    bool prepared() const { return tag != prepared_tag::not_prepared; }
    std::optional<long> ord_p() const;
    // ratios factor_i / mon_i over the exceptional variables of u
    rational min_ratio() const;
    rational max_ratio() const;
};

prepared_class classify_prepared(const map_germ& g, long work = kDefaultWorkPrecision);

enum class good_tag {
    monomial_3pt,     // u, v pure monomials in x, y, z of rank 2
    split_3pt_x_yz,   // u = x^a y^b, v = z^c
    split_3pt_xy_yz,  // u = x^a y^b, v = y^c z^d
    monomial_2pt,     // u, v monomials in x, y with nonzero determinant
    diagonal_2pt,     // v = alpha (x^a y^b)^t + (x^a y^b)^t z
    monomial_2pt_free,// v = x^c y^d z with nonzero determinant
    split_2pt,        // u = x^a, v = y^b
    good_1pt,         // v = alpha x^c + x^c y
    bad,
};
const char* good_tag_name(good_tag t);

struct good_form {
    good_tag tag = good_tag::bad;
    rational alpha{0};   // for the diagonal and 1-point forms
    std::string witness; // why bad
    bool good() const { return tag != good_tag::bad; }
};

good_form classify_good(const prepared_class& pc);

// Normal forms along which m_q fails to be invertible, keyed by the point
// type and whether the series part P survives.
enum class inv_case {
    invertible,
    one_pt_monomial,       // u = x^k, v = x^c y with c < k
    two_pt_series,         // 2 point, P != 0 strictly between the ratios
    two_pt_monomial,       // 2 point, v monomial, k strictly between
    two_pt_series_free,    // as two_pt_series with the residual z factor
    two_pt_monomial_free,  // v = x^c y^d z
    two_pt_diagonal_free,  // v = (x^a y^b)^t z with t < k
    split_xy,              // u = x^a, v = y^b
    three_pt_series,
    three_pt_monomial,
    split_x_yz,
    split_xy_yz,
};
const char* inv_case_name(inv_case c);

// Case analysis for whether m_q O_{X,p} = (u,v) is invertible, and the
// matched non-invertible normal form when it is not.
inv_case is_mq_invertible(const prepared_class& pc);

// Independent oracle: decide u|v or v|u by exact division of the series pair.
bool mq_invertible_bruteforce(const map_germ& g);

struct aci_divisor {
    std::string divisor; // variable whose vanishing cuts the component
    long A = 0;
    std::optional<std::pair<long, long>> C;
};

struct aci_result {
    std::vector<aci_divisor> divisors;
    std::optional<long> I; // only for 1 points over 1 points
};

aci_result a_c_invariants(const prepared_class& pc);

long i_invariant(const prepared_class& pc);

enum class curve_kind { sigma, omega_big, omega_small };

struct curve_invariant_value {
    bool defined = false; // false = -infinity marker
    std::vector<long> lex; // (hi, lo) pairs, or a single entry for Omega
    std::string str() const;
};
int compare_curve_values(const curve_invariant_value& a, const curve_invariant_value& b);

curve_invariant_value curve_invariant(const prepared_class& pc, curve_kind kind);

struct toroidal_form {
    bool toroidal = false;
    std::string form; // "1(a)", "1(b)", "2(a)".."2(d)"
};
toroidal_form is_toroidal(const prepared_class& pc);

json prepared_to_json(const prepared_class& pc);

} // namespace monoforge

#endif
