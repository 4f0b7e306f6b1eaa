#ifndef MONOFORGE_CORE_GERM_HPP
#define MONOFORGE_CORE_GERM_HPP

#include <optional>
#include <string>
#include <vector>

#include "series.hpp"

namespace monoforge {

inline constexpr long kDefaultWorkPrecision = 24;

// Working precision measures a window past the order of the series at hand;
// germs whose monomial parts carry large exponents keep a full window.
inline long windowed_cap(long work, long order_lb) {
    if (order_lb >= series::kExact) return series::kExact;
    return work + order_lb;
}

enum class base_kind { one_point, two_point };

// Extended natural for invariants that may only be bounded below at finite
// precision (and may be genuinely infinite for exact data).
struct extnat {
    enum class kind_t { finite, at_least, infinite } kind = kind_t::finite;
    long value = 0;

    static extnat finite(long v) { return {kind_t::finite, v}; }
    static extnat at_least(long v) { return {kind_t::at_least, v}; }
    static extnat infinite() { return {kind_t::infinite, 0}; }

    bool is_finite() const { return kind == kind_t::finite; }
    long finite_or_throw(const char* what) const;
    std::string str() const;
    bool operator==(const extnat& o) const { return kind == o.kind && value == o.value; }
};

// The local model of a weakly prepared morphism at p: a pair (u,v) with the
// exceptional marking. u must be unit * monomial in the exceptional variables
// (checked during classification/normalization).
struct map_germ {
    series u, v;
    std::vector<int> exceptional; // indices into u.vars()
    base_kind base = base_kind::one_point;

    map_germ() = default;
    map_germ(series u_, series v_, std::vector<int> exc, base_kind b);

    size_t dim() const { return u.vars().size(); }
    const std::vector<std::string>& vars() const { return u.vars(); }
    bool is_exceptional(int vi) const;
};

// v = P(base monomial) + factor * F with F normalized per the 1/2/3-point
// decomposition; `germ` holds the pair in the normalized coordinates (u an
// exact monomial).
struct normalized_form {
    int point_type = 0; // 1, 2, 3
    long m = 1;         // u = mon^m with primitive mon
    expv mon{0, 0, 0};
    expv factor{0, 0, 0};
    std::vector<rational> p_coeffs; // P(t) = sum p_coeffs[t] t^t
    long p_precision = 0;           // t-degree up to which P is known
    series F;
    bool degenerate = false; // v is a series in the base monomial (F = 0)
    map_germ germ;

    long mon_degree() const { return total_degree(mon); }
    series base_monomial_series() const;
    series reconstruct_v() const; // P(mon) + factor * F
    std::string p_str() const;
};

struct invariant_vector {
    extnat nu;
    std::optional<extnat> gamma; // nullopt at 3 points (not applicable)
    std::optional<long> tau;     // only for 1 and 2 points with finite nu
    series leading_form;         // homogeneous part of F of degree nu
};

int classify_point(const map_germ& g);

// Def-650 normalization; absorbs the unit of u into an exceptional variable
// when the needed rational root exists.
normalized_form normalize(const map_germ& g, long work_precision = kDefaultWorkPrecision);

invariant_vector invariants(const normalized_form& nf);

// A coordinate ideal (var) + (var or series in the remaining variables).
struct curve_ideal {
    int v1 = -1;                    // index of the plain variable generator
    int v2 = -1;                    // second variable, when the ideal is a pair
    std::optional<series> general;  // second generator when not a plain variable
};

curve_ideal parse_curve_ideal(const std::string& text, const series& model);

// Largest s (up to precision) with F in I^s.
long curve_membership(const normalized_form& nf, const curve_ideal& ideal,
                      long work_precision = kDefaultWorkPrecision);

// The germ at a nearby point: substitute var -> var + alpha and renormalize.
// Demotes the variable from the exceptional set when alpha != 0.
map_germ translate_point(const map_germ& g, const std::string& var, const rational& alpha,
                         long work_precision = kDefaultWorkPrecision);

// Factor u = c * monomial * (1 + tail); throws MalformedGerm when impossible.
struct unit_monomial_split {
    expv mon{0, 0, 0};
    series unit; // includes the constant
};
unit_monomial_split split_unit_monomial(const series& s);

std::string point_type_name(int t);

} // namespace monoforge

#endif
