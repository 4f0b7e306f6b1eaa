#ifndef MONOFORGE_CORE_SERIES_HPP
#define MONOFORGE_CORE_SERIES_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rational.hpp"

namespace monoforge {

// Exponent vector over at most 3 variables; unused slots stay 0.
using expv = std::array<int, 3>;

inline int total_degree(const expv& e) { return e[0] + e[1] + e[2]; }

// A formal power series over Q in 1-3 named variables, known exactly up to a
// tracked total degree. `kExact` precision marks honest polynomials (germ-file
// literals and monomial substitutions of them); everything downstream
// propagates precision pessimistically.
class series {
  public:
    static constexpr long kExact = 1L << 40;

    series() = default;
    series(std::vector<std::string> vars, long precision);

    static series zero(std::vector<std::string> vars, long precision = kExact);
    static series constant(std::vector<std::string> vars, const rational& c,
                           long precision = kExact);
    static series monomial(std::vector<std::string> vars, const expv& e, const rational& c,
                           long precision = kExact);
    static series variable(std::vector<std::string> vars, const std::string& name,
                           long precision = kExact);

    const std::vector<std::string>& vars() const { return vars_; }
    size_t nvars() const { return vars_.size(); }
    long precision() const { return precision_; }
    bool exact() const { return precision_ >= kExact; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::map<expv, rational>& terms() const { return terms_; }

    int var_index(const std::string& name) const; // -1 when absent

    rational coefficient(const expv& e) const;
    rational constant_term() const;
    bool is_unit() const { return !is_zero() && !monoforge::is_zero(constant_term()); }

    // min total degree of a stored term; nullopt when zero to precision.
    std::optional<long> order() const;
    // first degree that could hide an unseen term (precision+1; kExact when exact).
    long order_lower_bound() const;
    // order per variable: min exponent of `v` over stored terms (0 for zero series).
    int min_exponent(int v) const;

    series with_precision(long p) const; // truncate to total degree <= p
    series homogeneous_part(long d) const;
    // substitute 0 for variable v (keeps the variable list).
    series restrict_zero(int v) const;

    series operator-() const;
    series& operator+=(const series& o);
    series& operator-=(const series& o);
    friend series operator+(series a, const series& b) { return a += b; }
    friend series operator-(series a, const series& b) { return a -= b; }
    friend series operator*(const series& a, const series& b) { return mul(a, b); }
    series& operator*=(const series& o) { return *this = mul(*this, o); }
    series operator*(const rational& c) const;

    static series mul(const series& a, const series& b, long cap = kExact);

    bool divisible_by_monomial(const expv& e) const;
    series divide_by_monomial(const expv& e) const;

    // 1/f for a unit f, to precision cap (or f's own precision if lower).
    series invert_unit(long cap) const;

    // g with g^q = f^p up to precision; requires f a unit whose constant term
    // has an exact rational (p/q)-th power.
    series unit_power(long p, unsigned long q, long cap) const;

    // Formal composition f(images). Every image must be a series over one
    // common variable list. Images of positive order always compose; a unit
    // image is allowed only when f is exact (see pessimistic rules in .cpp).
    series substitute(const std::map<std::string, series>& images, long cap = kExact) const;

    // lower bound for the order of substitute(images)
    long substituted_order_lb(const std::map<std::string, series>& images) const;

    // Convenience: rename variables positionally (same arity).
    series rename(const std::vector<std::string>& new_vars) const;

    bool same_terms(const series& o) const { return terms_ == o.terms_; }
    // equality of stored coefficients up to total degree d
    bool agrees_to(const series& o, long d) const;

    std::string str() const;

    void set_term(const expv& e, const rational& c); // respects precision invariant

  private:
    std::vector<std::string> vars_;
    std::map<expv, rational> terms_;
    long precision_ = kExact;

    void check_compatible(const series& o) const;
};

// Fixed-point solve of g = target * w(g, other vars)^{-1}... concretely:
// given x_new = x * w with w a unit series possibly involving x itself,
// returns x as a series in (x_new, other vars), i.e. the unique g with
// g * w(g) = x_new, to precision cap. `xi` is x's index in w's variable list.
series solve_unit_absorption(const series& w, int xi, long cap);

series parse_series(const std::string& text, const std::vector<std::string>& vars,
                    long precision = series::kExact);

} // namespace monoforge

#endif
