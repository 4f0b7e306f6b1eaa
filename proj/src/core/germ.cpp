#include "germ.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace monoforge {

long extnat::finite_or_throw(const char* what) const {
    if (kind != kind_t::finite)
        fail(errc::precision_exhausted, std::string(what) + " not determined below precision");
    return value;
}

std::string extnat::str() const {
    switch (kind) {
    case kind_t::finite: return std::to_string(value);
    case kind_t::at_least: return ">=" + std::to_string(value);
    case kind_t::infinite: return "inf";
    }
    return "?";
}

map_germ::map_germ(series u_, series v_, std::vector<int> exc, base_kind b)
    : u(std::move(u_)), v(std::move(v_)), exceptional(std::move(exc)), base(b) {
    if (u.vars() != v.vars()) fail(errc::invalid_argument, "u and v over different variables");
    std::sort(exceptional.begin(), exceptional.end());
    exceptional.erase(std::unique(exceptional.begin(), exceptional.end()), exceptional.end());
    for (int e : exceptional)
        if (e < 0 || e >= static_cast<int>(u.vars().size()))
            fail(errc::invalid_argument, "exceptional index out of range");
    if (exceptional.empty()) fail(errc::malformed_germ, "no exceptional variables");
    if (!is_zero(u.constant_term()) || !is_zero(v.constant_term()))
        fail(errc::malformed_germ, "u and v must vanish at the point");
}

bool map_germ::is_exceptional(int vi) const {
    return std::find(exceptional.begin(), exceptional.end(), vi) != exceptional.end();
}

std::string point_type_name(int t) {
    switch (t) {
    case 1: return "1 point";
    case 2: return "2 point";
    case 3: return "3 point";
    }
    return "?";
}

unit_monomial_split split_unit_monomial(const series& s) {
    if (s.is_zero()) fail(errc::malformed_germ, "zero series has no unit*monomial split");
    unit_monomial_split out;
    for (int v = 0; v < 3; ++v) out.mon[static_cast<size_t>(v)] = s.min_exponent(v);
    out.unit = s.divide_by_monomial(out.mon);
    if (!out.unit.is_unit())
        fail(errc::malformed_germ, "series is not unit * monomial: " + s.str());
    return out;
}

int classify_point(const map_germ& g) {
    auto sp = split_unit_monomial(g.u);
    int count = 0;
    for (size_t i = 0; i < g.vars().size(); ++i) {
        bool divides = sp.mon[i] > 0;
        bool exc = g.is_exceptional(static_cast<int>(i));
        if (divides && !exc)
            fail(errc::malformed_germ,
                 "u vanishes on non-exceptional variable " + g.vars()[i]);
        if (!divides && exc)
            fail(errc::malformed_germ,
                 "exceptional variable " + g.vars()[i] + " does not divide u");
        if (divides) ++count;
    }
    // The unit factor may involve any variables; that is absorbed in normalize().
    return count;
}

namespace {

// Absorb the unit of u into one exceptional variable. Tries each exceptional
// variable in order; the first one whose constant root is rational wins.
map_germ absorb_unit(const map_germ& g, const unit_monomial_split& sp, long work) {
    if (sp.unit.term_count() == 1 && is_one(sp.unit.constant_term())) return g;
    const auto& vars = g.vars();
    std::string need;
    for (int vi : g.exceptional) {
        long a = sp.mon[static_cast<size_t>(vi)];
        if (a <= 0) continue;
        if (!exact_root(sp.unit.constant_term(), static_cast<unsigned long>(a))) {
            need += (need.empty() ? "" : ", ") + std::to_string(a) + "th root of " +
                    to_string(sp.unit.constant_term());
            continue;
        }
        // x_bar = x * unit^{1/a}; express x in (x_bar, rest) and substitute.
        // u equals the bare monomial exactly in the new coordinate by the
        // definition of x_bar; truncation only limits our view of v.
        series w = sp.unit.unit_power(1, static_cast<unsigned long>(a), work);
        series x_of_xbar = solve_unit_absorption(w, vi, work);
        series new_u = series::monomial(vars, sp.mon, rational(1));
        std::map<std::string, series> sub{{vars[static_cast<size_t>(vi)], x_of_xbar}};
        series new_v = g.v.substitute(sub, windowed_cap(work, g.v.substituted_order_lb(sub)));
        return map_germ(new_u, new_v, g.exceptional, g.base);
    }
    fail(errc::unit_change_required,
         "u = unit * monomial needs " + (need.empty() ? std::string("a root") : need) +
             " over Q");
}

} // namespace

series normalized_form::base_monomial_series() const {
    return series::monomial(germ.vars(), mon, rational(1));
}

series normalized_form::reconstruct_v() const {
    const auto& vars = germ.vars();
    long prec = degenerate ? germ.v.precision() : F.precision() + total_degree(factor);
    series out = series::zero(vars, std::min(prec, series::kExact));
    for (size_t t = 0; t < p_coeffs.size(); ++t) {
        if (is_zero(p_coeffs[t])) continue;
        expv e{mon[0] * static_cast<int>(t), mon[1] * static_cast<int>(t),
               mon[2] * static_cast<int>(t)};
        out += series::monomial(vars, e, p_coeffs[t], out.precision());
    }
    if (!degenerate)
        out += series::mul(series::monomial(vars, factor, rational(1)), F, out.precision());
    return out;
}

std::string normalized_form::p_str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t t = 0; t < p_coeffs.size(); ++t) {
        if (is_zero(p_coeffs[t])) continue;
        if (!first) os << " + ";
        first = false;
        os << to_string(p_coeffs[t]) << "*t^" << t;
    }
    if (first) os << "0";
    return os.str();
}

normalized_form normalize(const map_germ& g0, long work) {
    int pt = classify_point(g0);
    auto sp0 = split_unit_monomial(g0.u);
    map_germ g = absorb_unit(g0, sp0, work);

    normalized_form nf;
    nf.point_type = pt;
    auto sp = split_unit_monomial(g.u);

    long mgcd = 0;
    for (size_t i = 0; i < 3; ++i)
        if (sp.mon[i] > 0) mgcd = std::gcd(mgcd, static_cast<long>(sp.mon[i]));
    nf.m = mgcd == 0 ? 1 : mgcd;
    for (size_t i = 0; i < 3; ++i) nf.mon[i] = sp.mon[i] / static_cast<int>(nf.m);

    long mon_deg = total_degree(nf.mon);
    // Split v into P-part (powers of the base monomial) and the rest.
    series rest = series::zero(g.vars(), g.v.precision());
    nf.p_precision = g.v.exact() ? series::kExact : g.v.precision() / mon_deg;
    for (auto& [e, c] : g.v.terms()) {
        // e = t * mon for integral t >= 0?
        long t = -1;
        bool pure = true;
        for (size_t i = 0; i < 3; ++i) {
            if (nf.mon[i] == 0) {
                if (e[i] != 0) pure = false;
            } else {
                if (e[i] % nf.mon[i] != 0) pure = false;
                long ti = e[i] / nf.mon[i];
                if (t < 0)
                    t = ti;
                else if (t != ti)
                    pure = false;
            }
            if (!pure) break;
        }
        if (pure && t >= 0) {
            if (static_cast<size_t>(t) >= nf.p_coeffs.size())
                nf.p_coeffs.resize(static_cast<size_t>(t) + 1, rational(0));
            nf.p_coeffs[static_cast<size_t>(t)] = c;
        } else {
            rest.set_term(e, c);
        }
    }
    if (!nf.p_coeffs.empty() && !is_zero(nf.p_coeffs[0]))
        fail(errc::malformed_germ, "v has a nonzero constant term");

    nf.germ = g;
    if (rest.is_zero()) {
        nf.degenerate = true;
        nf.F = series::zero(g.vars(), rest.precision());
        nf.factor = expv{0, 0, 0};
        return nf;
    }
    for (size_t i = 0; i < 3; ++i)
        nf.factor[i] = g.is_exceptional(static_cast<int>(i)) ? rest.min_exponent(static_cast<int>(i)) : 0;
    nf.F = rest.divide_by_monomial(nf.factor);
    return nf;
}

invariant_vector invariants(const normalized_form& nf) {
    invariant_vector out;
    const series& F = nf.F;
    if (nf.degenerate) {
        out.nu = F.exact() ? extnat::infinite() : extnat::at_least(F.precision() + 1);
        out.gamma = out.nu;
        if (nf.point_type == 3) out.gamma = std::nullopt;
        out.leading_form = series::zero(nf.germ.vars(), 0);
        return out;
    }
    auto o = F.order();
    if (!o) fail(errc::precision_exhausted, "nu not determined below precision");
    out.nu = extnat::finite(*o);
    out.leading_form = F.homogeneous_part(*o);

    auto restricted_order = [&](const series& R) -> extnat {
        auto ro = R.order();
        if (ro) return extnat::finite(*ro);
        return R.exact() ? extnat::infinite() : extnat::at_least(R.precision() + 1);
    };

    const auto& exc = nf.germ.exceptional;
    if (nf.point_type == 1) {
        out.gamma = restricted_order(F.restrict_zero(exc[0]));
    } else if (nf.point_type == 2) {
        out.gamma = restricted_order(F.restrict_zero(exc[0]).restrict_zero(exc[1]));
    } else {
        out.gamma = std::nullopt;
    }

    if (nf.point_type <= 2) {
        long tau = 0;
        for (auto& [e, c] : out.leading_form.terms()) {
            long free_deg = 0;
            for (size_t i = 0; i < 3; ++i)
                if (!nf.germ.is_exceptional(static_cast<int>(i))) free_deg += e[i];
            tau = std::max(tau, free_deg);
        }
        out.tau = tau;
        if (nf.point_type == 1 && *o > 0 && (tau < 1 || tau > *o))
            fail(errc::internal, "tau out of range at a 1 point");
    }
    return out;
}

curve_ideal parse_curve_ideal(const std::string& text, const series& model) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
    auto comma = s.find(',');
    if (comma == std::string::npos) fail(errc::parse_error, "ideal needs two generators");
    std::string g1 = s.substr(0, comma), g2 = s.substr(comma + 1);
    curve_ideal out;
    out.v1 = model.var_index(g1);
    if (out.v1 < 0) fail(errc::unsupported_center, "first generator must be a variable");
    out.v2 = model.var_index(g2);
    if (out.v2 < 0) {
        out.general = parse_series(g2, model.vars());
        // a plain variable written as an expression
        if (out.general->term_count() == 1) {
            for (size_t i = 0; i < model.vars().size(); ++i) {
                expv e{0, 0, 0};
                e[i] = 1;
                if (out.general->coefficient(e) == 1 && out.general->term_count() == 1 &&
                    total_degree(out.general->terms().begin()->first) == 1) {
                    out.v2 = static_cast<int>(i);
                    out.general.reset();
                    break;
                }
            }
        }
    }
    return out;
}

namespace {

// Solve f(..., w, ...) = 0 for w as a series in the other variables;
// requires a unit linear w-coefficient. Used to straighten (x, f) to (x, w).
series solve_branch(const series& f, int w, long work) {
    const auto& vars = f.vars();
    expv ew{0, 0, 0};
    ew[static_cast<size_t>(w)] = 1;
    rational c = f.coefficient(ew);
    if (is_zero(c))
        fail(errc::unsupported_center, "generator is not linear in any remaining variable");
    series phi = series::zero(vars, work);
    for (long pass = 0; pass <= work + 1; ++pass) {
        series val = f.substitute({{vars[static_cast<size_t>(w)], phi}}, work);
        if (val.is_zero()) return phi;
        series next = phi - val * (1 / c);
        if (next.same_terms(phi)) return next;
        phi = next;
    }
    return phi;
}

} // namespace

long curve_membership(const normalized_form& nf, const curve_ideal& ideal, long work) {
    if (nf.degenerate) return 0;
    series F = nf.F;
    int v1 = ideal.v1, v2 = ideal.v2;
    if (ideal.general) {
        // straighten (v1, f) to (v1, w) via w -> w + phi
        series f = *ideal.general;
        // pick the remaining variable in which f is linear
        int w = -1;
        for (size_t i = 0; i < F.vars().size(); ++i) {
            if (static_cast<int>(i) == v1) continue;
            expv e{0, 0, 0};
            e[i] = 1;
            if (!is_zero(f.coefficient(e))) {
                w = static_cast<int>(i);
                break;
            }
        }
        if (w < 0) fail(errc::unsupported_center, "singular curve generator");
        series f_for_solve = f;
        // ignore v1-multiples: the ideal (v1, f) equals (v1, f|_{v1=0})
        f_for_solve = f_for_solve.restrict_zero(v1);
        series phi = solve_branch(f_for_solve, w, work);
        series img = series::variable(F.vars(), F.vars()[static_cast<size_t>(w)]) + phi;
        F = F.substitute({{F.vars()[static_cast<size_t>(w)], img}},
                         std::min(work, F.exact() ? series::kExact : F.precision()));
        v2 = w;
    }
    if (F.is_zero()) return 0;
    long best = -1;
    for (auto& [e, c] : F.terms()) {
        long s = e[static_cast<size_t>(v1)] + e[static_cast<size_t>(v2)];
        if (best < 0 || s < best) best = s;
    }
    return best;
}

map_germ translate_point(const map_germ& g, const std::string& var, const rational& alpha,
                         long work) {
    int vi = g.u.var_index(var);
    if (vi < 0) fail(errc::invalid_argument, "unknown variable " + var);
    if (is_zero(alpha)) return g;
    const auto& vars = g.vars();
    series img = series::variable(vars, var) + series::constant(vars, alpha);
    std::map<std::string, series> sub{{var, img}};
    series u1 = g.u.substitute(sub, windowed_cap(work, g.u.substituted_order_lb(sub)));
    series v1 = g.v.substitute(sub, windowed_cap(work, g.v.substituted_order_lb(sub)));
    // the variable becomes a unit factor; it leaves the exceptional set
    std::vector<int> exc;
    for (int e : g.exceptional)
        if (e != vi) exc.push_back(e);
    if (exc.empty())
        fail(errc::malformed_germ, "translation removes every exceptional variable");
    // The image point may slide along D_S: recenter v and drop the second
    // branch when we moved off it.
    base_kind base = g.base;
    rational v0 = v1.constant_term();
    if (!is_zero(v0)) {
        v1 -= series::constant(vars, v0, v1.precision());
        base = base_kind::one_point;
    }
    return map_germ(u1, v1, exc, base);
}

} // namespace monoforge
