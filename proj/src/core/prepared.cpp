#include "prepared.hpp"

#include <algorithm>
#include <sstream>

namespace monoforge {

const char* prepared_tag_name(prepared_tag t) {
    switch (t) {
    case prepared_tag::one_pt: return "prepared-1pt";
    case prepared_tag::two_pt: return "prepared-2pt";
    case prepared_tag::two_pt_free: return "prepared-2pt-z";
    case prepared_tag::three_pt: return "prepared-3pt";
    case prepared_tag::split_xy: return "sp-2pt-xy";
    case prepared_tag::split_x_yz: return "sp-3pt-x-yz";
    case prepared_tag::split_xy_yz: return "sp-3pt-xy-yz";
    case prepared_tag::not_prepared: return "not-prepared";
    }
    return "?";
}

const char* good_tag_name(good_tag t) {
    switch (t) {
    case good_tag::monomial_3pt: return "good-3pt-monomial";
    case good_tag::split_3pt_x_yz: return "good-3pt-xy-z";
    case good_tag::split_3pt_xy_yz: return "good-3pt-xy-yz";
    case good_tag::monomial_2pt: return "good-2pt-monomial";
    case good_tag::diagonal_2pt: return "good-2pt-diagonal";
    case good_tag::monomial_2pt_free: return "good-2pt-monomial-z";
    case good_tag::split_2pt: return "good-2pt-x-y";
    case good_tag::good_1pt: return "good-1pt";
    case good_tag::bad: return "bad";
    }
    return "?";
}

const char* inv_case_name(inv_case c) {
    switch (c) {
    case inv_case::invertible: return "invertible";
    case inv_case::one_pt_monomial: return "1pt-monomial";
    case inv_case::two_pt_series: return "2pt-series";
    case inv_case::two_pt_monomial: return "2pt-monomial";
    case inv_case::two_pt_series_free: return "2pt-series-z";
    case inv_case::two_pt_monomial_free: return "2pt-monomial-z";
    case inv_case::two_pt_diagonal_free: return "2pt-diagonal-z";
    case inv_case::split_xy: return "split-x-y";
    case inv_case::three_pt_series: return "3pt-series";
    case inv_case::three_pt_monomial: return "3pt-monomial";
    case inv_case::split_x_yz: return "split-x-yz";
    case inv_case::split_xy_yz: return "split-xy-yz";
    }
    return "?";
}

std::optional<long> prepared_class::ord_p() const {
    for (size_t t = 0; t < P.size(); ++t)
        if (!is_zero(P[t])) return static_cast<long>(t);
    return std::nullopt;
}

rational prepared_class::min_ratio() const {
    bool first = true;
    rational best(0);
    for (size_t i = 0; i < 3; ++i) {
        if (mon[i] == 0) continue;
        rational q(factor[i], mon[i]);
        q.canonicalize();
        if (first || q < best) best = q, first = false;
    }
    if (first) fail(errc::internal, "no exceptional exponents");
    return best;
}

rational prepared_class::max_ratio() const {
    bool first = true;
    rational best(0);
    for (size_t i = 0; i < 3; ++i) {
        if (mon[i] == 0) continue;
        rational q(factor[i], mon[i]);
        q.canonicalize();
        if (first || q > best) best = q, first = false;
    }
    if (first) fail(errc::internal, "no exceptional exponents");
    return best;
}

namespace {

// rebuild the canonical exact germ from the classified data
map_germ canonical_germ(const prepared_class& pc, const std::vector<std::string>& vars,
                        const std::vector<int>& exc, base_kind base) {
    // The matched normal form is exact: P is a polynomial below the factor
    // thresholds (higher terms fold into the residual coordinate), and the
    // unit absorptions are formal identities. Truncation only limits the
    // certification, which classify_prepared has already checked.
    expv um{pc.mon[0] * static_cast<int>(pc.m), pc.mon[1] * static_cast<int>(pc.m),
            pc.mon[2] * static_cast<int>(pc.m)};
    series u = series::monomial(vars, um, rational(1));
    series v = series::zero(vars, series::kExact);
    for (size_t t = 0; t < pc.P.size(); ++t) {
        if (is_zero(pc.P[t])) continue;
        expv e{pc.mon[0] * static_cast<int>(t), pc.mon[1] * static_cast<int>(t),
               pc.mon[2] * static_cast<int>(t)};
        v += series::monomial(vars, e, pc.P[t]);
    }
    switch (pc.tag) {
    case prepared_tag::one_pt:
    case prepared_tag::two_pt_free: {
        expv e = pc.factor;
        e[static_cast<size_t>(pc.zvar)] += 1;
        v += series::monomial(vars, e, rational(1));
        break;
    }
    case prepared_tag::two_pt:
    case prepared_tag::three_pt:
        v += series::monomial(vars, pc.factor, rational(1));
        break;
    case prepared_tag::split_xy:
    case prepared_tag::split_x_yz:
    case prepared_tag::split_xy_yz:
        v = series::monomial(vars, pc.vmon, rational(1));
        break;
    default: fail(errc::internal, "canonical_germ on unprepared class");
    }
    return map_germ(u, v, exc, base);
}

// exceptional set implied by the classified data
std::vector<int> implied_exceptional(const prepared_class& pc) {
    std::vector<int> exc;
    for (int i = 0; i < 3; ++i) {
        if (pc.mon[static_cast<size_t>(i)] > 0 || pc.vmon[static_cast<size_t>(i)] > 0)
            exc.push_back(i);
    }
    return exc;
}

// Match v = unit * y^b (resp. y^b z^c) over the given variable set; absorbs
// the unit into one of the named variables.
struct mono_match {
    bool ok = false;
    expv mon{0, 0, 0};
    map_germ germ; // with the unit absorbed
};

mono_match match_pure_monomial(const map_germ& g, bool matching_v,
                               const std::vector<int>& absorb_into, long work) {
    mono_match out;
    const series& s = matching_v ? g.v : g.u;
    unit_monomial_split sp;
    try {
        sp = split_unit_monomial(s);
    } catch (const mf_error&) {
        return out;
    }
    if (sp.unit.term_count() == 1 && is_one(sp.unit.constant_term())) {
        out.ok = true;
        out.mon = sp.mon;
        out.germ = g;
        return out;
    }
    // absorb the unit into one of the named variables via a rational root
    for (int vi : absorb_into) {
        long a = sp.mon[static_cast<size_t>(vi)];
        if (a <= 0) continue;
        if (!exact_root(sp.unit.constant_term(), static_cast<unsigned long>(a))) continue;
        series w = sp.unit.unit_power(1, static_cast<unsigned long>(a), work);
        series x_of = solve_unit_absorption(w, vi, work);
        const std::string& name = g.vars()[static_cast<size_t>(vi)];
        series mono = series::monomial(g.vars(), sp.mon, rational(1),
                                       std::min(s.precision(), x_of.precision()));
        series u1 = matching_v ? g.u.substitute({{name, x_of}}, work) : mono;
        series v1 = matching_v ? mono : g.v.substitute({{name, x_of}}, work);
        out.ok = true;
        out.mon = sp.mon;
        out.germ = map_germ(u1, v1, g.exceptional, g.base);
        return out;
    }
    return out;
}

// uv-side form recognition (strongly prepared forms 2(a)-(c) / 1036 5-7).
prepared_class classify_two_point_base(const map_germ& g0, long work) {
    prepared_class out;
    out.base = base_kind::two_point;
    for (int orient = 0; orient < 2; ++orient) {
        bool swap = orient == 1;
        map_germ g = swap ? map_germ(g0.v, g0.u, g0.exceptional, g0.base) : g0;
        unit_monomial_split su, sv;
        try {
            su = split_unit_monomial(g.u);
            sv = split_unit_monomial(g.v);
        } catch (const mf_error&) {
            continue;
        }
        // supports must be disjoint except the sp3c overlap pattern
        std::vector<int> usup, vsup;
        for (int i = 0; i < 3; ++i) {
            if (su.mon[static_cast<size_t>(i)] > 0) usup.push_back(i);
            if (sv.mon[static_cast<size_t>(i)] > 0) vsup.push_back(i);
        }
        prepared_tag tag = prepared_tag::not_prepared;
        if (usup.size() == 1 && vsup.size() == 1 && usup != vsup)
            tag = prepared_tag::split_xy;
        else if (usup.size() == 1 && vsup.size() == 2 &&
                 std::find(vsup.begin(), vsup.end(), usup[0]) == vsup.end())
            tag = prepared_tag::split_x_yz;
        else if (usup.size() == 2 && vsup.size() == 2) {
            std::vector<int> inter;
            std::set_intersection(usup.begin(), usup.end(), vsup.begin(), vsup.end(),
                                  std::back_inserter(inter));
            if (inter.size() == 1 && usup[0] != vsup[0]) tag = prepared_tag::split_xy_yz;
        }
        if (tag == prepared_tag::not_prepared) continue;
        // absorb u's unit into a u-only variable, then v's unit into a v-only one
        std::vector<int> u_only, v_only;
        for (int i : usup)
            if (std::find(vsup.begin(), vsup.end(), i) == vsup.end()) u_only.push_back(i);
        for (int i : vsup)
            if (std::find(usup.begin(), usup.end(), i) == usup.end()) v_only.push_back(i);
        mono_match mu = match_pure_monomial(g, false, u_only, work);
        if (!mu.ok) continue;
        // the absorption only moved u-only variables, so v splits the same way
        mono_match mv = match_pure_monomial(mu.germ, true, v_only, work);
        if (!mv.ok) continue;
        out.tag = tag;
        out.swapped = swap;
        out.mon = su.mon;
        out.vmon = sv.mon;
        out.point_type = static_cast<int>(g.exceptional.size());
        out.m = 1;
        out.canonical = mv.germ;
        return out;
    }
    out.why_not = "no uv-side monomial form certified over Q";
    return out;
}

} // namespace

prepared_class classify_prepared(const map_germ& g, long work) {
    prepared_class out;
    out.base = g.base;

    // At a 2-point base either u = 0 or v = 0 cuts E_X; if neither does on
    // its own the pair splits across the branches (the uv-side forms).
    map_germ work_germ = g;
    if (g.base == base_kind::two_point) {
        auto covers = [&](const series& s) {
            try {
                unit_monomial_split sp = split_unit_monomial(s);
                for (int e : g.exceptional)
                    if (sp.mon[static_cast<size_t>(e)] == 0) return false;
                return true;
            } catch (const mf_error&) {
                return false;
            }
        };
        if (!covers(g.u)) {
            if (covers(g.v)) {
                work_germ = map_germ(g.v, g.u, g.exceptional, g.base);
                out.swapped = true;
            } else {
                prepared_class tp = classify_two_point_base(g, work);
                if (tp.prepared()) return tp;
                out.why_not = tp.why_not;
                return out;
            }
        }
    }

    normalized_form nf;
    try {
        nf = normalize(work_germ, work);
    } catch (const mf_error& e) {
        if (e.kind() == errc::precision_exhausted) throw;
        out.why_not = e.what();
        return out;
    }
    out.point_type = nf.point_type;
    out.m = nf.m;
    out.mon = nf.mon;
    out.factor = nf.factor;
    out.P = nf.p_coeffs;
    out.p_precision = nf.p_precision;

    if (nf.degenerate) {
        out.why_not = "v is a series in the base monomial";
        return out;
    }

    // Canonical P: over a 1-point image, v may be replaced by v - sum a_t u^t,
    // which clears every P-term whose degree is a multiple of m.
    series F = nf.F;
    std::vector<rational> P = out.P;
    if (g.base == base_kind::one_point) {
        for (size_t t = 0; t < P.size(); t += static_cast<size_t>(out.m)) P[t] = rational(0);
    }
    // Fold P-terms at or above the factor into F so deg(P) stays below it:
    // x^{ta} y^{tb} = x^c y^d * (monomial) once t*mon >= factor componentwise.
    for (size_t t = 0; t < P.size(); ++t) {
        if (is_zero(P[t])) continue;
        bool fold = true, strict = false;
        for (size_t i = 0; i < 3; ++i) {
            long lhs = static_cast<long>(t) * nf.mon[i];
            if (lhs < nf.factor[i]) fold = false;
            if (lhs > nf.factor[i]) strict = true;
        }
        if (!fold || !strict) continue; // equality never happens (normalization)
        expv e{static_cast<int>(t) * nf.mon[0] - nf.factor[0],
               static_cast<int>(t) * nf.mon[1] - nf.factor[1],
               static_cast<int>(t) * nf.mon[2] - nf.factor[2]};
        F += series::monomial(nf.germ.vars(), e, P[t], F.precision());
        P[t] = rational(0);
    }
    while (!P.empty() && is_zero(P.back())) P.pop_back();
    out.P = P;
    if (nf.p_precision < series::kExact) {
        // every P-term at or above the fold threshold must have been seen
        long t_max = 0;
        for (size_t i = 0; i < 3; ++i)
            if (nf.mon[i] > 0)
                t_max = std::max(t_max,
                                 (nf.factor[i] + nf.mon[i] - 1) / static_cast<long>(nf.mon[i]));
        if (nf.p_precision < t_max)
            fail(errc::precision_exhausted,
                 "polynomial part of the normal form not certified below precision");
    }

    const auto& vars = nf.germ.vars();
    std::vector<int> free_vars;
    for (int i = 0; i < 3; ++i)
        if (!nf.germ.is_exceptional(i)) free_vars.push_back(i);

    auto linear_free_var = [&]() -> int {
        for (int fv : free_vars) {
            expv e{0, 0, 0};
            e[static_cast<size_t>(fv)] = 1;
            if (!is_zero(F.coefficient(e))) return fv;
        }
        return -1;
    };

    if (nf.point_type == 1) {
        auto o = F.order();
        if (o && *o == 1) {
            int fv = linear_free_var();
            if (fv >= 0) {
                out.tag = prepared_tag::one_pt;
                out.zvar = fv;
                out.canonical = canonical_germ(out, vars, nf.germ.exceptional, g.base);
                return out;
            }
        }
        out.why_not = "F is not a free coordinate to precision";
        return out;
    }

    if (nf.point_type == 2) {
        if (F.is_unit() && F.term_count() >= 1) {
            // want v = P + x^c y^d exactly: scale x,y by unit powers of F;
            // the needed root is F(0)^{1/(ad-bc)}
            long a = 0, b = 0, c = 0, d = 0;
            int xi = nf.germ.exceptional[0], yi = nf.germ.exceptional[1];
            a = nf.mon[static_cast<size_t>(xi)];
            b = nf.mon[static_cast<size_t>(yi)];
            c = nf.factor[static_cast<size_t>(xi)];
            d = nf.factor[static_cast<size_t>(yi)];
            long det = a * d - b * c;
            if (det == 0) fail(errc::internal, "normalized 2-point factor parallel to monomial");
            // rescale v by 1/F(0) (permissible), then absorb the unit into
            // x, y: the needed root is of 1, so this always certifies
            rational f0 = F.constant_term();
            if (!is_one(f0))
                for (auto& q : out.P) q /= f0;
            out.tag = prepared_tag::two_pt;
            out.canonical = canonical_germ(out, vars, nf.germ.exceptional, g.base);
            return out;
        }
        int fv = free_vars.empty() ? -1 : free_vars[0];
        if (fv >= 0) {
            expv e{0, 0, 0};
            e[static_cast<size_t>(fv)] = 1;
            if (!is_zero(F.coefficient(e)) && F.order() && *F.order() == 1 &&
                is_zero(F.constant_term())) {
                out.tag = prepared_tag::two_pt_free;
                out.zvar = fv;
                out.canonical = canonical_germ(out, vars, nf.germ.exceptional, g.base);
                return out;
            }
        }
        out.why_not = "F is neither a unit nor a free coordinate to precision";
        return out;
    }

    // 3 point
    if (F.is_unit()) {
        long a = nf.mon[0], b = nf.mon[1], c = nf.mon[2];
        long d = nf.factor[0], e = nf.factor[1], f = nf.factor[2];
        long m1 = a * e - b * d, m2 = a * f - c * d, m3 = b * f - c * e;
        int zeros = (m1 == 0) + (m2 == 0) + (m3 == 0);
        if (zeros >= 2) {
            out.why_not = "exponent matrix has rank 1";
            return out;
        }
        // as at 2 points: a permissible rescale of v makes F(0) = 1, after
        // which the absorption roots are roots of 1
        rational f0 = F.constant_term();
        if (!is_one(f0))
            for (auto& q : out.P) q /= f0;
        out.tag = prepared_tag::three_pt;
        out.canonical = canonical_germ(out, vars, nf.germ.exceptional, g.base);
        return out;
    }
    out.why_not = "F is not a unit to precision";
    return out;
}

good_form classify_good(const prepared_class& pc) {
    good_form out;
    if (!pc.prepared()) {
        out.witness = "not strongly prepared";
        return out;
    }
    switch (pc.tag) {
    case prepared_tag::split_xy: out.tag = good_tag::split_2pt; return out;
    case prepared_tag::split_x_yz: out.tag = good_tag::split_3pt_x_yz; return out;
    case prepared_tag::split_xy_yz: out.tag = good_tag::split_3pt_xy_yz; return out;
    default: break;
    }
    // P is canonical (u-power terms already subtracted over 1-point images)
    std::optional<long> e = pc.ord_p();

    auto ratio_ok = [&](const std::optional<long>& ord) {
        if (!ord) return true; // P = 0
        return rational(*ord) >= pc.max_ratio();
    };

    switch (pc.tag) {
    case prepared_tag::one_pt: {
        int xi = -1;
        for (int i = 0; i < 3; ++i)
            if (pc.mon[static_cast<size_t>(i)] > 0) xi = i;
        long c = pc.factor[static_cast<size_t>(xi)];
        long a = pc.m * pc.mon[static_cast<size_t>(xi)];
        if (!e || *e >= c) {
            // v = x^c (alpha + y') with alpha the x^c coefficient
            rational alpha = (e && *e == c) ? pc.P[static_cast<size_t>(*e)] : rational(0);
            if (pc.base == base_kind::two_point && is_zero(alpha)) {
                out.witness = "two-point base needs alpha != 0 in the 1-point form";
                return out;
            }
            out.tag = good_tag::good_1pt;
            out.alpha = alpha;
            return out;
        }
        std::ostringstream w;
        w << "ord(P)=" << *e << " < c=" << c;
        if (pc.base == base_kind::one_point) w << " and a=" << a << " does not divide it";
        out.witness = w.str();
        return out;
    }
    case prepared_tag::two_pt: {
        if (!e) {
            out.tag = good_tag::monomial_2pt;
            return out;
        }
        if (ratio_ok(e)) {
            out.tag = good_tag::monomial_2pt; // absorbable: v = x^c y^d * (1 + positive tail)
            return out;
        }
        out.witness = "ord(P) below max(c/a, d/b)";
        return out;
    }
    case prepared_tag::two_pt_free: {
        if (!ratio_ok(e)) {
            out.witness = "ord(P) below max(c/a, d/b)";
            return out;
        }
        // diagonal factor: eq610 with alpha = the matching P coefficient
        bool diagonal = true;
        long t = -1;
        for (size_t i = 0; i < 3; ++i) {
            if (pc.mon[i] == 0) {
                if (pc.factor[i] != 0) diagonal = false;
                continue;
            }
            if (pc.factor[i] % pc.mon[i] != 0) diagonal = false;
            long ti = pc.factor[i] / pc.mon[i];
            if (t < 0)
                t = ti;
            else if (t != ti)
                diagonal = false;
        }
        if (diagonal) {
            rational alpha = static_cast<size_t>(t) < pc.P.size() ? pc.P[static_cast<size_t>(t)]
                                                                  : rational(0);
            if (pc.base == base_kind::two_point && is_zero(alpha)) {
                out.witness = "two-point base needs alpha != 0 in the diagonal form";
                return out;
            }
            out.tag = good_tag::diagonal_2pt;
            out.alpha = alpha;
            return out;
        }
        if (pc.base == base_kind::two_point) {
            out.witness = "v = x^c y^d z cannot cut the second branch";
            return out;
        }
        out.tag = good_tag::monomial_2pt_free;
        return out;
    }
    case prepared_tag::three_pt: {
        if (ratio_ok(e)) {
            out.tag = good_tag::monomial_3pt;
            return out;
        }
        out.witness = "ord(P) below max(d/a, e/b, f/c)";
        return out;
    }
    default: break;
    }
    out.witness = "unmatched form";
    return out;
}

inv_case is_mq_invertible(const prepared_class& pc) {
    if (!pc.prepared()) fail(errc::wrong_form, "invertibility analysis needs a strongly prepared germ");
    switch (pc.tag) {
    case prepared_tag::split_xy: return inv_case::split_xy;
    case prepared_tag::split_x_yz: return inv_case::split_x_yz;
    case prepared_tag::split_xy_yz: return inv_case::split_xy_yz;
    default: break;
    }
    auto e = pc.ord_p();
    long k = pc.m;
    rational l1 = pc.min_ratio(), l2 = pc.max_ratio();
    switch (pc.tag) {
    case prepared_tag::one_pt: {
        // u = x^k, v = P + x^c y with deg P < c after folding
        if (!e && l1 < k) return inv_case::one_pt_monomial;
        return inv_case::invertible;
    }
    case prepared_tag::two_pt: {
        if (e) return (l1 < k && l1 < *e) ? inv_case::two_pt_series : inv_case::invertible;
        return (l1 < k && rational(k) < l2) ? inv_case::two_pt_monomial : inv_case::invertible;
    }
    case prepared_tag::two_pt_free: {
        bool diag = l1 == l2;
        if (e) {
            if (diag) return inv_case::invertible;
            return (l1 < k && l1 < *e) ? inv_case::two_pt_series_free : inv_case::invertible;
        }
        if (diag) return l1 < k ? inv_case::two_pt_diagonal_free : inv_case::invertible;
        return l1 < k ? inv_case::two_pt_monomial_free : inv_case::invertible;
    }
    case prepared_tag::three_pt: {
        if (e) return (l1 < k && l1 < *e) ? inv_case::three_pt_series : inv_case::invertible;
        return (l1 < k && rational(k) < l2) ? inv_case::three_pt_monomial : inv_case::invertible;
    }
    default: break;
    }
    fail(errc::internal, "unhandled prepared tag");
}

bool mq_invertible_bruteforce(const map_germ& g) {
    // u | v or v | u by exact division: s1 | s2 iff the monomial part of s1
    // divides s2 (the unit part is invertible).
    auto divides = [](const series& s1, const series& s2) {
        try {
            unit_monomial_split sp = split_unit_monomial(s1);
            return s2.divisible_by_monomial(sp.mon);
        } catch (const mf_error&) {
            return false; // not unit * monomial, so it divides nothing invertibly
        }
    };
    return divides(g.u, g.v) || divides(g.v, g.u);
}

aci_result a_c_invariants(const prepared_class& pc) {
    if (!pc.prepared()) fail(errc::wrong_form, "A/C need a strongly prepared germ");
    aci_result out;
    switch (pc.tag) {
    case prepared_tag::split_xy:
    case prepared_tag::split_x_yz:
    case prepared_tag::split_xy_yz: {
        for (int i = 0; i < 3; ++i)
            if (pc.mon[static_cast<size_t>(i)] > 0 || pc.vmon[static_cast<size_t>(i)] > 0)
                out.divisors.push_back({pc.canonical.vars()[static_cast<size_t>(i)], 0, {}});
        return out;
    }
    default: break;
    }
    std::optional<long> e = pc.ord_p();
    for (int i = 0; i < 3; ++i) {
        long ai = pc.mon[static_cast<size_t>(i)];
        if (ai == 0) continue;
        long nu_e = pc.factor[static_cast<size_t>(i)];
        if (e) nu_e = std::min(nu_e, *e * ai);
        long A = pc.factor[static_cast<size_t>(i)] - nu_e;
        aci_divisor d;
        d.divisor = pc.canonical.vars()[static_cast<size_t>(i)];
        d.A = A;
        if (A > 0) d.C = std::make_pair(A, nu_e + ai * pc.m);
        out.divisors.push_back(d);
    }
    if (pc.tag == prepared_tag::one_pt && pc.base == base_kind::one_point) {
        good_form gf = classify_good(pc);
        if (gf.tag == good_tag::good_1pt) out.I = i_invariant(pc);
    }
    return out;
}

long i_invariant(const prepared_class& pc) {
    if (pc.tag != prepared_tag::one_pt || pc.base != base_kind::one_point)
        fail(errc::wrong_form, "I is defined for 1 points over 1 points");
    int xi = -1;
    for (int i = 0; i < 3; ++i)
        if (pc.mon[static_cast<size_t>(i)] > 0) xi = i;
    long c = pc.factor[static_cast<size_t>(xi)];
    long a = pc.m * pc.mon[static_cast<size_t>(xi)];
    return c - a;
}

std::string curve_invariant_value::str() const {
    if (!defined) return "-inf";
    std::ostringstream os;
    if (lex.size() == 1) {
        os << lex[0];
    } else {
        os << "(";
        for (size_t i = 0; i < lex.size(); ++i) os << (i ? "," : "") << lex[i];
        os << ")";
    }
    return os.str();
}

int compare_curve_values(const curve_invariant_value& a, const curve_invariant_value& b) {
    if (!a.defined && !b.defined) return 0;
    if (!a.defined) return -1;
    if (!b.defined) return 1;
    if (a.lex < b.lex) return -1;
    if (b.lex < a.lex) return 1;
    return 0;
}

namespace {

std::pair<long, long> sorted_pair(long x, long y) {
    long hx = std::max(x, y), lx = std::min(x, y);
    return {hx, lx};
}

} // namespace

curve_invariant_value curve_invariant(const prepared_class& pc, curve_kind kind) {
    curve_invariant_value out;
    if (kind == curve_kind::sigma) {
        if (pc.tag != prepared_tag::two_pt)
            fail(errc::wrong_form, "sigma needs the 2-point P-form locus");
        std::optional<long> e = pc.ord_p();
        if (!e) fail(errc::wrong_form, "sigma needs P nonzero after reduction");
        long a = 0, b = 0, c = 0, d = 0;
        int xi = pc.canonical.exceptional[0], yi = pc.canonical.exceptional[1];
        a = pc.mon[static_cast<size_t>(xi)];
        b = pc.mon[static_cast<size_t>(yi)];
        c = pc.factor[static_cast<size_t>(xi)];
        d = pc.factor[static_cast<size_t>(yi)];
        long s1 = c - a * *e, s2 = d - b * *e;
        if ((s1 > 0 && s2 > 0) || (s1 < 0 && s2 < 0) || s1 == 0 || s2 == 0) return out;
        auto [hi, lo] = sorted_pair(std::labs(s1), std::labs(s2));
        out.defined = true;
        out.lex = {hi, lo};
        return out;
    }
    if (kind == curve_kind::omega_big) {
        if (pc.tag != prepared_tag::one_pt || pc.ord_p())
            fail(errc::wrong_form, "Omega needs the 1-point monomial locus");
        int xi = -1;
        for (int i = 0; i < 3; ++i)
            if (pc.mon[static_cast<size_t>(i)] > 0) xi = i;
        long k = pc.m * pc.mon[static_cast<size_t>(xi)];
        long c = pc.factor[static_cast<size_t>(xi)];
        if (k - c <= 0) return out; // invertible locus: -infinity
        out.defined = true;
        out.lex = {k - c};
        return out;
    }
    // omega_small
    if (pc.tag == prepared_tag::split_xy) {
        long a = 0, b = 0;
        for (int i = 0; i < 3; ++i) {
            if (pc.mon[static_cast<size_t>(i)] > 0) a = pc.m * pc.mon[static_cast<size_t>(i)];
            if (pc.vmon[static_cast<size_t>(i)] > 0) b = pc.vmon[static_cast<size_t>(i)];
        }
        auto [hi, lo] = sorted_pair(a, b);
        out.defined = true;
        out.lex = {hi, lo};
        return out;
    }
    if (pc.tag != prepared_tag::two_pt || pc.ord_p())
        fail(errc::wrong_form, "omega needs the 2-point monomial locus");
    long a = 0, b = 0, c = 0, d = 0;
    int xi = pc.canonical.exceptional[0], yi = pc.canonical.exceptional[1];
    a = pc.mon[static_cast<size_t>(xi)];
    b = pc.mon[static_cast<size_t>(yi)];
    c = pc.factor[static_cast<size_t>(xi)];
    d = pc.factor[static_cast<size_t>(yi)];
    long k = pc.m;
    long s1 = k * a - c, s2 = k * b - d;
    if ((s1 > 0 && s2 > 0) || (s1 < 0 && s2 < 0) || s1 == 0 || s2 == 0) return out;
    auto [hi, lo] = sorted_pair(std::labs(s1), std::labs(s2));
    out.defined = true;
    out.lex = {hi, lo};
    return out;
}

toroidal_form is_toroidal(const prepared_class& pc) {
    toroidal_form out;
    if (!pc.prepared()) return out;
    good_form gf = classify_good(pc);
    if (!gf.good()) return out;
    if (pc.base == base_kind::one_point) {
        // 1(a): u = x^a y^b, v = z;   1(b): u = x^a, v = y
        if ((pc.tag == prepared_tag::two_pt_free || pc.tag == prepared_tag::one_pt) &&
            total_degree(pc.factor) == 0 && !pc.ord_p()) {
            int excs = 0;
            for (size_t i = 0; i < 3; ++i) excs += pc.mon[i] > 0;
            out.toroidal = true;
            out.form = excs == 2 ? "1(a)" : "1(b)";
            return out;
        }
        return out;
    }
    switch (pc.tag) {
    case prepared_tag::split_x_yz:
    case prepared_tag::split_xy_yz: out.toroidal = true, out.form = "2(a)"; return out;
    case prepared_tag::split_xy: out.toroidal = true, out.form = "2(b)"; return out;
    case prepared_tag::three_pt:
        if (gf.tag == good_tag::monomial_3pt) out.toroidal = true, out.form = "2(a)";
        return out;
    case prepared_tag::two_pt:
        if (gf.tag == good_tag::monomial_2pt) out.toroidal = true, out.form = "2(b)";
        return out;
    case prepared_tag::two_pt_free:
        if (gf.tag == good_tag::diagonal_2pt && !is_zero(gf.alpha))
            out.toroidal = true, out.form = "2(c)";
        return out;
    case prepared_tag::one_pt:
        if (gf.tag == good_tag::good_1pt && !is_zero(gf.alpha))
            out.toroidal = true, out.form = "2(d)";
        return out;
    default: return out;
    }
}

json prepared_to_json(const prepared_class& pc) {
    json j;
    j["tag"] = prepared_tag_name(pc.tag);
    if (!pc.prepared()) {
        j["reason"] = pc.why_not;
        return j;
    }
    j["point_type"] = pc.point_type;
    j["m"] = pc.m;
    const auto& vars = pc.canonical.vars();
    json mon = json::object(), fac = json::object(), vm = json::object();
    for (size_t i = 0; i < vars.size(); ++i) {
        if (pc.mon[i] > 0) mon[vars[i]] = pc.mon[i];
        if (pc.factor[i] > 0) fac[vars[i]] = pc.factor[i];
        if (pc.vmon[i] > 0) vm[vars[i]] = pc.vmon[i];
    }
    j["u_monomial"] = mon;
    if (pc.tag == prepared_tag::split_xy || pc.tag == prepared_tag::split_x_yz ||
        pc.tag == prepared_tag::split_xy_yz) {
        j["v_monomial"] = vm;
        if (pc.swapped) j["swapped"] = true;
    } else {
        j["factor"] = fac;
        std::ostringstream os;
        bool first = true;
        for (size_t t = 0; t < pc.P.size(); ++t) {
            if (is_zero(pc.P[t])) continue;
            if (!first) os << " + ";
            first = false;
            os << to_string(pc.P[t]) << "*t^" << t;
        }
        j["P"] = first ? "0" : os.str();
        if (pc.zvar >= 0) j["residual"] = vars[static_cast<size_t>(pc.zvar)];
    }
    j["u"] = pc.canonical.u.str();
    j["v"] = pc.canonical.v.str();
    return j;
}

} // namespace monoforge
