#include "transform3d.hpp"

#include <algorithm>
#include <sstream>

namespace monoforge {

namespace {

series var_s(const std::vector<std::string>& vars, size_t i) {
    return series::variable(vars, vars[i]);
}

blowup_edge run_chart(const normalized_form& parent, chart_map3d chart,
                      const std::vector<int>& exc, long work) {
    blowup_edge e;
    e.chart = std::move(chart);
    try {
        const auto& sub = e.chart.substitution;
        series u1 = parent.germ.u.substitute(
            sub, windowed_cap(work, parent.germ.u.substituted_order_lb(sub)));
        series v1 = parent.germ.v.substitute(
            sub, windowed_cap(work, parent.germ.v.substituted_order_lb(sub)));
        map_germ raw(u1, v1, exc, parent.germ.base);
        e.child = normalize(raw, work);
        e.child_inv = invariants(e.child);
        auto sp = split_unit_monomial(u1);
        if (!(sp.unit.term_count() == 1 && is_one(sp.unit.constant_term())))
            e.chart.renormalizer = "unit of u absorbed into an exceptional variable";
    } catch (const mf_error& err) {
        e.error = err.what();
    }
    return e;
}

} // namespace

std::vector<blowup_edge> quadratic_charts(const normalized_form& parent,
                                          const std::vector<std::pair<rational, rational>>&
                                              translations,
                                          long work) {
    const auto& g = parent.germ;
    const auto& vars = g.vars();
    if (g.dim() != 3) fail(errc::invalid_argument, "quadratic_charts needs a 3-variable germ");
    std::vector<std::pair<rational, rational>> ts{{rational(0), rational(0)}};
    for (auto& t : ts) (void)t;
    for (auto& t : translations)
        if (std::find(ts.begin(), ts.end(), t) == ts.end()) ts.push_back(t);

    std::vector<blowup_edge> out;
    for (size_t lead = 0; lead < 3; ++lead) {
        size_t o1 = (lead + 1) % 3, o2 = (lead + 2) % 3;
        if (o1 > o2) std::swap(o1, o2);
        for (auto& [alpha, beta] : ts) {
            chart_map3d ch;
            ch.substitution[vars[lead]] = var_s(vars, lead);
            ch.substitution[vars[o1]] =
                series::mul(var_s(vars, lead), var_s(vars, o1) + series::constant(vars, alpha));
            ch.substitution[vars[o2]] =
                series::mul(var_s(vars, lead), var_s(vars, o2) + series::constant(vars, beta));
            std::ostringstream lb;
            lb << vars[lead] << "-chart";
            if (!is_zero(alpha) || !is_zero(beta))
                lb << " (" << vars[o1] << "+" << to_string(alpha) << ", " << vars[o2] << "+"
                   << to_string(beta) << ")";
            ch.label = lb.str();
            // exceptional set downstairs: lead picks up the exceptional divisor;
            // o_i stays exceptional iff it was exceptional and not translated.
            std::vector<int> exc{static_cast<int>(lead)};
            if (g.is_exceptional(static_cast<int>(o1)) && is_zero(alpha))
                exc.push_back(static_cast<int>(o1));
            if (g.is_exceptional(static_cast<int>(o2)) && is_zero(beta))
                exc.push_back(static_cast<int>(o2));
            out.push_back(run_chart(parent, std::move(ch), exc, work));
        }
    }
    return out;
}

std::vector<blowup_edge> monoidal_charts(const normalized_form& parent, const curve_ideal& center,
                                         const std::vector<rational>& translations,
                                         std::optional<long> expected_r, long work) {
    const auto& g = parent.germ;
    const auto& vars = g.vars();
    if (expected_r) {
        long got = curve_membership(parent, center, work);
        if (got < *expected_r)
            fail(errc::center_not_in_locus, "curve membership " + std::to_string(got) +
                                                " below asserted " + std::to_string(*expected_r));
    }
    // straighten (v1, z - phi) to a coordinate pair first
    normalized_form p = parent;
    int c1 = center.v1, c2 = center.v2;
    if (center.general) {
        series f = center.general->restrict_zero(c1);
        int w = -1;
        for (size_t i = 0; i < vars.size(); ++i) {
            if (static_cast<int>(i) == c1) continue;
            expv e{0, 0, 0};
            e[i] = 1;
            if (!is_zero(f.coefficient(e))) {
                w = static_cast<int>(i);
                break;
            }
        }
        if (w < 0) fail(errc::unsupported_center, "center generator has no linear variable");
        // f = unit*(w - phi(rest)); substitute w -> w + phi
        expv ew{0, 0, 0};
        ew[static_cast<size_t>(w)] = 1;
        rational lc = f.coefficient(ew);
        series rest = (series::monomial(vars, ew, lc) - f) * (1 / lc); // phi + higher w-terms
        // iterate to a fixed point phi(|other vars) with f(w=phi)=0
        series phi = series::zero(vars, work);
        for (long pass = 0; pass <= work + 1; ++pass) {
            series next = rest.substitute({{vars[static_cast<size_t>(w)], phi}}, work);
            if (next.same_terms(phi)) break;
            phi = next;
        }
        series img = series::variable(vars, vars[static_cast<size_t>(w)]) + phi;
        std::map<std::string, series> shift{{vars[static_cast<size_t>(w)], img}};
        map_germ moved(g.u.substitute(shift, windowed_cap(work, g.u.substituted_order_lb(shift))),
                       g.v.substitute(shift, windowed_cap(work, g.v.substituted_order_lb(shift))),
                       g.exceptional, g.base);
        p = normalize(moved, work);
        c2 = w;
    }
    if (c1 < 0 || c2 < 0) fail(errc::unsupported_center, "center must use two variables");

    std::vector<blowup_edge> out;
    const auto& pvars = p.germ.vars();
    size_t a = static_cast<size_t>(c1), b = static_cast<size_t>(c2);
    size_t other = 3 - a - b;
    std::vector<rational> ts{rational(0)};
    for (auto& t : translations)
        if (std::find(ts.begin(), ts.end(), t) == ts.end()) ts.push_back(t);
    for (int dir = 0; dir < 2; ++dir) {
        size_t lead = dir == 0 ? a : b;
        size_t trail = dir == 0 ? b : a;
        for (auto& alpha : ts) {
            if (dir == 1 && !is_zero(alpha)) continue; // translated charts live on one side
            chart_map3d ch;
            ch.substitution[pvars[lead]] = var_s(pvars, lead);
            ch.substitution[pvars[trail]] =
                series::mul(var_s(pvars, lead), var_s(pvars, trail) + series::constant(pvars, alpha));
            ch.substitution[pvars[other]] = var_s(pvars, other);
            std::ostringstream lb;
            lb << "curve(" << pvars[a] << "," << pvars[b] << ") " << pvars[lead] << "-chart";
            if (!is_zero(alpha)) lb << " (" << pvars[trail] << "+" << to_string(alpha) << ")";
            ch.label = lb.str();
            std::vector<int> exc{static_cast<int>(lead)};
            if (p.germ.is_exceptional(static_cast<int>(trail)) && is_zero(alpha))
                exc.push_back(static_cast<int>(trail));
            if (p.germ.is_exceptional(static_cast<int>(other))) exc.push_back(static_cast<int>(other));
            out.push_back(run_chart(p, std::move(ch), exc, work));
        }
    }
    return out;
}

bool theorem_report::all_passed() const {
    for (auto& c : checks)
        if (c.applicable && !c.passed) return false;
    return true;
}

json theorem_report::to_json() const {
    json arr = json::array();
    for (auto& c : checks) {
        json j;
        j["rule"] = c.rule;
        j["chart"] = c.chart;
        j["applicable"] = c.applicable;
        j["passed"] = c.passed;
        if (!c.detail.empty()) j["detail"] = c.detail;
        arr.push_back(j);
    }
    json out;
    out["checks"] = arr;
    out["all_passed"] = all_passed();
    return out;
}

namespace {

long need_finite(const extnat& v, const char* what) {
    if (v.kind != extnat::kind_t::finite)
        fail(errc::precision_exhausted,
             std::string(what) + " is uncertified (" + v.str() + "); refusing to check a theorem");
    return v.value;
}

// gamma <= bound must be decidable; infinite/at_least above the bound is a
// definite failure, at_least below the bound is uncertified.
bool gamma_le(const extnat& g, long bound) {
    if (g.kind == extnat::kind_t::finite) return g.value <= bound;
    if (g.kind == extnat::kind_t::infinite) return false;
    if (g.value > bound) return false;
    fail(errc::precision_exhausted, "gamma uncertified for a theorem check");
}

bool gamma_eq(const extnat& g, long bound) {
    if (g.kind == extnat::kind_t::finite) return g.value == bound;
    if (g.kind == extnat::kind_t::infinite) return false;
    if (g.value > bound) return false;
    fail(errc::precision_exhausted, "gamma uncertified for a theorem check");
}

struct checker {
    theorem_report rep;
    const std::string* chart = nullptr;

    void add(const std::string& rule, bool applicable, bool passed, const std::string& detail) {
        rep.checks.push_back({rule, *chart, applicable, passed, detail});
    }
};

} // namespace

theorem_report check_descent(const normalized_form& parent, const invariant_vector& parent_inv,
                             const std::vector<blowup_edge>& edges, const blowup_center& center,
                             std::optional<long> caller_r) {
    checker ck;
    long r = need_finite(parent_inv.nu, "nu(p)");
    long taup = parent_inv.tau.value_or(0);
    int pt = parent.point_type;
    for (auto& e : edges) {
        static const std::string errlbl = "(chart failed)";
        ck.chart = e.error ? &errlbl : &e.chart.label;
        if (e.error) continue;
        long r1 = need_finite(e.child_inv.nu, "nu(q)");
        int qt = e.child.point_type;
        std::ostringstream d;
        d << "r=" << r << " r1=" << r1;
        const std::string detail = d.str();
        auto tag = [&](const char* name) {
            return std::string(name) + "(" + std::to_string(pt) + "->" + std::to_string(qt) + ")";
        };
        if (center.kind == blowup_center::kind_t::point) {
            // multiplicity bounds across the point blowup
            if (pt == 1 && qt == 1) ck.add(tag("quad") + " r1<=r", true, r1 <= r, detail);
            if (pt == 1 && qt == 2) {
                ck.add(tag("quad") + " r1<=r", true, r1 <= r, detail);
                ck.add(tag("quad") + " r1=r => tau(q)>0", r1 == r,
                       r1 != r || e.child_inv.tau.value_or(0) > 0, detail);
            }
            if (pt == 2 && qt == 1) {
                ck.add(tag("quad") + " r1<=r+1", true, r1 <= r + 1, detail);
                ck.add(tag("quad") + " r1=r+1 => gamma(q)=r+1", r1 == r + 1,
                       r1 != r + 1 || gamma_eq(*e.child_inv.gamma, r + 1), detail);
            }
            if (pt == 2 && (qt == 2 || qt == 3)) ck.add(tag("quad") + " r1<=r", true, r1 <= r, detail);
            if (pt == 3 && qt == 1) {
                ck.add(tag("quad") + " r1<=r+1", true, r1 <= r + 1, detail);
                ck.add(tag("quad") + " r1=r+1 => gamma(q)=r+1", r1 == r + 1,
                       r1 != r + 1 || gamma_eq(*e.child_inv.gamma, r + 1), detail);
            }
            if (pt == 3 && qt == 2) {
                ck.add(tag("quad") + " r1<=r+1", true, r1 <= r + 1, detail);
                ck.add(tag("quad") + " r1=r+1 => tau(q)>0", r1 == r + 1,
                       r1 != r + 1 || e.child_inv.tau.value_or(0) > 0, detail);
            }
            if (pt == 3 && qt == 3) ck.add(tag("quad") + " r1<=r", true, r1 <= r, detail);

            // tau/gamma refinements
            if (pt == 1) {
                if (qt == 1) {
                    ck.add(tag("quad-tau") + " tau(p)<r => r1<r", taup < r, taup >= r || r1 < r, detail);
                    ck.add(tag("quad-tau") + " r1=r => tau(q)=r", r1 == r,
                           r1 != r || e.child_inv.tau.value_or(0) == r, detail);
                    ck.add(tag("quad-tau") + " gamma(q)<=r", true, gamma_le(*e.child_inv.gamma, r),
                           detail);
                }
                if (qt == 2) {
                    ck.add(tag("quad-tau") + " r1=r => tau(p)<=tau(q)", r1 == r,
                           r1 != r || taup <= e.child_inv.tau.value_or(0), detail);
                    bool gp_r = parent_inv.gamma && gamma_eq(*parent_inv.gamma, r);
                    ck.add(tag("quad-tau") + " gamma(p)=r => gamma(q)<=r", gp_r,
                           !gp_r || gamma_le(*e.child_inv.gamma, r), detail);
                }
            }
            if (pt == 2 && taup >= 1) {
                if (qt == 1) {
                    ck.add(tag("quad-tau") + " r1<=r", true, r1 <= r, detail);
                    ck.add(tag("quad-tau") + " gamma(q)<=r", true, gamma_le(*e.child_inv.gamma, r),
                           detail);
                }
                if (qt == 2) {
                    ck.add(tag("quad-tau") + " r1=r => tau(p)<=tau(q)", r1 == r,
                           r1 != r || taup <= e.child_inv.tau.value_or(0), detail);
                    bool gp_r = parent_inv.gamma && gamma_eq(*parent_inv.gamma, r);
                    ck.add(tag("quad-tau") + " gamma(p)=r => gamma(q)<=r", gp_r,
                           !gp_r || gamma_le(*e.child_inv.gamma, r), detail);
                }
                if (qt == 3) ck.add(tag("quad-tau") + " r1<=r-tau(p)", true, r1 <= r - taup, detail);
            }
        } else {
            // Curve blowups. caller_r is the reference multiplicity r of the
            // ambient S_r locus; the parent's own nu selects the case.
            long rr = caller_r.value_or(r);
            bool two_curve = parent.germ.is_exceptional(center.curve.v1) &&
                             center.curve.v2 >= 0 &&
                             parent.germ.is_exceptional(center.curve.v2);
            if (two_curve) {
                // 2-curve blowup cases
                if (pt == 2 && r == rr - 1) {
                    if (qt == 1)
                        ck.add("curve2(2,nu=r-1->1) nu<=r, gamma<=r", true,
                               r1 <= rr && gamma_le(*e.child_inv.gamma, rr), detail);
                    if (qt == 2) ck.add("curve2(2,nu=r-1->2) nu<=r-1", true, r1 <= rr - 1, detail);
                }
                if (pt == 2 && r == rr && taup > 0) {
                    if (qt == 1)
                        ck.add("curve2(2,nu=r,tau>0->1) nu<=r, nu=r=>gamma=r", true,
                               r1 <= rr && (r1 != rr || gamma_eq(*e.child_inv.gamma, rr)), detail);
                    if (qt == 2)
                        ck.add("curve2(2,nu=r,tau>0->2) nu<=r, nu=r=>tau>0", true,
                               r1 <= rr && (r1 != rr || e.child_inv.tau.value_or(0) > 0), detail);
                }
                if (pt == 3 && r == rr - 1) {
                    if (qt == 2)
                        ck.add("curve2(3,nu=r-1->2) nu<=r, gamma<=r", true,
                               r1 <= rr && gamma_le(*e.child_inv.gamma, rr), detail);
                    if (qt == 3) ck.add("curve2(3,nu=r-1->3) nu<=r-1", true, r1 <= rr - 1, detail);
                }
            } else {
                // r-big curve through 1 points
                bool gp_r = parent_inv.gamma && gamma_eq(*parent_inv.gamma, rr);
                if (pt == 1 && r == rr && gp_r) {
                    if (qt == 1)
                        ck.add("curveR(1,nu=gamma=r->1) gamma<=r", true,
                               gamma_le(*e.child_inv.gamma, rr), detail);
                    if (qt == 2) ck.add("curveR(1,nu=gamma=r->2) nu=0", true, r1 == 0, detail);
                }
                if (pt == 1 && r == rr && !gp_r) {
                    if (qt == 1)
                        ck.add("curveR(1,nu=r,gamma!=r->1) gamma<r", true,
                               gamma_le(*e.child_inv.gamma, rr - 1), detail);
                    if (qt == 2)
                        ck.add("curveR(1,nu=r,gamma!=r->2) nu<=r-1", true, r1 <= rr - 1, detail);
                }
                if (pt == 2 && r == rr && gp_r) {
                    if (qt == 2)
                        ck.add("curveR(2,nu=gamma=r->2) nu<=r, gamma<=r", true,
                               r1 <= rr && gamma_le(*e.child_inv.gamma, rr), detail);
                    if (qt == 3) ck.add("curveR(2,nu=gamma=r->3) nu=0", true, r1 == 0, detail);
                }
                if (pt == 2 && r == rr && taup > 0) {
                    if (qt == 2)
                        ck.add("curveR(2,nu=r,tau>0->2) gamma<=r", true,
                               gamma_le(*e.child_inv.gamma, rr), detail);
                    if (qt == 3)
                        ck.add("curveR(2,nu=r,tau>0->3) nu<=r-tau", true, r1 <= rr - taup, detail);
                }
            }
        }
    }
    return ck.rep;
}

json edges_to_json(const std::vector<blowup_edge>& edges) {
    json arr = json::array();
    for (auto& e : edges) {
        json j;
        j["chart"] = e.chart.label;
        json sub = json::object();
        for (auto& [v, s] : e.chart.substitution) sub[v] = s.str();
        j["substitution"] = sub;
        if (!e.chart.renormalizer.empty()) j["renormalizer"] = e.chart.renormalizer;
        if (e.error) {
            j["error"] = *e.error;
        } else {
            j["germ"] = normalized_to_json(e.child);
            j["invariants"] = invariants_to_json(e.child, e.child_inv);
        }
        arr.push_back(j);
    }
    return arr;
}

} // namespace monoforge
