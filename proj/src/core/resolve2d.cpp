#include "resolve2d.hpp"

#include <algorithm>
#include <sstream>

namespace monoforge {

std::string delta_value::str() const {
    switch (kind) {
    case kind_t::finite: return to_string(value);
    case kind_t::inf_pending: return "inf?";
    case kind_t::inf_exact: return "inf";
    }
    return "?";
}

int compare_delta(const delta_value& a, const delta_value& b) {
    bool ia = a.is_infinite(), ib = b.is_infinite();
    if (ia && ib) return 0;
    if (ia) return 1;
    if (ib) return -1;
    if (a.value < b.value) return -1;
    if (a.value > b.value) return 1;
    return 0;
}

std::string inv2d::str() const {
    std::ostringstream os;
    os << "(" << nu_bar << ", " << (sigma2 == 1 ? "1/2" : (sigma2 == 2 ? "1" : "0")) << ", "
       << delta.str() << ")";
    return os.str();
}

int compare_inv(const inv2d& a, const inv2d& b) {
    if (a.nu_bar != b.nu_bar) return a.nu_bar < b.nu_bar ? -1 : 1;
    if (a.sigma2 != b.sigma2) return a.sigma2 < b.sigma2 ? -1 : 1;
    return compare_delta(a.delta, b.delta);
}

germ2d analyze2d(const map_germ& g, long work) {
    if (g.dim() != 2) fail(errc::invalid_argument, "analyze2d needs a 2-variable germ");
    germ2d out;
    out.nf = normalize(g, work);
    out.iv = invariants(out.nf);
    if (out.nf.degenerate)
        fail(errc::malformed_germ, "v is a series in the base monomial (analytically dependent)");
    return out;
}

long nu_bar(const germ2d& g) {
    long nu = g.iv.nu.finite_or_throw("nu");
    return g.nf.point_type == 1 ? nu - 1 : nu;
}

int sigma2(const germ2d& g) {
    if (g.nf.point_type == 2) return 1;
    long nu = g.iv.nu.finite_or_throw("nu");
    const extnat& gamma = *g.iv.gamma;
    if (gamma.kind == extnat::kind_t::finite && gamma.value == nu) return 0;
    // gamma > nu certainly (finite larger, bounded below beyond nu, or infinite)
    if (gamma.kind == extnat::kind_t::infinite) return 2;
    if (gamma.kind == extnat::kind_t::finite || gamma.value > nu) return 2;
    fail(errc::precision_exhausted, "sigma not determined below precision");
}

namespace {

// indexes of the exceptional ("x") and free ("y") variable of a 2d form
struct axes {
    size_t x, y;
};

axes axes_of(const normalized_form& nf, bool swap_xy) {
    const auto& exc = nf.germ.exceptional;
    size_t x0, y0;
    if (nf.point_type == 1) {
        x0 = static_cast<size_t>(exc[0]);
        y0 = 1 - x0;
    } else {
        x0 = static_cast<size_t>(exc[0]);
        y0 = static_cast<size_t>(exc[1]);
    }
    return swap_xy ? axes{y0, x0} : axes{x0, y0};
}

// certification ceiling for delta at multiplicity r and precision N:
// hidden terms (i,j), j in [1, r-1], i+j >= N+1 have i/(r-j) >= (N+1-j)/(r-j)
rational delta_ceiling(long N, long r) {
    rational best(0);
    bool first = true;
    for (long j = 1; j <= r - 1; ++j) {
        rational q(N + 1 - j, r - j);
        q.canonicalize();
        if (first || q < best) best = q, first = false;
    }
    return first ? rational(N + 1) : best;
}

} // namespace

delta_value delta_chart(const germ2d& g, bool swap_xy) {
    long r = g.iv.nu.finite_or_throw("nu");
    if (r == 0) fail(errc::invalid_argument, "delta undefined for a unit F");
    axes ax = axes_of(g.nf, swap_xy);
    const series& F = g.nf.F;
    bool found = false;
    rational best(0);
    for (auto& [e, c] : F.terms()) {
        long j = e[ax.y];
        if (j >= r) continue;
        rational q(e[ax.x], r - j);
        q.canonicalize();
        if (!found || q < best) best = q, found = true;
    }
    if (!found) {
        // F = y^r * unit; for a 1 point this is exact even at finite precision
        // (the true normalized F has no pure-x terms), at a 2 point hidden
        // low-j terms may exist.
        if (F.exact() || (g.nf.point_type == 1 && r == 1)) return delta_value::inf_exact();
        return delta_value::inf_pending();
    }
    if (!F.exact() && best >= delta_ceiling(F.precision(), r))
        fail(errc::precision_exhausted, "delta candidate beyond certified degree");
    return delta_value::finite(best);
}

delta_sup_result delta_sup(const germ2d& g0, long work) {
    if (g0.nf.point_type != 1) fail(errc::wrong_form, "delta_sup needs a 1 point");
    if (sigma2(g0) != 0) fail(errc::wrong_form, "delta_sup needs sigma = 0");
    germ2d g = g0;
    axes ax = axes_of(g.nf, false);
    const auto& vars = g.nf.germ.vars();
    series t = series::zero(vars, series::kExact);
    long budget = g.nf.F.exact() ? work : g.nf.F.precision();
    for (;;) {
        long r = g.iv.nu.finite_or_throw("nu");
        delta_value d = delta_chart(g, false);
        if (d.is_infinite()) return {d, t};
        const rational& delta = d.value;
        if (delta.get_den() != 1) return {d, t};
        if (delta > budget) return {delta_value::inf_pending(), t};
        long di = static_cast<long>(delta.get_num().get_si());
        // the delta-line must be tau*(y - c x^delta)^r minus its pure-x part
        const series& F = g.nf.F;
        expv etop{0, 0, 0};
        etop[ax.y] = static_cast<int>(r);
        rational tau = F.coefficient(etop);
        if (is_zero(tau)) fail(errc::internal, "sigma=0 but no y^r term");
        expv esub{0, 0, 0};
        esub[ax.x] = static_cast<int>(di);
        esub[ax.y] = static_cast<int>(r - 1);
        rational c = -F.coefficient(esub) / (tau * r);
        if (is_zero(c)) return {d, t};
        bool shape = true;
        for (auto& [e, q] : F.terms()) {
            long i = e[ax.x], j = e[ax.y];
            if (j >= r) continue;
            if (rational(i) + delta * j != delta * r) continue;
            // expected tau * C(r,j) * (-c)^{r-j}
            rational expect = tau * binomial(rational(r), static_cast<unsigned long>(r - j)) *
                              pow_int(-c, r - j);
            if (q != expect) {
                shape = false;
                break;
            }
        }
        if (shape) {
            // every line slot j in [1, r-1] must actually be present
            for (long j = 1; j < r; ++j) {
                expv e{0, 0, 0};
                e[ax.x] = static_cast<int>(di * (r - j));
                e[ax.y] = static_cast<int>(j);
                rational expect = tau * binomial(rational(r), static_cast<unsigned long>(r - j)) *
                                  pow_int(-c, r - j);
                if (F.coefficient(e) != expect) {
                    shape = false;
                    break;
                }
            }
        }
        if (!shape) return {d, t};
        // substitute y <- y + c x^delta and renormalize
        expv em{0, 0, 0};
        em[ax.x] = static_cast<int>(di);
        series img = series::variable(vars, vars[ax.y]) +
                     series::monomial(vars, em, c);
        map_germ moved(g.nf.germ.u, g.nf.germ.v.substitute({{vars[ax.y], img}}),
                       g.nf.germ.exceptional, g.nf.germ.base);
        t += series::monomial(vars, em, c);
        g = analyze2d(moved, work);
    }
}

delta_value delta_point(const germ2d& g, long work) {
    if (g.nf.point_type == 2) {
        delta_value a = delta_chart(g, false);
        delta_value b = delta_chart(g, true);
        return compare_delta(a, b) >= 0 ? a : b;
    }
    if (sigma2(g) == 2) return delta_value::finite(rational(1));
    return delta_sup(g, work).delta;
}

inv2d compute_inv(const germ2d& g, long work) {
    inv2d out;
    out.nu_bar = nu_bar(g);
    out.sigma2 = sigma2(g);
    if (out.nu_bar == 0 && g.nf.point_type == 2) {
        out.delta = delta_value::inf_exact(); // unused slot for resolved 2 points
        return out;
    }
    out.delta = delta_point(g, work);
    return out;
}

bool is_one_resolved(const germ2d& g, long work, bool* pending) {
    if (pending) *pending = false;
    if (g.nf.point_type == 2) {
        // resolved iff F is a unit
        long r = g.iv.nu.finite_or_throw("nu");
        return r == 0;
    }
    delta_value d = delta_point(g, work);
    if (d.kind == delta_value::kind_t::inf_pending && pending) *pending = true;
    return d.is_infinite();
}

std::string chart2d::label() const {
    if (infinity) return "x=xy, y=y";
    return "x=x, y=x(y+" + to_string(alpha) + ")";
}

edge2d quadratic_transform_2d(const germ2d& g, const chart2d& chart, long work) {
    const auto& vars = g.nf.germ.vars();
    axes ax = axes_of(g.nf, false);
    const std::string& xv = vars[ax.x];
    const std::string& yv = vars[ax.y];
    std::map<std::string, series> sub;
    std::vector<int> exc;
    if (chart.infinity) {
        // x = x1 y1, y = y1
        sub[xv] = series::mul(series::variable(vars, xv), series::variable(vars, yv));
        sub[yv] = series::variable(vars, yv);
        exc = {static_cast<int>(ax.x), static_cast<int>(ax.y)};
    } else {
        sub[xv] = series::variable(vars, xv);
        series y1 = series::variable(vars, yv) + series::constant(vars, chart.alpha);
        sub[yv] = series::mul(series::variable(vars, xv), y1);
        if (g.nf.point_type == 2 && !is_zero(chart.alpha))
            exc = {static_cast<int>(ax.x)};
        else if (g.nf.point_type == 2)
            exc = {static_cast<int>(ax.x), static_cast<int>(ax.y)};
        else
            exc = {static_cast<int>(ax.x)};
    }
    map_germ raw(g.nf.germ.u.substitute(sub, work), g.nf.germ.v.substitute(sub, work), exc,
                 g.nf.germ.base);
    edge2d out;
    out.chart = chart;
    out.child = analyze2d(raw, work);
    return out;
}

namespace {

void check_edge(const germ2d& parent, const inv2d& pi, const edge2d& e, const inv2d& ci) {
    if (ci.nu_bar > pi.nu_bar)
        fail(errc::internal, "descent violated: nu_bar increased " + pi.str() + " -> " + ci.str());
    if (ci.nu_bar == pi.nu_bar) {
        if (ci.sigma2 > pi.sigma2)
            fail(errc::internal, "descent violated: sigma increased at equal nu_bar " + pi.str() + " -> " + ci.str());
        bool both2 = parent.nf.point_type == 2 && e.child.nf.point_type == 2;
        bool both1 = parent.nf.point_type == 1 && e.child.nf.point_type == 1 &&
                     pi.sigma2 == 0 && pi.delta.is_finite();
        if ((both2 && pi.nu_bar > 0) || both1) {
            if (pi.delta.is_finite() && ci.delta.is_finite() &&
                ci.delta.value != pi.delta.value - 1)
                fail(errc::internal, "descent violated: delta did not drop by exactly 1: " + pi.delta.str() + " -> " +
                                         ci.delta.str());
        }
    }
    if (pi.nu_bar > 0 && pi.delta.is_finite()) {
        if (ci.delta.kind == delta_value::kind_t::inf_pending && ci.nu_bar == pi.nu_bar &&
            ci.sigma2 == pi.sigma2)
            fail(errc::precision_exhausted, "lexicographic descent uncertified (pending delta)");
        if (compare_inv(ci, pi) >= 0)
            fail(errc::internal, "descent violated: Inv did not drop " + pi.str() + " -> " + ci.str());
    }
}

// rational roots of the bad-point obstruction polynomial on the
// exceptional line of the blowup
std::vector<rational> obstruction_roots(const germ2d& g) {
    long r = g.iv.nu.finite_or_throw("nu");
    axes ax = axes_of(g.nf, false);
    const series& L = g.iv.leading_form;
    std::vector<rational> a(static_cast<size_t>(r) + 1, rational(0));
    for (auto& [e, c] : L.terms()) a[static_cast<size_t>(e[ax.y])] = c;
    std::vector<rational> O;
    if (g.nf.point_type == 1) {
        // d/dt sum a_j t^j
        O.resize(static_cast<size_t>(r), rational(0));
        for (long j = 1; j <= r; ++j) O[static_cast<size_t>(j - 1)] = a[static_cast<size_t>(j)] * j;
    } else {
        // sum (lambda + j) a_j t^j with lambda = d - b(c+d+r)/(a+b)
        long av = g.nf.mon[ax.x], bv = g.nf.mon[ax.y];
        long cv = g.nf.factor[ax.x], dv = g.nf.factor[ax.y];
        rational lambda = rational(dv) - rational(bv * (cv + dv + r), av + bv);
        O.resize(static_cast<size_t>(r) + 1, rational(0));
        for (long j = 0; j <= r; ++j)
            O[static_cast<size_t>(j)] = a[static_cast<size_t>(j)] * (lambda + j);
    }
    bool split = false;
    auto roots = rational_roots(O, &split);
    bool all_zero = std::all_of(O.begin(), O.end(), [](const rational& q) { return is_zero(q); });
    if (all_zero) fail(errc::internal, "obstruction polynomial vanished identically");
    if (!split) {
        std::ostringstream os;
        os << "obstruction polynomial does not split over Q:";
        for (size_t i = 0; i < O.size(); ++i)
            if (!is_zero(O[i])) os << " " << to_string(O[i]) << "*t^" << i;
        fail(errc::irrational_critical_point, os.str());
    }
    std::vector<rational> out;
    for (auto& q : roots) {
        if (is_zero(q)) continue;
        if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
    }
    return out;
}

} // namespace

tree2d resolve_all(const map_germ& g0, long max_depth, long work) {
    tree2d tree;
    germ2d root = analyze2d(g0, work);
    tree2d_node rn;
    rn.id = 0;
    rn.g = root;
    rn.invariants = compute_inv(root, work);
    bool pending = false;
    rn.resolved = is_one_resolved(root, work, &pending);
    rn.pending = pending;
    tree.nodes.push_back(rn);

    std::vector<int> frontier{0};
    while (!frontier.empty()) {
        int id = frontier.front();
        frontier.erase(frontier.begin());
        tree2d_node node = tree.nodes[static_cast<size_t>(id)];
        if (node.resolved) continue;
        if (node.depth >= max_depth) fail(errc::depth_exceeded, "resolve_all hit depth limit");
        std::vector<chart2d> charts;
        charts.push_back(chart2d{false, rational(0)});
        for (auto& q : obstruction_roots(node.g)) charts.push_back(chart2d{false, q});
        charts.push_back(chart2d{true, rational(0)});
        for (auto& ch : charts) {
            edge2d edge;
            try {
                edge = quadratic_transform_2d(node.g, ch, work);
            } catch (const mf_error& e) {
                if (e.kind() == errc::unit_change_required || e.kind() == errc::irrational_root)
                    fail(errc::irrational_critical_point,
                         std::string("chart needs an irrational root: ") + e.what());
                throw;
            }
            tree2d_node cn;
            cn.id = static_cast<int>(tree.nodes.size());
            cn.parent = id;
            cn.chart = ch.label();
            cn.g = edge.child;
            cn.invariants = compute_inv(edge.child, work);
            check_edge(node.g, node.invariants, edge, cn.invariants);
            bool p2 = false;
            cn.resolved = is_one_resolved(edge.child, work, &p2);
            cn.pending = p2;
            cn.depth = node.depth + 1;
            tree.max_path_len = std::max(tree.max_path_len, cn.depth);
            tree.nodes.push_back(cn);
            if (!cn.resolved) frontier.push_back(cn.id);
        }
    }
    return tree;
}

json tree_to_json(const tree2d& t) {
    json nodes = json::array();
    for (auto& n : t.nodes) {
        json j;
        j["id"] = n.id;
        j["parent"] = n.parent;
        j["chart"] = n.chart;
        j["u"] = n.g.nf.germ.u.str();
        j["v"] = n.g.nf.germ.v.str();
        json inv;
        inv["nu_bar"] = n.invariants.nu_bar;
        inv["sigma"] = n.invariants.sigma2 == 1 ? "1/2" : (n.invariants.sigma2 == 2 ? "1" : "0");
        inv["delta"] = n.invariants.delta.str();
        j["inv"] = inv;
        j["resolved"] = n.resolved;
        if (n.pending) j["resolved_pending_precision"] = true;
        nodes.push_back(j);
    }
    json out;
    out["nodes"] = nodes;
    out["max_path_len"] = t.max_path_len;
    return out;
}

rational dyn_state::delta_ij(size_t i, size_t j) const {
    long di = index_of(i), dj = index_of(j);
    rational ai(pairs[i].first, di), aj(pairs[j].first, dj);
    rational bi(pairs[i].second, di), bj(pairs[j].second, dj);
    ai.canonicalize();
    aj.canonicalize();
    bi.canonicalize();
    bj.canonicalize();
    return (ai - aj) * (bi - bj);
}

void dyn_state::step(dyn_move m) {
    std::vector<std::vector<rational>> before(pairs.size());
    for (size_t i = 0; i < pairs.size(); ++i) {
        before[i].resize(pairs.size());
        for (size_t j = 0; j < pairs.size(); ++j) before[i][j] = delta_ij(i, j);
    }
    for (size_t k = 0; k < pairs.size(); ++k) {
        auto& [al, be] = pairs[k];
        long j = index_of(k);
        switch (m) {
        case dyn_move::chart_x: be = al + be; break;             // x -> x y
        case dyn_move::chart_y: al = al + be; break;             // y -> x y
        case dyn_move::resolve_step: al = al + be - j; break;    // with exceptional division
        }
        if (sgn(al) < 0 || sgn(be) < 0)
            fail(errc::invalid_argument, "dynamics left the nonnegative quadrant");
    }
    rational gain_floor(1, pow_int(rational(r), 4).get_num());
    gain_floor.canonicalize();
    for (size_t i = 0; i < pairs.size(); ++i)
        for (size_t j = 0; j < pairs.size(); ++j) {
            if (i == j) continue;
            rational after = delta_ij(i, j);
            if (after < before[i][j]) fail(errc::internal, "delta_{n,i,j} decreased");
            if (sgn(before[i][j]) < 0 && after - before[i][j] < gain_floor)
                fail(errc::internal, "negative delta gained less than 1/r^4");
        }
}

long dyn_state::implied_bound() const {
    rational worst(0);
    for (size_t i = 0; i < pairs.size(); ++i)
        for (size_t j = 0; j < pairs.size(); ++j) {
            if (i == j) continue;
            rational d = delta_ij(i, j);
            if (d < worst) worst = d;
        }
    rational steps = -worst * pow_int(rational(r), 4);
    bigint n = steps.get_num() / steps.get_den() + 1;
    return n.get_si() + 2 * r + 1;
}

bool dyn_state::all_deltas_nonnegative() const {
    for (size_t i = 0; i < pairs.size(); ++i)
        for (size_t j = 0; j < pairs.size(); ++j)
            if (i != j && sgn(delta_ij(i, j)) < 0) return false;
    return true;
}

bool dyn_state::fractional_condition_met() const {
    if (!all_deltas_nonnegative()) return false;
    // the argmin index in both ratios exists once all deltas are nonnegative
    size_t best = 0;
    auto ratio = [&](size_t k, bool second) {
        long j = index_of(k);
        rational q(second ? pairs[k].second : pairs[k].first, j);
        q.canonicalize();
        return q;
    };
    for (size_t k = 1; k < pairs.size(); ++k) {
        if (ratio(k, false) < ratio(best, false) ||
            (ratio(k, false) == ratio(best, false) && ratio(k, true) < ratio(best, true)))
            best = k;
    }
    auto frac = [](const rational& q) -> rational {
        bigint fl;
        mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
        return rational(q - fl);
    };
    rational s = frac(ratio(best, false)) + frac(ratio(best, true));
    return s < 1;
}

} // namespace monoforge
