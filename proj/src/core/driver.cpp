#include "driver.hpp"

#include <algorithm>
#include <sstream>

#include "transform3d.hpp"

namespace monoforge {

namespace {

series divide(const series& num, const series& den, long work) {
    unit_monomial_split sp = split_unit_monomial(den);
    if (!num.divisible_by_monomial(sp.mon)) fail(errc::internal, "exact division failed");
    series q = num.divide_by_monomial(sp.mon);
    if (sp.unit.term_count() == 1 && is_one(sp.unit.constant_term())) return q;
    return series::mul(q, sp.unit.invert_unit(work));
}

bool divides(const series& a, const series& b) {
    return b.divisible_by_monomial(split_unit_monomial(a).mon);
}

// Present the pair in permissible parameters whose unit constants are 1, so
// the classification absorptions never need roots of stray rationals. This is
// the rescaling (u, v) -> (alpha u, beta v) with rational unit constants.
map_germ rescale_units(const map_germ& g) {
    series u = g.u, v = g.v;
    try {
        rational cu = split_unit_monomial(u).unit.constant_term();
        if (!is_one(cu)) u = u * (1 / cu);
    } catch (const mf_error&) {
    }
    try {
        rational cv = split_unit_monomial(v).unit.constant_term();
        if (!is_one(cv)) v = v * (1 / cv);
    } catch (const mf_error&) {
    }
    return map_germ(u, v, g.exceptional, g.base);
}

} // namespace

chart_forest::chart_forest(std::vector<forest_leaf_record> records, long work) : work_(work) {
    for (auto& rec : records) {
        chart_node n;
        n.id = next_id_++;
        n.divisor_class = rec.divisor_class;
        n.image_point = rec.image_point;
        n.pc = classify_prepared(rec.germ, work_);
        if (!n.pc.prepared())
            fail(errc::wrong_form,
                 "forest leaf " + std::to_string(n.id) + " is not strongly prepared: " +
                     n.pc.why_not);
        analyze(n);
        leaves_.push_back(std::move(n));
    }
}

void chart_forest::analyze(chart_node& n) const {
    map_germ g = n.pc.canonical;
    n.pc = classify_prepared(g, work_);
    if (!n.pc.prepared())
        fail(errc::internal, "leaf left the strongly prepared class: " + n.pc.why_not +
                                 " (u=" + g.u.str() + ", v=" + g.v.str() + ")");
    n.gf = classify_good(n.pc);
    n.invertibility = is_mq_invertible(n.pc);
    n.toro = is_toroidal(n.pc);
}

long chart_forest::global_A() const {
    long best = 0;
    for (auto& n : leaves_)
        for (auto& d : a_c_invariants(n.pc).divisors) best = std::max(best, d.A);
    return best;
}

std::optional<std::pair<long, long>> chart_forest::global_C() const {
    std::optional<std::pair<long, long>> best;
    for (auto& n : leaves_)
        for (auto& d : a_c_invariants(n.pc).divisors)
            if (d.C && (!best || *d.C > *best)) best = d.C;
    return best;
}

std::optional<long> chart_forest::global_I() const {
    // max I over 1 points lying over the images of non-toroidal leaves
    std::vector<std::string> bad_images;
    for (auto& n : leaves_)
        if (!n.toro.toroidal) bad_images.push_back(n.image_point);
    std::optional<long> best;
    for (auto& n : leaves_) {
        if (std::find(bad_images.begin(), bad_images.end(), n.image_point) == bad_images.end())
            continue;
        if (n.pc.tag != prepared_tag::one_pt || n.pc.base != base_kind::one_point) continue;
        if (n.gf.tag != good_tag::good_1pt) continue;
        long i = i_invariant(n.pc);
        if (!best || i > *best) best = i;
    }
    return best;
}

bool chart_forest::all_good() const {
    return std::all_of(leaves_.begin(), leaves_.end(),
                       [](const chart_node& n) { return n.gf.good(); });
}

bool chart_forest::all_toroidal() const {
    return std::all_of(leaves_.begin(), leaves_.end(),
                       [](const chart_node& n) { return n.toro.toroidal; });
}

bool chart_forest::all_invertible_over(const std::string& q) const {
    for (auto& n : leaves_)
        if (n.image_point == q && n.invertibility != inv_case::invertible) return false;
    return true;
}

json chart_forest::snapshot() const {
    json j;
    j["A"] = global_A();
    auto c = global_C();
    j["C"] = c ? json(json::array({c->first, c->second})) : json(nullptr);
    auto i = global_I();
    j["I"] = i ? json(*i) : json(nullptr);
    j["leaves"] = leaves_.size();
    return j;
}

void chart_forest::record(const std::string& kind, const json& detail) {
    json step;
    step["step"] = trace_.size();
    step["kind"] = kind;
    step["detail"] = detail;
    step["state"] = snapshot();
    trace_.push_back(step);
}

void chart_forest::base_blowup(const std::string& q) {
    std::vector<int> offenders;
    for (auto& n : leaves_)
        if (n.image_point == q && n.invertibility != inv_case::invertible) offenders.push_back(n.id);
    if (!offenders.empty()) {
        std::ostringstream os;
        os << "m_q not invertible at leaves";
        for (int id : offenders) os << " " << id;
        fail(errc::not_invertible, os.str());
    }
    std::string stamp = "q" + std::to_string(++point_counter_);
    for (auto& n : leaves_) {
        if (n.image_point != q) continue;
        aci_result before = a_c_invariants(n.pc);
        const map_germ& g = n.pc.canonical;
        bool u_div_v = divides(g.u, g.v);
        map_germ child = g;
        std::string chart;
        if (u_div_v) {
            series v1 = divide(g.v, g.u, work_);
            rational alpha = v1.constant_term();
            base_kind base = !is_zero(alpha) ? base_kind::one_point : g.base;
            if (!is_zero(alpha))
                v1 -= series::constant(g.vars(), alpha, v1.precision());
            child = map_germ(g.u, v1, g.exceptional, base);
            chart = "u-chart";
            n.image_point = stamp + "A" + (is_zero(alpha) ? "" : ":" + to_string(alpha));
        } else {
            // permissibly rescale v so its unit part has constant term 1; the
            // swapped pair then absorbs over Q
            rational gamma = split_unit_monomial(g.v).unit.constant_term();
            series w = g.v * (1 / gamma);
            series u1 = divide(g.u, w, work_);
            child = map_germ(w, u1, g.exceptional, base_kind::two_point);
            chart = "v-chart";
            n.image_point = stamp + "B";
        }
        n.pc.canonical = rescale_units(child);
        analyze(n);
        // descent of (A, C) under the base blowup at 1-point leaves
        aci_result after = a_c_invariants(n.pc);
        if (n.pc.tag == prepared_tag::one_pt && before.divisors.size() == 1 &&
            after.divisors.size() == 1) {
            long A0 = before.divisors[0].A, A1 = after.divisors[0].A;
            if (A1 > A0) fail(errc::internal, "base blowup descent violated: A increased");
            if (A1 == A0 && A0 > 0 && before.divisors[0].C && after.divisors[0].C &&
                !(*after.divisors[0].C < *before.divisors[0].C))
                fail(errc::internal, "base blowup descent violated: C did not drop");
        }
        json d;
        d["leaf"] = n.id;
        d["chart"] = chart;
        d["image"] = n.image_point;
        record("BaseBlowup", d);
    }
}

std::vector<chart_forest::center_candidate>
chart_forest::phase_candidates(const std::string& q, curve_kind kind) const {
    std::vector<center_candidate> out;
    auto phase_case = [&](inv_case c) {
        switch (kind) {
        case curve_kind::sigma: return c == inv_case::two_pt_series || c == inv_case::two_pt_series_free ||
                                       c == inv_case::three_pt_series;
        case curve_kind::omega_big:
            return c == inv_case::one_pt_monomial || c == inv_case::two_pt_monomial_free || c == inv_case::two_pt_diagonal_free;
        case curve_kind::omega_small:
            return c == inv_case::two_pt_monomial || c == inv_case::three_pt_monomial || c == inv_case::split_xy ||
                   c == inv_case::split_x_yz || c == inv_case::split_xy_yz;
        }
        return false;
    };
    for (size_t li = 0; li < leaves_.size(); ++li) {
        const chart_node& n = leaves_[li];
        if (n.image_point != q || n.invertibility == inv_case::invertible) continue;
        if (!phase_case(n.invertibility)) continue;
        const map_germ& g = n.pc.canonical;
        const auto& vars = g.vars();
        // candidate generator pairs by case
        std::vector<std::pair<int, int>> pairs;
        auto exc = g.exceptional;
        if (kind == curve_kind::omega_big) {
            // 1-curves through the locus: (x, z) with z the residual variable
            int z = n.pc.zvar;
            if (n.invertibility == inv_case::one_pt_monomial) {
                // v = x^c y: the locus is x = y(=z-resid) = 0
                pairs.emplace_back(exc[0], z);
            } else {
                for (int e : exc) pairs.emplace_back(e, z);
            }
        } else {
            for (size_t i = 0; i < exc.size(); ++i)
                for (size_t j = i + 1; j < exc.size(); ++j) pairs.emplace_back(exc[i], exc[j]);
            if (n.pc.tag == prepared_tag::split_xy || n.pc.tag == prepared_tag::split_x_yz ||
                n.pc.tag == prepared_tag::split_xy_yz) {
                pairs.clear();
                // 2 curves where u and v both vanish: one variable from each side
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        if (n.pc.mon[static_cast<size_t>(i)] > 0 &&
                            n.pc.vmon[static_cast<size_t>(j)] > 0 && i != j)
                            pairs.emplace_back(std::min(i, j), std::max(i, j));
            }
        }
        for (auto& [v1, v2] : pairs) {
            // germ at a generic point of the curve: translate the remaining
            // variable by 1 when it is exceptional
            int third = 3 - v1 - v2;
            map_germ probe = g;
            bool ok = true;
            if (g.is_exceptional(third) || n.pc.vmon[static_cast<size_t>(third)] > 0) {
                try {
                    probe = translate_point(g, vars[static_cast<size_t>(third)], rational(1),
                                            work_);
                } catch (const mf_error&) {
                    ok = false;
                }
            }
            if (!ok) continue;
            prepared_class ppc;
            try {
                ppc = classify_prepared(probe, work_);
            } catch (const mf_error&) {
                continue;
            }
            if (!ppc.prepared()) continue;
            inv_case pcase;
            try {
                pcase = is_mq_invertible(ppc);
            } catch (const mf_error&) {
                continue;
            }
            curve_invariant_value val;
            try {
                switch (kind) {
                case curve_kind::sigma:
                    if (pcase != inv_case::two_pt_series) continue;
                    val = curve_invariant(ppc, curve_kind::sigma);
                    break;
                case curve_kind::omega_big:
                    if (pcase != inv_case::one_pt_monomial) continue;
                    val = curve_invariant(ppc, curve_kind::omega_big);
                    break;
                case curve_kind::omega_small:
                    if (pcase == inv_case::two_pt_monomial)
                        val = curve_invariant(ppc, curve_kind::omega_small);
                    else if (pcase == inv_case::split_xy)
                        val = curve_invariant(ppc, curve_kind::omega_small);
                    else
                        continue;
                    break;
                }
            } catch (const mf_error&) {
                continue;
            }
            if (!val.defined) continue;
            center_candidate c;
            c.leaf_index = li;
            c.v1 = v1;
            c.v2 = v2;
            c.kind = kind;
            c.value = val;
            c.desc = "(" + vars[static_cast<size_t>(v1)] + "," + vars[static_cast<size_t>(v2)] +
                     ") at leaf " + std::to_string(n.id);
            out.push_back(c);
        }
    }
    return out;
}

void chart_forest::blow_curve(const center_candidate& c) {
    chart_node parent = leaves_[c.leaf_index];
    const map_germ& g = parent.pc.canonical;
    normalized_form nf = normalize(g, work_);
    curve_ideal center;
    center.v1 = c.v1;
    center.v2 = c.v2;
    auto edges = monoidal_charts(nf, center, {rational(1)}, std::nullopt, work_);
    std::vector<chart_node> children;
    for (auto& e : edges) {
        if (e.error) continue; // translated spot charts may need roots we lack
        chart_node n;
        n.id = next_id_++;
        n.image_point = parent.image_point;
        bool on_new_divisor = true; // every chart of the curve blowup meets it
        n.divisor_class = on_new_divisor
                              ? parent.divisor_class + "." + std::to_string(divisor_counter_)
                              : parent.divisor_class;
        prepared_class pc = classify_prepared(rescale_units(e.child.germ), work_);
        if (!pc.prepared())
            fail(errc::unsupported_center,
                 "curve blowup left the strongly prepared class: " + pc.why_not);
        n.pc = pc;
        analyze(n);
        children.push_back(std::move(n));
    }
    ++divisor_counter_;
    leaves_.erase(leaves_.begin() + static_cast<long>(c.leaf_index));
    for (auto& n : children) leaves_.push_back(std::move(n));
    std::sort(leaves_.begin(), leaves_.end(),
              [](const chart_node& a, const chart_node& b) { return a.id < b.id; });
}

void chart_forest::principalize(const std::string& q, long max_steps) {
    long steps = 0;
    for (curve_kind kind :
         {curve_kind::sigma, curve_kind::omega_big, curve_kind::omega_small}) {
        const char* phase = kind == curve_kind::sigma
                                ? "sigma"
                                : (kind == curve_kind::omega_big ? "Omega" : "omega");
        for (;;) {
            auto cands = phase_candidates(q, kind);
            if (cands.empty()) break;
            if (++steps > max_steps)
                fail(errc::depth_exceeded, "principalize exceeded the step budget");
            auto best = std::max_element(
                cands.begin(), cands.end(), [](const center_candidate& a, const center_candidate& b) {
                    int c = compare_curve_values(a.value, b.value);
                    if (c != 0) return c < 0;
                    if (a.leaf_index != b.leaf_index) return a.leaf_index > b.leaf_index;
                    return std::tie(a.v1, a.v2) > std::tie(b.v1, b.v2);
                });
            center_candidate chosen = *best;
            curve_invariant_value pre = chosen.value;
            size_t pre_count = 0;
            for (auto& cd : cands)
                if (compare_curve_values(cd.value, pre) == 0) ++pre_count;
            json d;
            d["phase"] = phase;
            d["center"] = chosen.desc;
            d["value"] = pre.str();
            blow_curve(chosen);
            // strict descent of (max value, count at max) among active centers
            auto after = phase_candidates(q, kind);
            if (!after.empty()) {
                auto mx = std::max_element(after.begin(), after.end(),
                                           [](const center_candidate& a, const center_candidate& b) {
                                               return compare_curve_values(a.value, b.value) < 0;
                                           });
                int cmp = compare_curve_values(mx->value, pre);
                if (cmp > 0)
                    fail(errc::internal, std::string(phase) + " descent violated (value rose)");
                if (cmp == 0) {
                    size_t count = 0;
                    for (auto& cd : after)
                        if (compare_curve_values(cd.value, pre) == 0) ++count;
                    if (count >= pre_count)
                        fail(errc::internal,
                             std::string(phase) + " descent violated (count did not drop)");
                }
            }
            record("CurveBlowup", d);
        }
    }
    if (!all_invertible_over(q))
        fail(errc::unsupported_center,
             "principalization left a non-invertible leaf with no visible center over " + q);
}

void chart_forest::monomialize(long max_steps) {
    long steps = 0;
    while (!all_good()) {
        if (++steps > max_steps)
            fail(errc::depth_exceeded, "monomialize exceeded the step budget");
        long A = global_A();
        if (A <= 0) fail(errc::internal, "bad leaf with A(Phi) = 0 (good is equivalent to A = 0)");
        auto C = global_C();
        // the class attaining C(Phi) maps to a single image point
        std::string q;
        size_t count_at_max = 0;
        for (auto& n : leaves_)
            for (auto& d : a_c_invariants(n.pc).divisors)
                if (d.C && *d.C == *C) {
                    if (q.empty()) q = n.image_point;
                    ++count_at_max;
                }
        principalize(q);
        base_blowup(q);
        auto C1 = global_C();
        if (C1 && *C1 > *C) fail(errc::internal, "monomialize: C(Phi) increased");
        if (C1 && *C1 == *C) {
            size_t count = 0;
            for (auto& n : leaves_)
                for (auto& d : a_c_invariants(n.pc).divisors)
                    if (d.C && *d.C == *C) ++count;
            if (count >= count_at_max)
                fail(errc::internal, "monomialize: count at C(Phi) did not drop");
        }
        json d;
        d["image"] = q;
        record("MonomializeRound", d);
    }
}

void chart_forest::toroidalize(long max_steps) {
    if (!all_good())
        fail(errc::wrong_form, "toroidalize needs every leaf good; monomialize first");
    long steps = 0;
    // phase 1: push I(Phi) to <= 0
    for (;;) {
        auto I = global_I();
        if (!I || *I <= 0) break;
        if (++steps > max_steps) fail(errc::depth_exceeded, "toroidalize exceeded the step budget");
        std::string q;
        size_t count_at_max = 0;
        for (auto& n : leaves_) {
            if (n.pc.tag != prepared_tag::one_pt || n.gf.tag != good_tag::good_1pt) continue;
            if (n.pc.base != base_kind::one_point) continue;
            if (i_invariant(n.pc) == *I) {
                if (q.empty()) q = n.image_point;
                ++count_at_max;
            }
        }
        for (auto& n : leaves_)
            if (n.image_point == q &&
                (n.invertibility == inv_case::two_pt_series || n.invertibility == inv_case::two_pt_series_free ||
                 n.invertibility == inv_case::three_pt_series))
                fail(errc::internal, "good forest produced a sigma-phase locus");
        principalize(q);
        base_blowup(q);
        if (!all_good()) fail(errc::internal, "toroidalize phase 1 left a bad leaf");
        auto I1 = global_I();
        if (I1 && *I1 > *I) fail(errc::internal, "toroidalize: I(Phi) increased");
        if (I1 && *I1 == *I) {
            size_t count = 0;
            for (auto& n : leaves_) {
                if (n.pc.tag != prepared_tag::one_pt || n.gf.tag != good_tag::good_1pt) continue;
                if (n.pc.base != base_kind::one_point) continue;
                if (i_invariant(n.pc) == *I1) ++count;
            }
            if (count >= count_at_max)
                fail(errc::internal, "toroidalize: count at I(Phi) did not drop");
        }
        json d;
        d["image"] = q;
        d["I"] = *I;
        record("ToroidalizeI", d);
    }
    // phase 2: blow up images of non-toroidal leaves
    while (!all_toroidal()) {
        if (++steps > max_steps) fail(errc::depth_exceeded, "toroidalize exceeded the step budget");
        std::string q;
        for (auto& n : leaves_)
            if (!n.toro.toroidal) {
                q = n.image_point;
                break;
            }
        principalize(q);
        base_blowup(q);
        if (!all_good()) fail(errc::internal, "toroidalize phase 2 left a bad leaf");
        json d;
        d["image"] = q;
        record("ToroidalizePoint", d);
    }
}

json chart_forest::trace_json() const {
    json out;
    out["steps"] = trace_;
    out["final"] = snapshot();
    return out;
}

json chart_forest::forest_json() const {
    json arr = json::array();
    for (auto& n : leaves_) {
        json j;
        j["id"] = n.id;
        j["class"] = n.divisor_class;
        j["image"] = n.image_point;
        j["germ"] = germ_to_json(n.pc.canonical);
        j["form"] = prepared_tag_name(n.pc.tag);
        j["good"] = good_tag_name(n.gf.tag);
        j["invertible"] = n.invertibility == inv_case::invertible;
        if (n.invertibility != inv_case::invertible) j["case"] = inv_case_name(n.invertibility);
        j["toroidal"] = n.toro.toroidal;
        if (n.toro.toroidal) j["toroidal_form"] = n.toro.form;
        arr.push_back(j);
    }
    json out;
    out["leaves"] = arr;
    return out;
}

} // namespace monoforge
