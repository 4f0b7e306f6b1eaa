#include "monoforge.h"

#include <cctype>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "core/driver.hpp"
#include "core/germ_io.hpp"
#include "core/prepared.hpp"
#include "core/resolve2d.hpp"
#include "core/transform3d.hpp"

#define MF_EXPORT __attribute__((visibility("default")))

using namespace monoforge;

struct mf_germ {
    map_germ g;
    long work = kDefaultWorkPrecision;
};

struct mf_forest {
    chart_forest f;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

mf_status status_of(errc k) {
    switch (k) {
    case errc::parse_error: return MF_ERR_PARSE;
    case errc::precision_exhausted: return MF_ERR_PRECISION_EXHAUSTED;
    case errc::irrational_root: return MF_ERR_IRRATIONAL_ROOT;
    case errc::non_unit: return MF_ERR_NON_UNIT;
    case errc::malformed_germ: return MF_ERR_MALFORMED_GERM;
    case errc::unit_change_required: return MF_ERR_UNIT_CHANGE_REQUIRED;
    case errc::wrong_form: return MF_ERR_WRONG_FORM;
    case errc::center_not_in_locus: return MF_ERR_CENTER_NOT_IN_LOCUS;
    case errc::not_invertible: return MF_ERR_NOT_INVERTIBLE;
    case errc::depth_exceeded: return MF_ERR_DEPTH_EXCEEDED;
    case errc::irrational_critical_point: return MF_ERR_IRRATIONAL_CRITICAL_POINT;
    case errc::unsupported_center: return MF_ERR_UNSUPPORTED_CENTER;
    case errc::invalid_argument: return MF_ERR_INVALID_ARGUMENT;
    case errc::internal: return MF_ERR_INTERNAL;
    }
    return MF_ERR_INTERNAL;
}

template <typename Fn> mf_status guard(char** err, Fn&& fn) {
    if (err) *err = nullptr;
    try {
        fn();
        return MF_OK;
    } catch (const mf_error& e) {
        if (err) *err = dup_string(e.what());
        return status_of(e.kind());
    } catch (const std::exception& e) {
        if (err) *err = dup_string(e.what());
        return MF_ERR_INTERNAL;
    }
}

void emit(char** out, const json& j) {
    if (out) *out = dup_string(j.dump(2));
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

struct blowup_request {
    blowup_center center;
    std::vector<std::pair<rational, rational>> point_ts;
    std::vector<rational> curve_ts;
};

blowup_request parse_blowup(const mf_germ* g, const char* center, const char* translations) {
    blowup_request req;
    std::string c = center ? center : "point";
    if (c == "point" || c.empty()) {
        req.center.kind = blowup_center::kind_t::point;
    } else {
        req.center.kind = blowup_center::kind_t::curve;
        req.center.curve = parse_curve_ideal(c, g->g.u);
        req.center.curve_text = c;
    }
    for (auto& item : split_list(translations ? translations : "", ',')) {
        auto colon = item.find(':');
        if (req.center.kind == blowup_center::kind_t::point) {
            if (colon == std::string::npos)
                req.point_ts.emplace_back(parse_rational(item), rational(0));
            else
                req.point_ts.emplace_back(parse_rational(item.substr(0, colon)),
                                          parse_rational(item.substr(colon + 1)));
        } else {
            req.curve_ts.push_back(parse_rational(item));
        }
    }
    return req;
}

std::vector<blowup_edge> run_blowup(const mf_germ* g, const blowup_request& req) {
    normalized_form nf = normalize(g->g, g->work);
    if (req.center.kind == blowup_center::kind_t::point)
        return quadratic_charts(nf, req.point_ts, g->work);
    return monoidal_charts(nf, req.center.curve, req.curve_ts, std::nullopt, g->work);
}

} // namespace

extern "C" {

MF_EXPORT const char* mf_version(void) { return "1.0.0"; }

MF_EXPORT const char* mf_status_name(mf_status s) {
    switch (s) {
    case MF_OK: return "ok";
    case MF_ERR_PARSE: return "ParseError";
    case MF_ERR_PRECISION_EXHAUSTED: return "PrecisionExhausted";
    case MF_ERR_IRRATIONAL_ROOT: return "IrrationalRoot";
    case MF_ERR_NON_UNIT: return "NonUnit";
    case MF_ERR_MALFORMED_GERM: return "MalformedGerm";
    case MF_ERR_UNIT_CHANGE_REQUIRED: return "UnitChangeRequired";
    case MF_ERR_WRONG_FORM: return "WrongForm";
    case MF_ERR_CENTER_NOT_IN_LOCUS: return "CenterNotInLocus";
    case MF_ERR_NOT_INVERTIBLE: return "NotInvertible";
    case MF_ERR_DEPTH_EXCEEDED: return "DepthExceeded";
    case MF_ERR_IRRATIONAL_CRITICAL_POINT: return "IrrationalCriticalPoint";
    case MF_ERR_UNSUPPORTED_CENTER: return "UnsupportedCenter";
    case MF_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case MF_ERR_INTERNAL: return "Internal";
    }
    return "Unknown";
}

MF_EXPORT void mf_string_free(char* s) { std::free(s); }
MF_EXPORT void mf_germ_free(mf_germ* g) { delete g; }
MF_EXPORT void mf_forest_free(mf_forest* f) { delete f; }

MF_EXPORT mf_status mf_germ_parse(const char* text, long work_precision, mf_germ** out,
                                  char** err) {
    return guard(err, [&] {
        if (!text || !out) fail(errc::invalid_argument, "null argument");
        auto g = std::make_unique<mf_germ>();
        g->g = parse_germ(text);
        if (work_precision > 0) g->work = work_precision;
        *out = g.release();
    });
}

MF_EXPORT mf_status mf_germ_classify(const mf_germ* g, char** json_out, char** err) {
    return guard(err, [&] {
        int t = classify_point(g->g);
        json j = germ_to_json(g->g);
        j["point_type"] = t;
        emit(json_out, j);
    });
}

MF_EXPORT mf_status mf_germ_invariants(const mf_germ* g, char** json_out, char** err) {
    return guard(err, [&] {
        normalized_form nf = normalize(g->g, g->work);
        emit(json_out, invariants_to_json(nf, invariants(nf)));
    });
}

MF_EXPORT mf_status mf_germ_curve_membership(const mf_germ* g, const char* ideal, long* s_out,
                                             char** err) {
    return guard(err, [&] {
        normalized_form nf = normalize(g->g, g->work);
        long s = curve_membership(nf, parse_curve_ideal(ideal ? ideal : "", g->g.u), g->work);
        if (s_out) *s_out = s;
    });
}

MF_EXPORT mf_status mf_germ_blowup(const mf_germ* g, const char* center, const char* translations,
                                   char** json_out, char** err) {
    return guard(err, [&] {
        auto req = parse_blowup(g, center, translations);
        emit(json_out, edges_to_json(run_blowup(g, req)));
    });
}

MF_EXPORT mf_status mf_germ_check_descent(const mf_germ* g, const char* center,
                                          const char* translations, char** json_out, char** err) {
    return guard(err, [&] {
        auto req = parse_blowup(g, center, translations);
        normalized_form nf = normalize(g->g, g->work);
        auto edges = run_blowup(g, req);
        auto rep = check_descent(nf, invariants(nf), edges, req.center);
        emit(json_out, rep.to_json());
    });
}

MF_EXPORT mf_status mf_germ_classify_prepared(const mf_germ* g, char** json_out, char** err) {
    return guard(err, [&] { emit(json_out, prepared_to_json(classify_prepared(g->g, g->work))); });
}

MF_EXPORT mf_status mf_germ_good_bad(const mf_germ* g, char** json_out, char** err) {
    return guard(err, [&] {
        prepared_class pc = classify_prepared(g->g, g->work);
        json j = prepared_to_json(pc);
        if (pc.prepared()) {
            good_form gf = classify_good(pc);
            j["good"] = good_tag_name(gf.tag);
            if (gf.good())
                j["alpha"] = to_string(gf.alpha);
            else
                j["witness"] = gf.witness;
        }
        emit(json_out, j);
    });
}

MF_EXPORT mf_status mf_germ_invertible(const mf_germ* g, char** json_out, char** err) {
    return guard(err, [&] {
        prepared_class pc = classify_prepared(g->g, g->work);
        if (!pc.prepared()) fail(errc::wrong_form, pc.why_not);
        inv_case c = is_mq_invertible(pc);
        json j = prepared_to_json(pc);
        j["invertible"] = c == inv_case::invertible;
        j["case"] = inv_case_name(c);
        emit(json_out, j);
    });
}

MF_EXPORT mf_status mf_germ_invariants_aci(const mf_germ* g, char** json_out, char** err) {
    return guard(err, [&] {
        prepared_class pc = classify_prepared(g->g, g->work);
        if (!pc.prepared()) fail(errc::wrong_form, pc.why_not);
        aci_result r = a_c_invariants(pc);
        json j = prepared_to_json(pc);
        json divs = json::array();
        for (auto& d : r.divisors) {
            json dj;
            dj["divisor"] = d.divisor;
            dj["A"] = d.A;
            dj["C"] = d.C ? json(json::array({d.C->first, d.C->second})) : json(nullptr);
            divs.push_back(dj);
        }
        j["divisors"] = divs;
        j["I"] = r.I ? json(*r.I) : json(nullptr);
        emit(json_out, j);
    });
}

MF_EXPORT mf_status mf_resolve2d(const mf_germ* g, long max_depth, char** json_out, char** err) {
    return guard(err, [&] {
        tree2d t = resolve_all(g->g, max_depth > 0 ? max_depth : 64, g->work);
        emit(json_out, tree_to_json(t));
    });
}

MF_EXPORT mf_status mf_forest_parse(const char* text, long work_precision, mf_forest** out,
                                    char** err) {
    return guard(err, [&] {
        if (!text || !out) fail(errc::invalid_argument, "null argument");
        long w = work_precision > 0 ? work_precision : kDefaultWorkPrecision;
        *out = new mf_forest{chart_forest(parse_forest(text), w)};
    });
}

MF_EXPORT mf_status mf_forest_json(const mf_forest* f, char** json_out, char** err) {
    return guard(err, [&] { emit(json_out, f->f.forest_json()); });
}

MF_EXPORT mf_status mf_forest_principalize(mf_forest* f, const char* image_point, long max_depth,
                                           char** trace_json, char** err) {
    return guard(err, [&] {
        f->f.principalize(image_point ? image_point : "q0",
                          max_depth > 0 ? max_depth : kDefaultPhaseDepth);
        emit(trace_json, f->f.trace_json());
    });
}

MF_EXPORT mf_status mf_forest_monomialize(mf_forest* f, long max_depth, char** trace_json,
                                          char** err) {
    return guard(err, [&] {
        f->f.monomialize(max_depth > 0 ? max_depth : kDefaultPhaseDepth);
        emit(trace_json, f->f.trace_json());
    });
}

MF_EXPORT mf_status mf_forest_toroidalize(mf_forest* f, long max_depth, char** trace_json,
                                          char** err) {
    return guard(err, [&] {
        f->f.toroidalize(max_depth > 0 ? max_depth : kDefaultPhaseDepth);
        emit(trace_json, f->f.trace_json());
    });
}

} // extern "C"
