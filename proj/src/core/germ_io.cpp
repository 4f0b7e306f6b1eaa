#include "germ_io.hpp"

#include <fstream>
#include <sstream>

namespace monoforge {

namespace {

std::string strip(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

struct germ_lines {
    std::vector<std::string> vars;
    std::vector<std::string> exceptional;
    int base = 1;
    std::string u_text, v_text;
    long precision = series::kExact;
    std::string divisor_class, image_point;
};

map_germ build(const germ_lines& gl) {
    if (gl.vars.empty()) fail(errc::parse_error, "missing 'vars:' line");
    if (gl.u_text.empty() || gl.v_text.empty()) fail(errc::parse_error, "missing u or v");
    series u = parse_series(gl.u_text, gl.vars, gl.precision);
    series v = parse_series(gl.v_text, gl.vars, gl.precision);
    std::vector<int> exc;
    for (auto& name : gl.exceptional) {
        int i = u.var_index(name);
        if (i < 0) fail(errc::parse_error, "exceptional variable '" + name + "' not in vars");
        exc.push_back(i);
    }
    if (gl.base != 1 && gl.base != 2) fail(errc::parse_error, "base must be 1 or 2");
    return map_germ(u, v, exc, gl.base == 1 ? base_kind::one_point : base_kind::two_point);
}

bool feed(germ_lines& gl, const std::string& raw) {
    std::string line = raw.substr(0, raw.find('#'));
    line = strip(line);
    if (line.empty()) return false;
    auto colon = line.find(':');
    auto eq = line.find('=');
    if (colon != std::string::npos && (eq == std::string::npos || colon < eq)) {
        std::string key = strip(line.substr(0, colon));
        std::string val = strip(line.substr(colon + 1));
        if (key == "vars")
            gl.vars = split_ws(val);
        else if (key == "exceptional")
            gl.exceptional = split_ws(val);
        else if (key == "base")
            gl.base = std::stoi(val);
        else if (key == "class")
            gl.divisor_class = val;
        else if (key == "image")
            gl.image_point = val;
        else
            fail(errc::parse_error, "unknown key '" + key + "'");
        return true;
    }
    if (eq == std::string::npos) fail(errc::parse_error, "unparseable line: " + raw);
    std::string key = strip(line.substr(0, eq));
    std::string val = strip(line.substr(eq + 1));
    if (key == "u")
        gl.u_text = val;
    else if (key == "v")
        gl.v_text = val;
    else if (key == "precision")
        gl.precision = std::stol(val);
    else
        fail(errc::parse_error, "unknown assignment '" + key + "'");
    return true;
}

} // namespace

map_germ parse_germ(const std::string& text) {
    germ_lines gl;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) feed(gl, line);
    return build(gl);
}

std::vector<forest_leaf_record> parse_forest(const std::string& text) {
    std::vector<forest_leaf_record> out;
    std::istringstream is(text);
    std::string line;
    germ_lines gl;
    bool any = false;
    auto flush = [&]() {
        if (!any) return;
        forest_leaf_record rec;
        rec.divisor_class = gl.divisor_class.empty() ? "E" + std::to_string(out.size()) : gl.divisor_class;
        rec.image_point = gl.image_point.empty() ? "q0" : gl.image_point;
        rec.germ = build(gl);
        out.push_back(std::move(rec));
        gl = germ_lines{};
        any = false;
    };
    while (std::getline(is, line)) {
        std::string body = strip(line.substr(0, line.find('#')));
        if (body.empty()) {
            flush();
            continue;
        }
        if (feed(gl, line)) any = true;
    }
    flush();
    if (out.empty()) fail(errc::parse_error, "forest file holds no germs");
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::invalid_argument, "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json extnat_to_json(const extnat& v) {
    switch (v.kind) {
    case extnat::kind_t::finite: return v.value;
    case extnat::kind_t::at_least: return std::string(">=") + std::to_string(v.value);
    case extnat::kind_t::infinite: return "inf";
    }
    return nullptr;
}

json germ_to_json(const map_germ& g) {
    json j;
    j["vars"] = g.vars();
    json exc = json::array();
    for (int e : g.exceptional) exc.push_back(g.vars()[static_cast<size_t>(e)]);
    j["exceptional"] = exc;
    j["base"] = g.base == base_kind::one_point ? 1 : 2;
    j["u"] = g.u.str();
    j["v"] = g.v.str();
    j["precision"] = g.u.exact() && g.v.exact()
                         ? json("exact")
                         : json(std::min(g.u.precision(), g.v.precision()));
    return j;
}

json normalized_to_json(const normalized_form& nf) {
    json j;
    j["point_type"] = nf.point_type;
    j["m"] = nf.m;
    json mon = json::object();
    json fac = json::object();
    for (size_t i = 0; i < nf.germ.vars().size(); ++i) {
        if (nf.mon[i] > 0) mon[nf.germ.vars()[i]] = nf.mon[i];
        if (nf.factor[i] > 0) fac[nf.germ.vars()[i]] = nf.factor[i];
    }
    j["monomial"] = mon;
    j["factor"] = fac;
    j["P"] = nf.p_str();
    j["F"] = nf.degenerate ? "0" : nf.F.str();
    j["degenerate"] = nf.degenerate;
    return j;
}

json invariants_to_json(const normalized_form& nf, const invariant_vector& iv) {
    json j = normalized_to_json(nf);
    j["nu"] = extnat_to_json(iv.nu);
    j["gamma"] = iv.gamma ? extnat_to_json(*iv.gamma) : json("n/a");
    j["tau"] = iv.tau ? json(*iv.tau) : json(nullptr);
    j["leading_form"] = iv.leading_form.str();
    return j;
}

} // namespace monoforge
