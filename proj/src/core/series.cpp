#include "series.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace monoforge {

namespace {
constexpr long kInfDeg = series::kExact; // large sentinel for degree arithmetic

long add_deg(long a, long b) {
    if (a >= kInfDeg || b >= kInfDeg) return kInfDeg;
    long s = a + b;
    return s >= kInfDeg ? kInfDeg : s;
}
} // namespace

series::series(std::vector<std::string> vars, long precision)
    : vars_(std::move(vars)), precision_(precision) {
    if (vars_.empty() || vars_.size() > 3) fail(errc::invalid_argument, "need 1-3 variables");
    if (precision_ < 0) fail(errc::invalid_argument, "negative precision");
}

series series::zero(std::vector<std::string> vars, long precision) {
    return series(std::move(vars), precision);
}

series series::constant(std::vector<std::string> vars, const rational& c, long precision) {
    series s(std::move(vars), precision);
    if (!monoforge::is_zero(c)) s.terms_[{0, 0, 0}] = c;
    return s;
}

series series::monomial(std::vector<std::string> vars, const expv& e, const rational& c,
                        long precision) {
    series s(std::move(vars), precision);
    s.set_term(e, c);
    return s;
}

series series::variable(std::vector<std::string> vars, const std::string& name, long precision) {
    series s(vars, precision);
    int i = s.var_index(name);
    if (i < 0) fail(errc::invalid_argument, "unknown variable " + name);
    expv e{0, 0, 0};
    e[static_cast<size_t>(i)] = 1;
    s.set_term(e, rational(1));
    return s;
}

int series::var_index(const std::string& name) const {
    for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return static_cast<int>(i);
    return -1;
}

rational series::coefficient(const expv& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? rational(0) : it->second;
}

rational series::constant_term() const { return coefficient({0, 0, 0}); }

std::optional<long> series::order() const {
    std::optional<long> best;
    for (auto& [e, c] : terms_) {
        long d = total_degree(e);
        if (!best || d < *best) best = d;
    }
    return best;
}

long series::order_lower_bound() const {
    auto o = order();
    if (o) return *o;
    return exact() ? kInfDeg : precision_ + 1;
}

int series::min_exponent(int v) const {
    int best = 0;
    bool first = true;
    for (auto& [e, c] : terms_) {
        int d = e[static_cast<size_t>(v)];
        if (first || d < best) best = d, first = false;
    }
    return first ? 0 : best;
}

series series::with_precision(long p) const {
    series out(vars_, std::min(p, precision_));
    for (auto& [e, c] : terms_)
        if (total_degree(e) <= out.precision_) out.terms_[e] = c;
    return out;
}

series series::homogeneous_part(long d) const {
    series out(vars_, precision_);
    for (auto& [e, c] : terms_)
        if (total_degree(e) == d) out.terms_[e] = c;
    return out;
}

series series::restrict_zero(int v) const {
    series out(vars_, precision_);
    for (auto& [e, c] : terms_)
        if (e[static_cast<size_t>(v)] == 0) out.terms_[e] = c;
    return out;
}

void series::set_term(const expv& e, const rational& c) {
    if (e[0] < 0 || e[1] < 0 || e[2] < 0) fail(errc::internal, "negative exponent");
    if (total_degree(e) > precision_) return;
    if (monoforge::is_zero(c))
        terms_.erase(e);
    else
        terms_[e] = c;
}

void series::check_compatible(const series& o) const {
    if (vars_ != o.vars_) fail(errc::invalid_argument, "variable lists differ");
}

series series::operator-() const {
    series out(vars_, precision_);
    for (auto& [e, c] : terms_) out.terms_[e] = -c;
    return out;
}

series& series::operator+=(const series& o) {
    check_compatible(o);
    precision_ = std::min(precision_, o.precision_);
    for (auto& [e, c] : o.terms_) {
        if (total_degree(e) > precision_) continue;
        auto it = terms_.find(e);
        if (it == terms_.end())
            terms_[e] = c;
        else {
            it->second += c;
            if (monoforge::is_zero(it->second)) terms_.erase(it);
        }
    }
    // drop own terms now past precision
    for (auto it = terms_.begin(); it != terms_.end();)
        it = total_degree(it->first) > precision_ ? terms_.erase(it) : std::next(it);
    return *this;
}

series& series::operator-=(const series& o) { return *this += -o; }

series series::operator*(const rational& c) const {
    series out(vars_, precision_);
    if (monoforge::is_zero(c)) return out;
    for (auto& [e, q] : terms_) out.terms_[e] = q * c;
    return out;
}

series series::mul(const series& a, const series& b, long cap) {
    a.check_compatible(b);
    // coefficient at degree d is exact iff d <= min(Na + ord(b), Nb + ord(a))
    long p = std::min({add_deg(a.precision_, b.order_lower_bound()),
                       add_deg(b.precision_, a.order_lower_bound()), cap});
    if (a.exact() && b.exact()) p = std::min(kInfDeg, cap);
    series out(a.vars_, std::max(p, 0L));
    if (p < 0) {
        fail(errc::precision_exhausted, "product certifies no coefficients");
    }
    for (auto& [ea, ca] : a.terms_) {
        long da = total_degree(ea);
        for (auto& [eb, cb] : b.terms_) {
            if (da + total_degree(eb) > out.precision_) continue;
            expv e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]};
            auto it = out.terms_.find(e);
            if (it == out.terms_.end())
                out.terms_[e] = ca * cb;
            else {
                it->second += ca * cb;
                if (monoforge::is_zero(it->second)) out.terms_.erase(it);
            }
        }
    }
    return out;
}

bool series::divisible_by_monomial(const expv& e) const {
    for (auto& [t, c] : terms_)
        for (size_t i = 0; i < 3; ++i)
            if (t[i] < e[i]) return false;
    return true;
}

series series::divide_by_monomial(const expv& e) const {
    long d = total_degree(e);
    long p = exact() ? kExact : precision_ - d;
    if (p < 0) fail(errc::precision_exhausted, "monomial quotient below precision");
    series out(vars_, p);
    for (auto& [t, c] : terms_) {
        if (t[0] < e[0] || t[1] < e[1] || t[2] < e[2])
            fail(errc::internal, "monomial does not divide series");
        out.terms_[{t[0] - e[0], t[1] - e[1], t[2] - e[2]}] = c;
    }
    return out;
}

series series::invert_unit(long cap) const {
    if (!is_unit()) fail(errc::non_unit, "inverting a non-unit series");
    long p = std::min(precision_, cap);
    rational c0 = constant_term();
    // f = c0 (1 + h), 1/f = (1/c0) sum (-h)^k
    series h = with_precision(p);
    h.set_term({0, 0, 0}, rational(0));
    h = h * (1 / c0);
    series acc = series::constant(vars_, rational(1), p);
    series pw = series::constant(vars_, rational(1), p);
    long oh = h.order_lower_bound();
    if (oh <= 0) fail(errc::internal, "unit tail has order 0");
    for (long k = 1; k * oh <= p; ++k) {
        pw = mul(pw, -h, p);
        if (pw.is_zero()) break;
        acc += pw;
    }
    return acc * (1 / c0);
}

series series::unit_power(long p, unsigned long q, long cap) const {
    if (!is_unit()) fail(errc::non_unit, "fractional power of a non-unit");
    rational c0 = constant_term();
    auto root = exact_pow(c0, p, q);
    if (!root)
        fail(errc::irrational_root, "constant term " + monoforge::to_string(c0) +
                                        " has no rational power " + std::to_string(p) + "/" +
                                        std::to_string(q));
    long prec = std::min(precision_, cap);
    // f = c0 (1 + h); f^(p/q) = c0^(p/q) sum C(p/q, k) h^k
    series h = with_precision(prec);
    h.set_term({0, 0, 0}, rational(0));
    h = h * (1 / c0);
    long oh = h.order_lower_bound();
    series acc = series::constant(vars_, rational(1), prec);
    if (oh < kInfDeg) {
        rational a(p, q);
        a.canonicalize();
        series pw = series::constant(vars_, rational(1), prec);
        for (long k = 1; k * oh <= prec; ++k) {
            pw = mul(pw, h, prec);
            if (pw.is_zero()) break;
            acc += pw * binomial(a, static_cast<unsigned long>(k));
        }
    }
    return acc * *root;
}

series series::substitute(const std::map<std::string, series>& images, long cap) const {
    if (images.empty()) fail(errc::invalid_argument, "no substitution images");
    const series& first = images.begin()->second;
    const std::vector<std::string>& ovars = first.vars();
    for (auto& [v, img] : images) {
        if (img.vars() != ovars) fail(errc::invalid_argument, "images over different variables");
        if (var_index(v) < 0) fail(errc::invalid_argument, "substituted variable not present");
    }
    // Per-variable data; variables without an image keep themselves, so they
    // must exist in the target list.
    std::array<const series*, 3> img{nullptr, nullptr, nullptr};
    std::array<series, 3> keep;
    for (size_t i = 0; i < vars_.size(); ++i) {
        auto it = images.find(vars_[i]);
        if (it != images.end()) {
            img[i] = &it->second;
        } else {
            keep[i] = series::variable(ovars, vars_[i]); // throws if missing
        }
    }
    auto image_of = [&](size_t i) -> const series& { return img[i] ? *img[i] : keep[i]; };

    std::array<long, 3> olb{kInfDeg, kInfDeg, kInfDeg}; // image order lower bounds
    std::array<long, 3> iprec{kInfDeg, kInfDeg, kInfDeg};
    for (size_t i = 0; i < vars_.size(); ++i) {
        olb[i] = image_of(i).order_lower_bound();
        iprec[i] = image_of(i).precision();
    }

    // Certified precision of the composite.
    long bound = cap;
    if (!exact()) {
        // hidden terms of f, degree >= precision_+1, can touch any variable
        long min_o = kInfDeg;
        for (size_t i = 0; i < vars_.size(); ++i) min_o = std::min(min_o, olb[i]);
        if (min_o == 0)
            fail(errc::precision_exhausted,
                 "unit image composed with a truncated series certifies nothing");
        if (min_o < kInfDeg)
            bound = std::min(bound, add_deg(precision_, 1) >= kInfDeg
                                        ? kInfDeg
                                        : (precision_ + 1) * min_o - 1);
    }
    // truncation error of each image through each stored term
    for (auto& [e, c] : terms_) {
        for (size_t v = 0; v < vars_.size(); ++v) {
            if (e[v] == 0 || iprec[v] >= kInfDeg) continue;
            long rest = 0;
            bool inf = false;
            for (size_t w = 0; w < vars_.size(); ++w) {
                long mult = (w == v) ? e[w] - 1 : e[w];
                if (mult == 0) continue;
                if (olb[w] >= kInfDeg) {
                    inf = true;
                    break;
                }
                rest += olb[w] * mult;
            }
            if (inf) continue;
            bound = std::min(bound, iprec[v] + 1 + rest - 1);
        }
    }
    if (bound < 0) fail(errc::precision_exhausted, "composite certifies no coefficients");

    series out = series::zero(ovars, bound);
    // cached powers per variable
    std::array<std::vector<series>, 3> pows;
    for (size_t i = 0; i < vars_.size(); ++i)
        pows[i].push_back(series::constant(ovars, rational(1), kExact));
    auto power = [&](size_t v, int k) -> const series& {
        auto& vec = pows[v];
        while (static_cast<int>(vec.size()) <= k)
            vec.push_back(mul(vec.back(), image_of(v), bound));
        return vec[static_cast<size_t>(k)];
    };
    for (auto& [e, c] : terms_) {
        // skip terms that cannot contribute below the bound
        long lo = 0;
        for (size_t v = 0; v < vars_.size(); ++v) {
            if (e[v] == 0) continue;
            lo = (olb[v] >= kInfDeg && e[v] > 0) ? kInfDeg : add_deg(lo, olb[v] * e[v]);
        }
        if (lo > bound) continue;
        series term = series::constant(ovars, c, kExact);
        for (size_t v = 0; v < vars_.size(); ++v)
            if (e[v] > 0) term = mul(term, power(v, e[v]), bound);
        out += term.with_precision(bound);
    }
    return out.with_precision(bound);
}

long series::substituted_order_lb(const std::map<std::string, series>& images) const {
    std::array<long, 3> olb{1, 1, 1};
    for (size_t i = 0; i < vars_.size(); ++i) {
        auto it = images.find(vars_[i]);
        olb[i] = it == images.end() ? 1 : it->second.order_lower_bound();
    }
    long best = kInfDeg;
    for (auto& [e, c] : terms_) {
        long d = 0;
        for (size_t i = 0; i < vars_.size(); ++i)
            d = add_deg(d, e[i] == 0 ? 0 : (olb[i] >= kInfDeg ? kInfDeg : olb[i] * e[i]));
        best = std::min(best, d);
    }
    return best;
}

series series::rename(const std::vector<std::string>& new_vars) const {
    if (new_vars.size() != vars_.size()) fail(errc::invalid_argument, "rename arity mismatch");
    series out(new_vars, precision_);
    out.terms_ = terms_;
    return out;
}

bool series::agrees_to(const series& o, long d) const {
    for (auto& [e, c] : terms_)
        if (total_degree(e) <= d && o.coefficient(e) != c) return false;
    for (auto& [e, c] : o.terms_)
        if (total_degree(e) <= d && coefficient(e) != c) return false;
    return true;
}

std::string series::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // print by increasing total degree, then lex
    std::vector<std::pair<expv, rational>> items(terms_.begin(), terms_.end());
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        return total_degree(a.first) < total_degree(b.first);
    });
    for (auto& [e, c] : items) {
        rational q = c;
        if (first) {
            if (sgn(q) < 0) {
                os << "-";
                q = -q;
            }
        } else {
            os << (sgn(q) < 0 ? " - " : " + ");
            if (sgn(q) < 0) q = -q;
        }
        first = false;
        bool has_var = total_degree(e) > 0;
        if (!has_var || !monoforge::is_one(q)) {
            os << to_string(q);
            if (has_var) os << "*";
        }
        bool started = false;
        for (size_t i = 0; i < vars_.size(); ++i) {
            if (e[i] == 0) continue;
            if (started) os << "*";
            started = true;
            os << vars_[i];
            if (e[i] > 1) os << "^" << e[i];
        }
    }
    return os.str();
}

series solve_unit_absorption(const series& w, int xi, long cap) {
    if (!w.is_unit()) fail(errc::non_unit, "absorbing a non-unit");
    const auto& vars = w.vars();
    size_t x = static_cast<size_t>(xi);
    // Does w actually involve x? If not, the answer is direct.
    bool involves = false;
    for (auto& [e, c] : w.terms())
        if (e[x] > 0) involves = true;
    series xbar = series::variable(vars, vars[x]);
    series winv = w.invert_unit(cap);
    if (!involves) return series::mul(xbar, winv, cap);
    // g = xbar * w(g)^{-1}; each pass gains at least one degree of agreement.
    series g = series::mul(xbar, series::constant(vars, winv.constant_term(), series::kExact), cap);
    for (long pass = 0; pass <= cap + 1; ++pass) {
        series wg = winv.substitute({{vars[x], g}}, cap);
        series next = series::mul(xbar, wg, cap);
        if (next.same_terms(g) && next.precision() == g.precision()) return next;
        g = next;
    }
    return g;
}

namespace {

struct lexer {
    const std::string& s;
    size_t i = 0;
    explicit lexer(const std::string& t) : s(t) {}
    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eof() {
        skip();
        return i >= s.size();
    }
    char peek() {
        skip();
        return i < s.size() ? s[i] : '\0';
    }
    char take() {
        skip();
        return s[i++];
    }
};

} // namespace

series parse_series(const std::string& text, const std::vector<std::string>& vars,
                    long precision) {
    series out = series::zero(vars, precision);
    lexer lx(text);
    if (lx.eof()) fail(errc::parse_error, "empty series literal");
    bool first = true;
    while (!lx.eof()) {
        int sign = 1;
        char c = lx.peek();
        if (c == '+' || c == '-') {
            lx.take();
            sign = (c == '-') ? -1 : 1;
        } else if (!first) {
            fail(errc::parse_error, "expected '+' or '-' in series literal");
        }
        first = false;
        // term: [rational] ( '*'? var ['^' nat] )*
        rational coeff(1);
        bool saw_coeff = false;
        expv e{0, 0, 0};
        bool any_factor = false;
        while (true) {
            char p = lx.peek();
            if (std::isdigit(static_cast<unsigned char>(p))) {
                if (saw_coeff) fail(errc::parse_error, "two numeric factors; use '*' with '^'");
                size_t j = lx.i;
                while (j < lx.s.size() &&
                       (std::isdigit(static_cast<unsigned char>(lx.s[j])) || lx.s[j] == '/'))
                    ++j;
                coeff = parse_rational(lx.s.substr(lx.i, j - lx.i));
                lx.i = j;
                saw_coeff = true;
                any_factor = true;
            } else if (std::isalpha(static_cast<unsigned char>(p)) || p == '_') {
                size_t j = lx.i;
                while (j < lx.s.size() && (std::isalnum(static_cast<unsigned char>(lx.s[j])) ||
                                           lx.s[j] == '_' || lx.s[j] == '\''))
                    ++j;
                std::string name = lx.s.substr(lx.i, j - lx.i);
                lx.i = j;
                int vi = -1;
                for (size_t k = 0; k < vars.size(); ++k)
                    if (vars[k] == name) vi = static_cast<int>(k);
                if (vi < 0) fail(errc::parse_error, "unknown variable '" + name + "'");
                long exp = 1;
                if (lx.peek() == '^') {
                    lx.take();
                    size_t j2 = lx.i;
                    lx.skip();
                    j2 = lx.i;
                    while (j2 < lx.s.size() && std::isdigit(static_cast<unsigned char>(lx.s[j2])))
                        ++j2;
                    if (j2 == lx.i) fail(errc::parse_error, "missing exponent");
                    exp = std::stol(lx.s.substr(lx.i, j2 - lx.i));
                    lx.i = j2;
                }
                e[static_cast<size_t>(vi)] += static_cast<int>(exp);
                any_factor = true;
            } else if (p == '*') {
                lx.take();
                continue;
            } else {
                break;
            }
        }
        if (!any_factor) fail(errc::parse_error, "empty term in series literal");
        series term = series::monomial(vars, e, coeff * sign, precision);
        out += term;
    }
    return out;
}

} // namespace monoforge
