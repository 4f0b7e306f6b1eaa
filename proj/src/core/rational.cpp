#include "rational.hpp"

#include <algorithm>
#include <cctype>

namespace monoforge {

const char* errc_name(errc c) {
    switch (c) {
    case errc::parse_error: return "ParseError";
    case errc::precision_exhausted: return "PrecisionExhausted";
    case errc::irrational_root: return "IrrationalRoot";
    case errc::non_unit: return "NonUnit";
    case errc::malformed_germ: return "MalformedGerm";
    case errc::unit_change_required: return "UnitChangeRequired";
    case errc::wrong_form: return "WrongForm";
    case errc::center_not_in_locus: return "CenterNotInLocus";
    case errc::not_invertible: return "NotInvertible";
    case errc::depth_exceeded: return "DepthExceeded";
    case errc::irrational_critical_point: return "IrrationalCriticalPoint";
    case errc::unsupported_center: return "UnsupportedCenter";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::internal: return "Internal";
    }
    return "Unknown";
}

std::string to_string(const rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

rational parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) fail(errc::parse_error, "empty rational literal");
    try {
        rational q(s);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        fail(errc::parse_error, "bad rational literal '" + text + "'");
    }
}

std::optional<rational> exact_root(const rational& base, unsigned long n) {
    if (n == 0) fail(errc::invalid_argument, "0th root");
    if (n == 1) return base;
    if (sgn(base) == 0) return rational(0);
    if (sgn(base) < 0 && n % 2 == 0) return std::nullopt;
    bigint num = base.get_num(), den = base.get_den();
    bool neg = sgn(num) < 0;
    if (neg) num = -num;
    bigint rn, rd;
    if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), n)) return std::nullopt;
    if (!mpz_root(rd.get_mpz_t(), den.get_mpz_t(), n)) return std::nullopt;
    rational r(neg ? -rn : rn, rd);
    r.canonicalize();
    return r;
}

std::optional<rational> exact_pow(const rational& base, long p, unsigned long q) {
    auto r = exact_root(base, q);
    if (!r) return std::nullopt;
    if (p < 0 && is_zero(*r)) fail(errc::non_unit, "negative power of zero");
    return pow_int(*r, p);
}

rational pow_int(const rational& base, long e) {
    if (e == 0) return rational(1);
    rational b = base;
    unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
    if (e < 0) {
        if (is_zero(b)) fail(errc::non_unit, "inverse of zero");
        b = 1 / b;
    }
    rational acc(1);
    while (k) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
    }
    return acc;
}

rational binomial(const rational& a, unsigned long k) {
    rational acc(1);
    for (unsigned long i = 0; i < k; ++i) {
        acc *= (a - static_cast<long>(i));
        acc /= static_cast<long>(i + 1);
    }
    return acc;
}

namespace {

// Divisors of |n| by trial division. Desk-scale inputs; bail out on numbers
// whose factorization would not be quick.
std::optional<std::vector<bigint>> divisors(bigint n) {
    if (sgn(n) < 0) n = -n;
    if (n == 0) return std::nullopt;
    std::vector<std::pair<bigint, unsigned>> fac;
    bigint d = 2;
    unsigned long steps = 0;
    while (n > 1) {
        if (++steps > 2000000) return std::nullopt;
        if (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) {
            unsigned m = 0;
            while (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) {
                n /= d;
                ++m;
            }
            fac.emplace_back(d, m);
        } else {
            d += (d == 2) ? 1 : 2;
            if (d * d > n && n > 1) {
                fac.emplace_back(n, 1);
                break;
            }
        }
    }
    std::vector<bigint> out{bigint(1)};
    for (auto& [p, m] : fac) {
        size_t base = out.size();
        bigint pk = 1;
        for (unsigned i = 1; i <= m; ++i) {
            pk *= p;
            for (size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
        }
    }
    return out;
}

rational eval_poly(const std::vector<rational>& c, const rational& t) {
    rational acc(0);
    for (size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
    return acc;
}

// Synthetic division by (t - r); remainder must be zero.
std::vector<rational> deflate(const std::vector<rational>& c, const rational& r) {
    std::vector<rational> q(c.size() - 1);
    rational carry = c.back();
    for (size_t i = c.size() - 1; i-- > 0;) {
        q[i] = carry;
        carry = c[i] + carry * r;
    }
    return q;
}

} // namespace

std::vector<rational> rational_roots(const std::vector<rational>& coeffs, bool* fully_split) {
    std::vector<rational> c = coeffs;
    while (!c.empty() && is_zero(c.back())) c.pop_back();
    std::vector<rational> roots;
    if (c.empty()) {
        // Identically zero: every value is a root; callers treat this case themselves.
        if (fully_split) *fully_split = true;
        return roots;
    }
    // Strip t^k factor: root 0 with multiplicity k.
    size_t k = 0;
    while (k < c.size() && is_zero(c[k])) ++k;
    for (size_t i = 0; i < k; ++i) roots.emplace_back(0);
    c.erase(c.begin(), c.begin() + static_cast<long>(k));

    while (c.size() > 1) {
        // Clear denominators to a primitive integer polynomial.
        bigint den(1);
        for (auto& q : c) den = lcm(den, q.get_den());
        std::vector<bigint> ic(c.size());
        for (size_t i = 0; i < c.size(); ++i) ic[i] = bigint(c[i] * den);
        auto dl = divisors(ic.back());
        auto d0 = divisors(ic.front());
        bool found = false;
        if (dl && d0) {
            for (const bigint& p : *d0) {
                for (const bigint& q : *dl) {
                    for (int s : {1, -1}) {
                        rational cand(s > 0 ? p : bigint(-p), q);
                        cand.canonicalize();
                        if (is_zero(eval_poly(c, cand))) {
                            roots.push_back(cand);
                            c = deflate(c, cand);
                            found = true;
                            break;
                        }
                    }
                    if (found) break;
                }
                if (found) break;
            }
        }
        if (!found) break;
    }
    if (fully_split) *fully_split = (c.size() <= 1);
    std::sort(roots.begin(), roots.end(), [](const rational& a, const rational& b) {
        if (a.get_den() != b.get_den()) return a.get_den() < b.get_den();
        return a.get_num() < b.get_num();
    });
    return roots;
}

} // namespace monoforge
