#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/driver.hpp"

using namespace monoforge;

namespace {

std::vector<forest_leaf_record> one_leaf(const std::string& u, const std::string& v,
                                         const std::string& exc, int base = 1) {
    std::string text = "vars: x y z\nexceptional: " + exc + "\nbase: " + std::to_string(base) +
                       "\nu = " + u + "\nv = " + v + "\nclass: E0\nimage: q0\n";
    return parse_forest(text);
}

} // namespace

TEST_CASE("base blowup factors v by u and drops I") {
    chart_forest f(one_leaf("x^2", "x^5*y", "x"));
    REQUIRE(f.leaves().size() == 1);
    CHECK(f.global_I());
    CHECK(*f.global_I() == 3);
    f.base_blowup("q0");
    const chart_node& n = f.leaves()[0];
    CHECK(n.pc.canonical.v.same_terms(parse_series("x^3*y", {"x", "y", "z"})));
    CHECK(i_invariant(n.pc) == 1); // dropped by a = 2
}

TEST_CASE("base blowup: A non-increasing, C strictly dropping while positive") {
    chart_forest f(one_leaf("x^3", "x^2+x^5*y", "x"));
    long A0 = f.global_A();
    auto C0 = f.global_C();
    REQUIRE(A0 == 3);
    REQUIRE(C0);
    CHECK(*C0 == std::make_pair(3L, 5L));
    f.base_blowup("q0");
    CHECK(f.global_A() <= A0);
    auto C1 = f.global_C();
    REQUIRE(C1);
    CHECK(*C1 < *C0);
    CHECK(f.leaves()[0].pc.base == base_kind::two_point);
}

TEST_CASE("monomial leaf with u|v stays monomial under base blowups") {
    chart_forest f(one_leaf("x*y", "x^3*y^2", "x y"));
    f.base_blowup("q0");
    const chart_node& n = f.leaves()[0];
    CHECK(n.pc.tag == prepared_tag::two_pt);
    CHECK(n.gf.tag == good_tag::monomial_2pt);
}

TEST_CASE("principalize: three Omega steps on u=x^5, v=x^2 y") {
    chart_forest f(one_leaf("x^5", "x^2*y", "x"));
    REQUIRE(f.leaves()[0].invertibility == inv_case::one_pt_monomial);
    f.principalize("q0");
    CHECK(f.all_invertible_over("q0"));
    json trace = f.trace_json();
    int curve_steps = 0;
    std::vector<std::string> omegas;
    for (auto& s : trace["steps"]) {
        if (s["kind"] == "CurveBlowup") {
            ++curve_steps;
            omegas.push_back(s["detail"]["value"].get<std::string>());
        }
    }
    CHECK(curve_steps == 3);
    CHECK(omegas == std::vector<std::string>{"3", "2", "1"});
}

TEST_CASE("principalize: omega descent on u=(xy)^3, v=x^2 y^7") {
    chart_forest f(one_leaf("x^3*y^3", "x^2*y^7", "x y"));
    REQUIRE(f.leaves()[0].invertibility == inv_case::two_pt_monomial);
    f.principalize("q0");
    CHECK(f.all_invertible_over("q0"));
    json trace = f.trace_json();
    std::vector<std::string> omegas;
    for (auto& s : trace["steps"])
        if (s["kind"] == "CurveBlowup") omegas.push_back(s["detail"]["value"].get<std::string>());
    REQUIRE(!omegas.empty());
    CHECK(omegas.front() == "(4,1)");
}

TEST_CASE("principalize on an invertible forest is a no-op") {
    chart_forest f(one_leaf("x^2", "x^5*y", "x"));
    f.principalize("q0");
    CHECK(f.trace_json()["steps"].empty());
}

TEST_CASE("monomialize drives the bad 1-point leaf good") {
    chart_forest f(one_leaf("x^3", "x^2+x^5*y", "x"));
    CHECK(!f.all_good());
    f.monomialize();
    CHECK(f.all_good());
    CHECK(f.global_A() == 0);
}

TEST_CASE("monomialize is a no-op on an all-good forest") {
    chart_forest f(one_leaf("x^2", "3*x^5+x^5*y", "x"));
    REQUIRE(f.all_good());
    f.monomialize();
    CHECK(f.trace_json()["steps"].empty());
}

TEST_CASE("toroidalize: I = 4 -> 2 -> 0 then a toroidal leaf") {
    chart_forest f(one_leaf("x^2", "3*x^6+x^6*y", "x"));
    REQUIRE(f.all_good());
    REQUIRE(f.global_I());
    CHECK(*f.global_I() == 4);
    f.toroidalize();
    CHECK(f.all_toroidal());
    std::vector<long> is;
    json trace = f.trace_json();
    for (auto& s : trace["steps"])
        if (s["kind"] == "ToroidalizeI") is.push_back(s["detail"]["I"].get<long>());
    CHECK(is == std::vector<long>{4, 2});
}

TEST_CASE("toroidalize is a no-op on a toroidal forest") {
    chart_forest f(one_leaf("x^2*y^3", "z", "x y"));
    REQUIRE(f.all_toroidal());
    f.toroidalize();
    CHECK(f.trace_json()["steps"].empty());
}

TEST_CASE("I = 0 leaf becomes toroidal after one base blowup") {
    chart_forest f(one_leaf("x^2", "3*x^2+x^2*y", "x"));
    REQUIRE(f.all_good());
    f.toroidalize();
    CHECK(f.all_toroidal());
}

TEST_CASE("monomialize then toroidalize runs are byte-deterministic") {
    auto run = [] {
        chart_forest f(one_leaf("x^3", "x^2+x^5*y", "x"));
        f.monomialize();
        f.toroidalize();
        return f.trace_json().dump() + f.forest_json().dump();
    };
    std::string a = run();
    std::string b = run();
    CHECK(a == b);
    chart_forest f(one_leaf("x^3", "x^2+x^5*y", "x"));
    f.monomialize();
    f.toroidalize();
    CHECK(f.all_toroidal());
}

TEST_CASE("forest file with several leaves") {
    std::string text =
        "vars: x y z\nexceptional: x\nbase: 1\nu = x^2\nv = x^5*y\nclass: E1\nimage: q0\n"
        "\n"
        "vars: x y z\nexceptional: x y\nbase: 1\nu = x*y\nv = x^3*y^2\nclass: E2\nimage: q1\n";
    chart_forest f(parse_forest(text));
    CHECK(f.leaves().size() == 2);
    // operations on q0 leave the q1 leaf untouched
    f.base_blowup("q0");
    CHECK(f.leaves()[1].image_point == "q1");
}

TEST_CASE("base blowup requires invertibility") {
    chart_forest f(one_leaf("x^5", "x^2*y", "x"));
    CHECK_THROWS_AS(f.base_blowup("q0"), mf_error);
}
