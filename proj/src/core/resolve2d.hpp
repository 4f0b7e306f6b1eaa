#ifndef MONOFORGE_CORE_RESOLVE2D_HPP
#define MONOFORGE_CORE_RESOLVE2D_HPP

#include <string>
#include <vector>

#include "germ.hpp"
#include "germ_io.hpp"

namespace monoforge {

// delta lives in (1/r!)N when finite; infinity is only certifiable up to
// precision unless the series is exact.
struct delta_value {
    enum class kind_t { finite, inf_pending, inf_exact } kind = kind_t::finite;
    rational value{0};

    static delta_value finite(const rational& q) { return {kind_t::finite, q}; }
    static delta_value inf_pending() { return {kind_t::inf_pending, {}}; }
    static delta_value inf_exact() { return {kind_t::inf_exact, {}}; }
    bool is_finite() const { return kind == kind_t::finite; }
    bool is_infinite() const { return !is_finite(); }
    std::string str() const;
};

// -1 when a < b, 0 equal, +1 greater; infinite values compare equal.
int compare_delta(const delta_value& a, const delta_value& b);

struct inv2d {
    long nu_bar = 0;
    int sigma2 = 0; // 2*sigma in {0,1,2}
    delta_value delta;
    std::string str() const;
};
int compare_inv(const inv2d& a, const inv2d& b); // lexicographic

struct germ2d {
    normalized_form nf;
    invariant_vector iv;
};

germ2d analyze2d(const map_germ& g, long work = kDefaultWorkPrecision);

long nu_bar(const germ2d& g);
int sigma2(const germ2d& g);

// delta of the presented chart; swap_xy reads delta(F; y, x).
delta_value delta_chart(const germ2d& g, bool swap_xy = false);

struct delta_sup_result {
    delta_value delta;
    series t; // accumulated translation, a series in x
};
// Iterated degenerate-line translations at a 1 point with sigma = 0.
delta_sup_result delta_sup(const germ2d& g, long work = kDefaultWorkPrecision);

// delta(p): sup over permissible parameters (max of both orientations at a
// 2 point; the translation supremum at a 1 point).
delta_value delta_point(const germ2d& g, long work = kDefaultWorkPrecision);

inv2d compute_inv(const germ2d& g, long work = kDefaultWorkPrecision);

bool is_one_resolved(const germ2d& g, long work, bool* pending);

struct chart2d {
    bool infinity = false;
    rational alpha{0};
    std::string label() const;
};

struct edge2d {
    chart2d chart;
    germ2d child;
};

edge2d quadratic_transform_2d(const germ2d& g, const chart2d& chart,
                              long work = kDefaultWorkPrecision);

struct tree2d_node {
    int id = 0;
    int parent = -1;
    std::string chart;
    germ2d g;
    inv2d invariants;
    bool resolved = false;
    bool pending = false;
    long depth = 0;
};

struct tree2d {
    std::vector<tree2d_node> nodes;
    long max_path_len = 0;
};

// Expands every non-1-resolved point reachable through the obstruction
// candidates; asserts the chart-descent inequalities on each edge.
tree2d resolve_all(const map_germ& g, long max_depth, long work = kDefaultWorkPrecision);

json tree_to_json(const tree2d& t);

// ---- integer exponent dynamics (good point algorithm bookkeeping) ----

enum class dyn_move { chart_x, chart_y, resolve_step };

struct dyn_state {
    long r = 0;
    long j_lo = 1; // pairs indexed j_lo..r
    std::vector<std::pair<bigint, bigint>> pairs;

    long index_of(size_t k) const { return j_lo + static_cast<long>(k); }
    rational delta_ij(size_t i, size_t j) const;
    // applies the move; checks monotonicity and the 1/r^4 gain while negative
    void step(dyn_move m);
    // max over pairs of ceil(-delta0 * r^4) + 2r + 1
    long implied_bound() const;
    bool fractional_condition_met() const; // fractional parts < 1 at the minimal index
    bool all_deltas_nonnegative() const;
};

} // namespace monoforge

#endif
