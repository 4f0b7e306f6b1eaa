#ifndef MONOFORGE_CORE_TRANSFORM3D_HPP
#define MONOFORGE_CORE_TRANSFORM3D_HPP

#include <optional>
#include <string>
#include <vector>

#include "germ.hpp"
#include "germ_io.hpp"

namespace monoforge {

struct chart_map3d {
    std::map<std::string, series> substitution; // old var -> series in new vars
    std::string label;
    std::string renormalizer; // note about the fractional-power absorption, if any
};

struct blowup_center {
    enum class kind_t { point, curve } kind = kind_t::point;
    curve_ideal curve;           // when kind == curve
    std::string curve_text;      // original spelling for labels
};

struct blowup_edge {
    chart_map3d chart;
    normalized_form child;
    invariant_vector child_inv;
    std::optional<std::string> error; // per-chart failure (e.g. IrrationalRoot)
};

// The quadratic transform of a normalized germ: the standard monomial charts
// plus the requested translated variants.
std::vector<blowup_edge> quadratic_charts(const normalized_form& parent,
                                          const std::vector<std::pair<rational, rational>>&
                                              translations,
                                          long work = kDefaultWorkPrecision);

// Monoidal transform along a coordinate curve (or (x, z - phi)); when
// expected_r is set the containment F in I^r is checked first.
std::vector<blowup_edge> monoidal_charts(const normalized_form& parent, const curve_ideal& center,
                                         const std::vector<rational>& translations,
                                         std::optional<long> expected_r,
                                         long work = kDefaultWorkPrecision);

struct theorem_check {
    std::string rule;    // e.g. "quad(2->1) r1<=r+1"
    std::string chart;
    bool applicable = false;
    bool passed = false;
    std::string detail;
};

struct theorem_report {
    std::vector<theorem_check> checks;
    bool all_passed() const;
    json to_json() const;
};

// Runs every multiplicity/tau/gamma inequality applicable to each edge of
// a point blowup, or the 2-curve / r-big-curve cases for curve blowups.
theorem_report check_descent(const normalized_form& parent, const invariant_vector& parent_inv,
                             const std::vector<blowup_edge>& edges, const blowup_center& center,
                             std::optional<long> caller_r = std::nullopt);

json edges_to_json(const std::vector<blowup_edge>& edges);

} // namespace monoforge

#endif
