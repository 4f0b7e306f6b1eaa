#ifndef MONOFORGE_CORE_DRIVER_HPP
#define MONOFORGE_CORE_DRIVER_HPP

#include <optional>
#include <string>
#include <vector>

#include "germ_io.hpp"
#include "prepared.hpp"

namespace monoforge {

inline constexpr long kDefaultPhaseDepth = 64;

struct chart_node {
    int id = 0;
    std::string divisor_class;
    std::string image_point;
    prepared_class pc;     // leaves are kept in certified coordinates
    good_form gf;
    inv_case invertibility = inv_case::invertible;
    toroidal_form toro;
};

// Desk-scale stand-in for X over the iterated blowups of S: a set of germ
// leaves with divisor-class and image-point bookkeeping. Every operation
// re-verifies its postconditions with independent classification passes.
class chart_forest {
  public:
    chart_forest(std::vector<forest_leaf_record> records, long work = kDefaultWorkPrecision);

    const std::vector<chart_node>& leaves() const { return leaves_; }
    long work_precision() const { return work_; }

    // A(Phi), C(Phi), I(Phi) over the current frontier.
    long global_A() const;
    std::optional<std::pair<long, long>> global_C() const;
    std::optional<long> global_I() const;
    bool all_good() const;
    bool all_toroidal() const;
    bool all_invertible_over(const std::string& image_point) const;

    // One blowup of the base surface point; leaves over other points are
    // untouched. Requires m_q invertible at every leaf over the point.
    void base_blowup(const std::string& image_point);

    // sigma -> Omega -> omega curve-blowup loop until every leaf over the
    // point has m_q invertible; records one trace step per curve blowup.
    void principalize(const std::string& image_point, long max_steps = kDefaultPhaseDepth);

    void monomialize(long max_steps = kDefaultPhaseDepth);
    void toroidalize(long max_steps = kDefaultPhaseDepth);

    json trace_json() const;
    json forest_json() const;

  private:
    std::vector<chart_node> leaves_;
    long work_;
    int next_id_ = 0;
    int divisor_counter_ = 0;
    int point_counter_ = 0;
    json trace_ = json::array();

    void analyze(chart_node& n) const;
    json snapshot() const;
    void record(const std::string& kind, const json& detail);

    struct center_candidate {
        size_t leaf_index;
        int v1, v2; // generator variable indices in the leaf's coordinates
        curve_kind kind;
        curve_invariant_value value;
        std::string desc;
    };
    std::vector<center_candidate> phase_candidates(const std::string& image_point,
                                                   curve_kind kind) const;
    void blow_curve(const center_candidate& c);
};

} // namespace monoforge

#endif
