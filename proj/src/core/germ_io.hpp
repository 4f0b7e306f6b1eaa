#ifndef MONOFORGE_CORE_GERM_IO_HPP
#define MONOFORGE_CORE_GERM_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "germ.hpp"

namespace monoforge {

using json = nlohmann::ordered_json;

// Text format:
//   vars: x y z
//   exceptional: x y
//   base: 1
//   u = x*y
//   v = x^2*y
//   precision = 24        (optional; literals are exact when absent)
// '#' starts a comment.
map_germ parse_germ(const std::string& text);

// A forest file is a sequence of germ blocks separated by blank lines; each
// block may carry `class: <divisor tag>` and `image: <point id>` lines.
struct forest_leaf_record {
    map_germ germ;
    std::string divisor_class;
    std::string image_point;
};
std::vector<forest_leaf_record> parse_forest(const std::string& text);

std::string read_file(const std::string& path);

json germ_to_json(const map_germ& g);
json normalized_to_json(const normalized_form& nf);
json invariants_to_json(const normalized_form& nf, const invariant_vector& iv);
json extnat_to_json(const extnat& v);

} // namespace monoforge

#endif
