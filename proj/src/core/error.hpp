#ifndef MONOFORGE_CORE_ERROR_HPP
#define MONOFORGE_CORE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace monoforge {

enum class errc {
    parse_error,
    precision_exhausted,
    irrational_root,
    non_unit,
    malformed_germ,
    unit_change_required,
    wrong_form,
    center_not_in_locus,
    not_invertible,
    depth_exceeded,
    irrational_critical_point,
    unsupported_center,
    invalid_argument,
    internal,
};

const char* errc_name(errc c);

// All engine failures are reported through this exception. `kind` is stable
// across the C ABI; `what()` carries the human-readable context.
class mf_error : public std::runtime_error {
  public:
    mf_error(errc kind, const std::string& msg)
        : std::runtime_error(std::string(errc_name(kind)) + ": " + msg), kind_(kind) {}

    errc kind() const noexcept { return kind_; }

  private:
    errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& msg) { throw mf_error(kind, msg); }

} // namespace monoforge

#endif
