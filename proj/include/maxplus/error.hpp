#pragma once

#include <stdexcept>
#include <string>

namespace maxplus {

enum class Errc {
  dimension,
  no_cycles,
  divergent_star,
  not_definite,
  not_critical_part,
  overlapping_nodes,
  unknown_component,
  invalid_block,
  below_threshold,
  not_orbit_periodic,
  zero_vector,
  trivial_column,
  precondition,
  too_large,
  parse,
};

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::dimension: return "dimension";
    case Errc::no_cycles: return "no cycles";
    case Errc::divergent_star: return "divergent star";
    case Errc::not_definite: return "not definite";
    case Errc::not_critical_part: return "not a critical-part matrix";
    case Errc::overlapping_nodes: return "overlapping node sets";
    case Errc::unknown_component: return "unknown component";
    case Errc::invalid_block: return "invalid block shape";
    case Errc::below_threshold: return "t below threshold";
    case Errc::not_orbit_periodic: return "not orbit periodic";
    case Errc::zero_vector: return "zero vector";
    case Errc::trivial_column: return "trivial column";
    case Errc::precondition: return "precondition";
    case Errc::too_large: return "too large for oracle";
    case Errc::parse: return "parse";
  }
  return "unknown";
}

/// Library error. what() starts with the kind name, optionally followed by
/// ": " and detail.
class Error : public std::runtime_error {
 public:
  explicit Error(Errc code, const std::string& detail = {})
      : std::runtime_error(detail.empty() ? std::string(errc_name(code))
                                          : std::string(errc_name(code)) + ": " + detail),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace maxplus
