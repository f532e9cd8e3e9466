#pragma once

#include <stdexcept>
#include <string>

namespace sumlab {

enum class Errc {
  negative_input,
  invalid_params,
  invalid_horizon,
  grid_too_coarse,
  not_increasing,
  not_lacunary,
  bad_params,
  compatible_modulus,
  inequality_violated,
  bounded_ratios,
  unknown_law,
  bad_config,
  usage_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::negative_input: return "NegativeInput";
    case Errc::invalid_params: return "InvalidParams";
    case Errc::invalid_horizon: return "InvalidHorizon";
    case Errc::grid_too_coarse: return "GridTooCoarse";
    case Errc::not_increasing: return "NotIncreasing";
    case Errc::not_lacunary: return "NotLacunary";
    case Errc::bad_params: return "BadParams";
    case Errc::compatible_modulus: return "CompatibleModulus";
    case Errc::inequality_violated: return "InequalityViolated";
    case Errc::bounded_ratios: return "BoundedRatios";
    case Errc::unknown_law: return "UnknownLaw";
    case Errc::bad_config: return "BadConfig";
    case Errc::usage_error: return "UsageError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace sumlab
