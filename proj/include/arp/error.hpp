#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace arp {

enum class Errc {
  invalid_argument,
  dimension_mismatch,
  non_finite,
  not_orthonormal,
  not_symmetric,
  not_spsd,
  zero_vector,
  rank_deficient,
  degenerate_probabilities,
  singular_pivot,
  singular_core,
  zero_leverage,
  zero_pivot,
  core_not_pd,
  mass_exhausted,
  diagonal_exhausted,
  parse_error,
  unsupported_field,
  invalid_params,
  io_error,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::non_finite: return "NonFinite";
    case Errc::not_orthonormal: return "NotOrthonormal";
    case Errc::not_symmetric: return "NotSymmetric";
    case Errc::not_spsd: return "NotSpsd";
    case Errc::zero_vector: return "ZeroVector";
    case Errc::rank_deficient: return "RankDeficient";
    case Errc::degenerate_probabilities: return "DegenerateProbabilities";
    case Errc::singular_pivot: return "SingularPivot";
    case Errc::singular_core: return "SingularCore";
    case Errc::zero_leverage: return "ZeroLeverage";
    case Errc::zero_pivot: return "ZeroPivot";
    case Errc::core_not_pd: return "CoreNotPD";
    case Errc::mass_exhausted: return "MassExhausted";
    case Errc::diagonal_exhausted: return "DiagonalExhausted";
    case Errc::parse_error: return "ParseError";
    case Errc::unsupported_field: return "UnsupportedField";
    case Errc::invalid_params: return "InvalidParams";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

/// Exception carrying a typed error code. Every failure raised by the
/// library is an `arp::Error`.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace arp
