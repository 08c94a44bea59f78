#ifndef WLIP_ERROR_HPP_
#define WLIP_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wlip {

enum class Errc {
  ext_value_in_strict_mode,
  carrier_mismatch,
  nonpositive_scale,
  epsilon_too_small,
  kind_mismatch,
  subset_explosion,
  empty_factor_list,
  enumeration_limit,
  improper_base,
  not_dominated,
  gen_exhausted,
  shape_mismatch,
  parse_error,
  validation_error,
  arithmetic_overflow,
  too_many_points,
  invalid_argument,
};

constexpr std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::ext_value_in_strict_mode: return "EXT_VALUE_IN_STRICT_MODE";
    case Errc::carrier_mismatch: return "CARRIER_MISMATCH";
    case Errc::nonpositive_scale: return "NONPOSITIVE_SCALE";
    case Errc::epsilon_too_small: return "EPSILON_TOO_SMALL";
    case Errc::kind_mismatch: return "KIND_MISMATCH";
    case Errc::subset_explosion: return "SUBSET_EXPLOSION";
    case Errc::empty_factor_list: return "EMPTY_FACTOR_LIST";
    case Errc::enumeration_limit: return "ENUMERATION_LIMIT";
    case Errc::improper_base: return "IMPROPER_BASE";
    case Errc::not_dominated: return "NOT_DOMINATED";
    case Errc::gen_exhausted: return "GEN_EXHAUSTED";
    case Errc::shape_mismatch: return "SHAPE_MISMATCH";
    case Errc::parse_error: return "PARSE_ERROR";
    case Errc::validation_error: return "VALIDATION_ERROR";
    case Errc::arithmetic_overflow: return "ARITHMETIC_OVERFLOW";
    case Errc::too_many_points: return "TOO_MANY_POINTS";
    case Errc::invalid_argument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code), message_(message) {}

  Errc code() const noexcept { return code_; }
  /// Text without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  Errc code_;
  std::string message_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(Errc::parse_error,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace wlip

#endif  // WLIP_ERROR_HPP_
