#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace logicsim {

enum class errc {
  unknown_element,
  bad_pin,
  input_already_driven,
  duplicate_connection,
  unknown_connection,
  not_a_switch,
  arity_mismatch,
  too_many_inputs,
};

constexpr std::string_view errc_name(errc e) noexcept {
  switch (e) {
    case errc::unknown_element: return "unknown_element";
    case errc::bad_pin: return "bad_pin";
    case errc::input_already_driven: return "input_already_driven";
    case errc::duplicate_connection: return "duplicate_connection";
    case errc::unknown_connection: return "unknown_connection";
    case errc::not_a_switch: return "not_a_switch";
    case errc::arity_mismatch: return "arity_mismatch";
    case errc::too_many_inputs: return "too_many_inputs";
  }
  return "unknown";
}

/// Raised by circuit mutations and gate evaluation on contract violations.
class circuit_error : public std::runtime_error {
 public:
  circuit_error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace logicsim
