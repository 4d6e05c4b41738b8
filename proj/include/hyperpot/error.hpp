#pragma once

#include <stdexcept>
#include <string>

namespace hyperpot {

enum class Errc {
  invalid_radius,
  invalid_parameter,
  invariant_violation,
  empty_sample,
  incomplete_table,
  no_haar_found,
  space_mismatch,
  divergence,
  overflow,
  hypothesis_violation,
  config_error,
};

const char* errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch on the kind of error.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

}  // namespace hyperpot
