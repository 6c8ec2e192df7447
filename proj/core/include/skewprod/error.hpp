#pragma once

#include <stdexcept>
#include <string>

namespace skewprod {

enum class Errc {
  invalid_parameter,
  invalid_element,
  invalid_subgroup,
  not_a_group,
  too_large,
  identity_not_fixed,
  axiom_violated,
  pi_not_consistent,
  not_complementary,
  construction_inconsistent,
  extension_invalid,
  core_not_trivial,
  tau_not_automorphism,
  hypotheses_not_met,
  core_shape_unexpected,
  budget_exceeded,
  parse_error,
  io_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace skewprod
