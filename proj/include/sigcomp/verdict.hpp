#pragma once

#include <optional>
#include <string>

#include "sigcomp/rational.hpp"

namespace sigcomp {

// One checked inequality with both sides kept as exact rationals.
struct Verdict {
  enum class Status { pass, fail, skip };

  std::string name;
  Status status = Status::skip;
  std::string relation;  // "<=", ">=", "=="
  std::optional<Rational> lhs;
  std::optional<Rational> rhs;
  std::string note;  // skip reason or context

  // Margin by which the inequality holds (negative when violated).
  std::optional<Rational> slack() const {
    if (!lhs || !rhs) return std::nullopt;
    if (relation == "<=") return *rhs - *lhs;
    return *lhs - *rhs;  // ">=" and "==" (zero slack when tight)
  }

  static Verdict checked(std::string name, const Rational& lhs,
                         std::string relation, const Rational& rhs,
                         std::string note = "");
  static Verdict skipped(std::string name, std::string reason);
};

std::string to_string(Verdict::Status status);

}  // namespace sigcomp
