#include "sigcomp/verdict.hpp"

namespace sigcomp {

Verdict Verdict::checked(std::string name, const Rational& lhs, std::string relation,
                         const Rational& rhs, std::string note) {
  Verdict v;
  v.name = std::move(name);
  v.relation = std::move(relation);
  v.lhs = lhs;
  v.rhs = rhs;
  v.note = std::move(note);
  bool holds = false;
  if (v.relation == "<=") {
    holds = lhs <= rhs;
  } else if (v.relation == ">=") {
    holds = lhs >= rhs;
  } else {
    holds = lhs == rhs;
  }
  v.status = holds ? Status::pass : Status::fail;
  return v;
}

Verdict Verdict::skipped(std::string name, std::string reason) {
  Verdict v;
  v.name = std::move(name);
  v.status = Status::skip;
  v.note = std::move(reason);
  return v;
}

std::string to_string(Verdict::Status status) {
  switch (status) {
    case Verdict::Status::pass: return "pass";
    case Verdict::Status::fail: return "fail";
    default: return "skip";
  }
}

}  // namespace sigcomp
