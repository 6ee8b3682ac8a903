#include "sigcomp/rational.hpp"

#include <cctype>
#include <cstdlib>

#include "sigcomp/errors.hpp"

namespace sigcomp {

std::string to_fraction_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::int64_t parse_int(std::string_view text, std::string_view context) {
  if (text.empty()) throw InputError("empty number in " + std::string(context));
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  if (pos == text.size()) throw InputError("bad number '" + std::string(text) + "'");
  std::int64_t value = 0;
  for (; pos < text.size(); ++pos) {
    if (!std::isdigit(static_cast<unsigned char>(text[pos]))) {
      throw InputError("bad number '" + std::string(text) + "'");
    }
    value = value * 10 + (text[pos] - '0');
  }
  return negative ? -value : value;
}

}  // namespace

Rational parse_fraction(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t num = parse_int(text.substr(0, slash), "fraction");
    std::int64_t den = parse_int(text.substr(slash + 1), "fraction");
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 9) throw InputError("too many decimal digits in '" + std::string(text) + "'");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    std::int64_t whole_part = whole.empty() ? 0 : parse_int(whole, "decimal");
    std::int64_t frac_part = frac.empty() ? 0 : parse_int(frac, "decimal");
    bool negative = !whole.empty() && whole[0] == '-';
    Rational magnitude(std::llabs(whole_part), 1);
    magnitude += Rational(frac_part, scale);
    return negative ? -magnitude : magnitude;
  }
  return Rational(parse_int(text, "number"), 1);
}

}  // namespace sigcomp
