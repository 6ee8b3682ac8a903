#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "sigcomp/equilibrium.hpp"
#include "sigcomp/rational.hpp"
#include "sigcomp/valuation.hpp"

namespace sigcomp {

// A full game instance: seller count plus valuation matrix, with optional
// provenance (generator label, RNG seed).
struct Instance {
  int sellers = 1;
  ValuationMatrix valuation;
  std::optional<std::string> label;
  std::optional<std::uint64_t> seed;

  bool operator==(const Instance&) const = default;
};

// Plain-text document format:
//   # comment lines start with '#'
//   label: <free text>          (optional)
//   seed: <unsigned integer>    (optional)
//   sellers: <int>
//   buyers: <int>
//   goods: <int>
//   matrix:
//   <B rows of G space-separated 0/1 digits>
Instance parse_instance(std::string_view text);
std::string emit_instance(const Instance& instance);

// FNV-1a over the canonical core document (sellers/buyers/goods/matrix,
// label and seed excluded), rendered as "fnv1a64:<16 hex digits>".
std::string instance_hash(const Instance& instance);

// The worked examples and tightness constructions, by name:
//   ex41                 1 seller,  the 3x3 two-ones-per-row matrix
//   ex51(G)              2 sellers, two stacked GxG identities
//   thm43-identity(G)    1 seller,  GxG identity
//   thm44-2x2            1 seller,  2x2 identity
//   thm63(S)             S sellers, S rows (0 1) plus one row (1 0)
//   thm65(S,G)           S sellers, S x G all-ones
Instance named_instance(const std::string& name);

// Each entry is 1 with probability `density`, drawn from a seeded
// mt19937_64 so instances are identical across runs and platforms. With
// require_positive_demand, all-zero rows are redrawn a bounded number of
// times and then one uniformly chosen entry is forced to 1.
Instance generate_random(int buyers, int goods, int sellers,
                         const Rational& density, std::uint64_t seed,
                         bool require_positive_demand);

// Certificate documents bind to an instance through its hash and are fully
// deterministic (object keys are profile text forms, sorted by nlohmann).
nlohmann::json certificate_to_json(const SpeCertificate& cert, const Instance& instance);
SpeCertificate certificate_from_json(const nlohmann::json& doc, const Instance& instance);

}  // namespace sigcomp
