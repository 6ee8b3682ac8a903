#include "sigcomp/instance.hpp"

#include <charconv>
#include <random>
#include <sstream>
#include <vector>

#include "sigcomp/errors.hpp"

namespace sigcomp {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename T>
T parse_number(std::string_view token, int line, std::string_view what) {
  T value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw InputError("line " + std::to_string(line) + ": bad " + std::string(what) +
                     " '" + std::string(token) + "'");
  }
  return value;
}

struct Line {
  int number;
  std::string_view text;
};

std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, end == std::string_view::npos ? end : end - pos);
    ++number;
    std::string_view stripped = trim(raw);
    if (!stripped.empty() && stripped.front() != '#') lines.push_back({number, stripped});
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return lines;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  std::optional<int> sellers, buyers, goods;
  std::optional<std::string> label;
  std::optional<std::uint64_t> seed;
  std::vector<Line> lines = content_lines(text);
  std::size_t i = 0;
  bool saw_matrix = false;
  for (; i < lines.size(); ++i) {
    std::string_view line = lines[i].text;
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw InputError("line " + std::to_string(lines[i].number) +
                       ": expected 'key: value' before the matrix");
    }
    std::string_view key = trim(line.substr(0, colon));
    std::string_view value = trim(line.substr(colon + 1));
    if (key == "label") {
      label = std::string(value);
    } else if (key == "seed") {
      seed = parse_number<std::uint64_t>(value, lines[i].number, "seed");
    } else if (key == "sellers") {
      sellers = parse_number<int>(value, lines[i].number, "seller count");
    } else if (key == "buyers") {
      buyers = parse_number<int>(value, lines[i].number, "buyer count");
    } else if (key == "goods") {
      goods = parse_number<int>(value, lines[i].number, "good count");
    } else if (key == "matrix") {
      if (!value.empty()) {
        throw InputError("line " + std::to_string(lines[i].number) +
                         ": 'matrix:' takes no inline value");
      }
      saw_matrix = true;
      ++i;
      break;
    } else {
      throw InputError("line " + std::to_string(lines[i].number) + ": unknown key '" +
                       std::string(key) + "'");
    }
  }
  if (!sellers) throw InputError("missing 'sellers:' line");
  if (!buyers) throw InputError("missing 'buyers:' line");
  if (!goods) throw InputError("missing 'goods:' line");
  if (!saw_matrix) throw InputError("missing 'matrix:' line");
  if (*sellers < 1) throw InputError("sellers must be at least 1");
  if (*buyers < 1 || *goods < 1) throw InputError("buyers and goods must be at least 1");

  std::vector<std::uint8_t> values;
  values.reserve(static_cast<std::size_t>(*buyers) * *goods);
  int rows = 0;
  for (; i < lines.size(); ++i) {
    if (rows == *buyers) {
      throw InputError("line " + std::to_string(lines[i].number) +
                       ": unexpected content after the matrix");
    }
    std::string_view line = lines[i].text;
    int column = 0;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
      if (pos == line.size()) break;
      std::size_t start = pos;
      while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
      std::string_view token = line.substr(start, pos - start);
      ++column;
      if (column > *goods) {
        throw InputError("line " + std::to_string(lines[i].number) + ": expected " +
                         std::to_string(*goods) + " entries, got more");
      }
      if (token != "0" && token != "1") {
        throw InputError("line " + std::to_string(lines[i].number) + ", entry " +
                         std::to_string(column) + ": non-binary valuation '" +
                         std::string(token) + "'");
      }
      values.push_back(token == "1" ? 1 : 0);
    }
    if (column != *goods) {
      throw InputError("line " + std::to_string(lines[i].number) + ": expected " +
                       std::to_string(*goods) + " entries, got " + std::to_string(column));
    }
    ++rows;
  }
  if (rows != *buyers) {
    throw InputError("matrix has " + std::to_string(rows) + " rows, expected " +
                     std::to_string(*buyers));
  }
  Instance instance{*sellers, ValuationMatrix(*buyers, *goods, std::move(values)),
                    std::move(label), seed};
  return instance;
}

namespace {

std::string core_document(const Instance& instance) {
  const ValuationMatrix& v = instance.valuation;
  std::string out;
  out += "sellers: " + std::to_string(instance.sellers) + "\n";
  out += "buyers: " + std::to_string(v.num_buyers()) + "\n";
  out += "goods: " + std::to_string(v.num_goods()) + "\n";
  out += "matrix:\n";
  for (int b = 0; b < v.num_buyers(); ++b) {
    for (int g = 0; g < v.num_goods(); ++g) {
      if (g > 0) out += ' ';
      out += static_cast<char>('0' + v.value(b, g));
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string emit_instance(const Instance& instance) {
  std::string out;
  if (instance.label) out += "label: " + *instance.label + "\n";
  if (instance.seed) out += "seed: " + std::to_string(*instance.seed) + "\n";
  out += core_document(instance);
  return out;
}

std::string instance_hash(const Instance& instance) {
  std::uint64_t hash = 1469598103934665603ull;
  for (char c : core_document(instance)) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string hex(16, '0');
  for (int i = 15; i >= 0; --i) {
    hex[i] = digits[hash & 0xf];
    hash >>= 4;
  }
  return "fnv1a64:" + hex;
}

namespace {

Instance labelled(int sellers, std::vector<std::vector<int>> rows, std::string label) {
  return Instance{sellers, ValuationMatrix::from_rows(rows), std::move(label),
                  std::nullopt};
}

std::vector<int> parse_name_args(std::string_view name, std::string_view base,
                                 std::size_t arity) {
  std::string_view rest = name.substr(base.size());
  if (rest.size() < 2 || rest.front() != '(' || rest.back() != ')') {
    throw InputError("expected '" + std::string(base) + "(...)' with " +
                     std::to_string(arity) + " argument(s)");
  }
  rest = rest.substr(1, rest.size() - 2);
  std::vector<int> args;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = rest.find(',', pos);
    std::string_view token =
        trim(rest.substr(pos, comma == std::string_view::npos ? comma : comma - pos));
    int value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw InputError("bad argument '" + std::string(token) + "' in '" +
                       std::string(name) + "'");
    }
    args.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (args.size() != arity) {
    throw InputError("'" + std::string(base) + "' takes " + std::to_string(arity) +
                     " argument(s), got " + std::to_string(args.size()));
  }
  return args;
}

}  // namespace

Instance named_instance(const std::string& name) {
  if (name == "ex41") {
    return labelled(1, {{1, 0, 1}, {1, 1, 0}, {0, 1, 1}}, "ex41");
  }
  if (name.starts_with("ex51(")) {
    int g = parse_name_args(name, "ex51", 1)[0];
    if (g < 1) throw InputError("ex51 needs G >= 1");
    std::vector<std::vector<int>> rows(2 * g, std::vector<int>(g, 0));
    for (int i = 0; i < g; ++i) {
      rows[i][i] = 1;
      rows[g + i][i] = 1;
    }
    return labelled(2, std::move(rows), "ex51(" + std::to_string(g) + ")");
  }
  if (name.starts_with("thm43-identity(")) {
    int g = parse_name_args(name, "thm43-identity", 1)[0];
    if (g < 1) throw InputError("thm43-identity needs G >= 1");
    std::vector<std::vector<int>> rows(g, std::vector<int>(g, 0));
    for (int i = 0; i < g; ++i) rows[i][i] = 1;
    return labelled(1, std::move(rows), "thm43-identity(" + std::to_string(g) + ")");
  }
  if (name == "thm44-2x2") {
    return labelled(1, {{1, 0}, {0, 1}}, "thm44-2x2");
  }
  if (name.starts_with("thm63(")) {
    int s = parse_name_args(name, "thm63", 1)[0];
    if (s < 2) throw InputError("thm63 needs S >= 2");
    std::vector<std::vector<int>> rows(s + 1, {0, 1});
    rows[s] = {1, 0};
    return labelled(s, std::move(rows), "thm63(" + std::to_string(s) + ")");
  }
  if (name.starts_with("thm65(")) {
    auto args = parse_name_args(name, "thm65", 2);
    int s = args[0], g = args[1];
    if (s < 2 || g < 1) throw InputError("thm65 needs S >= 2 and G >= 1");
    std::vector<std::vector<int>> rows(s, std::vector<int>(g, 1));
    return labelled(s, std::move(rows),
                    "thm65(" + std::to_string(s) + "," + std::to_string(g) + ")");
  }
  throw InputError(
      "unknown instance name '" + name +
      "'; expected ex41, ex51(G), thm43-identity(G), thm44-2x2, thm63(S) or thm65(S,G)");
}

namespace {

// Unbiased draw from [0, bound) off the raw engine stream; keeps generated
// instances identical across platforms (mt19937_64 output is specified by
// the standard, std::uniform_int_distribution is not).
std::uint64_t bounded_draw(std::mt19937_64& engine, std::uint64_t bound) {
  const std::uint64_t limit = bound * (~std::uint64_t{0} / bound);
  std::uint64_t raw;
  do {
    raw = engine();
  } while (raw >= limit);
  return raw % bound;
}

constexpr int kRowRetries = 32;

}  // namespace

Instance generate_random(int buyers, int goods, int sellers, const Rational& density,
                         std::uint64_t seed, bool require_positive_demand) {
  if (buyers < 1 || goods < 1 || sellers < 1) {
    throw InputError("random instance needs positive buyer/good/seller counts");
  }
  if (density < Rational(0) || density > Rational(1)) {
    throw InputError("density must lie in [0, 1]");
  }
  const auto num = static_cast<std::uint64_t>(density.numerator());
  const auto den = static_cast<std::uint64_t>(density.denominator());
  std::mt19937_64 engine(seed);
  std::vector<std::uint8_t> values(static_cast<std::size_t>(buyers) * goods, 0);
  for (int b = 0; b < buyers; ++b) {
    std::uint8_t* row = &values[static_cast<std::size_t>(b) * goods];
    bool has_demand = false;
    for (int attempt = 0; attempt <= kRowRetries; ++attempt) {
      has_demand = false;
      for (int g = 0; g < goods; ++g) {
        row[g] = bounded_draw(engine, den) < num ? 1 : 0;
        has_demand |= row[g] != 0;
      }
      if (!require_positive_demand || has_demand) break;
    }
    if (require_positive_demand && !has_demand) {
      row[bounded_draw(engine, static_cast<std::uint64_t>(goods))] = 1;
    }
  }
  return Instance{sellers, ValuationMatrix(buyers, goods, std::move(values)),
                  std::nullopt, seed};
}

nlohmann::json certificate_to_json(const SpeCertificate& cert, const Instance& instance) {
  nlohmann::json doc;
  doc["format"] = "spe-certificate-v1";
  doc["instance_hash"] = instance_hash(instance);
  doc["sellers"] = instance.sellers;
  doc["buyers"] = instance.valuation.num_buyers();
  doc["goods"] = instance.valuation.num_goods();
  nlohmann::json on_path = nlohmann::json::array();
  for (const Partition& p : cert.on_path.partitions) on_path.push_back(p.to_string());
  doc["on_path"] = std::move(on_path);
  doc["universe"] = cert.universe_note;
  nlohmann::json table = nlohmann::json::object();
  for (const auto& [profile, assignment] : cert.contingent.table) {
    nlohmann::json choices = nlohmann::json::array();
    for (int b = 0; b < assignment.num_buyers(); ++b) {
      choices.push_back(assignment.seller_of(b));
    }
    table[profile.to_string()] = std::move(choices);
  }
  doc["table"] = std::move(table);
  return doc;
}

SpeCertificate certificate_from_json(const nlohmann::json& doc, const Instance& instance) {
  if (!doc.is_object() || doc.value("format", "") != "spe-certificate-v1") {
    throw InputError("not a spe-certificate-v1 document");
  }
  const std::string expected_hash = instance_hash(instance);
  if (doc.value("instance_hash", "") != expected_hash) {
    throw InputError("certificate hash " + doc.value("instance_hash", std::string("<missing>")) +
                     " does not match the instance (" + expected_hash + ")");
  }
  const int goods = instance.valuation.num_goods();
  const int buyers = instance.valuation.num_buyers();
  if (doc.value("sellers", -1) != instance.sellers || doc.value("buyers", -1) != buyers ||
      doc.value("goods", -1) != goods) {
    throw InputError("certificate dimensions do not match the instance");
  }
  SpeCertificate cert;
  if (!doc.contains("on_path") || !doc["on_path"].is_array()) {
    throw InputError("certificate is missing the on_path profile");
  }
  for (const auto& part : doc["on_path"]) {
    cert.on_path.partitions.push_back(Partition::parse(part.get<std::string>(), goods));
  }
  if (cert.on_path.num_sellers() != instance.sellers) {
    throw InputError("on_path profile names " +
                     std::to_string(cert.on_path.num_sellers()) + " sellers, instance has " +
                     std::to_string(instance.sellers));
  }
  cert.universe_note = doc.value("universe", "");
  if (!doc.contains("table") || !doc["table"].is_object()) {
    throw InputError("certificate is missing the contingent table");
  }
  for (const auto& [key, value] : doc["table"].items()) {
    SellerProfile profile = SellerProfile::parse(key, goods);
    if (profile.num_sellers() != instance.sellers) {
      throw InputError("table profile '" + key + "' names the wrong seller count");
    }
    if (!value.is_array() || value.size() != static_cast<std::size_t>(buyers)) {
      throw InputError("table entry '" + key + "' needs one seller index per buyer");
    }
    BuyerAssignment assignment;
    for (const auto& entry : value) {
      int seller = entry.get<int>();
      if (seller < 0 || seller >= instance.sellers) {
        throw InputError("table entry '" + key + "' assigns an out-of-range seller");
      }
      assignment.choice.push_back(static_cast<std::uint8_t>(seller));
    }
    cert.contingent.table.emplace(std::move(profile), std::move(assignment));
  }
  return cert;
}

}  // namespace sigcomp
