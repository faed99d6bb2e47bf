#include "lamekit/cli/spec_file.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lamekit/errors.hpp"

namespace lamekit::cli {

using nlohmann::json;

bool HierarchyKind::operator==(const HierarchyKind& o) const {
  const bool same_base = (base && o.base) ? (*base == *o.base) : (base == o.base);
  return same_base && c_hat == o.c_hat && alpha == o.alpha && base_point == o.base_point && samples == o.samples;
}

std::string_view PotentialSpec::kind() const noexcept {
  static constexpr std::string_view names[] = {"constant",     "lame_even",   "lame_odd", "lame_general",
                                               "mexican_hat",  "odd_trivial", "hierarchy"};
  return names[body.index()];
}

bool PotentialSpec::operator==(const PotentialSpec& o) const {
  const bool same_domain = domain.has_value() == o.domain.has_value() &&
                           (!domain || (domain->lo == o.domain->lo && domain->hi == o.domain->hi));
  return same_domain && body == o.body;
}

namespace {

// Collects every violation instead of stopping at the first.
class Checker {
 public:
  std::vector<std::string> issues;

  void fail(const std::string& path, const std::string& msg) { issues.push_back(path + ": " + msg); }

  std::optional<double> number(const json& obj, const std::string& path, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
      fail(join(path, key), "missing required number");
      return std::nullopt;
    }
    if (!it->is_number()) {
      fail(join(path, key), "must be a number");
      return std::nullopt;
    }
    return it->get<double>();
  }

  std::optional<int> integer(const json& obj, const std::string& path, const char* key, int min) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
      fail(join(path, key), "missing required integer");
      return std::nullopt;
    }
    if (!it->is_number_integer()) {
      fail(join(path, key), "must be an integer");
      return std::nullopt;
    }
    const auto v = it->get<long long>();
    if (v < min || v > 1000) {
      fail(join(path, key), "must lie in [" + std::to_string(min) + ", 1000], got " + std::to_string(v));
      return std::nullopt;
    }
    return static_cast<int>(v);
  }

  std::optional<std::vector<double>> numbers(const json& obj, const std::string& path, const char* key,
                                             bool required, std::size_t exact = 0) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(join(path, key), "missing required array of numbers");
      return std::nullopt;
    }
    if (!it->is_array()) {
      fail(join(path, key), "must be an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    bool ok = true;
    for (std::size_t i = 0; i < it->size(); ++i) {
      if (!(*it)[i].is_number()) {
        fail(join(path, key) + "[" + std::to_string(i) + "]", "must be a number");
        ok = false;
      } else {
        out.push_back((*it)[i].get<double>());
      }
    }
    if (exact && it->size() != exact) {
      fail(join(path, key), "must have exactly " + std::to_string(exact) + " entries");
      ok = false;
    }
    return ok ? std::optional(out) : std::nullopt;
  }

  void allowed_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items())
      if (!allowed.count(k)) fail(join(path, k), "unknown field");
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }
};

std::optional<PotentialSpec> parse_node(const json& j, const std::string& path, Checker& ck);

std::optional<Interval> parse_domain(const json& j, const std::string& path, Checker& ck, bool required) {
  const auto d = ck.numbers(j, path, "domain", required, 2);
  if (!d) return std::nullopt;
  if (!((*d)[0] < (*d)[1])) {
    ck.fail(Checker::join(path, "domain"), "needs x0 < x1");
    return std::nullopt;
  }
  return Interval{(*d)[0], (*d)[1]};
}

std::optional<PotentialSpec> parse_node(const json& j, const std::string& path, Checker& ck) {
  if (!j.is_object()) {
    ck.fail(path.empty() ? "document" : path, "must be an object");
    return std::nullopt;
  }
  const auto kind_it = j.find("kind");
  if (kind_it == j.end() || !kind_it->is_string()) {
    ck.fail(Checker::join(path, "kind"), kind_it == j.end() ? "missing required string" : "must be a string");
    return std::nullopt;
  }
  const std::string kind = kind_it->get<std::string>();
  const bool has_domain = j.contains("domain");
  std::optional<Interval> domain;
  if (has_domain || kind == "hierarchy") domain = parse_domain(j, path, ck, kind == "hierarchy");
  const bool domain_ok = !has_domain || domain.has_value();

  std::optional<SpecBody> body;
  if (kind == "constant") {
    ck.allowed_keys(j, path, {"kind", "domain", "value"});
    const auto v = ck.number(j, path, "value");
    if (v) body = ConstantKind{*v};
  } else if (kind == "lame_even" || kind == "lame_odd") {
    ck.allowed_keys(j, path, {"kind", "domain", "n", "c0", "g2", "g3"});
    const auto n = ck.integer(j, path, "n", kind == "lame_even" ? 1 : 0);
    const auto c0 = ck.number(j, path, "c0");
    const auto g2 = ck.number(j, path, "g2");
    const auto g3 = ck.number(j, path, "g3");
    if (n && c0 && g2 && g3) {
      if (kind == "lame_even")
        body = LameEvenKind{*n, *c0, *g2, *g3};
      else
        body = LameOddKind{*n, *c0, *g2, *g3};
    }
  } else if (kind == "lame_general") {
    ck.allowed_keys(j, path, {"kind", "domain", "C", "E", "A", "B", "g2", "g3"});
    const auto C = ck.numbers(j, path, "C", true);
    const auto E = ck.numbers(j, path, "E", false);
    const auto A = ck.numbers(j, path, "A", false);
    const auto B = ck.numbers(j, path, "B", false);
    const auto g2 = ck.number(j, path, "g2");
    const auto g3 = ck.number(j, path, "g3");
    const bool e_ok = !j.contains("E") || E;
    const bool a_ok = !j.contains("A") || A;
    const bool b_ok = !j.contains("B") || B;
    if (C && g2 && g3 && e_ok && a_ok && b_ok) body = LameGeneralKind{*C, E.value_or(std::vector<double>{}), A, B, *g2, *g3};
  } else if (kind == "mexican_hat") {
    ck.allowed_keys(j, path, {"kind", "domain", "nu", "delta"});
    const auto nu = ck.number(j, path, "nu");
    const auto delta = ck.number(j, path, "delta");
    if (nu && !(*nu > 0.0)) ck.fail(Checker::join(path, "nu"), "must be positive");
    if (delta && !(*delta > 0.0)) ck.fail(Checker::join(path, "delta"), "must be positive");
    if (nu && delta && *nu > 0.0 && *delta > 0.0) body = MexicanHatKind{*nu, *delta};
  } else if (kind == "odd_trivial") {
    ck.allowed_keys(j, path, {"kind", "domain", "n", "w0"});
    const auto n = ck.integer(j, path, "n", 0);
    const auto w0 = ck.number(j, path, "w0");
    if (n && w0) body = OddTrivialKind{*n, *w0};
  } else if (kind == "hierarchy") {
    ck.allowed_keys(j, path, {"kind", "domain", "base", "c_hat", "alpha", "base_point", "samples"});
    std::optional<PotentialSpec> base;
    if (!j.contains("base"))
      ck.fail(Checker::join(path, "base"), "missing required spec object");
    else
      base = parse_node(j.at("base"), Checker::join(path, "base"), ck);
    const auto c_hat = ck.number(j, path, "c_hat");
    const auto alpha = ck.numbers(j, path, "alpha", true, 3);
    const auto xb = ck.number(j, path, "base_point");
    std::optional<int> samples = 129;
    if (j.contains("samples")) samples = ck.integer(j, path, "samples", 3);
    if (xb && domain && !domain->contains(*xb)) ck.fail(Checker::join(path, "base_point"), "must lie inside domain");
    if (base && c_hat && alpha && xb && samples) {
      body = HierarchyKind{std::make_shared<const PotentialSpec>(std::move(*base)), *c_hat,
                           {(*alpha)[0], (*alpha)[1], (*alpha)[2]}, *xb, *samples};
    }
  } else {
    ck.fail(Checker::join(path, "kind"), "unknown kind '" + kind +
                                             "' (expected constant, lame_even, lame_odd, lame_general, mexican_hat, "
                                             "odd_trivial or hierarchy)");
  }
  if (!body || !domain_ok) return std::nullopt;
  return PotentialSpec{std::move(*body), domain};
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
}

[[noreturn]] void report(const std::vector<std::string>& issues) {
  std::ostringstream msg;
  msg << issues.size() << (issues.size() == 1 ? " problem" : " problems") << " in spec:";
  for (const auto& s : issues) msg << "\n  " << s;
  throw ParseError(msg.str());
}

json to_json(const PotentialSpec& s) {
  json j;
  j["kind"] = std::string(s.kind());
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, ConstantKind>) {
          j["value"] = b.value;
        } else if constexpr (std::is_same_v<T, LameEvenKind> || std::is_same_v<T, LameOddKind>) {
          j["n"] = b.n;
          j["c0"] = b.c0;
          j["g2"] = b.g2;
          j["g3"] = b.g3;
        } else if constexpr (std::is_same_v<T, LameGeneralKind>) {
          j["C"] = b.C;
          j["E"] = b.E;
          if (b.A) j["A"] = *b.A;
          if (b.B) j["B"] = *b.B;
          j["g2"] = b.g2;
          j["g3"] = b.g3;
        } else if constexpr (std::is_same_v<T, MexicanHatKind>) {
          j["nu"] = b.nu;
          j["delta"] = b.delta;
        } else if constexpr (std::is_same_v<T, OddTrivialKind>) {
          j["n"] = b.n;
          j["w0"] = b.w0;
        } else {
          j["base"] = to_json(*b.base);
          j["c_hat"] = b.c_hat;
          j["alpha"] = b.alpha;
          j["base_point"] = b.base_point;
          j["samples"] = b.samples;
        }
      },
      s.body);
  if (s.domain) j["domain"] = {s.domain->lo, s.domain->hi};
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

PotentialSpec parse_spec(std::string_view text) {
  const json j = parse_json(text);
  Checker ck;
  auto spec = parse_node(j, "", ck);
  if (!ck.issues.empty() || !spec) report(ck.issues);
  return std::move(*spec);
}

PotentialSpec load_spec(const std::string& path) {
  try {
    return parse_spec(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string serialize_spec(const PotentialSpec& spec) { return to_json(spec).dump(2) + "\n"; }

SymmetryPolys parse_symmetry(std::string_view text) {
  const json j = parse_json(text);
  Checker ck;
  if (!j.is_object()) report({"document: must be an object"});
  ck.allowed_keys(j, "", {"A", "B"});
  const auto A = ck.numbers(j, "", "A", false);
  const auto B = ck.numbers(j, "", "B", false);
  if (!j.contains("A") && !j.contains("B")) ck.fail("document", "needs at least one of A, B");
  if (!ck.issues.empty()) report(ck.issues);
  return {A.value_or(std::vector<double>{}), B.value_or(std::vector<double>{})};
}

}  // namespace lamekit::cli
