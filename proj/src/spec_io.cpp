#include "randlab/spec_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "randlab/battery.hpp"
#include "randlab/errors.hpp"

namespace randlab {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

Rational rational_from_json(const Json& j, const std::string& field) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw ParseError("field '" + field + "' must be a \"num/den\" string");
}

const Json& member(const Json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError("missing field '" + key + "'");
  return j.at(key);
}

BitString key_string(const std::string& key) {
  if (key.empty() || key == "ε" || key == "-") return BitString{};
  return BitString::parse(key);
}

std::string key_text(const BitString& s) { return s.str(); }

Measure measure_from_json_value(const Json& j) {
  if (j.is_string()) return parse_measure(j.get<std::string>());
  return Measure::from_spec(measure_spec_from_json(j));
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = e.byte == 0 ? 0 : e.byte - 1;
    for (std::size_t i = 0; i < stop && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    if (const auto colon = what.rfind(": "); colon != std::string::npos) what = what.substr(colon + 2);
    throw ParseError("invalid JSON: " + what, line, col);
  }
}

Json to_json(const MeasureSpec& spec) {
  Json j;
  switch (spec.kind) {
    case MeasureSpec::Kind::fair_coin:
      j["kind"] = "fair_coin";
      break;
    case MeasureSpec::Kind::bernoulli:
      j["kind"] = "bernoulli";
      j["p"] = to_string(spec.p);
      break;
    case MeasureSpec::Kind::split_table: {
      j["kind"] = "split_table";
      Json splits = Json::array();
      for (const auto& [s, v] : spec.splits) splits.push_back(Json::array({key_text(s), to_string(v)}));
      j["splits"] = std::move(splits);
      j["total"] = to_string(spec.total);
      break;
    }
    case MeasureSpec::Kind::interleave:
      j["kind"] = "interleave";
      j["first"] = to_json(spec.factors.at(0));
      j["second"] = to_json(spec.factors.at(1));
      break;
    case MeasureSpec::Kind::derived:
      throw PreconditionError("derived measure '" + spec.label + "' has no serializable spec; materialize it first");
  }
  return j;
}

MeasureSpec measure_spec_from_json(const Json& j) {
  try {
    if (j.is_string()) return parse_measure(j.get<std::string>()).spec();
    MeasureSpec spec;
    const std::string kind = member(j, "kind").get<std::string>();
    if (kind == "fair_coin" || kind == "fair") {
      spec.kind = MeasureSpec::Kind::fair_coin;
    } else if (kind == "bernoulli") {
      spec.kind = MeasureSpec::Kind::bernoulli;
      spec.p = rational_from_json(member(j, "p"), "p");
    } else if (kind == "split_table") {
      spec.kind = MeasureSpec::Kind::split_table;
      for (const auto& entry : member(j, "splits")) {
        if (!entry.is_array() || entry.size() != 2) throw ParseError("splits are [string, \"num/den\"] pairs");
        spec.splits.emplace_back(key_string(entry[0].get<std::string>()), rational_from_json(entry[1], "splits"));
      }
      spec.total = j.contains("total") ? rational_from_json(j.at("total"), "total") : Rational(1);
    } else if (kind == "interleave") {
      spec.kind = MeasureSpec::Kind::interleave;
      spec.factors = {measure_spec_from_json(member(j, "first")), measure_spec_from_json(member(j, "second"))};
    } else {
      throw ParseError("unknown measure kind '" + kind + "' (fair_coin, bernoulli, split_table, interleave)");
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed measure spec: ") + e.what());
  }
}

Measure materialize(const Measure& mu, std::size_t depth) {
  std::vector<std::pair<BitString, Rational>> splits;
  for_each_string_upto(depth == 0 ? 0 : depth - 1, [&](const BitString& s) {
    if (depth == 0) return;
    Rational split = mu.split(s);
    if (split != Rational(1, 2)) splits.emplace_back(s, std::move(split));
  });
  return Measure::split_table(std::move(splits), mu.total());
}

Json measure_json(const Measure& mu, std::size_t depth) {
  if (mu.spec().kind != MeasureSpec::Kind::derived) return to_json(mu.spec());
  return to_json(materialize(mu, depth).spec());
}

Measure parse_measure(std::string_view text) {
  const std::string_view t = trim(text);
  try {
    if (t == "fair" || t == "fair_coin") return Measure::fair_coin();
    if (t.starts_with("bernoulli:")) return Measure::bernoulli(parse_rational(t.substr(10)));
    if (t.starts_with("file:")) return Measure::from_spec(measure_spec_from_json(parse_json(read_text_file(std::string(t.substr(5))))));
    if (t.starts_with("{")) return Measure::from_spec(measure_spec_from_json(parse_json(t)));
  } catch (const ConstructionError& e) {
    throw ParseError(std::string("invalid measure: ") + e.what());
  }
  throw ParseError("unknown measure '" + std::string(t) + "' (fair, bernoulli:P, file:PATH, or a JSON spec)", 1, 1);
}

Martingale parse_martingale(std::string_view text) {
  const std::string_view t = trim(text);
  auto with_base = [](std::string_view rest) -> std::pair<std::string_view, Measure> {
    const auto at = rest.find('@');
    if (at == std::string_view::npos) return {rest, Measure::fair_coin()};
    return {rest.substr(0, at), parse_measure(rest.substr(at + 1))};
  };
  if (t.starts_with("quotient:")) {
    const std::string_view rest = t.substr(9);
    std::string first_error;
    for (std::size_t slash = rest.find('/'); slash != std::string_view::npos; slash = rest.find('/', slash + 1)) {
      try {
        const Measure nu = parse_measure(rest.substr(0, slash));
        const Measure mu = parse_measure(rest.substr(slash + 1));
        return from_measures(nu, mu);
      } catch (const Error& e) {
        if (first_error.empty()) first_error = e.what();
      }
    }
    throw ParseError("quotient needs NU/MU with both measures valid" +
                     (first_error.empty() ? std::string() : " (" + first_error + ")"), 1, 10);
  }
  if (t.starts_with("all_in:")) {
    const auto [side, base] = with_base(t.substr(7));
    if (side != "0" && side != "1") throw ParseError("all_in takes side 0 or 1", 1, 8);
    return Martingale::all_in(base, side == "1");
  }
  if (t == "identity" || t.starts_with("identity@")) {
    const auto [unused, base] = with_base(t.substr(8));
    return Martingale::constant(base, Rational(1));
  }
  if (t.starts_with("battery:")) {
    try {
      return battery_martingale(std::string(t.substr(8)));
    } catch (const PreconditionError& e) {
      throw ParseError(e.what(), 1, 9);
    }
  }
  if (t.starts_with("file:")) {
    const Json j = parse_json(read_text_file(std::string(t.substr(5))));
    try {
      const Measure base = j.contains("base") ? measure_from_json_value(j.at("base")) : Measure::fair_coin();
      std::map<BitString, Rational> table;
      for (const auto& [key, value] : member(j, "capital").items()) {
        table.emplace(key_string(key), rational_from_json(value, "capital"));
      }
      return Martingale::table(base, std::move(table));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed martingale table: ") + e.what());
    } catch (const ConstructionError& e) {
      throw ParseError(std::string("invalid martingale table: ") + e.what());
    }
  }
  throw ParseError("unknown martingale '" + std::string(t) +
                       "' (quotient:NU/MU, all_in:B[@MEASURE], identity[@MEASURE], battery:NAME, file:PATH)",
                   1, 1);
}

Json martingale_json(const Martingale& m, std::size_t depth) {
  Json j;
  j["label"] = m.label();
  j["base"] = measure_json(m.base(), depth);
  j["depth"] = depth;
  Json capital = Json::object();
  for (const auto& [s, v] : capital_table(m, depth)) capital[key_text(s)] = to_string(v);
  j["capital"] = std::move(capital);
  return j;
}

// ---------------------------------------------------------------------------

Json to_json(const CylinderSet& u) {
  Json j = Json::array();
  for (const auto& g : u.generators()) j.push_back(key_text(g));
  return j;
}

CylinderSet cylinder_set_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("a cylinder set is an array of bit strings");
  std::vector<BitString> gens;
  for (const auto& g : j) gens.push_back(key_string(g.get<std::string>()));
  try {
    return CylinderSet(std::move(gens));
  } catch (const ConstructionError& e) {
    throw ParseError(e.what());
  }
}

namespace {

Json levels_json(const std::vector<CylinderSet>& levels) {
  Json j = Json::array();
  for (const auto& u : levels) j.push_back(to_json(u));
  return j;
}

std::vector<CylinderSet> levels_from_json(const Json& j) {
  std::vector<CylinderSet> out;
  for (const auto& u : j) out.push_back(cylinder_set_from_json(u));
  return out;
}

Json values_json(const std::vector<Rational>& values) {
  Json j = Json::array();
  for (const auto& v : values) j.push_back(to_string(v));
  return j;
}

std::vector<Rational> values_from_json(const Json& j) {
  std::vector<Rational> out;
  for (const auto& v : j) out.push_back(rational_from_json(v, "values"));
  return out;
}

}  // namespace

Json to_json(const MLTest& t) {
  Json j;
  j["kind"] = "ml";
  j["base"] = measure_json(t.base, 0);
  j["levels"] = levels_json(t.levels);
  return j;
}

Json to_json(const BoundedMLTest& t, std::size_t depth) {
  Json j;
  j["kind"] = "bounded_ml";
  j["base"] = measure_json(t.test.base, depth);
  j["bound"] = measure_json(t.bound, depth);
  j["levels"] = levels_json(t.test.levels);
  return j;
}

Json to_json(const VitaliTest& t, std::size_t depth) {
  Json j;
  j["kind"] = "vitali";
  j["base"] = measure_json(t.base, depth);
  j["bound"] = measure_json(t.bound, depth);
  j["pieces"] = levels_json(t.pieces);
  return j;
}

Json to_json(const IntegralStep& g, std::size_t depth) {
  Json j;
  j["kind"] = "integral";
  j["base"] = measure_json(g.base, depth);
  j["depth"] = g.depth;
  j["values"] = values_json(g.values);
  j["bound"] = measure_json(g.bound, depth);
  if (g.witness) j["witness"] = values_json(*g.witness);
  return j;
}

TestBundle test_bundle_from_json(const Json& j) {
  TestBundle b;
  try {
    b.kind = member(j, "kind").get<std::string>();
    const Measure base = j.contains("base") ? measure_from_json_value(j.at("base")) : Measure::fair_coin();
    if (b.kind == "martingale") {
      if (j.contains("spec")) {
        b.martingale = parse_martingale(j.at("spec").get<std::string>());
      } else {
        std::map<BitString, Rational> table;
        for (const auto& [key, value] : member(j, "capital").items()) {
          table.emplace(key_string(key), rational_from_json(value, "capital"));
        }
        b.martingale = Martingale::table(base, std::move(table));
      }
    } else if (b.kind == "ml") {
      b.ml = MLTest{base, levels_from_json(member(j, "levels"))};
    } else if (b.kind == "bounded_ml") {
      b.bounded_ml = BoundedMLTest{MLTest{base, levels_from_json(member(j, "levels"))},
                                   measure_from_json_value(member(j, "bound"))};
    } else if (b.kind == "vitali") {
      b.vitali = VitaliTest{base, levels_from_json(member(j, "pieces")), measure_from_json_value(member(j, "bound"))};
    } else if (b.kind == "integral") {
      IntegralStep g;
      g.base = base;
      g.depth = member(j, "depth").get<std::size_t>();
      g.values = values_from_json(member(j, "values"));
      if (g.values.size() != (std::size_t{1} << g.depth)) throw ParseError("an integral test needs 2^depth values");
      g.bound = measure_from_json_value(member(j, "bound"));
      if (j.contains("witness")) g.witness = values_from_json(j.at("witness"));
      b.integral = std::move(g);
    } else {
      throw ParseError("unknown test kind '" + b.kind + "' (martingale, ml, bounded_ml, vitali, integral)");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed test bundle: ") + e.what());
  } catch (const ConstructionError& e) {
    throw ParseError(std::string("invalid test bundle: ") + e.what());
  }
  return b;
}

}  // namespace randlab
