#include "valg/json_io.hpp"

#include <sstream>

namespace valg {

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  fail("schema", path + ": " + what);
}

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) schema_error(name, "missing field");
  return j.at(name);
}

Cap cap_from_json(const Json& j) {
  std::string s = j.get<std::string>();
  if (s == "1") return Cap::one;
  if (s == "inf") return Cap::infinite;
  schema_error("cap", "expected \"1\" or \"inf\"");
}

}  // namespace

Json group_to_json(const FiniteAbelianGroup& g) {
  return Json{{"factors", g.factors()}};
}

FiniteAbelianGroup group_from_json(const Json& j) {
  const Json& factors = field(j, "factors");
  if (!factors.is_array()) schema_error("factors", "expected an array");
  return FiniteAbelianGroup(factors.get<std::vector<std::uint64_t>>());
}

Json element_to_json(const FiniteAbelianGroup& g, Elem x) { return Json(g.coords(x)); }

Elem element_from_json(const FiniteAbelianGroup& g, const Json& j) {
  if (!j.is_array()) schema_error("element", "expected a coordinate array");
  return g.from_coords(j.get<std::vector<std::int64_t>>());
}

std::string element_key(const FiniteAbelianGroup& g, Elem x) {
  auto c = g.coords(x);
  std::string key;
  for (std::size_t i = 0; i < c.size(); ++i) key += (i ? "," : "") + std::to_string(c[i]);
  return key;
}

Elem element_from_key(const FiniteAbelianGroup& g, const std::string& key) {
  std::vector<std::int64_t> c;
  if (!key.empty()) {
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ',')) c.push_back(std::stoll(part));
  }
  return g.from_coords(c);
}

Json valued_group_to_json(const ValuedGroup& v) {
  Json value = Json::object();
  for (Elem x = 0; x < v.group.order(); ++x)
    value[element_key(v.group, x)] = rat_to_string(v.value[x]);
  return Json{{"factors", v.group.factors()},
              {"cap", cap_to_string(v.cap)},
              {"exponent", v.exponent},
              {"value", value}};
}

Json semivalue_to_json(const Semivalue& v) {
  return valued_group_to_json(ValuedGroup{v.group, v.value, v.cap, v.exponent});
}

ValuedGroup valued_group_from_json(const Json& j) {
  FiniteAbelianGroup g = group_from_json(j);
  Cap cap = cap_from_json(field(j, "cap"));
  std::uint64_t exponent = field(j, "exponent").get<std::uint64_t>();
  const Json& value = field(j, "value");
  if (!value.is_object()) schema_error("value", "expected an object");
  if (value.size() != g.order()) schema_error("value", "table must cover every element");
  std::vector<Rat> table(g.order());
  for (const auto& [key, entry] : value.items())
    table[element_from_key(g, key)] = rat_from_string(entry.get<std::string>());
  return make_valued_group(std::move(g), std::move(table), cap, exponent);
}

Json cost_to_json(const CostFunction& c) {
  Json cost = Json::object();
  for (Elem x = 0; x < c.group.order(); ++x)
    cost[element_key(c.group, x)] = c.cost[x] ? rat_to_string(*c.cost[x]) : "inf";
  return Json{{"factors", c.group.factors()}, {"cost", cost}};
}

CostFunction cost_from_json(const Json& j) {
  FiniteAbelianGroup g = group_from_json(j);
  const Json& cost = field(j, "cost");
  CostFunction out{g, std::vector<ExtRat>(g.order())};
  for (const auto& [key, entry] : cost.items()) {
    std::string s = entry.get<std::string>();
    if (s != "inf") out.cost[element_from_key(g, key)] = rat_from_string(s);
  }
  return out;
}

Json katetov_to_json(const FiniteAbelianGroup& g, const KatetovMap& f) {
  Json domain = Json::array();
  Json values = Json::object();
  for (std::size_t i = 0; i < f.domain.size(); ++i) {
    domain.push_back(g.coords(f.domain[i]));
    values[element_key(g, f.domain[i])] = rat_to_string(f.values[i]);
  }
  return Json{{"domain", domain}, {"f", values}, {"cap", cap_to_string(f.cap)}};
}

KatetovMap katetov_from_json(const FiniteAbelianGroup& g, const Json& j) {
  const Json& domain = field(j, "domain");
  const Json& values = field(j, "f");
  KatetovMap f;
  f.cap = cap_from_json(field(j, "cap"));
  for (const Json& e : domain) f.domain.push_back(element_from_json(g, e));
  std::sort(f.domain.begin(), f.domain.end());
  f.domain.erase(std::unique(f.domain.begin(), f.domain.end()), f.domain.end());
  f.values.resize(f.domain.size());
  if (values.size() != f.domain.size()) schema_error("f", "one entry per domain element");
  for (const auto& [key, entry] : values.items()) {
    Elem x = element_from_key(g, key);
    auto it = std::lower_bound(f.domain.begin(), f.domain.end(), x);
    if (it == f.domain.end() || *it != x) schema_error("f", "entry outside the domain");
    f.values[it - f.domain.begin()] = rat_from_string(entry.get<std::string>());
  }
  return f;
}

Json metric_to_json(const FiniteMetricSpace& x) {
  Json d = Json::object();
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      d[x.points[i] + "," + x.points[j]] = rat_to_string(x.d(i, j));
  return Json{{"points", x.points}, {"d", d}};
}

FiniteMetricSpace metric_from_json(const Json& j) {
  std::vector<std::string> points = field(j, "points").get<std::vector<std::string>>();
  const std::size_t n = points.size();
  auto index_of = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < n; ++i)
      if (points[i] == name) return i;
    schema_error("d", "unknown point '" + name + "'");
  };
  std::vector<Rat> dist(n * n, Rat(0));
  for (const auto& [key, entry] : field(j, "d").items()) {
    auto comma = key.find(',');
    if (comma == std::string::npos) schema_error("d", "key must be \"a,b\"");
    std::size_t a = index_of(key.substr(0, comma));
    std::size_t b = index_of(key.substr(comma + 1));
    Rat v = rat_from_string(entry.get<std::string>());
    dist[a * n + b] = v;
    dist[b * n + a] = v;
  }
  return make_metric_space(std::move(points), std::move(dist));
}

Json hom_to_json(const GroupHom& f) {
  Json images = Json::array();
  for (Elem img : f.basis_images()) images.push_back(f.target.coords(img));
  return Json{{"source", group_to_json(f.source)},
              {"target", group_to_json(f.target)},
              {"images", images}};
}

GroupHom hom_from_json(const Json& j) {
  FiniteAbelianGroup source = group_from_json(field(j, "source"));
  FiniteAbelianGroup target = group_from_json(field(j, "target"));
  std::vector<Elem> images;
  for (const Json& e : field(j, "images")) images.push_back(element_from_json(target, e));
  return hom_from_basis_images(source, target, images);
}

Json stepfn_to_json(const StepFunction& u, const ValuedGroup& host) {
  Json pieces = Json::array();
  for (std::size_t j = 0; j < u.ends.size(); ++j)
    pieces.push_back(Json::array({rat_to_string(u.ends[j]), u.host.coords(u.vals[j])}));
  return Json{{"host", valued_group_to_json(host)}, {"pieces", pieces}};
}

std::pair<StepFunction, ValuedGroup> stepfn_from_json(const Json& j) {
  ValuedGroup host = valued_group_from_json(field(j, "host"));
  StepFunction u{host.group, {}, {}};
  for (const Json& piece : field(j, "pieces")) {
    if (!piece.is_array() || piece.size() != 2) schema_error("pieces", "expected [t, coords] pairs");
    u.ends.push_back(rat_from_string(piece[0].get<std::string>()));
    u.vals.push_back(element_from_json(host.group, piece[1]));
  }
  for (std::size_t t = 1; t < u.ends.size(); ++t)
    if (u.ends[t] <= u.ends[t - 1]) schema_error("pieces", "breakpoints must increase strictly");
  if (!u.ends.empty() && u.ends[0] <= 0) schema_error("pieces", "breakpoints must be positive");
  u.canonicalize();
  return {std::move(u), std::move(host)};
}

}  // namespace valg
