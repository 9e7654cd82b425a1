#include "maasslift/json_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace ml {

const char* const kToolkitVersion = "1.0.0";

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw UsageError(std::string(what) + ": input is not valid JSON");
  return j;
}

Int int_from_json(const json& v, const char* what) {
  if (v.is_number_integer()) return Int(v.get<long>());
  if (v.is_string()) return Int(v.get<std::string>());
  throw UsageError(std::string(what) + ": expected an integer");
}

json quadext_json(const QuadExt& c) {
  return json{{"irr", rational_str(c.irr)}, {"p", c.p}, {"rat", rational_str(c.rat)}};
}

// RFC-4180 quoting for the one CSV field that contains commas.
std::string csv_quote(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

std::string table_to_json(const CoefficientTable& t) {
  json arr = json::array();
  for (const HalfIntegralForm& h : t.classes) {
    std::string key = encode_form(h);
    arr.push_back(json{{"form", key}, {"value", rational_str(t.entries.at(key))}});
  }
  return arr.dump(2) + "\n";
}

std::string table_to_csv(const CoefficientTable& t) {
  std::ostringstream out;
  out << "form,value\n";
  for (const HalfIntegralForm& h : t.classes) {
    std::string key = encode_form(h);
    out << csv_quote(key) << "," << rational_str(t.entries.at(key)) << "\n";
  }
  return out.str();
}

CoefficientTable table_from_json(const std::string& text, long k) {
  json arr = parse_json(text, "coefficient table");
  if (!arr.is_array()) throw UsageError("coefficient table: expected a JSON array");
  CoefficientTable t;
  t.k = k;
  t.dmax = 0;
  for (const json& item : arr) {
    if (!item.is_object() || !item.contains("form") || !item.contains("value") ||
        !item.at("form").is_string())
      throw UsageError("coefficient table: entries must be {\"form\", \"value\"} objects");
    HalfIntegralForm h = parse_form(item.at("form").get<std::string>());
    std::string key = encode_form(h);
    Rational v = item.at("value").is_string()
                     ? parse_rational(item.at("value").get<std::string>())
                     : Rational(int_from_json(item.at("value"), "coefficient table value"));
    if (t.entries.count(key))
      throw UsageError("coefficient table: duplicate class " + key);
    if (!t.classes.empty() && h.m != t.two_n)
      throw UsageError("coefficient table: classes of mixed size");
    t.two_n = h.m;
    Int D = D_of(h);
    if (D > t.dmax) t.dmax = D;
    t.classes.push_back(h);
    t.entries.emplace(std::move(key), std::move(v));
  }
  if (t.classes.empty()) throw UsageError("coefficient table: no classes");
  std::sort(t.classes.begin(), t.classes.end(),
            [](const HalfIntegralForm& a, const HalfIntegralForm& b) {
              Int da = D_of(a), db = D_of(b);
              if (da != db) return da < db;
              return encode_form(a) < encode_form(b);
            });
  return t;
}

std::string param_to_json(const MaassParameter& c) {
  json arr = json::array();
  for (const auto& [m, v] : c.values)
    arr.push_back(json{{"c", rational_str(v)}, {"m", to_long(m)}});
  return arr.dump(2) + "\n";
}

MaassParameter param_from_json(const std::string& text, long k_parity) {
  json arr = parse_json(text, "relation parameter");
  if (!arr.is_array()) throw UsageError("relation parameter: expected a JSON array");
  MaassParameter c;
  c.k_parity = ((k_parity % 2) + 2) % 2;
  c.M = 0;
  for (const json& item : arr) {
    if (!item.is_object() || !item.contains("m") || !item.contains("c"))
      throw UsageError("relation parameter: entries must be {\"m\", \"c\"} objects");
    Int m = int_from_json(item.at("m"), "relation parameter index");
    Rational v = item.at("c").is_string()
                     ? parse_rational(item.at("c").get<std::string>())
                     : Rational(int_from_json(item.at("c"), "relation parameter value"));
    if (m <= 0) throw UsageError("relation parameter: indices must be positive");
    if (c.values.count(m)) throw UsageError("relation parameter: duplicate index");
    if (m > c.M) c.M = m;
    c.values.emplace(std::move(m), std::move(v));
  }
  return c;
}

std::string qexp_to_json(const QExpansion& q) {
  json arr = json::array();
  for (long m = 1; m < q.prec; ++m)
    arr.push_back(json::array({m, rational_str(q.coeff(m))}));
  return arr.dump(2) + "\n";
}

std::string qexp_to_csv(const QExpansion& q) {
  std::ostringstream out;
  out << "m,c\n";
  for (long m = 1; m < q.prec; ++m) out << m << "," << rational_str(q.coeff(m)) << "\n";
  return out.str();
}

std::string siegel_report_json(const LocalSiegelData& d,
                               const std::vector<Rational>& phi) {
  json b = json::array();
  for (const Int& x : d.b) b.push_back(x.get_str());
  json F = json::array();
  for (const Int& x : d.F) F.push_back(x.get_str());
  json terms = json::array();
  for (const auto& [e, coeff] : d.Ftilde.terms)
    terms.push_back(json::array({e, quadext_json(coeff)}));
  json phis = json::array();
  for (const Rational& x : phi) phis.push_back(rational_str(x));
  json rep{{"F", F},
           {"Ftilde", json{{"p", d.Ftilde.p}, {"terms", terms}}},
           {"b", b},
           {"form", encode_form(d.h)},
           {"p", d.p},
           {"phi_local", phis}};
  return rep.dump(2) + "\n";
}

std::string jacobi_to_json(const JacobiTable& jt, const MTypeReport& mt) {
  json entries = json::array();
  for (const auto& [key, val] : jt.entries) {
    json w = json::array();
    for (const Int& x : key.second) w.push_back(to_long(x));
    entries.push_back(json{{"a", to_long(key.first)},
                           {"disc", jt.disc_key(key.first, key.second).get_str()},
                           {"value", rational_str(val)},
                           {"w", w}});
  }
  json fibers = json::array();
  for (const auto& [D, v] : mt.C)
    fibers.push_back(json::array({D.get_str(), rational_str(v)}));
  json rep{{"bound", jt.bound.get_str()},
           {"entries", entries},
           {"fibers", json{{"constant_on_disc", mt.is_mtype}, {"values", fibers}}},
           {"index", encode_form(make_form(jt.S.S))}};
  return rep.dump(2) + "\n";
}

std::string manifest_json(
    const std::string& config_json,
    const std::vector<std::pair<std::string, std::string>>& artifact_hashes) {
  json files = json::object();
  for (const auto& [name, hash] : artifact_hashes) files[name] = hash;
  json m{{"artifacts", files},
         {"config", parse_json(config_json, "manifest config")},
         {"versions", json{{"format", 1},
                           {"gmp", std::string(gmp_version)},
                           {"toolkit", kToolkitVersion}}}};
  return m.dump(2) + "\n";
}

}  // namespace ml
