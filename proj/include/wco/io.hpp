#pragma once

// JSON formats for symbols, conjugations and reports. Indices are 1-based in
// every file format and 0-based in memory.
//
//   symbol       {d, ell:[...], f:{c:{re,im}, factors:[{w:{re,im}, m, var}]},
//                 g:[{var, lft:{a,b,c,d}}]}
//   conjugation  {U1:[...], U2:[...], p:[{re,im}...], q:[{re,im}...]}

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "wco/classify.hpp"
#include "wco/conjugation.hpp"
#include "wco/symbols.hpp"

namespace wco {

// Malformed input, with the offending line or field in the message.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace io_detail {

inline const ojson& field(const ojson& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError("field " + path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("field " + path + "." + key + ": missing");
  return *it;
}

inline double number(const ojson& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError("field " + path + ": expected a number");
  return v.get<double>();
}

inline int integer(const ojson& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError("field " + path + ": expected an integer");
  return v.get<int>();
}

inline cplx complex_value(const ojson& v, const std::string& path) {
  return {number(field(v, "re", path), path + ".re"), number(field(v, "im", path), path + ".im")};
}

inline const ojson& array(const ojson& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError("field " + path + ": expected an array");
  return v;
}

// 1-based index in [1, d] -> 0-based.
inline int index_value(const ojson& v, int d, const std::string& path) {
  const int k = integer(v, path);
  if (k < 1 || k > d) throw ConfigError("field " + path + ": index " + std::to_string(k) + " outside 1.." + std::to_string(d));
  return k - 1;
}

inline LFT lft_value(const ojson& v, const std::string& path) {
  return {complex_value(field(v, "a", path), path + ".a"), complex_value(field(v, "b", path), path + ".b"),
          complex_value(field(v, "c", path), path + ".c"), complex_value(field(v, "d", path), path + ".d")};
}

}  // namespace io_detail

// Parses text, reporting syntax errors by line and column.
inline ojson parse_json_text(const std::string& text, const std::string& source) {
  try {
    return ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
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
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ojson load_json(const std::string& path) { return parse_json_text(read_file(path), path); }

inline SpaceParams space_from_json(const ojson& j) {
  using namespace io_detail;
  const int d = integer(field(j, "d", "symbol"), "symbol.d");
  if (d < 1) throw ConfigError("field symbol.d: must be >= 1");
  const auto& ell = array(field(j, "ell", "symbol"), "symbol.ell");
  if (static_cast<int>(ell.size()) != d) throw ConfigError("field symbol.ell: expected " + std::to_string(d) + " entries");
  std::vector<int> w;
  for (std::size_t i = 0; i < ell.size(); ++i) {
    const int l = integer(ell[i], "symbol.ell[" + std::to_string(i) + "]");
    if (l < 0) throw ConfigError("field symbol.ell[" + std::to_string(i) + "]: must be >= 0");
    w.push_back(l);
  }
  return SpaceParams(d, std::move(w));
}

inline SymbolPair symbol_from_json(const ojson& j) {
  using namespace io_detail;
  SymbolPair s;
  s.sp = space_from_json(j);
  const int d = s.sp.d;
  const auto& f = field(j, "f", "symbol");
  s.f.c = complex_value(field(f, "c", "symbol.f"), "symbol.f.c");
  const auto& facs = array(field(f, "factors", "symbol.f"), "symbol.f.factors");
  for (std::size_t i = 0; i < facs.size(); ++i) {
    const std::string p = "symbol.f.factors[" + std::to_string(i) + "]";
    KernelFactor k;
    k.w = complex_value(field(facs[i], "w", p), p + ".w");
    k.m = integer(field(facs[i], "m", p), p + ".m");
    k.var = index_value(field(facs[i], "var", p), d, p + ".var");
    s.f.factors.push_back(k);
  }
  const auto& g = array(field(j, "g", "symbol"), "symbol.g");
  if (static_cast<int>(g.size()) != d) throw ConfigError("field symbol.g: expected " + std::to_string(d) + " coordinates");
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::string p = "symbol.g[" + std::to_string(i) + "]";
    MapComponent c;
    c.var = index_value(field(g[i], "var", p), d, p + ".var");
    c.map = lft_value(field(g[i], "lft", p), p + ".lft");
    s.g.coords.push_back(c);
  }
  return s;
}

inline ojson symbol_to_json(const SymbolPair& s) {
  ojson j;
  j["d"] = s.sp.d;
  j["ell"] = s.sp.ell;
  ojson facs = ojson::array();
  for (const auto& k : s.f.factors) facs.push_back({{"w", complex_json(k.w)}, {"m", k.m}, {"var", k.var + 1}});
  j["f"] = {{"c", complex_json(s.f.c)}, {"factors", facs}};
  ojson g = ojson::array();
  for (const auto& c : s.g.coords) {
    g.push_back({{"var", c.var + 1},
                 {"lft",
                  {{"a", complex_json(c.map.a)},
                   {"b", complex_json(c.map.b)},
                   {"c", complex_json(c.map.c)},
                   {"d", complex_json(c.map.d)}}}});
  }
  j["g"] = g;
  return j;
}

inline ConjugationParams conjugation_from_json(const ojson& j, const SpaceParams& sp) {
  using namespace io_detail;
  auto indices = [&](const char* key) {
    std::vector<int> out;
    const auto& a = array(field(j, key, "conjugation"), std::string("conjugation.") + key);
    for (std::size_t i = 0; i < a.size(); ++i) {
      out.push_back(index_value(a[i], sp.d, std::string("conjugation.") + key + "[" + std::to_string(i) + "]"));
    }
    return out;
  };
  auto values = [&](const char* key) {
    std::vector<cplx> out;
    const auto& a = array(field(j, key, "conjugation"), std::string("conjugation.") + key);
    for (std::size_t i = 0; i < a.size(); ++i) {
      out.push_back(complex_value(a[i], std::string("conjugation.") + key + "[" + std::to_string(i) + "]"));
    }
    return out;
  };
  try {
    return ConjugationParams(sp, indices("U1"), indices("U2"), values("p"), values("q"));
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("conjugation: ") + e.what());
  }
}

inline ojson conjugation_to_json(const ConjugationParams& cp) {
  ojson u1 = ojson::array(), u2 = ojson::array();
  for (int j : cp.u1()) u1.push_back(j + 1);
  for (int j : cp.u2()) u2.push_back(j + 1);
  return {{"U1", u1}, {"U2", u2}, {"p", complex_array_json(cp.p())}, {"q", complex_array_json(cp.q())}};
}

// Finite doubles pass through; infinities and NaN become strings so the
// report stays valid JSON.
inline ojson real_json(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

inline ojson defect_json(const DefectResult& r) {
  return {{"max_residual", real_json(r.max_residual)}, {"worst_sample", r.worst_sample}, {"samples", r.samples}};
}

inline ojson report_to_json(const ClassificationReport& r) {
  ojson j;
  j["class"] = r.symmetry_class;
  j["verdict"] = to_string(r.verdict);
  j["parameters"] = r.parameters;
  ojson conds = ojson::array();
  for (const auto& c : r.conditions) {
    ojson cj{{"name", c.name}, {"passed", c.passed}, {"residual", real_json(c.residual)}};
    if (!c.detail.empty()) cj["detail"] = c.detail;
    conds.push_back(cj);
  }
  j["conditions"] = conds;
  ojson defects;
  defects["pointwise"] = defect_json(r.pointwise);
  if (r.section_defect) {
    defects["section"] = {{"kind", r.section_kind}, {"value", real_json(*r.section_defect)}};
  } else {
    defects["section"] = nullptr;
  }
  j["defects"] = defects;
  j["notes"] = r.notes;
  return j;
}

// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace wco
