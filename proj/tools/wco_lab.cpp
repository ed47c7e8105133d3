// wco_lab: classify structured weighted composition operators, run the defect
// suites, and dump matrix sections, monomial norms and self-map margins.
//
// Exit codes: 0 success / certified-yes, 2 certified-no, 3 indeterminate,
// 1 usage, input or runtime error.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wco/bergman.hpp"
#include "wco/classify.hpp"
#include "wco/engine.hpp"
#include "wco/io.hpp"
#include "wco/moebius.hpp"

namespace {

using wco::ojson;

struct Common {
  std::vector<int> trunc;
  int samples = 100;
  double radius = 0.8;
  std::uint64_t seed = 42;
  double tol_exact = 1e-10;
  double tol_reject = 1e-4;
  std::string out;
  std::string format;
};

void add_common(CLI::App* cmd, Common& c, const char* default_format) {
  c.format = default_format;
  cmd->add_option("--trunc", c.trunc, "Truncation caps N[,N...] (one value applies to every variable)")->delimiter(',');
  cmd->add_option("--samples", c.samples, "Number of sample pairs");
  cmd->add_option("--radius", c.radius, "Sampling polydisk radius, in (0, 0.9]");
  cmd->add_option("--seed", c.seed, "RNG seed");
  cmd->add_option("--tol-exact", c.tol_exact, "Certification tolerance");
  cmd->add_option("--tol-reject", c.tol_reject, "Rejection tolerance");
  cmd->add_option("--out", c.out, "Output path (default: stdout)");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
}

wco::SamplePlan plan_of(const Common& c) {
  wco::SamplePlan p{c.samples, c.radius, c.seed};
  try {
    p.validate();
  } catch (const wco::ParameterError& e) {
    throw wco::ConfigError(e.what());
  }
  if (!(c.tol_exact > 0.0) || !(c.tol_reject > 0.0)) throw wco::ConfigError("tolerances must be positive");
  return p;
}

std::optional<wco::Truncation> trunc_of(const Common& c, int d) {
  if (c.trunc.empty()) return std::nullopt;
  for (int n : c.trunc) {
    if (n < 4) throw wco::ConfigError("--trunc: caps must be >= 4");
  }
  if (c.trunc.size() == 1) return wco::Truncation::uniform(d, c.trunc.front());
  if (static_cast<int>(c.trunc.size()) != d) {
    throw wco::ConfigError("--trunc: expected 1 or " + std::to_string(d) + " caps");
  }
  return wco::Truncation(c.trunc);
}

ojson config_json(const std::string& command, const Common& c, int d) {
  ojson j;
  j["command"] = command;
  const auto t = c.trunc.empty() ? std::nullopt : trunc_of(c, d);
  j["trunc"] = t ? ojson(t->caps) : ojson(nullptr);
  j["samples"] = c.samples;
  j["radius"] = c.radius;
  j["seed"] = c.seed;
  j["tol_exact"] = c.tol_exact;
  j["tol_reject"] = c.tol_reject;
  j["format"] = c.format;
  return j;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw wco::ConfigError(c.out + ": cannot open for writing");
  f << text;
  if (!f) throw wco::ConfigError(c.out + ": write failed");
}

// key,value rows for the flat CSV view of a JSON report.
void flatten(const ojson& j, const std::string& prefix, std::ostringstream& os) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", os);
  } else if (j.is_number_float()) {
    os << prefix << "," << wco::format_double(j.get<double>()) << "\n";
  } else if (j.is_string()) {
    std::string s = j.get<std::string>();
    for (auto& ch : s) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    os << prefix << "," << s << "\n";
  } else {
    os << prefix << "," << j.dump() << "\n";
  }
}

std::string render(const Common& c, const ojson& j) {
  if (c.format == "csv") {
    std::ostringstream os;
    os << "key,value\n";
    flatten(j, "", os);
    return os.str();
  }
  return j.dump(2) + "\n";
}

std::string cplx_cell(wco::cplx z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

// ---------------------------------------------------------------------------

struct ClassifyArgs {
  Common common;
  std::string symbol_path, conj_path, cls;
};

int cmd_classify(const ClassifyArgs& a) {
  const ojson sym_j = wco::load_json(a.symbol_path);
  const wco::SymbolPair sym = wco::symbol_from_json(sym_j);
  wco::ClassifyOptions opt;
  opt.plan = plan_of(a.common);
  opt.tol_exact = a.common.tol_exact;
  opt.tol_reject = a.common.tol_reject;
  opt.section = trunc_of(a.common, sym.dim());

  ojson conj_j = nullptr;
  wco::ClassificationReport rep;
  if (a.cls == "realsym") {
    rep = wco::classify_real_symmetric(sym, opt);
  } else if (a.cls == "unitary") {
    rep = wco::classify_unitary(sym, opt);
  } else {
    if (a.conj_path.empty()) throw wco::ConfigError("--class csym needs --conj");
    conj_j = wco::load_json(a.conj_path);
    rep = wco::classify_csym(sym, wco::conjugation_from_json(conj_j, sym.sp), opt);
  }

  ojson out;
  ojson cfg = config_json("classify", a.common, sym.dim());
  cfg["class"] = a.cls;
  cfg["symbol"] = sym_j;
  cfg["conjugation"] = conj_j;
  out["config"] = cfg;
  out["report"] = wco::report_to_json(rep);
  emit(a.common, render(a.common, out));
  switch (rep.verdict) {
    case wco::Verdict::certified_yes: return 0;
    case wco::Verdict::certified_no: return 2;
    default: return 3;
  }
}

struct DefectArgs {
  Common common;
  std::string symbol_path, conj_path;
};

int cmd_defect(const DefectArgs& a) {
  const ojson sym_j = wco::load_json(a.symbol_path);
  const wco::SymbolPair sym = wco::symbol_from_json(sym_j);
  wco::require_valid(sym);
  const auto plan = plan_of(a.common);
  const wco::Truncation trunc = trunc_of(a.common, sym.dim()).value_or(wco::Truncation::uniform(sym.dim(), 8));

  ojson conj_j = nullptr;
  ojson out;
  ojson cfg = config_json("defect", a.common, sym.dim());
  cfg["resolved_trunc"] = trunc.caps;
  cfg["symbol"] = sym_j;

  ojson res;
  res["realsym"] = wco::defect_json(wco::realsym_pointwise_defect(sym, plan));
  res["unitary"] = wco::defect_json(wco::unitary_pointwise_defect(sym, plan));
  if (!a.conj_path.empty()) {
    conj_j = wco::load_json(a.conj_path);
    const auto cp = wco::conjugation_from_json(conj_j, sym.sp);
    res["csym"] = wco::defect_json(wco::csym_pointwise_defect(sym, cp, plan));
  } else {
    res["csym"] = nullptr;
  }
  cfg["conjugation"] = conj_j;

  // Adjoint kernel check at the first (at most 10) planned pairs.
  const auto pairs = wco::sample_pairs(plan, sym.dim());
  const std::size_t n_adj = std::min<std::size_t>(pairs.size(), 10);
  double coef = 0.0, point = 0.0;
  for (std::size_t i = 0; i < n_adj; ++i) {
    const auto r = wco::adjoint_kernel_check(sym, pairs[i].z, pairs[i].u, trunc);
    coef = std::max(coef, r.coefficient_residual);
    point = std::max(point, r.pointwise_residual);
  }
  res["adjoint"] = {{"pairs", n_adj},
                    {"coefficient_residual", wco::real_json(coef)},
                    {"pointwise_residual", wco::real_json(point)}};

  const auto sec = wco::build_matrix(sym, trunc);
  const auto ur = wco::unitary_section_residual(sec);
  const auto ne = wco::norm_estimate(sec);
  res["section"] = {{"hermitian", wco::real_json(wco::hermitian_defect(sec))},
                    {"unitary_raw", wco::real_json(ur.raw)},
                    {"unitary_block", wco::real_json(ur.block)},
                    {"norm", wco::real_json(ne.value)},
                    {"norm_iterations", ne.iterations},
                    {"norm_converged", ne.converged}};
  out["config"] = cfg;
  out["plan"] = wco::detail::plan_json(plan);
  out["defects"] = res;
  if (!ne.converged) std::cerr << "warning: power iteration did not converge; reporting the last iterate\n";
  emit(a.common, render(a.common, out));
  return 0;
}

struct MatrixArgs {
  Common common;
  std::string symbol_path;
};

int cmd_matrix(const MatrixArgs& a) {
  const ojson sym_j = wco::load_json(a.symbol_path);
  const wco::SymbolPair sym = wco::symbol_from_json(sym_j);
  const auto trunc = trunc_of(a.common, sym.dim());
  if (!trunc) throw wco::ConfigError("matrix: --trunc is required");
  const auto sec = wco::build_matrix(sym, *trunc);
  const auto n = sec.M.rows();
  if (a.common.format == "json") {
    ojson out;
    ojson cfg = config_json("matrix", a.common, sym.dim());
    cfg["symbol"] = sym_j;
    out["config"] = cfg;
    out["basis"] = wco::basis_enumerate(*trunc);
    ojson re = ojson::array(), im = ojson::array();
    for (Eigen::Index i = 0; i < n; ++i) {
      ojson rr = ojson::array(), ri = ojson::array();
      for (Eigen::Index j = 0; j < n; ++j) {
        rr.push_back(sec.M(i, j).real());
        ri.push_back(sec.M(i, j).imag());
      }
      re.push_back(rr);
      im.push_back(ri);
    }
    out["re"] = re;
    out["im"] = im;
    emit(a.common, out.dump(2) + "\n");
    return 0;
  }
  std::ostringstream os;
  os << "row,col,re,im\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      os << i << "," << j << "," << wco::format_double(sec.M(i, j).real()) << ","
         << wco::format_double(sec.M(i, j).imag()) << "\n";
    }
  }
  emit(a.common, os.str());
  return 0;
}

struct NormsArgs {
  Common common;
  std::vector<int> ell{0};
  int degree = 8;
  int radial = 32;
  int angular = 64;
};

int cmd_norms(const NormsArgs& a) {
  const int d = static_cast<int>(a.ell.size());
  wco::SpaceParams sp;
  try {
    sp = wco::SpaceParams(d, a.ell);
  } catch (const wco::ParameterError& e) {
    throw wco::ConfigError(std::string("--ell: ") + e.what());
  }
  if (a.degree < 0) throw wco::ConfigError("--degree must be >= 0");
  const auto trunc = wco::Truncation::uniform(d, a.degree);
  const auto grid = wco::QuadratureGrid::make(a.radial, a.angular);
  struct Row {
    wco::MultiIndex alpha;
    double closed, quad;
  };
  std::vector<Row> rows;
  wco::for_each_index(trunc, [&](std::size_t, const wco::MultiIndex& alpha) {
    const auto m = wco::monomial(d, alpha, trunc);
    rows.push_back({alpha, wco::monomial_norm_sq(alpha, sp), wco::quad_inner_product(m, m, sp, grid).real()});
  });
  auto alpha_cell = [](const wco::MultiIndex& al) {
    std::string s;
    for (std::size_t i = 0; i < al.size(); ++i) s += (i ? ";" : "") + std::to_string(al[i]);
    return s;
  };
  if (a.common.format == "json") {
    ojson out;
    ojson cfg = config_json("norms", a.common, d);
    cfg["ell"] = a.ell;
    cfg["degree"] = a.degree;
    cfg["radial"] = a.radial;
    cfg["angular"] = a.angular;
    out["config"] = cfg;
    ojson arr = ojson::array();
    for (const auto& r : rows) {
      arr.push_back({{"alpha", r.alpha}, {"closed", r.closed}, {"quad", r.quad}, {"absdiff", std::abs(r.closed - r.quad)}});
    }
    out["rows"] = arr;
    emit(a.common, out.dump(2) + "\n");
    return 0;
  }
  std::ostringstream os;
  os << "alpha,closed,quad,absdiff\n";
  for (const auto& r : rows) {
    os << alpha_cell(r.alpha) << "," << wco::format_double(r.closed) << "," << wco::format_double(r.quad) << ","
       << wco::format_double(std::abs(r.closed - r.quad)) << "\n";
  }
  emit(a.common, os.str());
  return 0;
}

struct SelfmapArgs {
  Common common;
  std::string lfts_path;
};

int cmd_selfmap(const SelfmapArgs& a) {
  const ojson in = wco::load_json(a.lfts_path);
  const ojson& list = in.is_object() ? wco::io_detail::field(in, "lfts", "input") : in;
  wco::io_detail::array(list, "lfts");
  std::vector<wco::LFT> maps;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto m = wco::io_detail::lft_value(list[i], "lfts[" + std::to_string(i) + "]");
    try {
      wco::require_wellformed(m);
    } catch (const wco::ParameterError& e) {
      throw wco::ConfigError("lfts[" + std::to_string(i) + "]: " + e.what());
    }
    maps.push_back(m);
  }
  if (a.common.format == "json") {
    ojson out;
    ojson cfg = config_json("selfmap", a.common, 1);
    cfg["lfts"] = list;
    out["config"] = cfg;
    ojson rows = ojson::array();
    for (const auto& m : maps) {
      const auto v = wco::is_self_map(m);
      rows.push_back({{"margin", v.margin}, {"verdict", v.is_self_map}});
    }
    out["rows"] = rows;
    emit(a.common, out.dump(2) + "\n");
    return 0;
  }
  std::ostringstream os;
  os << "a,b,c,d,margin,verdict\n";
  for (const auto& m : maps) {
    const auto v = wco::is_self_map(m);
    os << cplx_cell(m.a) << "," << cplx_cell(m.b) << "," << cplx_cell(m.c) << "," << cplx_cell(m.d) << ","
       << wco::format_double(v.margin) << "," << (v.is_self_map ? "true" : "false") << "\n";
  }
  emit(a.common, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted composition operators on weighted Bergman spaces of the polydisk"};
  app.require_subcommand(1);

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "Decide real symmetry, unitarity or C-symmetry");
  add_common(classify, ca.common, "json");
  classify->add_option("--symbol", ca.symbol_path, "Symbol JSON")->required();
  classify->add_option("--conj", ca.conj_path, "Conjugation JSON (csym)");
  classify->add_option("--class", ca.cls, "Symmetry class")->required()->check(CLI::IsMember({"realsym", "unitary", "csym"}));

  DefectArgs da;
  auto* defect = app.add_subcommand("defect", "Pointwise, adjoint and section defects");
  add_common(defect, da.common, "json");
  defect->add_option("--symbol", da.symbol_path, "Symbol JSON")->required();
  defect->add_option("--conj", da.conj_path, "Conjugation JSON");

  MatrixArgs ma;
  auto* matrix = app.add_subcommand("matrix", "Matrix section in the orthonormal monomial basis");
  add_common(matrix, ma.common, "csv");
  matrix->add_option("--symbol", ma.symbol_path, "Symbol JSON")->required();

  NormsArgs na;
  auto* norms = app.add_subcommand("norms", "Closed-form monomial norms against quadrature");
  add_common(norms, na.common, "csv");
  norms->add_option("--ell", na.ell, "Weights ell_1,...,ell_d")->delimiter(',');
  norms->add_option("--degree", na.degree, "Largest degree per variable");
  norms->add_option("--radial", na.radial, "Radial Gauss-Legendre nodes");
  norms->add_option("--angular", na.angular, "Angular nodes");

  SelfmapArgs sa;
  auto* selfmap = app.add_subcommand("selfmap", "Self-map criterion margins for a list of LFTs");
  add_common(selfmap, sa.common, "csv");
  selfmap->add_option("--lfts", sa.lfts_path, "JSON array of {a,b,c,d}")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*classify) return cmd_classify(ca);
    if (*defect) return cmd_defect(da);
    if (*matrix) return cmd_matrix(ma);
    if (*norms) return cmd_norms(na);
    if (*selfmap) return cmd_selfmap(sa);
  } catch (const wco::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
