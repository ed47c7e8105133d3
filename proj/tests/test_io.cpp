#include <gtest/gtest.h>

#include "support.hpp"
#include "wco/io.hpp"

using namespace wco;

TEST(Io, SymbolRoundTrip) {
  Rng rng(70);
  for (int i = 0; i < 20; ++i) {
    const auto sp = test::random_space(rng, 1 + i % 2);
    const auto d = test::draw_csym(rng, sp);
    const auto s = csym_symbol(d.cp, d.coeffs, d.c_tilde);
    const auto j = symbol_to_json(s);
    const auto back = symbol_from_json(ojson::parse(j.dump()));
    EXPECT_EQ(symbol_to_json(back).dump(), j.dump());
    const auto cj = conjugation_to_json(d.cp);
    const auto cp = conjugation_from_json(ojson::parse(cj.dump()), sp);
    EXPECT_EQ(conjugation_to_json(cp).dump(), cj.dump());
  }
}

TEST(Io, IndicesAreOneBased) {
  const auto j = ojson::parse(R"({"d": 2, "ell": [0, 1],
    "f": {"c": {"re": 1, "im": 0}, "factors": [{"w": {"re": 0.1, "im": 0}, "m": 3, "var": 2}]},
    "g": [{"var": 2, "lft": {"a": {"re": 1, "im": 0}, "b": {"re": 0, "im": 0}, "c": {"re": 0, "im": 0}, "d": {"re": 1, "im": 0}}},
          {"var": 1, "lft": {"a": {"re": 1, "im": 0}, "b": {"re": 0, "im": 0}, "c": {"re": 0, "im": 0}, "d": {"re": 1, "im": 0}}}]})");
  const auto s = symbol_from_json(j);
  EXPECT_EQ(s.f.factors[0].var, 1);
  EXPECT_EQ(s.g.coords[0].var, 1);
  EXPECT_EQ(s.g.coords[1].var, 0);
}

TEST(Io, FieldDiagnostics) {
  auto message = [](const char* text) {
    try {
      symbol_from_json(ojson::parse(text));
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(message(R"({"ell": [0]})").find("symbol.d"), std::string::npos);
  EXPECT_NE(message(R"({"d": 1, "ell": [0], "f": {"c": {"re": 1}}})").find("symbol.f.c.im"), std::string::npos);
  EXPECT_NE(message(R"({"d": 1, "ell": [0], "f": {"c": {"re": 1, "im": 0}, "factors": [{"w": {"re": 0, "im": 0}, "m": 2, "var": 3}]}})")
                .find("symbol.f.factors[0].var"),
            std::string::npos);
}

TEST(Io, SyntaxErrorsReportLine) {
  try {
    parse_json_text("{\n  \"d\": 1,\n  \"ell\": [0,\n", "x.json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("x.json:", 0), 0u);
  }
}

TEST(Io, ReportSerializationIsStable) {
  const SpaceParams sp(1, {0});
  const auto rep = classify_real_symmetric(real_symmetric_symbol(2.0, std::vector<cplx>{0.0}, std::vector<double>{0.5}, sp));
  const auto a = report_to_json(rep).dump(2);
  const auto b = report_to_json(classify_real_symmetric(real_symmetric_symbol(2.0, std::vector<cplx>{0.0}, std::vector<double>{0.5}, sp))).dump(2);
  EXPECT_EQ(a, b);
  const auto j = report_to_json(rep);
  EXPECT_EQ(j["verdict"], "certified-yes");
  EXPECT_EQ(real_json(INFINITY), "inf");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}
