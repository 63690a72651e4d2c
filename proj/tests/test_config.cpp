#include <gtest/gtest.h>

#include "primecoh/config.hpp"
#include "primecoh/presets.hpp"

using namespace primecoh;

namespace {

std::vector<std::string> diagnostics_of(const std::string& text) {
  try {
    parse_config(text, "cfg.json");
  } catch (const ConfigError& e) {
    return e.diagnostics();
  }
  return {};
}

bool mentions(const std::vector<std::string>& d, const std::string& needle) {
  for (const auto& s : d)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(Config, MinimalRunGetsDefaults) {
  const auto cfg = parse_config(R"({"runs":[{"id":"a","model":{"kind":"entropic"},"n":20}]})");
  ASSERT_EQ(cfg.runs.size(), 1u);
  const auto& r = cfg.runs[0];
  EXPECT_EQ(r.delta0, 1.0);
  EXPECT_EQ(r.spec.normalization, Normalization::SymmetricNormalized);
  EXPECT_EQ(r.spec.order, Order::Four);
  EXPECT_EQ(r.grid.count, 200u);
  EXPECT_TRUE(r.fits.alpha && r.fits.beta && r.fits.pcp);
  EXPECT_FALSE(r.controls.gue || r.controls.bilaplacian || r.controls.ks);
}

TEST(Config, EveryPresetValidates) {
  for (const auto& p : presets()) {
    EXPECT_NO_THROW(parse_config(p.config.dump(), p.name)) << p.name;
    // Round trip through the effective-config echo.
    const auto cfg = parse_config(p.config.dump());
    EXPECT_NO_THROW(parse_config(to_json(cfg).dump())) << p.name;
  }
}

TEST(Config, ZeroDelta0NamesRunAndField) {
  const auto d = diagnostics_of(
      R"({"runs":[{"id":"bad-delta","model":{"kind":"entropic"},"n":20,"delta0":0}]})");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_TRUE(mentions(d, "run 'bad-delta'"));
  EXPECT_TRUE(mentions(d, "/runs/0/delta0"));
}

TEST(Config, GueControlNeedsTwoLevels) {
  const auto d = diagnostics_of(
      R"({"runs":[{"id":"tiny","model":{"kind":"entropic"},"n":1,"controls":{"gue":true}}]})");
  EXPECT_TRUE(mentions(d, "gue control requires n >= 2"));
  const auto m = diagnostics_of(R"({"runs":[{"id":"tiny","model":{"kind":"gue"},"n":1}]})");
  EXPECT_TRUE(mentions(m, "gue model requires n >= 2"));
}

TEST(Config, ListsEveryViolation) {
  const auto d = diagnostics_of(R"({"runs":[
    {"id":"x","model":{"kind":"nonsense"},"n":0,"order":"six","grid":{"count":2}},
    {"id":"x","model":{"kind":"index-power"},"n":10,"bogus":1}
  ]})");
  EXPECT_TRUE(mentions(d, "/runs/0/model/kind"));
  EXPECT_TRUE(mentions(d, "/runs/0/n"));
  EXPECT_TRUE(mentions(d, "/runs/0/order"));
  EXPECT_TRUE(mentions(d, "/runs/0/grid/count"));
  EXPECT_TRUE(mentions(d, "/runs/1/model/gamma"));
  EXPECT_TRUE(mentions(d, "/runs/1/bogus"));
  EXPECT_TRUE(mentions(d, "duplicate run id"));
}

TEST(Config, SyntaxErrorIsLineAnchored) {
  const auto d = diagnostics_of("{\n  \"runs\": [\n    {\"id\": \"a\",,}\n  ]\n}\n");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].rfind("cfg.json:3:", 0), 0u) << d[0];
}

TEST(Config, RejectsUnsafeIdsAndMissingRuns) {
  EXPECT_TRUE(mentions(diagnostics_of(R"({"runs":[{"id":"../x","model":{"kind":"entropic"},"n":5}]})"),
                       "/runs/0/id"));
  EXPECT_FALSE(diagnostics_of(R"({"run":[]})").empty());
  EXPECT_FALSE(diagnostics_of(R"({"runs":[]})").empty());
}

TEST(Config, ExternalModelNeedsMatchingValues) {
  EXPECT_TRUE(diagnostics_of(
                  R"({"runs":[{"id":"e","model":{"kind":"external","values":[1,2,3],"spacing":1},"n":3}]})")
                  .empty());
  EXPECT_TRUE(mentions(
      diagnostics_of(R"({"runs":[{"id":"e","model":{"kind":"external","values":[1,2],"spacing":1},"n":3}]})"),
      "length must equal n"));
}
