#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "percolab/errors.hpp"
#include "percolab/report.hpp"

using namespace percolab;
using Json = nlohmann::json;

namespace {

RunReport sample_report() {
  RunReport r("rho", "free:2", "[a,a^-1,b,b^-1]", std::nullopt);
  r.exact("returns", "p2", make_rational(1, 4));
  r.number("rho", "best", 0.8, Provenance::certified_bound);
  r.text("rho", "method", "returns");
  r.table("rho", "ladder", {"n", "lower"}, {{1, 0.5}, {2, 0.6}}, Provenance::certified_bound);
  r.seconds("rho", 0.25);
  return r;
}

}  // namespace

TEST_CASE("reports are deterministic and timing is opt-in") {
  const auto a = sample_report().to_json();
  CHECK(a == sample_report().to_json());
  CHECK(a.find("timing") == std::string::npos);
  const auto j = Json::parse(sample_report().to_json(true));
  CHECK(j["timing"]["rho"] == 0.25);
}

TEST_CASE("every tagged field is in the ledger") {
  const auto j = Json::parse(sample_report().to_json());
  CHECK(j["provenance_ledger"].size() == 3);
  for (const auto& e : j["provenance_ledger"]) {
    const auto& stages = j["stages"];
    bool found = false;
    for (const auto& s : stages)
      if (s["name"] == e["stage"])
        found = s["fields"][e["field"].get<std::string>()]["provenance"] == e["provenance"];
    CHECK(found);
  }
  CHECK(j["stages"][0]["fields"]["p2"]["exact"] == "1/4");
}

TEST_CASE("verdict only with certified inputs") {
  auto r = sample_report();
  CHECK(r.status() == "none");
  r.outcome(false, true, "heuristic input");
  auto j = Json::parse(r.to_json());
  CHECK(j["outcome"] == "not-certified");
  CHECK_FALSE(j.contains("verdict"));
  r.outcome(true, true, "ok");
  j = Json::parse(r.to_json());
  CHECK(j["outcome"] == "certified");
  CHECK(j["verdict"]["holds"] == true);
}

TEST_CASE("report misuse") {
  auto r = sample_report();
  CHECK_THROWS_AS(r.text("rho", "method", "again"), InvariantViolation);
  CHECK_THROWS_AS(r.json("rho", "bad", "{"), ParseError);
  CHECK_THROWS_AS(r.table("rho", "t", {"a"}, {{1, 2}}, Provenance::exact), ArgumentError);
  r.number("rho", "inf", 1.0 / 0.0, Provenance::heuristic);
  CHECK(Json::parse(r.to_json())["stages"][1]["fields"]["inf"]["value"] == "inf");
}

TEST_CASE("svg output is well formed") {
  std::ostringstream os;
  SvgPlot plot{.title = "a<b", .curves = {{"theta", {{.p = 0.5, .theta = 0.3, .ci = {0.2, 0.4}}}, true}},
               .rules = {{"pc", 0.27, true}}};
  write_svg(os, plot);
  const auto s = os.str();
  CHECK(s.rfind("<svg", 0) == 0);
  CHECK(s.find("a&lt;b") != std::string::npos);
  CHECK(s.find("</svg>") != std::string::npos);
}
