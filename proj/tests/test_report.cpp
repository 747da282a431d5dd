#include <gtest/gtest.h>

#include "support.hpp"

using namespace recpath;
using namespace recpath::testing;

namespace {

Analysis fig1_analysis(std::vector<std::string> omit = {}) {
  AnalysisOptions o;
  o.load.node_map = NodeMap::parse(corpus_source("fig1.nodemap"));
  o.load.omit = std::move(omit);
  return analyze("fig1.mini", corpus_source("fig1.mini"), o);
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST(ReportJson, TopLevelKeys) {
  const Json j = report_json(fig1_analysis());
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"tool", "schemaVersion", "program", "graphs", "classes", "recursion",
                                            "aspects", "nestingLevels", "paths", "tests", "reference", "coverage",
                                            "warnings"}));
  EXPECT_EQ(j["tool"], "recpath");
}

TEST(ReportJson, Classes) {
  const Json j = report_json(fig1_analysis());
  EXPECT_EQ(j["classes"], Json({{"Factorial", "linear"}, {"SumofFact", "linear"}, {"main", "none"}}));
  EXPECT_EQ(j["nestingLevels"], Json({{"Factorial", 1}, {"SumofFact", 2}, {"main", 0}}));
}

TEST(ReportJson, RecursionEntries) {
  const Json j = report_json(fig1_analysis());
  ASSERT_EQ(j["recursion"].size(), 3u);
  const Json& fact = j["recursion"][0];
  EXPECT_EQ(fact["function"], "Factorial");
  EXPECT_EQ(fact["baseCases"], Json::parse(R"([{"predicate": 8, "branch": "true"}])"));
  EXPECT_EQ(fact["recursiveSites"], Json::parse("[11]"));
  EXPECT_EQ(j["recursion"][1]["baseCases"], Json::parse(R"([{"predicate": 14, "branch": "false"}])"));
}

TEST(ReportJson, GraphStats) {
  const Json j = report_json(fig1_analysis());
  for (const auto& g : j["graphs"]) {
    const int n = g["nodeCount"], e = g["edgeCount"];
    EXPECT_EQ(g["cyclomaticComplexity"], e - n + 2) << g["function"];
    EXPECT_EQ(g["nodes"].size(), static_cast<std::size_t>(n));
    EXPECT_EQ(g["basisPaths"].size(), g["cyclomaticComplexity"].get<std::size_t>());
  }
}

TEST(ReportJson, StudyTests) {
  const Json j = report_json(fig1_analysis({"SumofFact"}));
  ASSERT_EQ(j["tests"].size(), 2u);
  EXPECT_EQ(j["tests"][0]["condition"], "n < 1");
  EXPECT_EQ(j["tests"][1]["familyCondition"], "n ≥ 1");
  EXPECT_EQ(j["tests"][1]["data"], Json::parse("[1]"));
  EXPECT_EQ(j["paths"]["traces"][1]["paper"], "1-2-3-4-7-8-9-11-7-8-10-12-11-5");
  EXPECT_EQ(j["program"]["omitted"], Json::parse(R"(["SumofFact"])"));
}

TEST(ReportJson, CoverageFollowsDerivedData) {
  const Analysis a = fig1_analysis({"4"});
  const Json j = report_json(a);
  EXPECT_EQ(j["coverage"]["suite"], Json::parse("[[0], [1]]"));
  for (const auto& f : j["coverage"]["functions"]) EXPECT_EQ(f["ratio"], 1.0) << f["function"];
  std::vector<std::string> codes;
  for (const auto& w : j["warnings"]) codes.push_back(w["code"]);
  EXPECT_EQ(codes, (std::vector<std::string>{"W4-aspect2-transitive-base", "W5-nesting-level-high"}));
}

TEST(ReportJson, ExplicitSuite) {
  AnalysisOptions o;
  o.load.node_map = NodeMap::parse(corpus_source("fig1.nodemap"));
  o.load.omit = {"4"};
  o.suite = std::vector<std::vector<Value>>{{0}};
  const Json j = report_json(analyze("fig1.mini", corpus_source("fig1.mini"), o));
  EXPECT_EQ(j["coverage"]["functions"][0]["function"], "Factorial");
  EXPECT_EQ(j["coverage"]["functions"][0]["coveredCount"], 0);
  EXPECT_EQ(j["warnings"][0]["code"], "W1-recursive-module-unexecuted");
}

TEST(ReportJson, ByteStable) {
  EXPECT_EQ(report_json(fig1_analysis()).dump(2), report_json(fig1_analysis()).dump(2));
  for (const auto& name : corpus_programs()) {
    const auto a = analyze(name, corpus_source(name), {});
    const auto b = analyze(name, corpus_source(name), {});
    EXPECT_EQ(report_json(a).dump(), report_json(b).dump()) << name;
  }
}

TEST(ReportJson, ReferenceSection) {
  AnalysisOptions o;
  o.load.node_map = NodeMap::parse(corpus_source("fig1.nodemap"));
  o.load.omit = {"4"};
  o.reference = parse_reference(corpus_source("fig1.reference"));
  const Json j = report_json(analyze("fig1.mini", corpus_source("fig1.mini"), o));
  ASSERT_EQ(j["reference"].size(), 2u);
  EXPECT_EQ(j["reference"][0]["notes"].size(), 2u);
  EXPECT_EQ(j["reference"][1]["notes"].size(), 0u);
}

TEST(ReportText, Sections) {
  const std::string text = report_text(fig1_analysis({"SumofFact"}));
  for (const char* heading : {"graphs", "recursion", "paths", "tests", "coverage"})
    EXPECT_TRUE(contains(text, std::string("\n") + heading)) << heading;
  EXPECT_TRUE(contains(text, "Path-1."));
  EXPECT_TRUE(contains(text, "n = 1  (family n ≥ 1)"));
  EXPECT_FALSE(contains(text, "\x1b["));
}

TEST(ReportText, Colour) {
  const std::string text = report_text(fig1_analysis({"4"}), Style{true});
  EXPECT_TRUE(contains(text, "\x1b["));
}

TEST(LoadProgram, Errors) {
  EXPECT_THROW(read_file("/nonexistent/file.mini"), IoError);
  LoadOptions lo;
  lo.entry = "nope";
  EXPECT_THROW(load_program(corpus_source("fig1.mini"), lo), ResolveError);
}
