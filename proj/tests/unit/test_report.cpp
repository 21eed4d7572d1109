#include <gtest/gtest.h>

#include <sstream>

#include "schrodk/audit.hpp"
#include "schrodk/error.hpp"
#include "schrodk/report.hpp"

using namespace schrodk;

TEST(Report, EnvelopeFields) {
  const Json r = make_report("optimize", {{"n", 2}}, Json(solve_exponents(2, 3)), true);
  for (const char* key : {"tool", "version", "schema", "command", "config", "audit_constants", "result", "pass"}) {
    EXPECT_TRUE(r.contains(key)) << key;
  }
  EXPECT_EQ(r["schema"], kReportSchemaVersion);
  EXPECT_EQ(r["command"], "optimize");
  EXPECT_EQ(r["result"]["s_star"].get<double>(), 0.3);
  EXPECT_EQ(r["audit_constants"]["headroom"].get<double>(), audit::kHeadroom);
  EXPECT_TRUE(r["result"]["slack"].is_array());
}

TEST(Report, ConstraintChecksSerialize) {
  SmallConstants c;
  const auto p = CounterexampleParams::desk(2, 3, 2048, 32 * 2048, 64, c, 0.496);
  const Json j = p;
  EXPECT_EQ(j["L"].get<double>(), p.L);
  const Json checks = p.checks();
  ASSERT_TRUE(checks.is_array());
  for (const auto& chk : checks) {
    EXPECT_TRUE(chk.contains("name"));
    EXPECT_TRUE(chk.contains("ok"));
  }
}

TEST(Report, CsvHeaderAndRows) {
  std::ostringstream os;
  CsvWriter w(os, "census", {"q", "count"});
  w.row({CsvWriter::cell(std::uint64_t{7}), CsvWriter::cell(0.5)});
  EXPECT_THROW(w.row({"1"}), InvalidArgument);
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("# schrodk ", 0), 0U);
  EXPECT_NE(s.find("census v1\nq,count\n7,0.5\n"), std::string::npos);
  EXPECT_EQ(CsvWriter::cell(true), "1");
}
