// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

#include "schrodk/counterexample.hpp"
#include "schrodk/expsum.hpp"
#include "schrodk/modular.hpp"
#include "schrodk/omega.hpp"
#include "schrodk/optimizer.hpp"

namespace schrodk {

using Json = nlohmann::json;

inline constexpr int kReportSchemaVersion = 1;
inline constexpr int kCsvVersion = 1;

void to_json(Json& j, const PrimeWindowReport& r);
void to_json(Json& j, const ParsevalReport& r);
void to_json(Json& j, const WeilReport& r);
void to_json(Json& j, const CensusReport& r);
void to_json(Json& j, const RationalTopReport& r);
void to_json(Json& j, const SmallConstants& c);
void to_json(Json& j, const ConstraintCheck& c);
void to_json(Json& j, const CounterexampleParams& p);
void to_json(Json& j, const ReductionReport& r);
void to_json(Json& j, const BaselineParams& p);
void to_json(Json& j, const BaselineReport& r);
void to_json(Json& j, const DdgReport& r);
void to_json(Json& j, const UnionMeasure& r);
void to_json(Json& j, const McEstimate& r);
void to_json(Json& j, const OverlapCensus& r);
void to_json(Json& j, const LowerBoundReport& r);
void to_json(Json& j, const Slack& s);
void to_json(Json& j, const ExponentSolution& s);
void to_json(Json& j, const OptimalityReport& r);

// {"tool", "version", "schema", "command", "config", "result", "pass"}
Json make_report(const std::string& command, const Json& config, const Json& result, bool pass);

// The audit constants in force, echoed into reports.
Json audit_constants();

// CSV with a leading comment line naming the table and its column version.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::string& table, const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);

  static std::string cell(double v);
  static std::string cell(std::uint64_t v);
  static std::string cell(std::int64_t v);
  static std::string cell(bool v) { return v ? "1" : "0"; }

 private:
  std::ostream& out_;
  std::size_t width_;
};

}  // namespace schrodk
