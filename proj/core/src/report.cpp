// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#include "schrodk/report.hpp"

#include <ostream>
#include <sstream>

#include "schrodk/audit.hpp"
#include "schrodk/error.hpp"
#include "schrodk/version.hpp"

namespace schrodk {

namespace {

Json complex_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

}  // namespace

void to_json(Json& j, const PrimeWindowReport& r) {
  j = {{"Q", r.Q}, {"count", r.count}, {"required", r.required}, {"satisfied", r.satisfied}};
}

void to_json(Json& j, const ParsevalReport& r) {
  j = {{"q", r.q}, {"k", r.k}, {"sum", r.sum}, {"expected", r.expected}, {"residual", r.residual}};
}

void to_json(Json& j, const WeilReport& r) {
  j = {{"q", r.q},
       {"k", r.k},
       {"applicable", r.applicable},
       {"max_ratio", r.max_ratio},
       {"argmax_a1", r.argmax_a1},
       {"argmax_b", r.argmax_b},
       {"pass", r.pass}};
}

void to_json(Json& j, const CensusReport& r) {
  j = {{"q", r.q},
       {"k", r.k},
       {"alpha1", r.alpha1},
       {"alpha2", r.alpha2},
       {"count_large", r.count_large},
       {"fraction", r.fraction},
       {"bin_width", r.bin_width},
       {"histogram", r.histogram},
       {"bound_satisfied", r.bound_satisfied}};
}

void to_json(Json& j, const RationalTopReport& r) {
  j = {{"M", r.M},
       {"N", r.N},
       {"a1", r.a1},
       {"b", r.b},
       {"q", r.q},
       {"k", r.k},
       {"y", r.y},
       {"V", r.V},
       {"direct", complex_json(r.direct)},
       {"main", r.main},
       {"measured_error", r.measured_error},
       {"budget_shape", r.budget_shape},
       {"audit_constant", r.audit_constant},
       {"error_budget", r.error_budget},
       {"pass", r.pass}};
}

void to_json(Json& j, const SmallConstants& c) {
  j = {{"c0", c.c0}, {"c1", c.c1}, {"c2", c.c2}, {"c3", c.c3}, {"c4", c.c4}, {"c5", c.c5}};
}

void to_json(Json& j, const ConstraintCheck& c) {
  j = {{"name", c.name}, {"relation", c.relation}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"ok", c.ok}};
}

void to_json(Json& j, const CounterexampleParams& p) {
  j = {{"n", p.n},   {"k", p.k},           {"R", p.R},       {"L", p.L},         {"S1", p.S1},
       {"Q", p.Q},   {"Delta0", p.Delta0}, {"C", p.C},       {"constants", p.c}, {"delta0", p.delta0},
       {"rho", p.rho()}, {"M1", p.M1()},   {"X", p.X()}};
}

void to_json(Json& j, const ReductionReport& r) {
  j = {{"oracle", r.oracle},
       {"full_sum", r.full_sum},
       {"main", r.main},
       {"envelope_main", r.envelope_main},
       {"measured_e1", r.measured_e1},
       {"e1_shape", r.e1_shape},
       {"audit_constant", r.audit_constant},
       {"e1_budget", r.e1_budget},
       {"tau", r.tau},
       {"u", r.u},
       {"precision_ok", r.precision_ok},
       {"pass", r.pass}};
}

void to_json(Json& j, const BaselineParams& p) {
  j = {{"n", p.n},       {"k", p.k},
       {"R", p.R},       {"grid", p.grid},
       {"time_steps", p.time_steps}, {"threshold", p.threshold}};
}

void to_json(Json& j, const BaselineReport& r) {
  j = {{"params", r.params},
       {"S1", r.S1},
       {"mass", r.mass},
       {"ball_measure", r.ball_measure},
       {"fraction", r.fraction},
       {"ratio_proxy", r.ratio_proxy},
       {"at_origin", r.at_origin},
       {"min_fraction", r.min_fraction},
       {"pass", r.pass}};
}

void to_json(Json& j, const DdgReport& r) {
  j = {{"min_count", r.min_count},
       {"max_count", r.max_count},
       {"ratio", r.ratio},
       {"min_normalized", r.min_normalized},
       {"max_normalized", r.max_normalized}};
}

void to_json(Json& j, const UnionMeasure& r) {
  j = {{"measure", r.measure},
       {"strips", r.strips},
       {"components", r.components},
       {"materialized", r.materialized}};
}

void to_json(Json& j, const McEstimate& r) {
  j = {{"estimate", r.estimate}, {"half_width", r.half_width}, {"lo", r.lo},
       {"hi", r.hi},             {"samples", r.samples},       {"hits", r.hits}};
}

void to_json(Json& j, const OverlapCensus& r) {
  j = {{"boxes", r.boxes}, {"pairs", r.pairs},  {"C1", r.C1},
       {"C1_bound", r.C1_bound}, {"B0", r.B0}, {"B1", r.B1},
       {"lemma_factor", r.lemma_factor}, {"pass", r.pass}};
}

void to_json(Json& j, const LowerBoundReport& r) {
  j = {{"S_magnitude", r.S_magnitude},
       {"M1_floor", r.M1_floor},
       {"E2_shape", r.E2_shape},
       {"audit_constant", r.audit_constant},
       {"E2_budget", r.E2_budget},
       {"coordinate_main", r.coordinate_main},
       {"coordinate_error", r.coordinate_error},
       {"coordinate_budget", r.coordinate_budget},
       {"decomposition_pass", r.decomposition_pass},
       {"precision_ok", r.precision_ok},
       {"pass", r.pass}};
}

void to_json(Json& j, const Slack& s) {
  j = {{"name", s.name}, {"relation", s.relation}, {"value", s.value}, {"strict", s.strict}, {"ok", s.ok}};
}

void to_json(Json& j, const ExponentSolution& s) {
  j = {{"n", s.n},
       {"k", s.k},
       {"lambda", s.lambda},
       {"kappa", s.kappa},
       {"sigma", s.sigma},
       {"s_star", s.s_star},
       {"Delta0_max", s.Delta0_max},
       {"equality_residual", s.equality_residual},
       {"closed_form_gap", s.closed_form_gap},
       {"slack", s.slack},
       {"feasible", s.feasible}};
}

void to_json(Json& j, const OptimalityReport& r) {
  j = {{"n", r.n},
       {"k", r.k},
       {"step", r.step},
       {"s_star", r.s_star},
       {"grid_max", r.grid_max},
       {"grid_gap", r.grid_gap},
       {"argmax", {{"lambda", r.arg_lambda}, {"kappa", r.arg_kappa}, {"sigma", r.arg_sigma}}},
       {"points", r.points},
       {"within", r.within}};
}

Json make_report(const std::string& command, const Json& config, const Json& result, bool pass) {
  return {{"tool", "schrodk"},
          {"version", kVersion},
          {"schema", kReportSchemaVersion},
          {"command", command},
          {"config", config},
          {"audit_constants", audit_constants()},
          {"result", result},
          {"pass", pass}};
}

Json audit_constants() {
  return {{"headroom", audit::kHeadroom},
          {"incomplete_sum", audit::kIncompleteSum},
          {"rational_top", audit::kRationalTop},
          {"lower_bound_e2", audit::kLowerBoundE2},
          {"reduction_e1", audit::kReductionE1},
          {"overlap_c1", audit::kOverlapC1},
          {"baseline_min_fraction", kBaselineMinFraction}};
}

CsvWriter::CsvWriter(std::ostream& out, const std::string& table, const std::vector<std::string>& columns)
    : out_(out), width_(columns.size()) {
  out_ << "# schrodk " << kVersion << ' ' << table << " v" << kCsvVersion << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw InvalidArgument("CsvWriter: row width differs from the header");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << '\n';
}

std::string CsvWriter::cell(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string CsvWriter::cell(std::uint64_t v) { return std::to_string(v); }
std::string CsvWriter::cell(std::int64_t v) { return std::to_string(v); }

}  // namespace schrodk
