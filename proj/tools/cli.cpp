// Copyright (C) 2026 The schrodk Authors
// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <variant>

#include "schrodk/bump.hpp"
#include "schrodk/counterexample.hpp"
#include "schrodk/error.hpp"
#include "schrodk/expsum.hpp"
#include "schrodk/modular.hpp"
#include "schrodk/omega.hpp"
#include "schrodk/optimizer.hpp"
#include "schrodk/random.hpp"
#include "schrodk/report.hpp"
#include "schrodk/version.hpp"

namespace schrodk::cli {

namespace {

struct RunConfig {
  unsigned threads = 1;
  std::string out;
  std::string csv;
  std::uint64_t seed = 1;

  unsigned n = 2;
  unsigned k = 3;
  std::uint64_t q = 0;
  std::uint64_t q_min = 3;
  std::uint64_t q_max = 199;
  double alpha1 = 0.5;

  std::uint64_t Q = 2048;
  double c0 = 0.1;
  double c1 = 0.01;
  double c2 = 0.01;
  double c3 = 0.01;
  double c4 = 1.0 / 32.0;
  double c5 = 1.0 / 32.0;
  std::string source = "orbit";
  bool enforce_thresholds = true;
  std::uint64_t samples = 1'000'000;
  std::uint64_t cap = kDefaultExactCap;
  std::uint64_t points = 200;
  double zero_fraction = 0.25;
  std::string boxes_in;
  std::string boxes_out;

  double rho_factor = 32.0;
  double S1 = 64.0;
  double delta0 = 0.0;
  unsigned resolution = BumpProfile::kDefaultResolution;
  double range = BumpProfile::kDefaultRange;
  unsigned quad_order = 256;
  std::uint64_t t0_checks = 5;

  double R = 4096.0;
  unsigned grid = 48;
  unsigned time_steps = 8;
  double threshold = 0.5;

  double step = 1e-3;
};

using Member = std::variant<double RunConfig::*, unsigned RunConfig::*, std::uint64_t RunConfig::*,
                            std::string RunConfig::*, bool RunConfig::*>;

struct Field {
  const char* key;
  Member member;
  const char* help;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      {"threads", &RunConfig::threads, "worker threads (0: all cores)"},
      {"out", &RunConfig::out, "write the JSON report here instead of stdout"},
      {"csv", &RunConfig::csv, "write the CSV table here"},
      {"seed", &RunConfig::seed, "random seed"},
      {"n", &RunConfig::n, "dimension"},
      {"k", &RunConfig::k, "degree of the symbol"},
      {"q", &RunConfig::q, "single prime (0: use --q-min..--q-max)"},
      {"q_min", &RunConfig::q_min, "smallest prime of the range"},
      {"q_max", &RunConfig::q_max, "largest prime of the range"},
      {"alpha1", &RunConfig::alpha1, "census threshold |T| >= alpha1 sqrt(q)"},
      {"Q", &RunConfig::Q, "prime window [Q/2, Q]"},
      {"c0", &RunConfig::c0, "small constant c0"},
      {"c1", &RunConfig::c1, "small constant c1"},
      {"c2", &RunConfig::c2, "small constant c2"},
      {"c3", &RunConfig::c3, "small constant c3"},
      {"c4", &RunConfig::c4, "box half-width constant on axis 1"},
      {"c5", &RunConfig::c5, "box half-width constant on the other axes"},
      {"source", &RunConfig::source, "magnitude table: orbit or full"},
      {"enforce_thresholds", &RunConfig::enforce_thresholds, "reject Q and c4, c5 outside the admissible range"},
      {"samples", &RunConfig::samples, "Monte Carlo samples"},
      {"cap", &RunConfig::cap, "largest number of boxes the exact union may materialize"},
      {"points", &RunConfig::points, "number of representatives"},
      {"zero_fraction", &RunConfig::zero_fraction, "share of sampled boxes taken from the a2 = 0 column"},
      {"boxes_in", &RunConfig::boxes_in, "read a box list instead of building the system"},
      {"boxes_out", &RunConfig::boxes_out, "write the sampled box list here"},
      {"rho_factor", &RunConfig::rho_factor, "R/L as a multiple of Q"},
      {"S1", &RunConfig::S1, "S1"},
      {"delta0", &RunConfig::delta0, "delta0 (0: derive from the bump and c0)"},
      {"resolution", &RunConfig::resolution, "bump table samples per unit"},
      {"range", &RunConfig::range, "bump table half-range"},
      {"quad_order", &RunConfig::quad_order, "quadrature budget"},
      {"t0_checks", &RunConfig::t0_checks, "random points for the t = 0 check"},
      {"R", &RunConfig::R, "baseline frequency R (the second run uses 16 R)"},
      {"grid", &RunConfig::grid, "baseline grid points per axis"},
      {"time_steps", &RunConfig::time_steps, "baseline time offsets on each side"},
      {"threshold", &RunConfig::threshold, "baseline level for max_t |T_t f|"},
      {"step", &RunConfig::step, "grid step"},
  };
  return f;
}

const Field& field(const std::string& key) {
  for (const auto& f : fields()) {
    if (key == f.key) return f;
  }
  throw InvalidArgument("unknown config key '" + key + "'");
}

std::string flag_name(const char* key) {
  std::string s = std::string("--") + key;
  for (char& c : s) {
    if (c == '_') c = '-';
  }
  return s;
}

void copy_field(const Field& f, const RunConfig& from, RunConfig& to) {
  std::visit([&](auto m) { to.*m = from.*m; }, f.member);
}

void json_field(const Field& f, const Json& value, RunConfig& to) {
  std::visit([&](auto m) { value.get_to(to.*m); }, f.member);
}

Json field_json(const Field& f, const RunConfig& c) {
  return std::visit([&](auto m) { return Json(c.*m); }, f.member);
}

struct Command {
  std::string name;       // "omega measure"
  std::string parent;
  std::string leaf;
  std::string description;
  std::vector<std::string> keys;
  std::function<void(RunConfig&)> defaults;
};

const std::vector<std::string> kCommon = {"threads", "out", "csv", "seed"};

struct Outcome {
  Json config;
  Json result;
  bool pass = true;
  std::vector<std::string> failures;
  std::string csv_table;
  std::vector<std::string> csv_columns;
  std::vector<std::vector<std::string>> csv_rows;
};

std::string fmt(double v) { return CsvWriter::cell(v); }
std::string fmt(std::uint64_t v) { return CsvWriter::cell(v); }

std::vector<std::uint64_t> prime_list(const RunConfig& c) {
  std::vector<std::uint64_t> out;
  if (c.q != 0) {
    out.push_back(PrimeModulus::make(c.q).value());
    return out;
  }
  for (const auto& p : primes_in_range(c.q_min, c.q_max)) out.push_back(p.value());
  if (out.empty()) throw InvalidArgument("no primes in the requested range");
  return out;
}

// ---------------------------------------------------------------- expsum

Outcome expsum_parseval(const RunConfig& c) {
  Outcome o;
  o.csv_table = "parseval";
  o.csv_columns = {"q", "k", "sum", "expected", "residual", "pass"};
  Json rows = Json::array();
  double worst = 0.0;
  for (std::uint64_t q : prime_list(c)) {
    const auto r = parseval_check(SumTable::build(c.k, q, c.threads));
    const bool ok = r.residual < 1e-8;
    if (!ok) o.failures.push_back("q = " + std::to_string(q) + ": residual " + fmt(r.residual) + " >= 1e-8");
    o.pass = o.pass && ok;
    worst = std::max(worst, r.residual);
    rows.push_back(r);
    o.csv_rows.push_back({fmt(q), std::to_string(c.k), fmt(r.sum), fmt(r.expected), fmt(r.residual),
                          CsvWriter::cell(ok)});
  }
  o.result = {{"reports", rows}, {"max_residual", worst}, {"tolerance", 1e-8}};
  return o;
}

Outcome expsum_weil(const RunConfig& c) {
  Outcome o;
  o.csv_table = "weil";
  o.csv_columns = {"q", "k", "applicable", "max_ratio", "argmax_a1", "argmax_b", "pass"};
  Json rows = Json::array();
  double worst = 0.0;
  for (std::uint64_t q : prime_list(c)) {
    const auto r = weil_margin(SumTable::build(c.k, q, c.threads));
    if (!r.pass) o.failures.push_back("q = " + std::to_string(q) + ": max ratio " + fmt(r.max_ratio) + " > 1 + 1e-9");
    o.pass = o.pass && r.pass;
    worst = std::max(worst, r.max_ratio);
    rows.push_back(r);
    o.csv_rows.push_back({fmt(q), std::to_string(c.k), CsvWriter::cell(r.applicable), fmt(r.max_ratio),
                          fmt(r.argmax_a1), fmt(r.argmax_b), CsvWriter::cell(r.pass)});
  }
  o.result = {{"reports", rows}, {"max_ratio", worst}};
  return o;
}

Outcome expsum_census(const RunConfig& c) {
  Outcome o;
  o.csv_table = "census";
  o.csv_columns = {"q", "k", "count_large", "fraction", "alpha2", "bound_satisfied"};
  Json rows = Json::array();
  Json skipped = Json::array();
  for (std::uint64_t q : prime_list(c)) {
    if (q % c.k == 0) {
      skipped.push_back(q);
      continue;
    }
    const auto r = census(SumTable::build(c.k, q, c.threads), c.alpha1);
    if (!r.bound_satisfied) {
      o.failures.push_back("q = " + std::to_string(q) + ": " + std::to_string(r.count_large) +
                           " large sums, fraction " + fmt(r.fraction) + " < " + fmt(r.alpha2));
    }
    o.pass = o.pass && r.bound_satisfied;
    rows.push_back(r);
    o.csv_rows.push_back({fmt(q), std::to_string(c.k), fmt(r.count_large), fmt(r.fraction), fmt(r.alpha2),
                          CsvWriter::cell(r.bound_satisfied)});
  }
  o.result = {{"reports", rows}, {"skipped_q_dividing_k", skipped}};
  return o;
}

// ---------------------------------------------------------------- omega

TableSource parse_source(const std::string& s) {
  if (s == "orbit") return TableSource::Orbit;
  if (s == "full") return TableSource::Full;
  throw InvalidArgument("source must be 'orbit' or 'full', got '" + s + "'");
}

BoxSystem build_system(const RunConfig& c, double c4, double c5) {
  OmegaConfig oc;
  oc.Q = c.Q;
  oc.n = c.n;
  oc.k = c.k;
  oc.c4 = c4;
  oc.c5 = c5;
  oc.source = parse_source(c.source);
  oc.enforce_thresholds = c.enforce_thresholds;
  oc.threads = c.threads;
  return build_omega(oc);
}

void write_boxes(const std::string& path, const BoxList& list) {
  std::ofstream f(path);
  if (!f) throw InvalidArgument("cannot open '" + path + "' for writing");
  list.write(f);
}

BoxList read_boxes(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot open '" + path + "'");
  return BoxList::read(f);
}

Outcome omega_build(const RunConfig& c) {
  Outcome o;
  const BoxSystem sys = build_system(c, c.c4, c.c5);
  o.csv_table = "omega_cells";
  o.csv_columns = {"q", "count", "normalized", "size_bound", "guaranteed", "pass"};
  Json cells = Json::array();
  for (const auto& cell : sys.cells()) {
    const double bound = cell.good->size_bound();
    const bool guaranteed = cell.good->size_bound_guaranteed();
    const bool ok = !guaranteed || static_cast<double>(cell.count) >= bound;
    if (!ok) {
      o.failures.push_back("q = " + std::to_string(cell.q) + ": |G*| = " + std::to_string(cell.count) +
                           " below " + fmt(bound));
    }
    o.pass = o.pass && ok;
    const double norm = static_cast<double>(cell.count) / std::pow(static_cast<double>(cell.q), c.n);
    cells.push_back({{"q", cell.q}, {"count", cell.count}, {"normalized", norm}, {"size_bound", bound},
                     {"guaranteed", guaranteed}, {"pass", ok}});
    o.csv_rows.push_back({fmt(cell.q), fmt(cell.count), fmt(norm), fmt(bound), CsvWriter::cell(guaranteed),
                          CsvWriter::cell(ok)});
  }
  o.result = {{"Q", c.Q},
              {"n", c.n},
              {"k", c.k},
              {"c4", c.c4},
              {"c5", c.c5},
              {"primes", sys.cells().size()},
              {"boxes", sys.box_count()},
              {"total_box_measure", sys.total_box_measure()},
              {"ddg", sys.ddg()},
              {"cells", cells}};
  if (!c.boxes_out.empty()) {
    write_boxes(c.boxes_out, sys.sample(c.points, c.seed, c.n == 2 ? c.zero_fraction : 0.0));
    o.result["boxes_out"] = c.boxes_out;
  }
  return o;
}

Outcome omega_measure(const RunConfig& c) {
  Outcome o;
  Json exact = nullptr;
  std::string exact_note;
  McEstimate mc;
  OverlapCensus census;
  double total = 0.0;
  std::uint64_t boxes = 0;
  Json brute = nullptr;
  BoxShape shape{c.n, c.c4, c.c5};
  if (!c.boxes_in.empty()) {
    const BoxList list = read_boxes(c.boxes_in);
    shape = list.shape();
    boxes = list.size();
    for (const Box& b : list.boxes()) total += shape.measure(b.q);
    try {
      exact = union_measure_exact(list, c.cap);
    } catch (const SizingError& e) {
      exact_note = e.what();
    }
    mc = union_measure_mc(list, c.samples, c.seed, c.threads);
    census = overlap_census(list);
    if (list.size() <= 3000) {
      const std::uint64_t pairs = overlap_pairs_brute_force(list);
      brute = pairs;
      if (pairs != census.pairs) {
        o.pass = false;
        o.failures.push_back("overlap census " + std::to_string(census.pairs) + " differs from brute force " +
                             std::to_string(pairs));
      }
    }
  } else {
    const BoxSystem sys = build_system(c, c.c4, c.c5);
    boxes = sys.box_count();
    total = sys.total_box_measure();
    try {
      exact = union_measure_exact(sys, c.cap);
    } catch (const SizingError& e) {
      exact_note = e.what();
    }
    mc = union_measure_mc(sys, c.samples, c.seed, c.threads);
    census = overlap_census(sys);
  }
  if (!census.pass) {
    o.pass = false;
    o.failures.push_back("C1 = " + fmt(census.C1) + " exceeds the frozen bound " + fmt(census.C1_bound));
  }
  Json lemma = nullptr;
  if (!exact.is_null()) {
    const double measure = exact.is_number() ? exact.get<double>() : exact["measure"].get<double>();
    const double rhs = census.lemma_factor * total;
    const bool ok = measure >= rhs;
    lemma = {{"union", measure}, {"lower", rhs}, {"pass", ok}};
    if (!ok) {
      o.pass = false;
      o.failures.push_back("union " + fmt(measure) + " below B0/(B1 C1) sum|box| = " + fmt(rhs));
    }
    const bool agree = measure >= mc.lo && measure <= mc.hi;
    lemma["mc_agrees"] = agree;
    if (!agree) {
      o.pass = false;
      o.failures.push_back("exact " + fmt(measure) + " outside the Monte Carlo interval [" + fmt(mc.lo) + ", " +
                           fmt(mc.hi) + "]");
    }
  }
  o.result = {{"Q", c.Q},
              {"n", shape.n},
              {"k", c.k},
              {"c4", shape.c4},
              {"c5", shape.c5},
              {"exact", exact},
              {"mc", mc.estimate},
              {"mc_ci", Json::array({mc.lo, mc.hi})},
              {"mc_detail", mc},
              {"boxes", boxes},
              {"pairs", census.pairs},
              {"C1", census.C1},
              {"census", census},
              {"total_box_measure", total},
              {"lemma", lemma}};
  if (!exact_note.empty()) o.result["exact_note"] = exact_note;
  if (!brute.is_null()) o.result["brute_force_pairs"] = brute;
  o.csv_table = "omega_measure";
  o.csv_columns = {"Q", "k", "boxes", "exact", "mc", "mc_lo", "mc_hi", "pairs", "C1"};
  const double measure = exact.is_null() ? std::nan("") :
                         (exact.is_number() ? exact.get<double>() : exact["measure"].get<double>());
  o.csv_rows.push_back({fmt(c.Q), std::to_string(c.k), fmt(boxes), fmt(measure), fmt(mc.estimate), fmt(mc.lo),
                        fmt(mc.hi), fmt(census.pairs), fmt(census.C1)});
  return o;
}

// Desk parameters; c4 defaults to c2 delta0 / (4k) so that 2 c4 < c2 delta0 / k.
struct Desk {
  std::shared_ptr<const BumpProfile> profile;
  CounterexampleParams params;
};

Desk make_desk(const RunConfig& c, const std::set<std::string>& explicit_keys) {
  Desk d;
  d.profile = std::make_shared<const BumpProfile>(BumpProfile::build(c.resolution, c.range));
  const double delta0 = c.delta0 > 0.0 ? c.delta0 : delta0_for(c.c0, *d.profile);
  SmallConstants sc{c.c0, c.c1, c.c2, c.c3, c.c4, c.c5};
  if (!explicit_keys.count("c4")) sc.c4 = c.c2 * delta0 / (4.0 * c.k);
  d.params = CounterexampleParams::desk(c.n, c.k, static_cast<double>(c.Q), c.rho_factor * static_cast<double>(c.Q),
                                        c.S1, sc, delta0);
  d.params.validate();
  return d;
}

double circular_gap(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, kTwoPi - d);
}

Outcome omega_verify(const RunConfig& c, const std::set<std::string>& explicit_keys) {
  Outcome o;
  const Desk desk = make_desk(c, explicit_keys);
  const auto& p = desk.params;
  OmegaConfig oc;
  const BoxSystem sys = build_system(c, p.c.c4, p.c.c5);
  std::map<std::uint64_t, const MagnitudeTable*> tables;
  for (const auto& cell : sys.cells()) tables[cell.q] = &cell.good->table();
  const BoxList list = sys.sample(c.points, c.seed, c.n == 2 ? c.zero_fraction : 0.0);

  o.csv_table = "omega_verify";
  o.csv_columns = {"q"};
  for (unsigned d = 1; d <= c.n; ++d) o.csv_columns.push_back("a" + std::to_string(d));
  for (const char* col : {"t", "tau", "S_magnitude", "M1_floor", "E2_budget", "max_coordinate_error",
                          "roundtrip", "pass"}) {
    o.csv_columns.emplace_back(col);
  }
  const double M1 = p.M1();
  const std::int64_t need_x1 = static_cast<std::int64_t>(std::floor(M1 * p.c.c1 / (4 * kPi)));
  const std::int64_t need_xj = static_cast<std::int64_t>(std::floor(p.L * p.c.c1 / (4 * kPi)));
  std::uint64_t passed = 0, decomposed = 0;
  double worst_margin = 1e300, worst_e2 = 0.0, worst_roundtrip = 0.0;
  std::int64_t min_shift_x1 = INT64_MAX, min_shift_xj = INT64_MAX;
  for (const Box& b : list.boxes()) {
    const OmegaPoint pt = to_omega_star(b, p);
    const auto back = forward_map(pt.x, p);
    double roundtrip = 0.0;
    for (unsigned d = 0; d < c.n; ++d) roundtrip = std::max(roundtrip, circular_gap(back[d], pt.y[d]));
    const ChosenTime ct = choose_t(pt, p);
    const LowerBoundReport r = verify_lower_bound(pt, ct, p, tables.at(b.q));
    min_shift_x1 = std::min(min_shift_x1, pt.admissible[0]);
    for (unsigned d = 1; d < c.n; ++d) min_shift_xj = std::min(min_shift_xj, pt.admissible[d]);
    double emax = 0.0;
    for (std::size_t j = 0; j < r.coordinate_error.size(); ++j) {
      emax = std::max(emax, std::abs(r.coordinate_error[j]));
      worst_e2 = std::max(worst_e2, std::abs(r.coordinate_error[j]) / (r.E2_shape / std::pow(p.X(), c.n - 2)));
    }
    const bool x1_ok = pt.x[0].to_double() < 0 && pt.x[0].to_double() >= -p.c.c1 &&
                       pt.x[0].to_double() <= -p.c.c1 / 2;
    const bool ok = r.pass && r.decomposition_pass && roundtrip <= 1e-12 && x1_ok;
    passed += r.pass;
    decomposed += r.decomposition_pass;
    worst_margin = std::min(worst_margin, r.S_magnitude / (r.M1_floor - r.E2_budget));
    worst_roundtrip = std::max(worst_roundtrip, roundtrip);
    if (!ok && o.failures.size() < 10) {
      std::ostringstream os;
      os.precision(10);
      os << "q = " << b.q << ", a1 = " << b.a[0] << ": |S| = " << r.S_magnitude << " vs floor "
         << r.M1_floor - r.E2_budget << ", decomposition " << r.decomposition_pass << ", roundtrip " << roundtrip;
      o.failures.push_back(os.str());
    }
    o.pass = o.pass && ok;
    std::vector<std::string> row{fmt(b.q)};
    for (auto v : b.a) row.push_back(fmt(v));
    for (double v : {ct.t.value.to_double(), ct.tau, r.S_magnitude, r.M1_floor, r.E2_budget, emax, roundtrip}) {
      row.push_back(fmt(v));
    }
    row.push_back(CsvWriter::cell(ok));
    o.csv_rows.push_back(std::move(row));
  }
  const bool shifts_ok = min_shift_x1 >= need_x1 && (c.n < 2 || min_shift_xj >= need_xj);
  if (!shifts_ok) {
    o.pass = false;
    o.failures.push_back("admissible shift count below floor(M c1 / 4 pi)");
  }
  o.result = {{"params", p},
              {"checks", p.checks()},
              {"points", list.size()},
              {"passed", passed},
              {"decomposition_passed", decomposed},
              {"worst_margin", worst_margin},
              {"worst_e2_ratio", worst_e2},
              {"worst_roundtrip", worst_roundtrip},
              {"shift_counts",
               {{"x1_min", min_shift_x1}, {"x1_required", need_x1}, {"xj_min", min_shift_xj},
                {"xj_required", need_xj}, {"pass", shifts_ok}}}};
  return o;
}

// ---------------------------------------------------------------- counterexample

Outcome counterexample_run(const RunConfig& c, const std::set<std::string>& explicit_keys) {
  Outcome o;
  const Desk desk = make_desk(c, explicit_keys);
  const auto& p = desk.params;
  const DataFunction fn(p, desk.profile);
  const BoxSystem sys = build_system(c, p.c.c4, p.c.c5);
  const BoxList list = sys.sample(c.points, c.seed, c.n == 2 ? c.zero_fraction : 0.0);

  o.csv_table = "reduction";
  o.csv_columns = {"q", "a1", "oracle", "full_sum", "main", "envelope_main", "measured_e1", "e1_budget", "pass"};
  Json reports = Json::array();
  std::uint64_t passed = 0;
  double worst_e1 = 0.0;
  for (const Box& b : list.boxes()) {
    const OmegaPoint pt = to_omega_star(b, p);
    const ChosenTime ct = choose_t(pt, p);
    const auto phases = pt.linear_phases();
    const ReductionReport r = verify_reduction(pt.x, ct.t, fn, c.quad_order, phases);
    passed += r.pass;
    worst_e1 = std::max(worst_e1, r.measured_e1 / r.e1_shape);
    if (!r.pass && o.failures.size() < 10) {
      o.failures.push_back("q = " + std::to_string(b.q) + ", a1 = " + std::to_string(b.a[0]) + ": |T_t f| = " +
                           fmt(r.oracle) + " below " + fmt(r.main - r.e1_budget));
    }
    o.pass = o.pass && r.pass;
    Json jr = r;
    jr["q"] = b.q;
    jr["a"] = b.a;
    reports.push_back(jr);
    o.csv_rows.push_back({fmt(b.q), fmt(b.a[0]), fmt(r.oracle), fmt(r.full_sum), fmt(r.main), fmt(r.envelope_main),
                          fmt(r.measured_e1), fmt(r.e1_budget), CsvWriter::cell(r.pass)});
  }

  // T_0 f = f at random points
  std::mt19937_64 rng(splitmix64(c.seed));
  Json t0 = Json::array();
  double worst_rel = 0.0;
  for (std::uint64_t i = 0; i < c.t0_checks; ++i) {
    std::vector<DoubleDouble> x(c.n);
    x[0] = DoubleDouble((4.0 * uniform01(rng) - 2.0) / p.S1);
    for (unsigned j = 1; j < c.n; ++j) x[j] = DoubleDouble(4.0 * uniform01(rng) - 2.0);
    const std::complex<double> f = fn.evaluate(x);
    const TtfValue v = evaluate_Ttf(x, Time{DoubleDouble(0.0), std::nullopt}, fn, c.quad_order);
    const double rel = std::abs(v.value - f) / std::abs(f);
    worst_rel = std::max(worst_rel, rel);
    const bool ok = rel <= 1e-6;
    if (!ok) o.failures.push_back("t = 0 check " + std::to_string(i) + ": relative error " + fmt(rel));
    o.pass = o.pass && ok;
    Json xs = Json::array();
    for (const auto& xv : x) xs.push_back(xv.to_double());
    t0.push_back({{"x", xs}, {"abs_f", std::abs(f)}, {"relative_error", rel}, {"pass", ok}});
  }
  o.result = {{"params", p},
              {"points", list.size()},
              {"passed", passed},
              {"worst_e1_ratio", worst_e1},
              {"reports", reports},
              {"t0_checks", t0},
              {"t0_worst_relative", worst_rel}};
  return o;
}

Outcome counterexample_baseline(const RunConfig& c) {
  Outcome o;
  const BumpProfile profile = BumpProfile::build(c.resolution, c.range);
  BaselineParams bp;
  bp.n = c.n;
  bp.k = c.k;
  bp.R = c.R;
  bp.grid = c.grid;
  bp.time_steps = c.time_steps;
  bp.threshold = c.threshold;
  const BaselineReport a = baseline_quarter(bp, profile);
  bp.R = 16.0 * c.R;
  const BaselineReport b = baseline_quarter(bp, profile);
  const double growth = a.ratio_proxy > 0 ? b.ratio_proxy / a.ratio_proxy : 0.0;
  const bool growth_ok = std::abs(growth - 2.0) <= 0.2;
  o.pass = a.pass && b.pass && growth_ok;
  if (!a.pass || !b.pass) o.failures.push_back("baseline mass fraction below the frozen minimum or |T_0 f(0)| != 1");
  if (!growth_ok) o.failures.push_back("ratio proxy growth " + fmt(growth) + " outside 2 +- 10%");
  o.result = {{"runs", Json::array({a, b})}, {"growth", growth}, {"growth_expected", 2.0},
              {"growth_tolerance", 0.2}, {"growth_pass", growth_ok}};
  o.csv_table = "baseline";
  o.csv_columns = {"R", "S1", "mass", "fraction", "ratio_proxy", "pass"};
  for (const auto& r : {a, b}) {
    o.csv_rows.push_back({fmt(r.params.R), fmt(r.S1), fmt(r.mass), fmt(r.fraction), fmt(r.ratio_proxy),
                          CsvWriter::cell(r.pass)});
  }
  return o;
}

// ---------------------------------------------------------------- optimize

Outcome optimize_closed(const RunConfig& c) {
  Outcome o;
  const ExponentSolution s = solve_exponents(c.n, c.k);
  const bool ok = s.feasible && std::abs(s.equality_residual) <= 1e-12 && std::abs(s.closed_form_gap) <= 1e-12;
  o.pass = ok;
  if (!s.feasible) o.failures.push_back("closed-form exponents violate a constraint");
  if (!ok && s.feasible) o.failures.push_back("closed forms disagree beyond 1e-12");
  o.result = s;
  o.csv_table = "exponents";
  o.csv_columns = {"n", "k", "lambda", "kappa", "sigma", "s_star"};
  o.csv_rows.push_back({std::to_string(c.n), std::to_string(c.k), fmt(s.lambda), fmt(s.kappa), fmt(s.sigma),
                        fmt(s.s_star)});
  return o;
}

Outcome optimize_grid(const RunConfig& c) {
  Outcome o;
  const OptimalityReport r = verify_optimality(c.n, c.k, c.step, c.threads);
  o.pass = r.within;
  if (!r.within) o.failures.push_back("grid maximum " + fmt(r.grid_max) + " is not within step (n-1) of " + fmt(r.s_star));
  o.result = r;
  o.result["slack"] = solve_exponents(c.n, c.k).slack;
  o.csv_table = "optimality";
  o.csv_columns = {"n", "k", "step", "s_star", "grid_max", "grid_gap"};
  o.csv_rows.push_back({std::to_string(c.n), std::to_string(c.k), fmt(c.step), fmt(r.s_star), fmt(r.grid_max),
                        fmt(r.grid_gap)});
  return o;
}

// ---------------------------------------------------------------- dispatch

std::vector<Command> commands() {
  auto with = [](std::vector<std::string> keys) {
    keys.insert(keys.end(), kCommon.begin(), kCommon.end());
    return keys;
  };
  const std::vector<std::string> omega_keys = {"n", "k", "Q", "c4", "c5", "source", "enforce_thresholds"};
  auto omega = [&](std::vector<std::string> extra) {
    std::vector<std::string> keys = omega_keys;
    keys.insert(keys.end(), extra.begin(), extra.end());
    return with(keys);
  };
  const std::vector<std::string> desk = {"c0", "c1", "c2", "c3", "rho_factor", "S1", "delta0", "resolution",
                                         "range", "points", "zero_fraction"};
  auto none = [](RunConfig&) {};
  return {
      {"expsum parseval", "expsum", "parseval", "Parseval identity sum |T|^2 = q^3",
       with({"k", "q", "q_min", "q_max"}), none},
      {"expsum weil", "expsum", "weil", "largest |T| / ((k-1) sqrt q)", with({"k", "q", "q_min", "q_max"}), none},
      {"expsum census", "expsum", "census", "count of |T| >= alpha1 sqrt q",
       with({"k", "q", "q_min", "q_max", "alpha1"}), none},
      {"omega build", "omega", "build", "build the box system and check |G*(q)|",
       omega({"points", "zero_fraction", "boxes_out"}), none},
      {"omega measure", "omega", "measure", "exact and Monte Carlo union measure, overlap census",
       omega({"samples", "cap", "boxes_in"}), none},
      {"omega verify", "omega", "verify", "lower bound for |S| at sampled representatives",
       omega(desk), [](RunConfig& c) { c.points = 200; }},
      {"counterexample run", "counterexample", "run", "quadrature oracle for T_t f at sampled representatives",
       [&] {
         auto keys = omega(desk);
         keys.insert(keys.end(), {"quad_order", "t0_checks"});
         return keys;
       }(),
       [](RunConfig& c) {
         c.points = 20;
         c.rho_factor = 4.0;
       }},
      {"counterexample baseline", "counterexample", "baseline", "single-mode baseline at R and 16 R",
       with({"n", "k", "R", "grid", "time_steps", "threshold", "resolution", "range"}),
       [](RunConfig& c) {
         c.n = 1;
         c.k = 2;
       }},
      {"optimize", "optimize", "", "closed-form exponents and threshold", with({"n", "k"}), none},
      {"optimize grid", "optimize", "grid", "grid search over the exponent polytope", with({"n", "k", "step"}),
       none},
  };
}

std::string prescan_config(const std::vector<std::string>& args) {
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return {};
}

int finish(const Command& cmd, const RunConfig& c, Outcome o, std::ostream& out, std::ostream& err) {
  for (const auto& key : cmd.keys) o.config[key] = field_json(field(key), c);
  Json report = make_report(cmd.name, o.config, o.result, o.pass);
  if (!o.failures.empty()) report["failures"] = o.failures;
  const std::string text = report.dump(2) + "\n";
  if (c.out.empty()) {
    out << text;
  } else {
    std::ofstream f(c.out);
    if (!f) throw InvalidArgument("cannot open '" + c.out + "' for writing");
    f << text;
  }
  if (!c.csv.empty() && !o.csv_table.empty()) {
    std::ofstream f(c.csv);
    if (!f) throw InvalidArgument("cannot open '" + c.csv + "' for writing");
    CsvWriter w(f, o.csv_table, o.csv_columns);
    for (const auto& row : o.csv_rows) w.row(row);
  }
  if (!o.pass) {
    err << cmd.name << ": assertion failed\n";
    for (const auto& f : o.failures) err << "  " << f << '\n';
    return kExitAssertion;
  }
  return kExitPass;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto cmds = commands();
  CLI::App app{"schrodk: exponential sums, box systems and the divergence construction", "schrodk"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  RunConfig parsed;
  std::string config_path;
  std::map<std::string, std::vector<std::pair<std::string, CLI::Option*>>> options;
  std::map<std::string, CLI::App*> leaves;
  std::map<std::string, CLI::App*> parents;
  for (const auto& cmd : cmds) {
    CLI::App*& parent = parents[cmd.parent];
    if (!parent) parent = app.add_subcommand(cmd.parent, cmd.leaf.empty() ? cmd.description : cmd.parent + " commands");
    CLI::App* leaf = parent;
    if (!cmd.leaf.empty()) {
      leaf = parent->add_subcommand(cmd.leaf, cmd.description);
    }
    leaves[cmd.name] = leaf;
    leaf->add_option("--config", config_path, "JSON config file; flags override it");
    for (const auto& key : cmd.keys) {
      const Field& f = field(key);
      CLI::Option* opt = std::visit(
          [&](auto m) { return leaf->add_option(flag_name(f.key), parsed.*m, f.help); }, f.member);
      options[cmd.name].push_back({key, opt});
    }
  }
  // "optimize" runs without a further subcommand; the others need one
  for (auto& [name, parent] : parents) {
    if (name != "optimize") parent->require_subcommand(1);
  }

  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << '\n';
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return kExitConfig;
  }

  const Command* chosen = nullptr;
  for (const auto& cmd : cmds) {
    CLI::App* leaf = leaves[cmd.name];
    if (!leaf->parsed()) continue;
    // a parent subcommand counts only when none of its children ran
    if (cmd.leaf.empty()) {
      bool child = false;
      for (const auto& other : cmds) {
        if (other.parent == cmd.parent && !other.leaf.empty() && leaves[other.name]->parsed()) child = true;
      }
      if (child) continue;
    }
    chosen = &cmd;
  }
  if (!chosen) {
    err << "error: no command given\n\n" << app.help("", CLI::AppFormatMode::All);
    return kExitConfig;
  }

  try {
    RunConfig cfg;
    chosen->defaults(cfg);
    std::set<std::string> explicit_keys;
    const std::string path = prescan_config(args);
    if (!path.empty()) {
      std::ifstream f(path);
      if (!f) throw InvalidArgument("cannot open config file '" + path + "'");
      const Json j = Json::parse(f);
      if (!j.is_object()) throw InvalidArgument("config file must hold a JSON object");
      for (const auto& [key, value] : j.items()) {
        const Field& fl = field(key);
        json_field(fl, value, cfg);
        explicit_keys.insert(key);
      }
    }
    for (const auto& [key, opt] : options[chosen->name]) {
      if (opt->count() > 0) {
        copy_field(field(key), parsed, cfg);
        explicit_keys.insert(key);
      }
    }
    if (cfg.n < 1 || cfg.k < 2) throw InvalidArgument("need n >= 1 and k >= 2");

    Outcome o;
    const std::string& name = chosen->name;
    if (name == "expsum parseval") {
      o = expsum_parseval(cfg);
    } else if (name == "expsum weil") {
      o = expsum_weil(cfg);
    } else if (name == "expsum census") {
      o = expsum_census(cfg);
    } else if (name == "omega build") {
      o = omega_build(cfg);
    } else if (name == "omega measure") {
      o = omega_measure(cfg);
    } else if (name == "omega verify") {
      o = omega_verify(cfg, explicit_keys);
    } else if (name == "counterexample run") {
      o = counterexample_run(cfg, explicit_keys);
    } else if (name == "counterexample baseline") {
      o = counterexample_baseline(cfg);
    } else if (name == "optimize") {
      o = optimize_closed(cfg);
    } else {
      o = optimize_grid(cfg);
    }
    return finish(*chosen, cfg, std::move(o), out, err);
  } catch (const ConstraintViolation& e) {
    err << "config rejected: constraint '" << e.constraint() << "' violated: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    err << "config rejected: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SizingError& e) {
    err << "config rejected: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Json::exception& e) {
    err << "config rejected: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitAssertion;
  }
}

}  // namespace schrodk::cli
