#include "mml/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mml/actiondiff.hpp"
#include "mml/eig.hpp"
#include "mml/modal.hpp"
#include "mml/operators.hpp"
#include "mml/serialize.hpp"
#include "mml/spectra.hpp"
#include "mml/states.hpp"
#include "mml/tolerances.hpp"

namespace mml::cli {
namespace {

using Clock = std::chrono::steady_clock;

// ── Shared row type for sweep/state/spectrum tables ─────────────────────────

struct MetricRow {
  int n = 0;
  std::string metric;
  double value = 0.0;
  double runtime_ms = 0.0;
  std::string note;  // comma-free by construction (CSV stays unquoted)
};

// ── Small formatting helpers ────────────────────────────────────────────────

std::string fmt_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string command_name(Command c) {
  switch (c) {
    case Command::Build: return "build";
    case Command::Verify: return "verify";
    case Command::Sweep: return "sweep";
    case Command::Kernel: return "kernel";
    case Command::State: return "state";
    case Command::Spectrum: return "spectrum";
  }
  return "?";
}

std::string format_name(Format f) {
  switch (f) {
    case Format::Json: return "json";
    case Format::Csv: return "csv";
    case Format::Text: return "text";
  }
  return "?";
}

std::string iso_timestamp_utc() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", &tm);
  return buf;
}

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// ── Lazy per-level computation cache ────────────────────────────────────────

class Pipeline {
 public:
  explicit Pipeline(int n) : n_(n) {}
  int n() const { return n_; }

  const modal::ModalPair& modal() {
    if (!mp_) mp_ = modal::modal_position_full(n_);
    return *mp_;
  }
  const ComplexMatrix& action_modal() {
    if (!dq_) dq_ = actiondiff::transform(ops::build_action_difference(n_), modal().vectors);
    return *dq_;
  }
  const ComplexMatrix& momentum_modal() {
    if (!pq_) pq_ = actiondiff::momentum_in_position_basis(modal().vectors);
    return *pq_;
  }
  const actiondiff::KernelMatrix& kernel() {
    if (!kern_) kern_ = actiondiff::cauchy_hilbert_kernel(modal().spectrum);
    return *kern_;
  }
  const modal::BlockFactorResult& block() {
    if (!bf_) bf_ = modal::block_factor(modal().vectors, modal::kocher_rotation(n_));
    return *bf_;
  }

 private:
  int n_;
  std::optional<modal::ModalPair> mp_;
  std::optional<ComplexMatrix> dq_, pq_;
  std::optional<actiondiff::KernelMatrix> kern_;
  std::optional<modal::BlockFactorResult> bf_;
};

// ── Verify suites ───────────────────────────────────────────────────────────

const std::vector<std::pair<std::string, std::vector<std::string>>>& suite_table() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> table = {
      {"trace", {"trace_zero"}},
      {"anomaly", {"hamiltonian_anomaly"}},
      {"last-row", {"last_row_constant"}},
      {"identity", {"action_position_identity"}},
      {"kernel", {"kernel_match", "kernel_diagonal"}},
      {"kocher",
       {"kocher_orthogonality", "kocher_diagonal_map", "block_structure",
        "block_orthogonality"}},
      {"commutator", {"commutator_reconstruction"}},
      {"momentum", {"momentum_basis_structure"}},
  };
  return table;
}

std::optional<std::vector<std::string>> expand_suite(const std::string& suite) {
  if (suite == "all") {
    std::vector<std::string> names;
    for (const auto& [_, checks] : suite_table())
      names.insert(names.end(), checks.begin(), checks.end());
    return names;
  }
  for (const auto& [key, checks] : suite_table())
    if (key == suite) return checks;
  // Individual check names are accepted directly.
  for (const auto& [_, checks] : suite_table())
    for (const auto& c : checks)
      if (c == suite) return std::vector<std::string>{c};
  return std::nullopt;
}

CheckResult run_check(const std::string& name, Pipeline& p) {
  const int n = p.n();
  if (name == "trace_zero") {
    double err = std::abs(ops::build_action_difference(n).trace());
    return make_check(name, n, err, report::tolerance_for(name, n + 1));
  }
  if (name == "hamiltonian_anomaly") return spectra::hamiltonian_anomaly_check(n);
  if (name == "last_row_constant") return modal::check_constant_last_row(p.modal().vectors);
  if (name == "action_position_identity")
    return actiondiff::check_identity_minus_allones(p.action_modal());
  if (name == "kernel_match") return actiondiff::kernel_match(p.momentum_modal(), p.kernel());
  if (name == "kernel_diagonal") return actiondiff::kernel_diagonal(p.momentum_modal());
  if (name == "kocher_orthogonality")
    return modal::kocher_orthogonality(modal::kocher_rotation(n));
  if (name == "kocher_diagonal_map")
    return modal::kocher_diagonal_map(modal::kocher_rotation(n));
  if (name == "block_structure") return p.block().structure;
  if (name == "block_orthogonality") return p.block().orthogonality;
  if (name == "commutator_reconstruction")
    return actiondiff::commutator_reconstruction(p.momentum_modal(), p.modal().spectrum);
  if (name == "momentum_basis_structure") return actiondiff::momentum_basis_structure(n);
  throw StructureError("unknown check '" + name + "'");
}

CheckResult finalize(CheckResult c, const RunConfig& cfg, Clock::time_point t0) {
  c.runtime_ms = cfg.no_timestamp ? 0.0 : elapsed_ms(t0);
  if (auto it = cfg.tol_overrides.find(c.name); it != cfg.tol_overrides.end()) {
    c.tol = it->second;
    c.pass = c.max_abs_err <= it->second;
  }
  return c;
}

void sort_checks(std::vector<CheckResult>& checks) {
  std::sort(checks.begin(), checks.end(), [](const CheckResult& a, const CheckResult& b) {
    if (a.name != b.name) return a.name < b.name;
    return a.n < b.n;
  });
}

bool all_pass(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

// ── Report emission ─────────────────────────────────────────────────────────

nlohmann::json config_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["command"] = command_name(cfg.command);
  j["n"] = cfg.n_list;
  if (cfg.command == Command::Verify) j["suite"] = cfg.suite;
  if (!cfg.tol_overrides.empty()) {
    nlohmann::json t = nlohmann::json::object();
    for (const auto& [name, val] : cfg.tol_overrides) t[name] = val;
    j["tol_overrides"] = t;
  }
  if (cfg.command == Command::Sweep || cfg.command == Command::State) {
    j["alpha"] = {report::format_double(cfg.alpha.real()), report::format_double(cfg.alpha.imag())};
  }
  if (cfg.command == Command::Sweep || cfg.command == Command::Spectrum) {
    j["z"] = {report::format_double(cfg.z.real()), report::format_double(cfg.z.imag())};
    j["half_width"] = cfg.half_width;
  }
  j["format"] = format_name(cfg.format);
  j["seed"] = cfg.seed;
  if (!cfg.out_path.empty()) j["out"] = cfg.out_path;
  return j;
}

nlohmann::json report_json(const RunConfig& cfg, const std::vector<CheckResult>& checks,
                           const std::vector<MetricRow>& rows) {
  nlohmann::json j;
  j["schema"] = "mml-report/1";
  j["tool_version"] = tool_version;
  if (!cfg.no_timestamp) j["timestamp"] = iso_timestamp_utc();
  j["config"] = config_json(cfg);
  nlohmann::json cs = nlohmann::json::array();
  for (const CheckResult& c : checks) {
    nlohmann::json e;
    e["name"] = c.name;
    e["n"] = c.n;
    e["max_abs_err"] = c.max_abs_err;
    e["tol"] = c.tol;
    e["pass"] = c.pass;
    e["runtime_ms"] = c.runtime_ms;
    cs.push_back(e);
  }
  j["checks"] = cs;
  nlohmann::json rs = nlohmann::json::array();
  for (const MetricRow& r : rows) {
    nlohmann::json e;
    e["n"] = r.n;
    e["metric"] = r.metric;
    e["value"] = r.value;
    e["runtime_ms"] = r.runtime_ms;
    if (!r.note.empty()) e["note"] = r.note;
    rs.push_back(e);
  }
  j["rows"] = rs;
  std::size_t passed = 0;
  for (const CheckResult& c : checks) passed += c.pass ? 1 : 0;
  j["summary"] = {{"total", checks.size()},
                  {"passed", passed},
                  {"failed", checks.size() - passed}};
  return j;
}

void write_checks_csv(std::ostream& out, const std::vector<CheckResult>& checks) {
  out << "name,n,max_abs_err,tol,pass,runtime_ms\n";
  for (const CheckResult& c : checks) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s,%d,%.17g,%.17g,%d,%.17g\n", c.name.c_str(), c.n,
                  c.max_abs_err, c.tol, c.pass ? 1 : 0, c.runtime_ms);
    out << buf;
  }
}

void write_rows_csv(std::ostream& out, const std::vector<MetricRow>& rows) {
  out << "n,metric,value,runtime_ms,note\n";
  for (const MetricRow& r : rows) {
    char buf[200];
    std::snprintf(buf, sizeof(buf), "%d,%s,%.17g,%.17g,%s\n", r.n, r.metric.c_str(), r.value,
                  r.runtime_ms, r.note.c_str());
    out << buf;
  }
}

void write_checks_text(std::ostream& out, const std::vector<CheckResult>& checks) {
  std::size_t w = 5;
  for (const CheckResult& c : checks) w = std::max(w, c.name.size());
  out << std::left << std::setw(static_cast<int>(w) + 2) << "check" << std::right
      << std::setw(6) << "n" << std::setw(14) << "max_abs_err" << std::setw(12) << "tol"
      << "  status\n";
  for (const CheckResult& c : checks) {
    out << std::left << std::setw(static_cast<int>(w) + 2) << c.name << std::right
        << std::setw(6) << c.n << std::setw(14) << fmt_sci(c.max_abs_err) << std::setw(12)
        << fmt_g(c.tol) << "  " << (c.pass ? "PASS" : "FAIL") << "\n";
  }
  std::size_t passed = 0;
  for (const CheckResult& c : checks) passed += c.pass ? 1 : 0;
  out << checks.size() << " checks: " << passed << " passed, " << (checks.size() - passed)
      << " failed\n";
}

void write_rows_text(std::ostream& out, const std::vector<MetricRow>& rows) {
  std::size_t w = 6;
  for (const MetricRow& r : rows) w = std::max(w, r.metric.size());
  out << std::right << std::setw(6) << "n" << "  " << std::left
      << std::setw(static_cast<int>(w) + 2) << "metric" << std::right << std::setw(14)
      << "value" << "  note\n";
  for (const MetricRow& r : rows) {
    out << std::right << std::setw(6) << r.n << "  " << std::left
        << std::setw(static_cast<int>(w) + 2) << r.metric << std::right << std::setw(14)
        << fmt_sci(r.value) << "  " << r.note << "\n";
  }
}

// Renders the report in the configured format to --out or the given stream.
// Returns false (with a message) when the output file cannot be opened.
bool emit_report(const RunConfig& cfg, const std::vector<CheckResult>& checks,
                 const std::vector<MetricRow>& rows, std::ostream& out, std::ostream& err) {
  std::ofstream file;
  std::ostream* sink = &out;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) {
      err << "error: cannot open output file " << cfg.out_path << "\n";
      return false;
    }
    sink = &file;
  }
  switch (cfg.format) {
    case Format::Json:
      *sink << report_json(cfg, checks, rows).dump(2) << "\n";
      break;
    case Format::Csv:
      if (!checks.empty()) write_checks_csv(*sink, checks);
      if (!rows.empty()) {
        if (!checks.empty()) *sink << "\n";
        write_rows_csv(*sink, rows);
      }
      break;
    case Format::Text:
      if (!rows.empty()) write_rows_text(*sink, rows);
      if (!checks.empty()) {
        if (!rows.empty()) *sink << "\n";
        write_checks_text(*sink, checks);
      }
      break;
  }
  return true;
}

// ── Commands ────────────────────────────────────────────────────────────────

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<std::string> names = *expand_suite(cfg.suite);
  std::vector<CheckResult> checks;
  for (int n : cfg.n_list) {
    Pipeline p(n);
    for (const std::string& name : names) {
      auto t0 = Clock::now();
      checks.push_back(finalize(run_check(name, p), cfg, t0));
    }
  }
  sort_checks(checks);
  if (!emit_report(cfg, checks, {}, out, err)) return 1;
  return all_pass(checks) ? 0 : 1;
}

int cmd_kernel(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  static const char* names[] = {"kernel_match", "kernel_diagonal", "commutator_reconstruction"};
  std::vector<CheckResult> checks;
  for (int n : cfg.n_list) {
    Pipeline p(n);
    for (const char* name : names) {
      auto t0 = Clock::now();
      checks.push_back(finalize(run_check(name, p), cfg, t0));
    }
  }
  sort_checks(checks);
  if (!emit_report(cfg, checks, {}, out, err)) return 1;
  return all_pass(checks) ? 0 : 1;
}

int cmd_build(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;

  struct Item {
    std::string kind;
    int n;
    nlohmann::json j;
    std::string csv;
    int dim;
  };
  std::vector<Item> items;
  for (int n : cfg.n_list) {
    Pipeline p(n);
    auto add = [&](const std::string& kind, nlohmann::json j, auto&& csv_writer, int dim) {
      std::ostringstream csv;
      csv_writer(csv);
      items.push_back({kind, n, std::move(j), csv.str(), dim});
    };
    SymTridiag q = ops::build_position(n);
    add("q", report::matrix_json(q, n), [&](std::ostream& o) { report::write_csv(o, q); },
        q.dim());
    ComplexMatrix pm = ops::build_momentum(n);
    add("p", report::matrix_json(pm, n), [&](std::ostream& o) { report::write_csv(o, pm); },
        pm.dim());
    DiagonalMatrix d = ops::build_action_difference(n);
    add("d", report::matrix_json(d, n), [&](std::ostream& o) { report::write_csv(o, d); },
        d.dim());
    DiagonalMatrix h = ops::build_hamiltonian(n);
    add("h", report::matrix_json(h, n), [&](std::ostream& o) { report::write_csv(o, h); },
        h.dim());
    const ModalMatrix& u = p.modal().vectors;
    add("u", report::matrix_json(u, n), [&](std::ostream& o) { report::write_csv(o, u); },
        u.dim);
    const Spectrum& s = p.modal().spectrum;
    add("spectrum", report::spectrum_json(s, n),
        [&](std::ostream& o) { report::write_csv(o, s); }, s.size());
    const ComplexMatrix& dq = p.action_modal();
    add("dq", report::matrix_json(dq, n), [&](std::ostream& o) { report::write_csv(o, dq); },
        dq.dim());
    const actiondiff::KernelMatrix& k = p.kernel();
    add("kernel", report::kernel_json(k, n),
        [&](std::ostream& o) { report::write_csv(o, k); }, k.dim);
  }

  if (!cfg.out_path.empty()) {
    std::error_code ec;
    fs::create_directories(cfg.out_path, ec);
    if (ec) {
      err << "error: cannot create output directory " << cfg.out_path << "\n";
      return 1;
    }
    const char* ext = cfg.format == Format::Csv ? ".csv" : ".json";
    for (const Item& it : items) {
      fs::path path = fs::path(cfg.out_path) / (it.kind + "_n" + std::to_string(it.n) + ext);
      std::ofstream f(path);
      if (!f) {
        err << "error: cannot open " << path.string() << "\n";
        return 1;
      }
      if (cfg.format == Format::Csv)
        f << it.csv;
      else
        f << it.j.dump(2) << "\n";
      out << "wrote " << path.string() << "\n";
    }
    return 0;
  }

  switch (cfg.format) {
    case Format::Json: {
      nlohmann::json all = nlohmann::json::array();
      for (const Item& it : items) all.push_back(it.j);
      out << all.dump(2) << "\n";
      break;
    }
    case Format::Csv:
      for (const Item& it : items) {
        out << "# kind=" << it.kind << " n=" << it.n << "\n" << it.csv << "\n";
      }
      break;
    case Format::Text:
      out << std::left << std::setw(10) << "kind" << std::right << std::setw(6) << "n"
          << std::setw(6) << "dim" << "\n";
      for (const Item& it : items)
        out << std::left << std::setw(10) << it.kind << std::right << std::setw(6) << it.n
            << std::setw(6) << it.dim << "\n";
      break;
  }
  return 0;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<MetricRow> rows;
  for (int n : cfg.n_list) {
    Pipeline p(n);
    auto t0 = Clock::now();
    CheckResult lr = modal::check_constant_last_row(p.modal().vectors);
    rows.push_back({n, "last_row", lr.max_abs_err, cfg.no_timestamp ? 0.0 : elapsed_ms(t0), ""});

    t0 = Clock::now();
    CheckResult km = actiondiff::kernel_match(p.momentum_modal(), p.kernel());
    rows.push_back({n, "kernel", km.max_abs_err, cfg.no_timestamp ? 0.0 : elapsed_ms(t0), ""});

    t0 = Clock::now();
    spectra::GapStats gs = spectra::gap_statistics(p.modal().spectrum, cfg.half_width);
    rows.push_back({n, "max_gap", gs.max_gap, cfg.no_timestamp ? 0.0 : elapsed_ms(t0), ""});

    t0 = Clock::now();
    states::ActionMeanRow am = states::action_mean_sweep(cfg.alpha, {n}).front();
    std::string note;
    if (!am.converged) note = "tail=" + fmt_sci(am.tail_weight) + " not converged";
    rows.push_back(
        {n, "action_mean", am.deviation, cfg.no_timestamp ? 0.0 : elapsed_ms(t0), note});
  }
  states::StateVector e0 = states::number_state(0, 0);
  for (std::size_t i = 0; i + 1 < cfg.n_list.size(); ++i) {
    auto t0 = Clock::now();
    spectra::ResolventDiag rd =
        spectra::resolvent_cauchy(cfg.z, e0, cfg.n_list[i], cfg.n_list[i + 1]);
    rows.push_back({rd.n_small, "resolvent_diff", rd.diff_norm,
                    cfg.no_timestamp ? 0.0 : elapsed_ms(t0),
                    "vs n=" + std::to_string(rd.n_large)});
  }
  if (!emit_report(cfg, {}, rows, out, err)) return 1;
  return 0;
}

int cmd_state(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<CheckResult> checks;
  std::vector<MetricRow> rows;
  for (int n : cfg.n_list) {
    auto t0 = Clock::now();
    states::CoherentTruncation ct = states::coherent_state_lenient(cfg.alpha, n);
    states::UncertaintyReport ur = states::uncertainty_check(ct.state, n);
    const double row_ms = cfg.no_timestamp ? 0.0 : elapsed_ms(t0);
    auto push = [&](const char* metric, double v, const std::string& note = "") {
      rows.push_back({n, metric, v, row_ms, note});
    };
    push("mean_q", ur.mean_q);
    push("mean_p", ur.mean_p);
    push("mean_d", ur.mean_d);
    push("mean_h", ur.mean_h);
    push("dq", ur.dq);
    push("dp", ur.dp);
    push("product", ur.product);
    push("bound", ur.bound);
    push("margin", ur.margin);
    push("tail_weight", ct.tail_weight,
         ct.converged ? std::string() : "not converged, needs larger n");

    t0 = Clock::now();
    CheckResult sat = make_check("coherent_saturation", n, std::abs(ur.product - 0.5),
                                 report::tolerance_for("coherent_saturation", n + 1));
    checks.push_back(finalize(std::move(sat), cfg, t0));

    t0 = Clock::now();
    CheckResult unity = make_check("action_mean_unity", n, std::abs(ur.mean_d - 1.0),
                                   report::tolerance_for("action_mean_unity", n + 1));
    checks.push_back(finalize(std::move(unity), cfg, t0));

    t0 = Clock::now();
    std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(n));
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      states::StateVector psi = states::random_state(n + 1, rng);
      states::UncertaintyReport r = states::uncertainty_check(psi, n);
      worst = std::max(worst, -r.margin);
    }
    CheckResult margin = make_check("uncertainty_margin", n, worst,
                                    report::tolerance_for("uncertainty_margin", n + 1));
    checks.push_back(finalize(std::move(margin), cfg, t0));
  }
  sort_checks(checks);
  if (!emit_report(cfg, checks, rows, out, err)) return 1;
  return all_pass(checks) ? 0 : 1;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<CheckResult> checks;
  std::vector<MetricRow> rows;
  std::vector<double> max_gaps;
  for (int n : cfg.n_list) {
    Pipeline p(n);
    auto t0 = Clock::now();
    spectra::GapStats gs = spectra::gap_statistics(p.modal().spectrum, cfg.half_width);
    const double row_ms = cfg.no_timestamp ? 0.0 : elapsed_ms(t0);
    rows.push_back({n, "count_inside", static_cast<double>(gs.count_inside), row_ms, ""});
    rows.push_back({n, "max_gap", gs.max_gap, row_ms, ""});
    rows.push_back({n, "mean_gap", gs.mean_gap, row_ms, ""});
    max_gaps.push_back(gs.max_gap);
  }
  states::StateVector e0 = states::number_state(0, 0);
  std::vector<double> diffs;
  for (std::size_t i = 0; i + 1 < cfg.n_list.size(); ++i) {
    auto t0 = Clock::now();
    spectra::ResolventDiag rd =
        spectra::resolvent_cauchy(cfg.z, e0, cfg.n_list[i], cfg.n_list[i + 1]);
    rows.push_back({rd.n_small, "resolvent_diff", rd.diff_norm,
                    cfg.no_timestamp ? 0.0 : elapsed_ms(t0),
                    "vs n=" + std::to_string(rd.n_large)});
    diffs.push_back(rd.diff_norm);
  }
  const int n_tag = cfg.n_list.back();
  if (max_gaps.size() >= 2) {
    auto t0 = Clock::now();
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < max_gaps.size(); ++i)
      worst = std::max(worst, max_gaps[i + 1] - max_gaps[i]);
    worst = std::max(worst, 0.0);
    checks.push_back(finalize(make_check("gap_monotonicity", n_tag, worst,
                                         report::tolerance_for("gap_monotonicity", n_tag + 1)),
                              cfg, t0));
  }
  if (diffs.size() >= 2) {
    auto t0 = Clock::now();
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < diffs.size(); ++i)
      worst = std::max(worst, diffs[i + 1] - diffs[i]);
    worst = std::max(worst, 0.0);
    checks.push_back(
        finalize(make_check("resolvent_cauchy_trend", n_tag, worst,
                            report::tolerance_for("resolvent_cauchy_trend", n_tag + 1)),
                 cfg, t0));
  }
  sort_checks(checks);
  if (!emit_report(cfg, checks, rows, out, err)) return 1;
  return all_pass(checks) ? 0 : 1;
}

// ── Argument handling ───────────────────────────────────────────────────────

bool parse_complex(const std::string& s, cplx& value) {
  const auto comma = s.find(',');
  try {
    if (comma == std::string::npos) {
      value = cplx(report::parse_double(s), 0.0);
    } else {
      value = cplx(report::parse_double(s.substr(0, comma)),
                   report::parse_double(s.substr(comma + 1)));
    }
  } catch (const StructureError&) {
    return false;
  }
  return true;
}

struct RawArgs {
  std::vector<int> n;
  std::string n_list;
  std::string suite = "all";
  std::vector<std::string> tols;
  std::string alpha, z;
  double half_width = 1.0;
  std::string format = "text";
  std::string out;
  std::uint64_t seed = 12345;
  bool no_timestamp = false;
};

// Fills cfg from raw strings; returns an error message on bad input.
std::optional<std::string> resolve_config(Command cmd, const RawArgs& raw, RunConfig& cfg) {
  cfg.command = cmd;
  cfg.suite = raw.suite;
  cfg.half_width = raw.half_width;
  cfg.out_path = raw.out;
  cfg.seed = raw.seed;
  cfg.no_timestamp = raw.no_timestamp;

  if (raw.format == "json") cfg.format = Format::Json;
  else if (raw.format == "csv") cfg.format = Format::Csv;
  else cfg.format = Format::Text;

  cfg.n_list = raw.n;
  if (!raw.n_list.empty()) {
    std::istringstream ss(raw.n_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        cfg.n_list.push_back(v);
      } catch (const std::exception&) {
        return "--n-list entry '" + tok + "' is not an integer";
      }
    }
  }
  if (cfg.n_list.empty()) {
    // Command-appropriate defaults: sweeps and spectra want several levels,
    // state checks want the coherent tail negligible.
    switch (cmd) {
      case Command::Sweep:
      case Command::Spectrum: cfg.n_list = {25, 50, 100}; break;
      case Command::State: cfg.n_list = {60}; break;
      default: cfg.n_list = {10}; break;
    }
  }
  for (int n : cfg.n_list) {
    try {
      require_level(n);
    } catch (const SizeError& e) {
      return e.what();
    }
  }
  if (cmd == Command::Sweep || cmd == Command::Spectrum) {
    for (std::size_t i = 0; i + 1 < cfg.n_list.size(); ++i)
      if (cfg.n_list[i] >= cfg.n_list[i + 1])
        return "levels must be strictly increasing for sweep/spectrum";
  }

  if (cmd == Command::Verify) {
    auto names = expand_suite(cfg.suite);
    if (!names) return "unknown suite or check '" + cfg.suite + "'";
    bool needs_rotation = false;
    for (const std::string& name : *names)
      if (name.rfind("kocher_", 0) == 0 || name.rfind("block_", 0) == 0) needs_rotation = true;
    if (needs_rotation)
      for (int n : cfg.n_list)
        if (n < 1) return "rotation-factor checks need n >= 1";
  }

  for (const std::string& spec : raw.tols) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) return "--tol expects name=value, got '" + spec + "'";
    const std::string name = spec.substr(0, eq);
    if (!report::known_check(name)) return "unknown check name in --tol: '" + name + "'";
    double v = 0.0;
    try {
      v = report::parse_double(spec.substr(eq + 1));
    } catch (const StructureError&) {
      return "--tol value for '" + name + "' is not a number";
    }
    if (v < 0.0) return "--tol value for '" + name + "' must be nonnegative";
    cfg.tol_overrides[name] = v;
  }

  if (!raw.alpha.empty() && !parse_complex(raw.alpha, cfg.alpha))
    return "--alpha expects RE or RE,IM";
  if (!raw.z.empty() && !parse_complex(raw.z, cfg.z)) return "--z expects RE or RE,IM";
  if (!(cfg.half_width > 0.0)) return "--a must be positive";

  if (cmd == Command::Build && cfg.format == Format::Text && !cfg.out_path.empty())
    return "build --out needs --format json or csv";
  return std::nullopt;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"finite-level matrix mechanics verification lab", std::string(tool_name)};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version);

  std::map<const CLI::App*, Command> commands;
  std::map<const CLI::App*, RawArgs> raw_by_cmd;

  auto add_command = [&](const char* name, const char* help, Command cmd, bool with_suite,
                         bool with_alpha, bool with_zwin) {
    CLI::App* sub = app.add_subcommand(name, help);
    commands[sub] = cmd;
    RawArgs& raw = raw_by_cmd[sub];
    sub->add_option("--n", raw.n, "truncation level N, matrices are (N+1)x(N+1) (repeatable)");
    sub->add_option("--n-list", raw.n_list, "comma-separated truncation levels");
    sub->add_option("--format", raw.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
    sub->add_option("--out", raw.out,
                    cmd == Command::Build ? "export directory" : "report file (default stdout)");
    sub->add_option("--seed", raw.seed, "random-state generator seed")->capture_default_str();
    sub->add_flag("--no-timestamp", raw.no_timestamp,
                  "omit the timestamp and zero runtimes for reproducible bytes");
    sub->add_option("--tol", raw.tols, "override a named tolerance, name=value (repeatable)");
    if (with_suite)
      sub->add_option("--suite", raw.suite, "check suite or individual check name")
          ->capture_default_str();
    if (with_alpha)
      sub->add_option("--alpha", raw.alpha, "coherent-state parameter, RE or RE,IM (default 1)");
    if (with_zwin) {
      sub->add_option("--z", raw.z, "resolvent shift, RE or RE,IM (default 0,1)");
      sub->add_option("--a", raw.half_width, "gap window half-width")->capture_default_str();
    }
    return sub;
  };

  add_command("build", "assemble operator matrices and export them", Command::Build, false,
              false, false);
  add_command("verify", "run named check suites", Command::Verify, true, false, false);
  add_command("sweep", "convergence metrics across levels", Command::Sweep, false, true, true);
  add_command("kernel", "Cauchy-kernel checks", Command::Kernel, false, false, false);
  add_command("state", "coherent and random-state moment checks", Command::State, false, true,
              false);
  add_command("spectrum", "gap and resolvent diagnostics", Command::Spectrum, false, false,
              true);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << tool_version << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  const CLI::App* sub = nullptr;
  for (const auto& [candidate, _] : commands)
    if (candidate->parsed()) sub = candidate;
  if (!sub) {
    err << "error: no subcommand selected\n";
    return 2;
  }
  RunConfig cfg;
  if (auto msg = resolve_config(commands[sub], raw_by_cmd[sub], cfg)) {
    err << "error: " << *msg << "\n";
    return 2;
  }

  try {
    switch (cfg.command) {
      case Command::Build: return cmd_build(cfg, out, err);
      case Command::Verify: return cmd_verify(cfg, out, err);
      case Command::Sweep: return cmd_sweep(cfg, out, err);
      case Command::Kernel: return cmd_kernel(cfg, out, err);
      case Command::State: return cmd_state(cfg, out, err);
      case Command::Spectrum: return cmd_spectrum(cfg, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace mml::cli
