// Acceptance gate: ten quantitative criteria, one PASS/FAIL line each.
// Exit status 0 only when every criterion holds.  Runs the real library
// end to end and shells out to the installed CLI binary for the interface
// contract, so this binary is the one-stop release check.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mml/actiondiff.hpp"
#include "mml/core.hpp"
#include "mml/eig.hpp"
#include "mml/fixtures.hpp"
#include "mml/hermite.hpp"
#include "mml/modal.hpp"
#include "mml/operators.hpp"
#include "mml/serialize.hpp"
#include "mml/spectra.hpp"
#include "mml/states.hpp"

using namespace mml;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string secs_str(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f s", v);
  return buf;
}

// Eigen systems are shared across criteria; level 512 alone is worth caching.
std::map<int, modal::ModalPair> g_modal;

const modal::ModalPair& modal_at(int n) {
  auto it = g_modal.find(n);
  if (it == g_modal.end()) it = g_modal.emplace(n, modal::modal_position_full(n)).first;
  return it->second;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<int> full_level_set() {
  std::vector<int> ns;
  for (int n = 1; n <= 100; ++n) ns.push_back(n);
  ns.push_back(200);
  ns.push_back(512);
  return ns;
}

// ── 1: golden level-3 fixtures ──────────────────────────────────────────────

Outcome criterion_golden() {
  auto t0 = Clock::now();
  std::vector<CheckResult> checks = fixtures::golden_suite(MML_FIXTURE_DIR);
  bool all = checks.size() == 5;
  double worst = 0.0;
  for (const CheckResult& c : checks) {
    all = all && c.pass;
    worst = std::max(worst, c.max_abs_err);
  }
  double secs = seconds_since(t0);
  bool timed = secs < 1.0;
  return {all && timed,
          "5 fixtures, max err " + sci(worst) + ", " + secs_str(secs)};
}

// ── 2-4: the transformed-basis identities over the full level set ───────────

struct PipelineScan {
  bool ran = false;
  bool last_row_ok = true;
  bool identity_ok = true;
  bool kernel_ok = true;
  bool diagonal_ok = true;
  double worst_last_row = 0.0;
  double worst_identity = 0.0;
  double worst_kernel = 0.0;
  double worst_diagonal = 0.0;
  double secs = 0.0;
};

const PipelineScan& pipeline_scan() {
  static PipelineScan s;
  if (s.ran) return s;
  auto t0 = Clock::now();
  for (int n : full_level_set()) {
    const modal::ModalPair& mp = modal_at(n);

    CheckResult lr = modal::check_constant_last_row(mp.vectors);
    s.last_row_ok = s.last_row_ok && lr.pass;
    s.worst_last_row = std::max(s.worst_last_row, lr.max_abs_err);

    DiagonalMatrix d = ops::build_action_difference(n);
    ComplexMatrix dq = actiondiff::transform(d, mp.vectors);
    CheckResult id = actiondiff::check_identity_minus_allones(dq);
    s.identity_ok = s.identity_ok && id.pass;
    s.worst_identity = std::max(s.worst_identity, id.max_abs_err);

    ComplexMatrix pq = actiondiff::momentum_in_position_basis(mp.vectors);
    actiondiff::KernelMatrix k = actiondiff::cauchy_hilbert_kernel(mp.spectrum);
    CheckResult km = actiondiff::kernel_match(pq, k);
    s.kernel_ok = s.kernel_ok && km.pass;
    s.worst_kernel = std::max(s.worst_kernel, km.max_abs_err);

    CheckResult kd = actiondiff::kernel_diagonal(pq);
    s.diagonal_ok = s.diagonal_ok && kd.pass;
    s.worst_diagonal = std::max(s.worst_diagonal, kd.max_abs_err);
  }
  s.secs = seconds_since(t0);
  s.ran = true;
  return s;
}

Outcome criterion_last_row() {
  const PipelineScan& s = pipeline_scan();
  bool timed = s.secs < 60.0;
  return {s.last_row_ok && timed,
          "levels 1..100,200,512, max err " + sci(s.worst_last_row) +
              ", shared scan " + secs_str(s.secs)};
}

Outcome criterion_identity() {
  const PipelineScan& s = pipeline_scan();
  return {s.identity_ok, "max err " + sci(s.worst_identity) + " against 1e-9*(N+1)"};
}

Outcome criterion_kernel() {
  const PipelineScan& s = pipeline_scan();
  return {s.kernel_ok && s.diagonal_ok,
          "max err " + sci(s.worst_kernel) + " against 1e-8*(N+1), diag " +
              sci(s.worst_diagonal) + " against 1e-12"};
}

// ── 5: eigensolver vs the recurrence-zeros oracle ───────────────────────────

Outcome criterion_oracle() {
  double worst = 0.0;
  for (int n = 1; n <= 100; ++n) {
    const Spectrum& got = modal_at(n).spectrum;
    Spectrum want = hermite::hermite_zeros_oracle(n + 1);
    if (got.size() != want.size()) return {false, "size mismatch at level " + std::to_string(n)};
    for (int l = 0; l < got.size(); ++l) {
      double rel = std::abs(got.values[l] - want.values[l]) /
                   std::max(1.0, std::abs(want.values[l]));
      worst = std::max(worst, rel);
    }
  }
  bool agree = worst <= 1e-12;

  // Closed forms at the two levels where the characteristic polynomials are
  // quadratics in lambda^2.
  const Spectrum& s1 = modal_at(1).spectrum;
  double r1 = std::sqrt(0.5);
  double closed = std::max(std::abs(s1.values[0] + r1), std::abs(s1.values[1] - r1));
  const Spectrum& s3 = modal_at(3).spectrum;
  double inner = std::sqrt((3.0 - std::sqrt(6.0)) / 2.0);
  double outer = std::sqrt((3.0 + std::sqrt(6.0)) / 2.0);
  closed = std::max({closed, std::abs(s3.values[0] + outer), std::abs(s3.values[1] + inner),
                     std::abs(s3.values[2] - inner), std::abs(s3.values[3] - outer)});

  return {agree && closed <= 1e-12,
          "worst relative gap " + sci(worst) + ", closed-form gap " + sci(closed)};
}

// ── 6: rotation factorization ───────────────────────────────────────────────

Outcome criterion_rotation() {
  bool ok = true;
  double worst_rot = 0.0, worst_block = 0.0;
  for (int n = 1; n <= 100; ++n) {
    ModalMatrix r = modal::kocher_rotation(n);
    CheckResult orth = modal::kocher_orthogonality(r);
    CheckResult map = modal::kocher_diagonal_map(r);
    modal::BlockFactorResult bf = modal::block_factor(modal_at(n).vectors, r);
    ok = ok && orth.pass && map.pass && bf.structure.pass && bf.orthogonality.pass;
    worst_rot = std::max({worst_rot, orth.max_abs_err, map.max_abs_err});
    worst_block = std::max({worst_block, bf.structure.max_abs_err,
                            bf.orthogonality.max_abs_err});
  }
  return {ok, "rotation err " + sci(worst_rot) + " against 1e-13, block err " +
                  sci(worst_block) + " against 1e-9"};
}

// ── 7: uncertainty margins and coherent saturation ──────────────────────────

Outcome criterion_uncertainty() {
  double worst_margin = 0.0;
  for (int n : {5, 20, 50}) {
    std::mt19937_64 rng(2026u + static_cast<unsigned>(n));
    for (int i = 0; i < 1000; ++i) {
      states::StateVector psi = states::random_state(n + 1, rng);
      states::UncertaintyReport rep = states::uncertainty_check(psi, n);
      worst_margin = std::min(worst_margin, rep.margin);
    }
  }
  bool margins_ok = worst_margin >= -1e-10;

  states::StateVector coh = states::coherent_state(cplx(1.0, 0.0), 60);
  states::UncertaintyReport rep = states::uncertainty_check(coh, 60);
  double sat = std::abs(rep.product - 0.5);
  double dev = std::abs(rep.mean_d - 1.0);
  bool coherent_ok = sat <= 1e-8 && dev <= 1e-12;

  return {margins_ok && coherent_ok,
          "3000 random margins >= " + sci(worst_margin) + ", coherent |dQ dP - 1/2| = " +
              sci(sat) + ", |<D> - 1| = " + sci(dev)};
}

// ── 8: momentum-basis structure ─────────────────────────────────────────────

Outcome criterion_momentum_basis() {
  bool ok = true;
  double worst = 0.0;
  for (int n = 1; n <= 100; ++n) {
    CheckResult c = actiondiff::momentum_basis_structure(n);
    ok = ok && c.pass;
    worst = std::max(worst, c.max_abs_err);
  }
  return {ok, "max err " + sci(worst) + " against 1e-9*(N+1)"};
}

// ── 9: resolvent Cauchy decrease and gap shrinkage ──────────────────────────

Outcome criterion_convergence() {
  states::StateVector ground = states::number_state(0, 0);
  cplx z(0.0, 1.0);
  double d1 = spectra::resolvent_cauchy(z, ground, 25, 50).diff_norm;
  double d2 = spectra::resolvent_cauchy(z, ground, 50, 100).diff_norm;
  double d3 = spectra::resolvent_cauchy(z, ground, 100, 200).diff_norm;
  bool resolvent_ok = d1 > d2 && d2 > d3;

  bool gaps_ok = true;
  double prev = std::numeric_limits<double>::infinity();
  double last = 0.0;
  for (int n : {25, 50, 100, 200, 400}) {
    spectra::GapStats g = spectra::gap_statistics(modal_at(n).spectrum, 1.0);
    gaps_ok = gaps_ok && g.max_gap <= prev + 1e-12;
    prev = g.max_gap;
    last = g.max_gap;
  }
  return {resolvent_ok && gaps_ok,
          "resolvent diffs " + sci(d1) + " > " + sci(d2) + " > " + sci(d3) +
              ", max_gap down to " + sci(last)};
}

// ── 10: CLI determinism, exit codes, export round-trip ──────────────────────

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  std::string cmd = std::string("\"") + MML_CLI_PATH + "\" " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  int rc = pclose(p);
  if (rc >= 0 && WIFEXITED(rc)) r.status = WEXITSTATUS(rc);
  return r;
}

report::MatrixFile load_export(const std::string& dir, const std::string& kind) {
  std::ifstream in(dir + "/" + kind + "_n20.json");
  nlohmann::json j;
  in >> j;
  return report::parse_matrix_json(j);
}

Outcome criterion_interface() {
  CliRun a = run_cli("verify --n 50 --suite all --format json --no-timestamp");
  CliRun b = run_cli("verify --n 50 --suite all --format json --no-timestamp");
  bool deterministic = a.status == 0 && b.status == 0 && !a.out.empty() && a.out == b.out;

  CliRun fail = run_cli("verify --n 20 --tol last_row_constant=1e-30 --format json --no-timestamp");
  CliRun usage = run_cli("verify --suite bogus");
  bool codes = fail.status == 1 && usage.status == 2;

  namespace fs = std::filesystem;
  std::string tmpl = (fs::temp_directory_path() / "mml_accept_XXXXXX").string();
  std::vector<char> path(tmpl.begin(), tmpl.end());
  path.push_back('\0');
  if (!mkdtemp(path.data())) return {false, "mkdtemp failed"};
  std::string dir(path.data());

  CliRun built = run_cli("build --n 20 --out \"" + dir + "\" --format json");
  bool round = built.status == 0;
  if (round) {
    const modal::ModalPair& mp = modal_at(20);

    SymTridiag q = report::tridiagonal_from(load_export(dir, "q"));
    SymTridiag q0 = ops::build_position(20);
    round = round && q.diag == q0.diag && q.offdiag == q0.offdiag;

    ComplexMatrix p = report::dense_from(load_export(dir, "p"));
    round = round && p.data() == ops::build_momentum(20).data();

    DiagonalMatrix d = report::diagonal_from(load_export(dir, "d"));
    round = round && d.diag == ops::build_action_difference(20).diag;

    DiagonalMatrix h = report::diagonal_from(load_export(dir, "h"));
    round = round && h.diag == ops::build_hamiltonian(20).diag;

    ModalMatrix u = report::modal_from(load_export(dir, "u"));
    round = round && u.entries == mp.vectors.entries && u.convention == mp.vectors.convention;

    Spectrum s = report::spectrum_from(load_export(dir, "spectrum"));
    round = round && s.values == mp.spectrum.values;

    ComplexMatrix dq = report::dense_from(load_export(dir, "dq"));
    ComplexMatrix dq0 = actiondiff::transform(ops::build_action_difference(20), mp.vectors);
    round = round && dq.data() == dq0.data();

    actiondiff::KernelMatrix k = report::kernel_from(load_export(dir, "kernel"));
    actiondiff::KernelMatrix k0 = actiondiff::cauchy_hilbert_kernel(mp.spectrum);
    round = round && k.entries.data() == k0.entries.data() &&
            k.nodes.values == k0.nodes.values;
  }
  std::error_code ec;
  fs::remove_all(dir, ec);

  std::string detail = std::string("deterministic=") + (deterministic ? "yes" : "NO") +
                       ", exit codes " + std::to_string(fail.status) + "/" +
                       std::to_string(usage.status) + ", export round-trip " +
                       (round ? "bit-exact" : "BROKEN");
  return {deterministic && codes && round, detail};
}

}  // namespace

int main() {
  struct Row {
    const char* label;
    Outcome (*fn)();
  };
  const Row rows[] = {
      {"golden level-3 matrices match their exact forms", criterion_golden},
      {"constant last row of the position modal matrix", criterion_last_row},
      {"action difference maps to I minus all-ones", criterion_identity},
      {"momentum maps to the Cauchy kernel with zero diagonal", criterion_kernel},
      {"eigensolver agrees with the recurrence-zeros oracle", criterion_oracle},
      {"rotation is orthogonal and straightens the modal matrix", criterion_rotation},
      {"uncertainty margins hold and the coherent state saturates", criterion_uncertainty},
      {"momentum-basis action difference has the same structure", criterion_momentum_basis},
      {"resolvent differences shrink and spectral gaps close", criterion_convergence},
      {"CLI is deterministic with contractual exit codes", criterion_interface},
  };

  int failed = 0;
  int idx = 0;
  for (const Row& row : rows) {
    ++idx;
    Outcome o;
    try {
      o = row.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << idx << ". " << row.label << " ("
              << o.detail << ")\n";
  }
  std::cout << "acceptance: " << (10 - failed) << "/10 criteria passed\n";
  return failed == 0 ? 0 : 1;
}
