#include "catamp/protocol.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "catamp/errors.hpp"

namespace catamp {

const std::vector<double>& table2_snap_phases() {
  static const std::vector<double> phases = {0.0, -1.589, -0.716, -0.907, 3.037, -1.621, 2.009, 2.859, -0.573};
  return phases;
}

ProtocolConfig ProtocolConfig::defaults(int cavity_dim, const ScheduleOptions& options) {
  ProtocolConfig c;
  c.device.cavity_dim = cavity_dim;
  c.schedule_first = table1_schedule(EdagRound::first, c.device, options);
  c.schedule_second = table1_schedule(EdagRound::second, c.device, options);
  c.snap_phases = table2_snap_phases();
  return c;
}

void ProtocolConfig::validate() const {
  device.validate();
  sweep.validate();
  schedule_first.validate();
  schedule_second.validate();
  integrator.validate();
  if (static_cast<int>(snap_phases.size()) > device.cavity_dim) {
    throw InvalidArgument("more SNAP phases than cavity levels");
  }
  for (const auto* s : {&schedule_first, &schedule_second}) {
    for (const auto& set : s->transfer_sets) {
      if (set.manifold + 2 >= device.cavity_dim) {
        throw TruncationError("manifold " + std::to_string(set.manifold) + " does not fit cavity_dim " +
                                  std::to_string(device.cavity_dim),
                              set.manifold + 3);
      }
    }
  }
}

JointState prepare_initial(Complex alpha, Parity parity, const ProtocolConfig& config) {
  const FockKet cav = cat_ket({alpha, parity}, config.device.cavity_dim);
  FockKet joint = tensor_product(qubit_excited(), cav);
  if (config.decoherence_on) return DensityOp::from_ket(joint);
  return joint;
}

DensityOp to_density(const JointState& s) {
  if (const auto* k = std::get_if<FockKet>(&s)) return DensityOp::from_ket(*k);
  return std::get<DensityOp>(s);
}

DensityOp cavity_state(const JointState& s) { return partial_trace_qubit(to_density(s)); }

CMatrix qubit_state(const JointState& s) { return reduced_qubit(to_density(s)); }

double top_levels_population(const JointState& s, int levels) {
  const DensityOp rho = to_density(s);
  const int nc = rho.dims().cavity;
  double p = 0.0;
  for (int n = std::max(0, nc - levels); n < nc; ++n) p += fock_population(rho, n);
  return p;
}

namespace {

DeviceParams effective_device(const ProtocolConfig& c) {
  DeviceParams d = c.device;
  if (!c.decoherence_on) {
    d.kappa = 0.0;
    d.gamma_minus = 0.0;
    d.gamma_phi = 0.0;
  }
  return d;
}

TimeDependentHamiltonian sweep_hamiltonian(const DeviceParams& p, const SweepSchedule& s, bool reverse) {
  TimeDependentHamiltonian h(joint_dims(p.cavity_dim));
  h.add_static(static_hamiltonian(p, 0.0));
  const OpMatrix half_sz(0.5 * embed_qubit(sigma_z(), p.cavity_dim).matrix(), joint_dims(p.cavity_dim), true);
  h.add_term(half_sz, [s, reverse](double t) {
    const double u = std::clamp(reverse ? s.duration - t : t, 0.0, s.duration);
    return Complex(sweep_delta(s, u), 0.0);
  });
  return h;
}

TimeDependentHamiltonian window_hamiltonian(const DeviceParams& p, const PulseSchedule& schedule) {
  TimeDependentHamiltonian h(joint_dims(p.cavity_dim));
  h.add_static(static_hamiltonian(p, 0.0));
  const OpMatrix a = embed_cavity(annihilation_op(p.cavity_dim));
  auto tones = std::make_shared<const std::vector<GaussianTone>>(active_tones(schedule));
  const double t0 = schedule.t_start, t1 = schedule.t_end, wr = p.omega_r;
  h.add_term(a, [=](double t) { return (t < t0 || t > t1) ? Complex(0.0) : drive_coefficient(*tones, t, wr); });
  h.add_term(a.adjoint(), [=](double t) {
    return (t < t0 || t > t1) ? Complex(0.0) : std::conj(drive_coefficient(*tones, t, wr));
  });
  return h;
}

void accumulate(IntegrationStats& into, const IntegrationStats& s) {
  into.accepted += s.accepted;
  into.rejected += s.rejected;
  into.rhs_evaluations += s.rhs_evaluations;
}

JointState propagate(const JointState& s, const TimeDependentHamiltonian& h, const ProtocolConfig& c,
                     std::pair<double, double> span, RunDiagnostics& diag) {
  const DeviceParams d = effective_device(c);
  IntegratorConfig cfg = c.integrator;
  cfg.keep_states = false;
  if (d.has_decoherence() || std::holds_alternative<DensityOp>(s)) {
    auto tr = evolve(to_density(s), h, d, span, cfg);
    accumulate(diag.stats, tr.stats);
    return tr.final_state();
  }
  auto tr = evolve_pure(std::get<FockKet>(s), h, d, span, cfg);
  accumulate(diag.stats, tr.stats);
  return tr.final_state();
}

void check_truncation(const JointState& s, const ProtocolConfig& c, RunDiagnostics& diag, const char* phase) {
  const double top = top_levels_population(s);
  diag.top_population = std::max(diag.top_population, top);
  if (top > kTruncationAlarm) {
    const std::string msg = std::string("top two Fock levels hold ") + std::to_string(top) + " after " + phase;
    diag.warnings.push_back(msg);
    if (c.strict_truncation) throw TruncationError(msg, c.device.cavity_dim + 5);
  }
}

}  // namespace

JointState run_edag(const JointState& state, const ProtocolConfig& config, EdagRound which, RunDiagnostics* diag) {
  config.validate();
  RunDiagnostics local;
  RunDiagnostics& dg = diag ? *diag : local;
  const DeviceParams& p = config.device;
  if (to_density(state).dims() != joint_dims(p.cavity_dim)) throw ShapeError("run_edag: state basis does not match");

  const double pe = qubit_state(state)(1, 1).real();
  if (pe < 0.99) dg.warnings.push_back("qubit excited population " + std::to_string(pe) + " before sweep-in");

  const PulseSchedule& schedule = which == EdagRound::first ? config.schedule_first : config.schedule_second;
  JointState s = state;
  s = propagate(s, sweep_hamiltonian(p, config.sweep, false), config, {0.0, config.sweep.duration}, dg);
  check_truncation(s, config, dg, "sweep-in");

  if (config.sequential_sets) {
    for (const auto& set : schedule.transfer_sets) {
      PulseSchedule one = schedule;
      one.transfer_sets = {set};
      one.shared_tone1 = false;
      s = propagate(s, window_hamiltonian(p, one), config, {one.t_start, one.t_end}, dg);
    }
  } else {
    s = propagate(s, window_hamiltonian(p, schedule), config, {schedule.t_start, schedule.t_end}, dg);
  }
  check_truncation(s, config, dg, "pulse window");

  s = propagate(s, sweep_hamiltonian(p, config.sweep, true), config, {0.0, config.sweep.duration}, dg);
  check_truncation(s, config, dg, "sweep-out");
  dg.ground_population = qubit_state(s)(0, 0).real();
  return s;
}

JointState qubit_reset(const JointState& state, const ProtocolConfig& config) {
  if (config.reset_mode == ResetMode::skip) return state;
  if (const auto* k = std::get_if<FockKet>(&state)) {
    if (k->dims().qubit != 2) throw ShapeError("qubit_reset needs a joint state");
    const int nc = k->dims().cavity;
    CVector v(k->size());
    v.head(nc) = k->amplitudes().tail(nc);
    v.tail(nc) = k->amplitudes().head(nc);
    return FockKet(std::move(v), k->dims());
  }
  const DensityOp& rho = std::get<DensityOp>(state);
  if (rho.dims().qubit != 2) throw ShapeError("qubit_reset needs a joint state");
  const CMatrix x = embed_qubit(sigma_x(), rho.dims().cavity).matrix();
  return DensityOp(x * rho.matrix() * x, rho.dims());
}

namespace {

CVector snap_diagonal(const std::vector<double>& phases, BasisDims dims) {
  if (static_cast<int>(phases.size()) > dims.cavity) throw InvalidArgument("more SNAP phases than cavity levels");
  CVector d(dims.size());
  for (int q = 0; q < dims.qubit; ++q) {
    for (int n = 0; n < dims.cavity; ++n) {
      const double phi = n < static_cast<int>(phases.size()) ? phases[n] : 0.0;
      d[q * dims.cavity + n] = std::polar(1.0, phi);
    }
  }
  return d;
}

}  // namespace

DensityOp snap_gate(const DensityOp& rho, const std::vector<double>& phases) {
  const CVector d = snap_diagonal(phases, rho.dims());
  return DensityOp(d.asDiagonal() * rho.matrix() * d.conjugate().asDiagonal(), rho.dims());
}

JointState snap_gate(const JointState& state, const std::vector<double>& phases) {
  if (const auto* k = std::get_if<FockKet>(&state)) {
    const CVector d = snap_diagonal(phases, k->dims());
    return FockKet(d.cwiseProduct(k->amplitudes()), k->dims());
  }
  return snap_gate(std::get<DensityOp>(state), phases);
}

SnapFit fit_snap_phases(const DensityOp& rho_cavity, const FockKet& target) {
  if (rho_cavity.dims().qubit != 1) throw ShapeError("fit_snap_phases expects a cavity-only state");
  if (!(rho_cavity.dims() == target.dims())) throw ShapeError("fit_snap_phases: basis dimensions differ");
  const int n = rho_cavity.size();
  const CVector& t = target.amplitudes();
  // F(Phi) = sum_mn e^{i(Phi_m - Phi_n)} M_mn
  const CMatrix m = t.conjugate().asDiagonal() * rho_cavity.matrix() * t.asDiagonal();
  std::vector<double> phi(n, 0.0);
  std::vector<bool> free(n, false);
  auto value = [&] {
    CVector u(n);
    for (int i = 0; i < n; ++i) u[i] = std::polar(1.0, phi[i]);
    return (u.adjoint() * m.transpose() * u).value().real();
  };
  SnapFit fit;
  fit.fidelity_before = std::clamp(m.sum().real(), 0.0, 1.0);
  double last = value();
  for (int sweep = 0; sweep < 1000; ++sweep) {
    for (int i = 0; i < n; ++i) {
      Complex b = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) b += m(i, j) * std::polar(1.0, -phi[j]);
      }
      if (std::abs(b) > 1e-300) {
        phi[i] = -std::arg(b);
        free[i] = true;
      }
    }
    const double now = value();
    if (now - last <= 1e-15) {
      fit.converged = true;
      last = now;
      break;
    }
    last = now;
  }
  const double ref = phi[0];
  for (int i = 0; i < n; ++i) {
    if (!free[i]) {
      phi[i] = 0.0;
      continue;
    }
    phi[i] = std::remainder(phi[i] - ref, 2.0 * std::numbers::pi);
  }
  phi[0] = 0.0;
  fit.phases = phi;
  fit.fidelity_after = std::clamp(fidelity(snap_gate(rho_cavity, phi), target), 0.0, 1.0);
  return fit;
}

namespace {

// Exact cat amplitudes restricted to the first nc levels (not renormalized).
FockKet truncated_cat(double alpha_prime, Parity parity, int nc) {
  const int big = std::max(nc, required_cavity_dim(alpha_prime, 1e-14) + 2);
  const FockKet full = cat_ket({Complex(alpha_prime, 0.0), parity}, big, 1e-14);
  return FockKet::cavity(full.amplitudes().head(nc));
}

}  // namespace

AlphaScan best_cat_fidelity(const DensityOp& rho_cavity, Parity parity, double lo, double hi, bool fit_snap) {
  if (rho_cavity.dims().qubit != 1) throw ShapeError("best_cat_fidelity expects a cavity-only state");
  if (!(hi >= lo) || !(lo > 0.0)) throw InvalidArgument("alpha' range must satisfy 0 < lo <= hi");
  const int nc = rho_cavity.dims().cavity;
  auto eval = [&](double ap, std::vector<double>* phases) {
    const FockKet t = truncated_cat(ap, parity, nc);
    if (!fit_snap) return fidelity(rho_cavity, t);
    SnapFit f = fit_snap_phases(rho_cavity, t);
    if (phases) *phases = f.phases;
    return f.fidelity_after;
  };
  constexpr double step = 0.005;
  const int n = std::max(1, static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1);
  std::vector<double> f(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) f[i] = eval(std::min(hi, lo + step * i), nullptr);
  const int best = static_cast<int>(std::max_element(f.begin(), f.end()) - f.begin());
  const double a = std::max(lo, lo + step * (best - 1));
  const double b = std::min(hi, lo + step * (best + 1));
  AlphaScan out;
  out.alpha_prime = b > a ? golden_section_max([&](double x) { return eval(x, nullptr); }, a, b, 1e-5)
                          : lo + step * best;
  out.fidelity = eval(out.alpha_prime, &out.phases);
  if (f[best] > out.fidelity) {
    out.alpha_prime = lo + step * best;
    out.fidelity = eval(out.alpha_prime, &out.phases);
  }
  return out;
}

std::vector<CurvePoint> fidelity_curve(const DensityOp& rho_cavity, Parity parity, std::span<const double> grid,
                                       bool fit_snap) {
  if (rho_cavity.dims().qubit != 1) throw ShapeError("fidelity_curve expects a cavity-only state");
  for (double g : grid) {
    if (!(g > 0.0)) throw InvalidArgument("alpha' grid must be positive");
  }
  const int nc = rho_cavity.dims().cavity;
  std::vector<CurvePoint> out(grid.size());
  const long n = static_cast<long>(grid.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const FockKet t = truncated_cat(grid[i], parity, nc);
    out[i] = {grid[i], fit_snap ? fit_snap_phases(rho_cavity, t).fidelity_after : fidelity(rho_cavity, t)};
  }
  return out;
}

namespace {

// Report for the state after the last round; SNAP is chosen per config.snap_mode.
AmplificationReport finish_round(const JointState& s, Parity support, double a, const ProtocolConfig& config,
                                 const std::vector<RunDiagnostics>& rounds, std::chrono::steady_clock::time_point clock) {
  AmplificationReport rep;
  rep.rounds = rounds;
  const DensityOp cav = cavity_state(s);
  rep.fidelity_uncorrected = best_cat_fidelity(cav, support, a, 2.5 * a, false).fidelity;
  AlphaScan best;
  switch (config.snap_mode) {
    case SnapMode::fitted:
      best = best_cat_fidelity(cav, support, a, 2.5 * a, true);
      rep.final_cavity_state = snap_gate(cav, best.phases);
      break;
    case SnapMode::table:
      rep.final_cavity_state = snap_gate(cav, config.snap_phases);
      best = best_cat_fidelity(rep.final_cavity_state, support, a, 2.5 * a, false);
      best.phases = config.snap_phases;
      break;
    case SnapMode::none:
      best = best_cat_fidelity(cav, support, a, 2.5 * a, false);
      rep.final_cavity_state = cav;
      break;
  }
  rep.fidelity_vs_target = best.fidelity;
  rep.best_alpha_prime = best.alpha_prime;
  rep.gain = best.alpha_prime / a;
  rep.snap_phases = best.phases;
  rep.parity_expectation = expectation(rep.final_cavity_state, parity_op(config.device.cavity_dim)).real();
  rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock).count();
  return rep;
}

}  // namespace

std::vector<AmplificationReport> amplify_each(Complex alpha, Parity parity, int k, const ProtocolConfig& config) {
  if (k != 1 && k != 2) throw InvalidArgument("shift power must be 1 or 2");
  if (k == 2 && config.reset_mode == ResetMode::skip) throw InvalidArgument("two rounds need a qubit reset");
  config.validate();
  const auto clock = std::chrono::steady_clock::now();
  const double a = std::abs(alpha);
  if (!(a > 0.0)) throw InvalidArgument("amplify needs |alpha| > 0");

  std::vector<AmplificationReport> out;
  std::vector<RunDiagnostics> rounds;
  JointState s = prepare_initial(alpha, parity, config);
  Parity support = parity;
  for (int round = 1; round <= k; ++round) {
    if (round > 1) s = qubit_reset(s, config);
    RunDiagnostics dg;
    s = run_edag(s, config, support == Parity::even ? EdagRound::first : EdagRound::second, &dg);
    rounds.push_back(dg);
    support = flipped(support);
    out.push_back(finish_round(s, support, a, config, rounds, clock));
    if (round < k && config.snap_after_each && config.snap_mode == SnapMode::fitted) {
      s = snap_gate(s, out.back().snap_phases);
    }
  }
  return out;
}

AmplificationReport amplify(Complex alpha, Parity parity, int k, const ProtocolConfig& config) {
  return amplify_each(alpha, parity, k, config).back();
}

std::vector<ScanPoint> stirap_scan(const std::vector<double>& tau_values, double delta0,
                                   const StirapScanConfig& config) {
  DeviceParams p = config.device;
  p.kappa = p.gamma_minus = p.gamma_phi = 0.0;
  p.validate();
  const DressedPair pair = dressed_pair(0, 0.0, p.lambda, p.cavity_dim);
  std::vector<ScanPoint> out(tau_values.size());
  IntegratorConfig cfg = config.integrator;
  cfg.keep_states = false;
  cfg.progress = nullptr;
  const long n = static_cast<long>(tau_values.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    const double tau = tau_values[i];
    const double half = std::abs(tau) + config.tail * config.width;
    const PulseSchedule s =
        single_transfer_schedule(0, delta0, config.eps1, config.eps2, tau, config.width, 2.0 * half, p);
    auto tr = evolve_pure(pair.plus, window_hamiltonian(p, s), p, {s.t_start, s.t_end}, cfg);
    out[i] = {tau, fidelity(tr.final_state(), pair.minus)};
  }
  return out;
}

ShiftEvidence shift_evidence(const DensityOp& rho_in, const DensityOp& rho_out, int k) {
  if (!(rho_in.dims() == rho_out.dims())) throw ShapeError("shift_evidence: basis dimensions differ");
  if (rho_in.dims().qubit != 1) throw ShapeError("shift_evidence expects cavity-only states");
  if (k < 0) throw InvalidArgument("shift must be non-negative");
  const int nc = rho_in.dims().cavity;
  const CMatrix& in = rho_in.matrix();
  const CMatrix& out = rho_out.matrix();
  ShiftEvidence ev;
  for (int i = 0; i < nc; ++i) {
    for (int j = 0; j < nc; ++j) {
      if (std::abs(in(i, j)) <= 1e-3) continue;
      const Complex shifted = (i + k < nc && j + k < nc) ? out(i + k, j + k) : Complex(0.0);
      ev.complex_residual = std::max(ev.complex_residual, std::abs(shifted - in(i, j)));
      ev.magnitude_residual = std::max(ev.magnitude_residual, std::abs(std::abs(shifted) - std::abs(in(i, j))));
      ++ev.compared_entries;
    }
  }
  double even = 0.0, odd = 0.0;
  for (int i = 0; i < nc; ++i) (i % 2 == 0 ? even : odd) += in(i, i).real();
  const int expected = ((even >= odd ? 0 : 1) + k) % 2;
  for (int i = 0; i < nc; ++i) {
    if (i % 2 != expected) ev.wrong_parity_leakage += std::max(0.0, out(i, i).real());
  }
  return ev;
}

}  // namespace catamp
