#pragma once

// Cat amplification pipeline: sweep into resonance, dressed-state transfer,
// sweep out, SNAP correction, qubit reset between rounds.

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "catamp/hilbert.hpp"
#include "catamp/jc_model.hpp"
#include "catamp/lindblad.hpp"
#include "catamp/pulses.hpp"
#include "catamp/states.hpp"

namespace catamp {

using JointState = std::variant<FockKet, DensityOp>;

enum class ResetMode { ideal, skip };
enum class SnapMode { fitted, table, none };

// Phases tied to one particular pulse realization, indexed by Fock m.
const std::vector<double>& table2_snap_phases();

struct ProtocolConfig {
  DeviceParams device;
  SweepSchedule sweep;
  PulseSchedule schedule_first;
  PulseSchedule schedule_second;
  std::vector<double> snap_phases;  // SnapMode::table
  SnapMode snap_mode = SnapMode::fitted;
  bool snap_after_each = true;
  ResetMode reset_mode = ResetMode::ideal;
  bool decoherence_on = false;
  bool sequential_sets = false;  // one transfer set at a time, for diagnosis
  bool strict_truncation = true;
  IntegratorConfig integrator;

  // Tabulated schedules on the default device at the given truncation.
  static ProtocolConfig defaults(int cavity_dim = 20, const ScheduleOptions& options = {});
  void validate() const;
};

// Population above which the top two Fock levels raise the truncation alarm.
inline constexpr double kTruncationAlarm = 1e-4;

struct RunDiagnostics {
  std::vector<std::string> warnings;
  double top_population = 0.0;  // max over phases of the top-two-level population
  double ground_population = 0.0;
  IntegrationStats stats;
};

JointState prepare_initial(Complex alpha, Parity parity, const ProtocolConfig& config);

DensityOp to_density(const JointState& s);
DensityOp cavity_state(const JointState& s);
CMatrix qubit_state(const JointState& s);
double top_levels_population(const JointState& s, int levels = 2);

// Sweep-in, pulse window, sweep-out.
JointState run_edag(const JointState& state, const ProtocolConfig& config, EdagRound which,
                    RunDiagnostics* diag = nullptr);

JointState qubit_reset(const JointState& state, const ProtocolConfig& config);

// identity_qubit x sum_m e^{i Phi_m} |m><m|; missing phases are zero.
JointState snap_gate(const JointState& state, const std::vector<double>& phases);
DensityOp snap_gate(const DensityOp& rho, const std::vector<double>& phases);

struct SnapFit {
  std::vector<double> phases;
  double fidelity_before = 0.0;
  double fidelity_after = 0.0;
  bool converged = false;
};

SnapFit fit_snap_phases(const DensityOp& rho_cavity, const FockKet& target);

struct AlphaScan {
  double alpha_prime = 0.0;
  double fidelity = 0.0;
  std::vector<double> phases;  // fitted SNAP phases at the optimum (empty without fitting)
};

// Best fidelity against |SC_{alpha'}> with the given parity over alpha' in [lo, hi]:
// 0.005 grid followed by golden-section refinement. With fit_snap the SNAP phases
// are refitted at every alpha'.
AlphaScan best_cat_fidelity(const DensityOp& rho_cavity, Parity parity, double lo, double hi, bool fit_snap);

// Fidelity against |SC_{alpha'}> at each grid point, SNAP refitted per point when fit_snap is set.
std::vector<CurvePoint> fidelity_curve(const DensityOp& rho_cavity, Parity parity, std::span<const double> grid,
                                       bool fit_snap);

struct AmplificationReport {
  DensityOp final_cavity_state{CMatrix::Identity(1, 1), cavity_dims(1)};
  double fidelity_vs_target = 0.0;
  double fidelity_uncorrected = 0.0;
  double best_alpha_prime = 0.0;
  double gain = 0.0;
  double parity_expectation = 0.0;
  double runtime_seconds = 0.0;
  std::vector<double> snap_phases;
  std::vector<RunDiagnostics> rounds;
};

AmplificationReport amplify(Complex alpha, Parity parity, int k, const ProtocolConfig& config);
// Reports after each of the k rounds; the last equals amplify().
std::vector<AmplificationReport> amplify_each(Complex alpha, Parity parity, int k, const ProtocolConfig& config);

struct StirapScanConfig {
  DeviceParams device{.cavity_dim = 6};
  double eps1 = units::mhz(10.0);
  double eps2 = units::mhz(35.0);
  double width = kTable1Width;
  double tail = 4.0;  // window extends |tau| + tail * width on each side
  IntegratorConfig integrator;
};

struct ScanPoint {
  double tau;
  double efficiency;
};

// |<-,0|psi>|^2 after one tone pair acting on |+,0> at delta = 0.
std::vector<ScanPoint> stirap_scan(const std::vector<double>& tau_values, double delta0,
                                   const StirapScanConfig& config = {});

struct ShiftEvidence {
  double complex_residual = 0.0;
  double magnitude_residual = 0.0;
  double wrong_parity_leakage = 0.0;
  int compared_entries = 0;
};

// Compares <i+k|rho_out|j+k> with <i|rho_in|j> wherever |<i|rho_in|j>| > 1e-3.
ShiftEvidence shift_evidence(const DensityOp& rho_in, const DensityOp& rho_out, int k);

}  // namespace catamp
