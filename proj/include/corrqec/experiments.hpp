#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "corrqec/channel.hpp"

// Scenario runner: no-QEC physical-qubit dynamics, QEC logical-qubit
// dynamics, Kraus-weight sweeps, rotated-basis state families with angle
// averaging, CSV and SVG emission.

namespace corrqec {

// Family of two-logical-qubit states
//   |Psi> = cos(theta) |0~_n1 0~_n2> + sin(theta) |1~_n1 1~_n2>
// with each |b~_ni> the logical basis rotated to Bloch direction
// (theta_i, phi_i). Concurrence of every member is sin(2*theta).
struct InitialStateFamily {
  enum class Scheme { Quadrature, MonteCarlo, Fixed };

  double theta = 0.0;
  Scheme scheme = Scheme::Quadrature;
  int n_nodes = 4;                                  // per angle (quadrature)
  int n_samples = 256;                              // monte_carlo
  std::uint64_t seed = 1;                           // monte_carlo
  std::vector<std::array<double, 4>> fixed_angles;  // (th1, th2, ph1, ph2)
};

struct ScenarioConfig {
  enum class Mode { NoQecPhysical, QecLogical, KrausSweep };
  // How the initial state(s) are chosen.
  enum class InitialKind { NamedState, Family, XProductAverage };

  Mode mode = Mode::QecLogical;
  BathSpec bath = BathSpec::uniform(6, 1.0, 0.1);
  double T = 0.0;   // QEC cycle period / sweep grid maximum
  double dt = 0.0;  // no-QEC sampling step
  int n_steps = 1;
  InitialKind initial_kind = InitialKind::NamedState;
  std::string initial_state = "logical_00";
  InitialStateFamily family;
  std::string csv_path;
  std::string svg_path;

  // Parses the documented JSON shape; scalar bath entries expand to uniform
  // matrices. Malformed input is an std::invalid_argument (config error).
  static ScenarioConfig from_json(const nlohmann::json& j);
  static ScenarioConfig from_json_file(const std::string& path);
};

struct TimeSeriesRecord {
  int step;
  double time;
  double fidelity;
  double concurrence;
};

struct KrausSweepRow {
  double T;
  KrausFamilyFit fit;
};

// Normalized 4-dim logical state of the family at the given angles.
Vector sample_family_state(double theta, double theta1, double theta2,
                           double phi1, double phi2);

// Named 4-dim initial states. Logical names ("logical_00", "logical_bell",
// "logical_x_00", ...) and physical two-qubit names ("x_product_00", ...,
// "bell_phi_plus", "bell_psi_minus") share the vector space; the mode decides
// the interpretation. Unknown names are config errors.
Vector named_state(const std::string& name);

// The (state, weight) list a family expands to; weights sum to 1.
// Deterministic for a fixed scheme/seed.
std::vector<std::pair<Vector, double>> family_states(const InitialStateFamily& f);

// Element-wise dephasing run on two physical qubits, recording fidelity to
// the initial state and concurrence at t = k*dt, k = 0..n_steps.
std::vector<TimeSeriesRecord> run_no_qec(const ScenarioConfig& config);

// Encode, then repeat qec_cycle and decode after each application; step k is
// after k cycles (time k*T), with logical fidelity and concurrence.
std::vector<TimeSeriesRecord> run_qec(const ScenarioConfig& config);

// logical_channel -> chi_in_x_basis -> fit_seven_kraus per grid point, rows
// in grid order. Rows with residual > 1e-3 are flagged (outside_family) and
// the sweep continues.
std::vector<KrausSweepRow> sweep_kraus_weights(const BathSpec& bath,
                                               const std::vector<double>& t_grid);

// Pointwise weighted mean of the runner's series over the family states.
// State runs are independent (parallel on the SIM_THREADS budget); the
// reduction order is fixed, so output is deterministic.
std::vector<TimeSeriesRecord> average_over_states(
    const InitialStateFamily& family,
    const std::function<std::vector<TimeSeriesRecord>(const Vector&)>& runner);

// CSV schemas (exact headers, LF endings, 12 significant digits):
//   time series -> "step,time,fidelity,concurrence"
//   sweep       -> "T,m0,m1,m2,m3,m4,m5,m6_abs,m6_sign,residual"
void emit_csv(const std::vector<TimeSeriesRecord>& records,
              const std::string& path);
void emit_csv(const std::vector<KrausSweepRow>& rows, const std::string& path);

// Minimal static charts: fidelity + concurrence lines, or the m_i weights.
void emit_svg(const std::vector<TimeSeriesRecord>& records,
              const std::string& path);
void emit_svg(const std::vector<KrausSweepRow>& rows, const std::string& path);

// Worker budget: SIM_THREADS env var if set (>= 1), else all hardware threads.
int thread_budget();

// Gauss-Legendre nodes/weights on [-1, 1], ascending nodes.
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

// Baked-in figure scenarios with the stock bath.
ScenarioConfig fig1_config();  // no-QEC, x-product average, t in [0, pi]
ScenarioConfig fig2_config();  // sweep, 40 points over (0, pi/2]
ScenarioConfig fig3_config();  // QEC, T = pi/4, theta = 0 family average

// Runs a scenario end to end and writes the configured outputs.
void run_scenario(const ScenarioConfig& config);

}  // namespace corrqec
