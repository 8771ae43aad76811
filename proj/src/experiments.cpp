#include "corrqec/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "corrqec/concurrence.hpp"
#include "corrqec/qec3.hpp"
#include "parallel.hpp"

namespace corrqec {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Work sharing

int thread_budget() {
  if (const char* env = std::getenv("SIM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
      throw std::invalid_argument("SIM_THREADS must be a positive integer, got '" +
                                  std::string(env) + "'");
    }
    return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace detail {

void parallel_for(int n, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  const int workers = std::min(thread_budget(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Quadrature and state families

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) {
    throw std::invalid_argument("gauss_legendre: need at least one node");
  }
  nodes.assign(static_cast<size_t>(n), 0.0);
  weights.assign(static_cast<size_t>(n), 0.0);
  // Newton iteration from the Chebyshev estimate; P_n by recurrence.
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // Descending from the cosine seed; store ascending.
    nodes[static_cast<size_t>(n - 1 - i)] = x;
    weights[static_cast<size_t>(n - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

Vector sample_family_state(double theta, double theta1, double theta2,
                           double phi1, double phi2) {
  const Complex e1 = std::polar(1.0, phi1);
  const Complex e2 = std::polar(1.0, phi2);
  // Rotated logical frames: |0_n> = c|0> + s e^{i phi}|1>,
  //                         |1_n> = c|1> - s e^{-i phi}|0>.
  Vector zero1(2), one1(2), zero2(2), one2(2);
  zero1 << std::cos(theta1 / 2), std::sin(theta1 / 2) * e1;
  one1 << -std::sin(theta1 / 2) * std::conj(e1), std::cos(theta1 / 2);
  zero2 << std::cos(theta2 / 2), std::sin(theta2 / 2) * e2;
  one2 << -std::sin(theta2 / 2) * std::conj(e2), std::cos(theta2 / 2);

  return std::cos(theta) * tensor(zero1, zero2) + std::sin(theta) * tensor(one1, one2);
}

Vector named_state(const std::string& name) {
  const double r = std::numbers::sqrt2 / 2.0;
  auto basis = [](int i) {
    Vector v = Vector::Zero(4);
    v(i) = 1.0;
    return v;
  };
  auto x_vec = [r](int bit) {  // 0 -> |+>, 1 -> |->
    Vector v(2);
    v << r, (bit ? -r : r);
    return v;
  };

  if (name == "logical_00") return basis(0);
  if (name == "logical_01") return basis(1);
  if (name == "logical_10") return basis(2);
  if (name == "logical_11") return basis(3);
  if (name == "logical_bell" || name == "bell_phi_plus") {
    return r * (basis(0) + basis(3));
  }
  if (name == "bell_phi_minus") return r * (basis(0) - basis(3));
  if (name == "bell_psi_plus") return r * (basis(1) + basis(2));
  if (name == "bell_psi_minus") return r * (basis(1) - basis(2));

  // Two-qubit x-basis products, physical or logical reading.
  for (const char* prefix : {"x_product_", "logical_x_"}) {
    const std::string p(prefix);
    if (name.size() == p.size() + 2 && name.compare(0, p.size(), p) == 0) {
      const char c1 = name[p.size()], c2 = name[p.size() + 1];
      if ((c1 == '0' || c1 == '1') && (c2 == '0' || c2 == '1')) {
        return tensor(x_vec(c1 - '0'), x_vec(c2 - '0'));
      }
    }
  }
  throw std::invalid_argument("named_state: unknown state '" + name + "'");
}

std::vector<std::pair<Vector, double>> family_states(const InitialStateFamily& f) {
  if (f.theta < 0.0 || f.theta > std::numbers::pi / 2 + 1e-12) {
    throw std::invalid_argument("family_states: theta must lie in [0, pi/2]");
  }
  std::vector<std::pair<Vector, double>> out;

  switch (f.scheme) {
    case InitialStateFamily::Scheme::Fixed: {
      if (f.fixed_angles.empty()) {
        throw std::invalid_argument("family_states: fixed scheme needs at least one angle tuple");
      }
      const double w = 1.0 / static_cast<double>(f.fixed_angles.size());
      for (const auto& a : f.fixed_angles) {
        out.emplace_back(sample_family_state(f.theta, a[0], a[1], a[2], a[3]), w);
      }
      return out;
    }

    case InitialStateFamily::Scheme::Quadrature: {
      // Bloch-uniform product measure: u = cos(theta_i) Gauss-Legendre on
      // [-1,1] (weight /2), phi_i Gauss-Legendre mapped onto [0,2pi)
      // (weight /2); n_nodes per angle.
      std::vector<double> u, wu;
      gauss_legendre(f.n_nodes, u, wu);
      const int n = f.n_nodes;
      double total = 0.0;
      for (int i1 = 0; i1 < n; ++i1)
        for (int j1 = 0; j1 < n; ++j1)
          for (int i2 = 0; i2 < n; ++i2)
            for (int j2 = 0; j2 < n; ++j2) {
              const double th1 = std::acos(u[static_cast<size_t>(i1)]);
              const double th2 = std::acos(u[static_cast<size_t>(i2)]);
              const double ph1 = std::numbers::pi * (u[static_cast<size_t>(j1)] + 1.0);
              const double ph2 = std::numbers::pi * (u[static_cast<size_t>(j2)] + 1.0);
              const double w = wu[static_cast<size_t>(i1)] * wu[static_cast<size_t>(j1)] *
                               wu[static_cast<size_t>(i2)] * wu[static_cast<size_t>(j2)] / 16.0;
              out.emplace_back(sample_family_state(f.theta, th1, th2, ph1, ph2), w);
              total += w;
            }
      // Renormalize away quadrature-weight rounding so averages stay exact.
      for (auto& sw : out) sw.second /= total;
      return out;
    }

    case InitialStateFamily::Scheme::MonteCarlo: {
      if (f.n_samples < 1) {
        throw std::invalid_argument("family_states: need at least one sample");
      }
      std::mt19937_64 rng(f.seed);
      auto unif = [&rng]() {  // [0,1) with 53 random bits, engine-stable
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
      };
      const double w = 1.0 / static_cast<double>(f.n_samples);
      for (int s = 0; s < f.n_samples; ++s) {
        const double th1 = std::acos(2.0 * unif() - 1.0);
        const double ph1 = 2.0 * std::numbers::pi * unif();
        const double th2 = std::acos(2.0 * unif() - 1.0);
        const double ph2 = 2.0 * std::numbers::pi * unif();
        out.emplace_back(sample_family_state(f.theta, th1, th2, ph1, ph2), w);
      }
      return out;
    }
  }
  throw std::invalid_argument("family_states: unknown sampling scheme");
}

// ---------------------------------------------------------------------------
// Scenario runners

namespace {

// Weighted pointwise mean of per-state series; states run in parallel, the
// reduction is a fixed-order loop so results do not depend on scheduling.
std::vector<TimeSeriesRecord> run_weighted(
    const std::vector<std::pair<Vector, double>>& states,
    const std::function<std::vector<TimeSeriesRecord>(const Vector&)>& runner) {
  if (states.empty()) {
    throw std::invalid_argument("run_weighted: no initial states");
  }
  std::vector<std::vector<TimeSeriesRecord>> slots(states.size());
  detail::parallel_for(static_cast<int>(states.size()),
                       [&](int i) { slots[static_cast<size_t>(i)] = runner(states[static_cast<size_t>(i)].first); });

  std::vector<TimeSeriesRecord> mean = slots[0];
  for (auto& rec : mean) {
    rec.fidelity = 0.0;
    rec.concurrence = 0.0;
  }
  for (size_t s = 0; s < slots.size(); ++s) {
    if (slots[s].size() != mean.size()) {
      throw numerical_error("run_weighted: per-state series lengths diverged");
    }
    const double w = states[s].second;
    for (size_t k = 0; k < mean.size(); ++k) {
      mean[k].fidelity += w * slots[s][k].fidelity;
      mean[k].concurrence += w * slots[s][k].concurrence;
    }
  }
  return mean;
}

std::vector<std::pair<Vector, double>> x_product_states() {
  std::vector<std::pair<Vector, double>> states;
  for (const char* name : {"x_product_00", "x_product_01", "x_product_10", "x_product_11"}) {
    states.emplace_back(named_state(name), 0.25);
  }
  return states;
}

// Computational -> x basis per qubit (|0> -> |+>, |1> -> |->): the physical
// reading of a logical-basis family vector.
Vector to_x_basis(const Vector& psi) {
  Matrix h(2, 2);
  const double r = std::numbers::sqrt2 / 2.0;
  h << r, r, r, -r;
  return tensor(h, h) * psi;
}

std::vector<std::pair<Vector, double>> initial_states_for(const ScenarioConfig& config) {
  switch (config.initial_kind) {
    case ScenarioConfig::InitialKind::NamedState:
      return {{named_state(config.initial_state), 1.0}};
    case ScenarioConfig::InitialKind::Family: {
      auto states = family_states(config.family);
      if (config.mode == ScenarioConfig::Mode::NoQecPhysical) {
        for (auto& sw : states) sw.first = to_x_basis(sw.first);
      }
      return states;
    }
    case ScenarioConfig::InitialKind::XProductAverage:
      return x_product_states();
  }
  throw std::invalid_argument("initial_states_for: unknown initial kind");
}

}  // namespace

std::vector<TimeSeriesRecord> run_no_qec(const ScenarioConfig& config) {
  if (config.mode != ScenarioConfig::Mode::NoQecPhysical) {
    throw std::invalid_argument("run_no_qec: config mode is not no_qec_physical");
  }
  if (config.bath.n_physical != 2) {
    throw std::invalid_argument("run_no_qec: bare runs use a two-qubit register");
  }
  if (!(config.dt > 0.0) || config.n_steps < 1) {
    throw std::invalid_argument("run_no_qec: need dt > 0 and n_steps >= 1");
  }

  // One factor table per sample time, shared by every initial state; pure
  // dephasing composes multiplicatively so each time evolves rho(0) directly.
  std::vector<Matrix> factors(static_cast<size_t>(config.n_steps) + 1);
  for (int k = 0; k <= config.n_steps; ++k) {
    factors[static_cast<size_t>(k)] = evolution_factors(config.bath, k * config.dt);
  }

  auto runner = [&](const Vector& psi) {
    const Matrix rho0 = density_from_pure(psi);
    std::vector<TimeSeriesRecord> series;
    series.reserve(static_cast<size_t>(config.n_steps) + 1);
    for (int k = 0; k <= config.n_steps; ++k) {
      const Matrix rho = evolve_with_factors(rho0, factors[static_cast<size_t>(k)]);
      series.push_back({k, k * config.dt, fidelity_pure(rho, psi), concurrence(rho)});
    }
    return series;
  };
  return run_weighted(initial_states_for(config), runner);
}

std::vector<TimeSeriesRecord> run_qec(const ScenarioConfig& config) {
  if (config.mode != ScenarioConfig::Mode::QecLogical) {
    throw std::invalid_argument("run_qec: config mode is not qec_logical");
  }
  const Code& code = default_code();
  if (config.bath.n_physical != code.layout().n_physical()) {
    throw std::invalid_argument("run_qec: bath register must cover the six code qubits");
  }
  if (!(config.T > 0.0) || config.n_steps < 1) {
    throw std::invalid_argument("run_qec: need T > 0 and n_steps >= 1");
  }

  // The damping clock restarts every cycle, so one factor table serves all.
  const Matrix factors = evolution_factors(config.bath, config.T);

  auto runner = [&](const Vector& psi) {
    Matrix rho_p = code.encode(density_from_pure(psi));
    std::vector<TimeSeriesRecord> series;
    series.reserve(static_cast<size_t>(config.n_steps) + 1);
    series.push_back({0, 0.0, 1.0, concurrence(density_from_pure(psi))});
    for (int k = 1; k <= config.n_steps; ++k) {
      rho_p = code.qec_cycle_with_factors(rho_p, factors);
      const Matrix rho_l = code.decode(rho_p);
      series.push_back({k, k * config.T, fidelity_pure(rho_l, psi), concurrence(rho_l)});
    }
    return series;
  };
  return run_weighted(initial_states_for(config), runner);
}

std::vector<KrausSweepRow> sweep_kraus_weights(const BathSpec& bath,
                                               const std::vector<double>& t_grid) {
  std::vector<KrausSweepRow> rows;
  rows.reserve(t_grid.size());
  for (double t : t_grid) {
    const LogicalChannel ch = logical_channel(bath, t);
    rows.push_back({t, fit_seven_kraus(chi_in_x_basis(ch))});
  }
  return rows;
}

std::vector<TimeSeriesRecord> average_over_states(
    const InitialStateFamily& family,
    const std::function<std::vector<TimeSeriesRecord>(const Vector&)>& runner) {
  return run_weighted(family_states(family), runner);
}

// ---------------------------------------------------------------------------
// Output

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: LF line endings everywhere
  if (!out) {
    throw std::runtime_error("cannot open output file '" + path + "'");
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

void emit_csv(const std::vector<TimeSeriesRecord>& records, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "step,time,fidelity,concurrence\n";
  for (const auto& r : records) {
    out << r.step << ',' << fmt(r.time) << ',' << fmt(r.fidelity) << ','
        << fmt(r.concurrence) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void emit_csv(const std::vector<KrausSweepRow>& rows, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "T,m0,m1,m2,m3,m4,m5,m6_abs,m6_sign,residual\n";
  for (const auto& r : rows) {
    out << fmt(r.T) << ',' << fmt(r.fit.m0) << ',' << fmt(r.fit.m1) << ','
        << fmt(r.fit.m2) << ',' << fmt(r.fit.m3) << ',' << fmt(r.fit.m4) << ','
        << fmt(r.fit.m5) << ',' << fmt(r.fit.m6_abs) << ',' << r.fit.m6_sign << ','
        << fmt(r.fit.residual) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

namespace {

struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;
};

void write_svg(const std::vector<SvgSeries>& series, const std::string& x_label,
               const std::string& path) {
  const double width = 720, height = 440;
  const double left = 60, right = 20, top = 20, bottom = 50;

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool first = true;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (first) {
        x_min = x_max = x;
        y_max = y;
        first = false;
      }
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_max = std::max(y_max, y);
    }
  }
  if (x_max <= x_min) x_max = x_min + 1;
  y_max = std::max(y_max, 1.0);

  auto px = [&](double x) {
    return left + (x - x_min) / (x_max - x_min) * (width - left - right);
  };
  auto py = [&](double y) {
    return height - bottom - (y - y_min) / (y_max - y_min) * (height - top - bottom);
  };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
  };

  std::ofstream out = open_output(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Axes
  out << "<line x1=\"" << num(left) << "\" y1=\"" << num(height - bottom) << "\" x2=\""
      << num(width - right) << "\" y2=\"" << num(height - bottom)
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left)
      << "\" y2=\"" << num(height - bottom) << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << num((left + width - right) / 2) << "\" y=\""
      << num(height - 12) << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
  for (double frac : {0.0, 0.5, 1.0}) {
    const double y = y_min + frac * (y_max - y_min);
    out << "<text x=\"" << num(left - 8) << "\" y=\"" << num(py(y) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(y) << "</text>\n";
    const double x = x_min + frac * (x_max - x_min);
    out << "<text x=\"" << num(px(x)) << "\" y=\"" << num(height - bottom + 16)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(x) << "</text>\n";
  }
  // Series and legend
  double legend_y = top + 10;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : s.points) {
      out << num(px(x)) << ',' << num(py(y)) << ' ';
    }
    out << "\"/>\n";
    out << "<line x1=\"" << num(width - 150) << "\" y1=\"" << num(legend_y) << "\" x2=\""
        << num(width - 125) << "\" y2=\"" << num(legend_y) << "\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(width - 118) << "\" y=\"" << num(legend_y + 4)
        << "\" font-size=\"12\">" << s.label << "</text>\n";
    legend_y += 16;
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace

void emit_svg(const std::vector<TimeSeriesRecord>& records, const std::string& path) {
  SvgSeries fid{"fidelity", "#1f77b4", {}};
  SvgSeries con{"concurrence", "#ff7f0e", {}};
  for (const auto& r : records) {
    fid.points.emplace_back(r.time, r.fidelity);
    con.points.emplace_back(r.time, r.concurrence);
  }
  write_svg({fid, con}, "time", path);
}

void emit_svg(const std::vector<KrausSweepRow>& rows, const std::string& path) {
  const char* labels[7] = {"m0", "m1", "m2", "m3", "m4", "m5", "m6"};
  const char* colors[7] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                           "#9467bd", "#8c564b", "#e377c2"};
  std::vector<SvgSeries> series;
  for (int i = 0; i < 7; ++i) series.push_back({labels[i], colors[i], {}});
  for (const auto& r : rows) {
    const double w[7] = {r.fit.m0, r.fit.m1, r.fit.m2, r.fit.m3,
                         r.fit.m4, r.fit.m5, r.fit.m6_abs};
    for (int i = 0; i < 7; ++i) series[static_cast<size_t>(i)].points.emplace_back(r.T, w[i]);
  }
  write_svg(series, "cycle period T", path);
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const char* where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* k) { return key == k; }) == allowed.end()) {
      throw std::invalid_argument(std::string("config: unknown key '") + key + "' in " + where);
    }
  }
}

Eigen::MatrixXd matrix_from_json(const json& j, int n, const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    throw std::invalid_argument(std::string("config: ") + name + " must be a " +
                                std::to_string(n) + "x" + std::to_string(n) + " array");
  }
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r) {
    const json& row = j.at(static_cast<size_t>(r));
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw std::invalid_argument(std::string("config: ") + name + " rows must have " +
                                  std::to_string(n) + " entries");
    }
    for (int c = 0; c < n; ++c) m(r, c) = row.at(static_cast<size_t>(c)).get<double>();
  }
  return m;
}

InitialStateFamily family_from_json(const json& j) {
  reject_unknown_keys(j, {"theta", "scheme", "nodes", "samples", "seed", "angles"}, "initial.family");
  InitialStateFamily f;
  f.theta = j.at("theta").get<double>();
  const std::string scheme = j.value("scheme", "quadrature");
  if (scheme == "quadrature") {
    f.scheme = InitialStateFamily::Scheme::Quadrature;
    f.n_nodes = j.value("nodes", 4);
    if (f.n_nodes < 1) throw std::invalid_argument("config: family nodes must be >= 1");
  } else if (scheme == "monte_carlo") {
    f.scheme = InitialStateFamily::Scheme::MonteCarlo;
    f.n_samples = j.value("samples", 256);
    f.seed = j.value("seed", std::uint64_t{1});
    if (f.n_samples < 1) throw std::invalid_argument("config: family samples must be >= 1");
  } else if (scheme == "fixed") {
    f.scheme = InitialStateFamily::Scheme::Fixed;
    for (const auto& tuple : j.at("angles")) {
      if (!tuple.is_array() || tuple.size() != 4) {
        throw std::invalid_argument("config: family angles entries are [theta1, theta2, phi1, phi2]");
      }
      f.fixed_angles.push_back({tuple.at(0).get<double>(), tuple.at(1).get<double>(),
                                tuple.at(2).get<double>(), tuple.at(3).get<double>()});
    }
  } else {
    throw std::invalid_argument("config: unknown family scheme '" + scheme + "'");
  }
  return f;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const json& j) try {
  if (!j.is_object()) {
    throw std::invalid_argument("config: top level must be a JSON object");
  }
  reject_unknown_keys(j, {"mode", "bath", "T", "dt", "n_steps", "initial", "outputs"},
                      "the top level");

  ScenarioConfig config;
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "no_qec_physical") {
    config.mode = Mode::NoQecPhysical;
  } else if (mode == "qec_logical") {
    config.mode = Mode::QecLogical;
  } else if (mode == "kraus_sweep") {
    config.mode = Mode::KrausSweep;
  } else {
    throw std::invalid_argument("config: unknown mode '" + mode + "'");
  }
  const int n_default = (config.mode == Mode::NoQecPhysical) ? 2 : 6;

  if (j.contains("bath")) {
    const json& b = j.at("bath");
    reject_unknown_keys(b, {"n", "v", "gamma_rate"}, "bath");
    const int n = b.value("n", n_default);
    // v and gamma_rate each take a scalar (expanded to the uniform matrix,
    // v with zero diagonal) or a full n x n array.
    const BathSpec uni = BathSpec::uniform(n, 1.0, 0.1);
    Eigen::MatrixXd v = uni.v_coupling;
    Eigen::MatrixXd gd = uni.gamma_rate;
    if (b.contains("v")) {
      const json& jv = b.at("v");
      v = jv.is_number() ? BathSpec::uniform(n, jv.get<double>(), 0.0).v_coupling
                         : matrix_from_json(jv, n, "v");
    }
    if (b.contains("gamma_rate")) {
      const json& jg = b.at("gamma_rate");
      gd = jg.is_number() ? Eigen::MatrixXd::Constant(n, n, jg.get<double>()).eval()
                          : matrix_from_json(jg, n, "gamma_rate");
    }
    config.bath = BathSpec(n, std::move(gd), std::move(v));
  } else {
    config.bath = BathSpec::uniform(n_default, 1.0, 0.1);
  }

  if (config.mode == Mode::NoQecPhysical) {
    config.dt = j.at("dt").get<double>();
  } else {
    config.T = j.at("T").get<double>();
  }
  config.n_steps = j.at("n_steps").get<int>();

  if (j.contains("initial")) {
    const json& init = j.at("initial");
    reject_unknown_keys(init, {"state", "family", "average"}, "initial");
    if (init.size() != 1) {
      throw std::invalid_argument("config: initial takes exactly one of state/family/average");
    }
    if (init.contains("state")) {
      config.initial_kind = InitialKind::NamedState;
      config.initial_state = init.at("state").get<std::string>();
      named_state(config.initial_state);  // validate the name up front
    } else if (init.contains("family")) {
      config.initial_kind = InitialKind::Family;
      config.family = family_from_json(init.at("family"));
    } else {
      if (init.at("average").get<std::string>() != "x_products") {
        throw std::invalid_argument("config: the only named average is 'x_products'");
      }
      config.initial_kind = InitialKind::XProductAverage;
    }
  } else if (config.mode == Mode::NoQecPhysical) {
    config.initial_kind = InitialKind::XProductAverage;
  }

  if (j.contains("outputs")) {
    const json& o = j.at("outputs");
    reject_unknown_keys(o, {"csv", "svg"}, "outputs");
    config.csv_path = o.value("csv", "");
    config.svg_path = o.value("svg", "");
  }
  return config;
} catch (const json::exception& e) {
  // Missing keys and type mismatches are config errors like any other.
  throw std::invalid_argument(std::string("config: ") + e.what());
}

ScenarioConfig ScenarioConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("config: cannot open '" + path + "'");
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: " + path + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

// ---------------------------------------------------------------------------
// Baked-in figure scenarios

ScenarioConfig fig1_config() {
  ScenarioConfig c;
  c.mode = ScenarioConfig::Mode::NoQecPhysical;
  c.bath = BathSpec::uniform(2, 1.0, 0.1);
  c.dt = std::numbers::pi / 400.0;
  c.n_steps = 400;
  c.initial_kind = ScenarioConfig::InitialKind::XProductAverage;
  c.csv_path = "fig1.csv";
  c.svg_path = "fig1.svg";
  return c;
}

ScenarioConfig fig2_config() {
  ScenarioConfig c;
  c.mode = ScenarioConfig::Mode::KrausSweep;
  c.bath = BathSpec::uniform(6, 1.0, 0.1);
  c.T = std::numbers::pi / 2.0;
  c.n_steps = 40;
  c.csv_path = "fig2.csv";
  c.svg_path = "fig2.svg";
  return c;
}

ScenarioConfig fig3_config() {
  ScenarioConfig c;
  c.mode = ScenarioConfig::Mode::QecLogical;
  c.bath = BathSpec::uniform(6, 1.0, 0.1);
  c.T = std::numbers::pi / 4.0;
  c.n_steps = 12;
  c.initial_kind = ScenarioConfig::InitialKind::Family;
  c.family.theta = 0.0;
  c.family.scheme = InitialStateFamily::Scheme::Quadrature;
  c.family.n_nodes = 4;
  c.csv_path = "fig3.csv";
  c.svg_path = "fig3.svg";
  return c;
}

void run_scenario(const ScenarioConfig& config) {
  if (config.mode == ScenarioConfig::Mode::KrausSweep) {
    if (!(config.T > 0.0) || config.n_steps < 1) {
      throw std::invalid_argument("run_scenario: sweep needs T > 0 and n_steps >= 1");
    }
    std::vector<double> grid;
    grid.reserve(static_cast<size_t>(config.n_steps));
    for (int k = 1; k <= config.n_steps; ++k) {
      grid.push_back(config.T * k / config.n_steps);
    }
    const auto rows = sweep_kraus_weights(config.bath, grid);
    if (!config.csv_path.empty()) emit_csv(rows, config.csv_path);
    if (!config.svg_path.empty()) emit_svg(rows, config.svg_path);
    return;
  }

  const auto records = (config.mode == ScenarioConfig::Mode::NoQecPhysical)
                           ? run_no_qec(config)
                           : run_qec(config);
  if (!config.csv_path.empty()) emit_csv(records, config.csv_path);
  if (!config.svg_path.empty()) emit_svg(records, config.svg_path);
}

}  // namespace corrqec
