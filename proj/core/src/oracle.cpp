#include "tspower/oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "dense_lu.hpp"

namespace tspower::oracle {

namespace {

// Companion-model transient stepper. Every reactive branch becomes a
// conductance g plus a history current source; resistors are plain
// conductances. Unknowns are node voltages followed by the source current.
class TransientStepper {
 public:
  TransientStepper(const Netlist& net, double h, bool trapezoidal)
      : net_(net), h_(h), trapezoidal_(trapezoidal) {
    const auto& branches = net.branches();
    nodes_ = net.nodes().size();
    n_ = nodes_ + 1;
    a_.resize(branches.size());
    b_.resize(branches.size());
    g_.resize(branches.size());
    for (std::size_t k = 0; k < branches.size(); ++k) {
      a_[k] = net.node_index(branches[k].node_a);
      b_[k] = net.node_index(branches[k].node_b);
      const double value = branches[k].value;
      switch (branches[k].kind) {
        case BranchKind::resistor: g_[k] = 1.0 / value; break;
        case BranchKind::capacitor: g_[k] = (trapezoidal ? 2.0 : 1.0) * value / h; break;
        case BranchKind::inductor: g_[k] = (trapezoidal ? 0.5 : 1.0) * h / value; break;
      }
    }
    plus_ = static_cast<std::size_t>(net.node_index(net.port().plus));

    matrix_.assign(n_ * n_, 0.0);
    auto at = [&](std::size_t r, std::size_t c) -> double& { return matrix_[r * n_ + c]; };
    for (std::size_t k = 0; k < branches.size(); ++k) {
      const int a = a_[k];
      const int b = b_[k];
      if (a >= 0) at(a, a) += g_[k];
      if (b >= 0) at(b, b) += g_[k];
      if (a >= 0 && b >= 0) {
        at(a, b) -= g_[k];
        at(b, a) -= g_[k];
      }
    }
    at(plus_, nodes_) -= 1.0;
    at(nodes_, plus_) += 1.0;
    auto lu = detail::DenseLu<double>::factor(matrix_, n_, kSingularPivotRatio);
    if (!lu) throw std::runtime_error("transient companion matrix is singular");
    lu_ = std::move(*lu);
  }

  // Branch voltages and currents at the current time, in branch order.
  struct BranchState {
    std::vector<double> v;
    std::vector<double> i;
    double port_current = 0.0;
  };

  /// Advances `state` by one step to source voltage `u_next`.
  void step(BranchState& state, double u_next) const {
    const auto& branches = net_.branches();
    // History term: i_next = g v_next + hist.
    std::vector<double> hist(branches.size(), 0.0);
    for (std::size_t k = 0; k < branches.size(); ++k) {
      switch (branches[k].kind) {
        case BranchKind::resistor: break;
        case BranchKind::capacitor:
          hist[k] = trapezoidal_ ? -g_[k] * state.v[k] - state.i[k] : -g_[k] * state.v[k];
          break;
        case BranchKind::inductor:
          hist[k] = trapezoidal_ ? state.i[k] + g_[k] * state.v[k] : state.i[k];
          break;
      }
    }
    std::vector<double> rhs(n_, 0.0);
    for (std::size_t k = 0; k < branches.size(); ++k) {
      if (a_[k] >= 0) rhs[static_cast<std::size_t>(a_[k])] -= hist[k];
      if (b_[k] >= 0) rhs[static_cast<std::size_t>(b_[k])] += hist[k];
    }
    rhs[nodes_] = u_next;
    auto x = lu_.solve(rhs);
    detail::refine(lu_, matrix_, n_, rhs, x);

    for (std::size_t k = 0; k < branches.size(); ++k) {
      const double va = a_[k] >= 0 ? x[static_cast<std::size_t>(a_[k])] : 0.0;
      const double vb = b_[k] >= 0 ? x[static_cast<std::size_t>(b_[k])] : 0.0;
      state.v[k] = va - vb;
      state.i[k] = g_[k] * state.v[k] + hist[k];
    }
    state.port_current = x[nodes_];
  }

 private:
  const Netlist& net_;
  double h_;
  bool trapezoidal_;
  std::size_t nodes_ = 0;
  std::size_t n_ = 0;
  std::size_t plus_ = 0;
  std::vector<int> a_, b_;
  std::vector<double> g_;
  std::vector<double> matrix_;
  detail::DenseLu<double> lu_;
};

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

OdeResult ode_steady_state(const Netlist& net, const LineSpectrum& source, std::size_t periods,
                           const OdeOptions& options) {
  if (periods < 10) throw std::invalid_argument("ode_steady_state needs at least 10 periods");
  if (options.steps_per_period < 2 || options.startup_substeps < 1) {
    throw std::invalid_argument("invalid step counts");
  }
  const double period = source.common_period() > 0.0 ? source.common_period() : 2.0 * std::numbers::pi;
  const std::size_t steps = options.steps_per_period;
  const double h = period / static_cast<double>(steps);

  OdeResult result;
  if (net.count(BranchKind::resistor) == 0) {
    result.warning = "network has no resistors; transients may persist";
  }

  const std::size_t nb = net.branches().size();
  TransientStepper::BranchState state{std::vector<double>(nb, 0.0), std::vector<double>(nb, 0.0), 0.0};

  // Start-up: backward Euler over the first step absorbs any inconsistency
  // between the rest state and u(0).
  {
    const double sub = h / static_cast<double>(options.startup_substeps);
    const TransientStepper euler(net, sub, false);
    for (std::size_t k = 1; k <= options.startup_substeps; ++k) {
      euler.step(state, evaluate(source, static_cast<double>(k) * sub));
    }
  }

  const TransientStepper trap(net, h, true);
  std::vector<double> previous(steps);
  std::size_t step_index = 1;  // state is at t = h

  // Walk step by step, recording the port current at the start of every
  // step of the final periods.
  std::size_t periods_done = 0;
  std::size_t target = periods;
  double change = 0.0;
  std::vector<double> record(steps);
  record[1 % steps] = state.port_current;
  for (;;) {
    // Complete the current period.
    while (step_index < (periods_done + 1) * steps) {
      ++step_index;
      trap.step(state, evaluate(source, static_cast<double>(step_index) * h));
      record[step_index % steps] = state.port_current;
    }
    ++periods_done;
    // record now holds samples for t in (periods_done-1)*T + h .. periods_done*T,
    // with index 0 at t = periods_done * T.
    if (periods_done >= target) {
      if (options.settle_tolerance <= 0.0) break;
      double peak = 0.0;
      change = 0.0;
      for (std::size_t j = 0; j < steps; ++j) {
        peak = std::max(peak, std::abs(record[j]));
        change = std::max(change, std::abs(record[j] - previous[j]));
      }
      if (change <= options.settle_tolerance * peak) break;
      if (periods_done >= options.max_periods) {
        result.settled = false;
        break;
      }
      target = periods_done + 1;
    }
    previous = record;
  }

  // Samples at t = k h for k = 0..steps-1 relative to the start of the final
  // period; index 0 is the sample at the end of the previous period, which
  // equals the end of this one for a periodic solution.
  result.port_current.t0 = static_cast<double>(periods_done - 1) * period;
  result.port_current.dt = h;
  result.port_current.samples = record;
  result.periods_run = periods_done;

  result.final_state.time = static_cast<double>(step_index) * h;
  for (std::size_t k = 0; k < nb; ++k) {
    const auto kind = net.branches()[k].kind;
    if (kind == BranchKind::inductor) result.final_state.inductor_currents.push_back(state.i[k]);
    if (kind == BranchKind::capacitor) result.final_state.capacitor_voltages.push_back(state.v[k]);
  }
  return result;
}

SampledSignal fft_hilbert(const SampledSignal& x) {
  const std::size_t n = x.samples.size();
  if (!is_power_of_two(n)) throw std::invalid_argument("fft_hilbert needs a power-of-two length");

  auto* buffer = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  fftw_plan forward, backward;
  {
    std::lock_guard lock(fftw_planner_mutex());
    forward = fftw_plan_dft_1d(static_cast<int>(n), buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_dft_1d(static_cast<int>(n), buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  for (std::size_t k = 0; k < n; ++k) {
    buffer[k][0] = x.samples[k];
    buffer[k][1] = 0.0;
  }
  fftw_execute(forward);
  for (std::size_t k = 1; k < n; ++k) {
    const double weight = k < n / 2 ? 2.0 : (k == n / 2 ? 1.0 : 0.0);
    buffer[k][0] *= weight;
    buffer[k][1] *= weight;
  }
  fftw_execute(backward);

  SampledSignal out{x.t0, x.dt, std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) out.samples[k] = buffer[k][1] / static_cast<double>(n);

  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  fftw_free(buffer);
  return out;
}

QuadratureResult quadrature_analytic(const LineSpectrum& f, ComplexTimePoint p,
                                     const QuadratureConfig& cfg) {
  if (!(p.s > 0.0)) throw std::invalid_argument("quadrature_analytic needs s > 0");
  if (cfg.panels < 2 || cfg.panels % 2 != 0) {
    throw std::invalid_argument("Simpson panel count must be even and >= 2");
  }
  if (!(cfg.half_width > 0.0)) throw std::invalid_argument("window half-width must be > 0");

  const Complex tau(p.t, p.s);
  const double a = p.t - cfg.half_width;
  const double step = 2.0 * cfg.half_width / static_cast<double>(cfg.panels);
  auto integrand = [&](double t_prime) { return evaluate(f, t_prime) / (tau - t_prime); };

  Complex sum = integrand(a) + integrand(a + 2.0 * cfg.half_width);
  for (std::size_t k = 1; k < cfg.panels; ++k) {
    sum += (k % 2 == 1 ? 4.0 : 2.0) * integrand(a + static_cast<double>(k) * step);
  }
  QuadratureResult out;
  out.value = Complex(0.0, 1.0 / std::numbers::pi) * sum * (step / 3.0);

  // Tail outside the window: the constant part loses 2 atan(s/W)/pi exactly;
  // each tone contributes at most ~4|A|/(pi w W) after integrating by parts.
  double tail = 2.0 * std::abs(f.dc()) * std::atan(p.s / cfg.half_width) / std::numbers::pi;
  for (const auto& line : f.lines()) {
    if (line.omega > 0.0) {
      tail += 4.0 * std::abs(line.amplitude) / (std::numbers::pi * line.omega * cfg.half_width);
    }
  }
  out.truncation_estimate = tail;
  return out;
}

double numeric_mean(const SampledSignal& x) {
  if (x.samples.empty()) throw std::invalid_argument("numeric_mean of an empty signal");
  // Trapezoid over a periodic window: endpoint weights fold onto sample 0.
  double sum = 0.0;
  for (double v : x.samples) sum += v;
  return sum * x.dt / (static_cast<double>(x.samples.size()) * x.dt);
}

}  // namespace tspower::oracle
