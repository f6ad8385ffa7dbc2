#pragma once

// Single-port linear RLC load driven by one ideal voltage source at the port,
// solved line by line with modified nodal analysis.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tspower/spectrum.hpp"

namespace tspower {

enum class BranchKind { resistor, inductor, capacitor };

const char* to_string(BranchKind kind) noexcept;

/// Voltage is v(node_a) - v(node_b); current flows from node_a to node_b
/// through the element.
struct Branch {
  std::string id;
  BranchKind kind = BranchKind::resistor;
  double value = 0.0;  // ohm, henry or farad
  std::string node_a;
  std::string node_b;
};

struct Port {
  std::string plus;
  std::string ground;
};

/// Validated, immutable netlist.
class Netlist {
 public:
  /// Throws std::invalid_argument when a value is not finite and positive, a
  /// branch shorts a node to itself, ids repeat, the port nodes are missing
  /// or equal, or the graph (branches plus port) is not connected.
  Netlist(std::vector<Branch> branches, Port port);

  const std::vector<Branch>& branches() const { return branches_; }
  const Port& port() const { return port_; }

  /// Non-ground nodes, in first-appearance order.
  const std::vector<std::string>& nodes() const { return nodes_; }

  /// Index into nodes(), or -1 for ground.
  int node_index(const std::string& label) const;

  std::size_t count(BranchKind kind) const;

 private:
  std::vector<Branch> branches_;
  Port port_;
  std::vector<std::string> nodes_;
};

/// Phasor solution at one frequency. Port current flows out of the source's
/// plus terminal into the network, so V * conj(I) / 2 is absorbed power.
struct BranchPhasors {
  double omega = 0.0;
  Complex port_voltage{};
  Complex port_current{};
  std::vector<Complex> voltage;  // per branch
  std::vector<Complex> current;  // per branch
};

/// Pivot magnitude below this fraction of the largest matrix entry marks the
/// system singular.
inline constexpr double kSingularPivotRatio = 1e-12;

BranchPhasors solve_frequency(const Netlist& net, double omega, Complex v_port);

/// Port current phasor for a unit port voltage.
Complex driving_point_admittance(const Netlist& net, double omega);

class NetworkSolution {
 public:
  NetworkSolution(Netlist net, LineSpectrum source, std::vector<BranchPhasors> per_line);

  const Netlist& netlist() const { return net_; }
  const LineSpectrum& source() const { return source_; }
  const std::vector<BranchPhasors>& per_line() const { return per_line_; }

  const LineSpectrum& port_voltage() const { return source_; }
  const LineSpectrum& port_current() const { return port_current_; }
  const LineSpectrum& branch_voltage(std::size_t b) const { return branch_voltage_[b]; }
  const LineSpectrum& branch_current(std::size_t b) const { return branch_current_[b]; }

 private:
  Netlist net_;
  LineSpectrum source_;
  std::vector<BranchPhasors> per_line_;
  LineSpectrum port_current_;
  std::vector<LineSpectrum> branch_voltage_;
  std::vector<LineSpectrum> branch_current_;
};

/// One solve_frequency per source line, assembled into waveforms. The
/// source must carry Unit::volt or Unit::none.
NetworkSolution solve(const Netlist& net, const LineSpectrum& source);

}  // namespace tspower
