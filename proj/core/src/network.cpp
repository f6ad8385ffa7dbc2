#include "tspower/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "dense_lu.hpp"
#include "tspower/errors.hpp"

namespace tspower {

namespace {

struct DisjointSet {
  std::vector<std::size_t> parent;

  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

const char* to_string(BranchKind kind) noexcept {
  switch (kind) {
    case BranchKind::resistor: return "resistor";
    case BranchKind::inductor: return "inductor";
    case BranchKind::capacitor: return "capacitor";
  }
  return "";
}

Netlist::Netlist(std::vector<Branch> branches, Port port)
    : branches_(std::move(branches)), port_(std::move(port)) {
  if (port_.plus.empty() || port_.ground.empty()) {
    throw std::invalid_argument("port nodes must be named");
  }
  if (port_.plus == port_.ground) throw std::invalid_argument("port plus and ground must differ");

  std::unordered_set<std::string> ids;
  std::unordered_map<std::string, std::size_t> all_nodes;
  auto intern = [&](const std::string& label) {
    return all_nodes.try_emplace(label, all_nodes.size()).first->second;
  };
  for (const auto& b : branches_) {
    if (!ids.insert(b.id).second) throw std::invalid_argument("duplicate branch id '" + b.id + "'");
    if (!std::isfinite(b.value) || b.value <= 0.0) {
      throw std::invalid_argument("branch '" + b.id + "' value must be finite and > 0");
    }
    if (b.node_a.empty() || b.node_b.empty()) {
      throw std::invalid_argument("branch '" + b.id + "' has an empty node label");
    }
    if (b.node_a == b.node_b) {
      throw std::invalid_argument("branch '" + b.id + "' connects node '" + b.node_a + "' to itself");
    }
    for (const auto* label : {&b.node_a, &b.node_b}) {
      const bool fresh = !all_nodes.contains(*label);
      intern(*label);
      if (fresh && *label != port_.ground) nodes_.push_back(*label);
    }
  }
  if (!all_nodes.contains(port_.plus)) {
    throw std::invalid_argument("port node '" + port_.plus + "' is not used by any branch");
  }
  if (!all_nodes.contains(port_.ground)) {
    throw std::invalid_argument("ground node '" + port_.ground + "' is not used by any branch");
  }

  DisjointSet sets(all_nodes.size());
  sets.unite(all_nodes.at(port_.plus), all_nodes.at(port_.ground));
  for (const auto& b : branches_) sets.unite(all_nodes.at(b.node_a), all_nodes.at(b.node_b));
  const auto root = sets.find(all_nodes.at(port_.ground));
  for (const auto& [label, index] : all_nodes) {
    if (sets.find(index) != root) {
      throw std::invalid_argument("node '" + label + "' is not connected to the port");
    }
  }
}

int Netlist::node_index(const std::string& label) const {
  if (label == port_.ground) return -1;
  const auto it = std::find(nodes_.begin(), nodes_.end(), label);
  if (it == nodes_.end()) throw std::out_of_range("unknown node '" + label + "'");
  return static_cast<int>(it - nodes_.begin());
}

std::size_t Netlist::count(BranchKind kind) const {
  return static_cast<std::size_t>(std::count_if(branches_.begin(), branches_.end(),
                                                [kind](const Branch& b) { return b.kind == kind; }));
}

BranchPhasors solve_frequency(const Netlist& net, double omega, Complex v_port) {
  if (!(omega >= 0.0)) throw std::invalid_argument("solve_frequency requires omega >= 0");

  const auto& branches = net.branches();
  const std::size_t nodes = net.nodes().size();
  std::vector<int> a_index(branches.size()), b_index(branches.size());
  std::vector<std::size_t> inductor_slot(branches.size(), 0);
  std::size_t inductors = 0;
  for (std::size_t k = 0; k < branches.size(); ++k) {
    a_index[k] = net.node_index(branches[k].node_a);
    b_index[k] = net.node_index(branches[k].node_b);
    if (branches[k].kind == BranchKind::inductor) inductor_slot[k] = nodes + inductors++;
  }
  const std::size_t source_slot = nodes + inductors;
  const std::size_t n = source_slot + 1;

  std::vector<Complex> m(n * n);
  std::vector<Complex> rhs(n);
  auto at = [&](std::size_t r, std::size_t c) -> Complex& { return m[r * n + c]; };
  const Complex jw(0.0, omega);

  for (std::size_t k = 0; k < branches.size(); ++k) {
    const auto& br = branches[k];
    const int a = a_index[k];
    const int b = b_index[k];
    if (br.kind == BranchKind::inductor) {
      // Branch current is an unknown; the row enforces v_a - v_b = jwL i.
      const std::size_t slot = inductor_slot[k];
      if (a >= 0) {
        at(a, slot) += 1.0;
        at(slot, a) += 1.0;
      }
      if (b >= 0) {
        at(b, slot) -= 1.0;
        at(slot, b) -= 1.0;
      }
      at(slot, slot) -= jw * br.value;
      continue;
    }
    const Complex y = br.kind == BranchKind::resistor ? Complex(1.0 / br.value) : jw * br.value;
    if (a >= 0) at(a, a) += y;
    if (b >= 0) at(b, b) += y;
    if (a >= 0 && b >= 0) {
      at(a, b) -= y;
      at(b, a) -= y;
    }
  }
  const auto plus = static_cast<std::size_t>(net.node_index(net.port().plus));
  at(plus, source_slot) -= 1.0;  // source current enters the plus node
  at(source_slot, plus) += 1.0;
  rhs[source_slot] = v_port;

  const auto lu = detail::DenseLu<Complex>::factor(m, n, kSingularPivotRatio);
  if (!lu) {
    std::ostringstream msg;
    msg << "singular network at omega = " << omega << " rad/s";
    throw SingularNetwork(omega, msg.str());
  }
  auto x = lu->solve(rhs);
  detail::refine(*lu, m, n, rhs, x);

  BranchPhasors out;
  out.omega = omega;
  out.port_voltage = v_port;
  out.port_current = x[source_slot];
  out.voltage.resize(branches.size());
  out.current.resize(branches.size());
  for (std::size_t k = 0; k < branches.size(); ++k) {
    const Complex va = a_index[k] >= 0 ? x[static_cast<std::size_t>(a_index[k])] : Complex{};
    const Complex vb = b_index[k] >= 0 ? x[static_cast<std::size_t>(b_index[k])] : Complex{};
    const Complex v = va - vb;
    out.voltage[k] = v;
    switch (branches[k].kind) {
      case BranchKind::resistor: out.current[k] = v / branches[k].value; break;
      case BranchKind::capacitor: out.current[k] = jw * branches[k].value * v; break;
      case BranchKind::inductor: out.current[k] = x[inductor_slot[k]]; break;
    }
  }
  return out;
}

Complex driving_point_admittance(const Netlist& net, double omega) {
  return solve_frequency(net, omega, Complex(1.0, 0.0)).port_current;
}

NetworkSolution::NetworkSolution(Netlist net, LineSpectrum source,
                                 std::vector<BranchPhasors> per_line)
    : net_(std::move(net)), source_(std::move(source)), per_line_(std::move(per_line)) {
  const std::size_t nb = net_.branches().size();
  std::vector<std::pair<std::int64_t, Complex>> port_terms;
  std::vector<std::vector<std::pair<std::int64_t, Complex>>> v_terms(nb), i_terms(nb);
  for (std::size_t k = 0; k < per_line_.size(); ++k) {
    const auto n = source_.harmonic(k);
    const auto& ph = per_line_[k];
    port_terms.emplace_back(n, ph.port_current);
    for (std::size_t b = 0; b < nb; ++b) {
      v_terms[b].emplace_back(n, ph.voltage[b]);
      i_terms[b].emplace_back(n, ph.current[b]);
    }
  }
  const double base = source_.base_omega();
  port_current_ = LineSpectrum::from_harmonics(base, port_terms, Unit::ampere);
  for (std::size_t b = 0; b < nb; ++b) {
    branch_voltage_.push_back(LineSpectrum::from_harmonics(base, v_terms[b], Unit::volt));
    branch_current_.push_back(LineSpectrum::from_harmonics(base, i_terms[b], Unit::ampere));
  }
}

NetworkSolution solve(const Netlist& net, const LineSpectrum& source) {
  if (source.unit() != Unit::volt && source.unit() != Unit::none) {
    throw std::invalid_argument("port source must be a voltage");
  }
  std::vector<BranchPhasors> per_line;
  per_line.reserve(source.size());
  for (const auto& line : source.lines()) {
    per_line.push_back(solve_frequency(net, line.omega, line.amplitude));
  }
  return NetworkSolution(net, source.with_unit(Unit::volt), std::move(per_line));
}

}  // namespace tspower
