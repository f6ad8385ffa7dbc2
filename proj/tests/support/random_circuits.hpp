#pragma once

// Seeded generators for random RLC netlists and commensurate sources.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "tspower/errors.hpp"
#include "tspower/network.hpp"
#include "tspower/spectrum.hpp"

namespace tspower::testing {

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

inline BranchKind random_kind(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 2);
  return static_cast<BranchKind>(pick(rng));
}

/// Connected netlist with at most `max_branches` branches on 2..5 nodes,
/// element values log-uniform in [lo, hi].
inline Netlist random_netlist(std::mt19937_64& rng, std::size_t max_branches = 10,
                              double lo = 1e-2, double hi = 1e2) {
  std::uniform_int_distribution<std::size_t> node_count(2, 5);
  const std::size_t nodes = node_count(rng);
  std::vector<std::string> labels{"0", "p"};
  for (std::size_t k = 2; k < nodes; ++k) labels.push_back("n" + std::to_string(k));

  std::vector<Branch> branches;
  auto add = [&](const std::string& a, const std::string& b) {
    branches.push_back({"B" + std::to_string(branches.size()), random_kind(rng),
                        log_uniform(rng, lo, hi), a, b});
  };
  // Spanning tree first so the graph is connected.
  for (std::size_t k = 1; k < nodes; ++k) {
    std::uniform_int_distribution<std::size_t> parent(0, k - 1);
    add(labels[k], labels[parent(rng)]);
  }
  const std::size_t min_total = std::max<std::size_t>(nodes - 1, 1);
  std::uniform_int_distribution<std::size_t> total(min_total, std::max(min_total, max_branches));
  const std::size_t target = total(rng);
  std::uniform_int_distribution<std::size_t> any(0, nodes - 1);
  while (branches.size() < target) {
    const auto a = any(rng);
    const auto b = any(rng);
    if (a != b) add(labels[a], labels[b]);
  }
  return Netlist(std::move(branches), Port{"p", "0"});
}

/// Netlist whose every reactive element sits in series with a resistor, so
/// all natural modes that carry port current decay.
inline Netlist random_dissipative_netlist(std::mt19937_64& rng, std::size_t elements = 4,
                                          double lo = 0.2, double hi = 5.0) {
  std::vector<std::string> labels{"0", "p"};
  std::vector<Branch> branches;
  std::size_t internal = 0;
  auto element = [&](const std::string& a, const std::string& b) {
    const auto kind = random_kind(rng);
    const auto id = std::to_string(branches.size());
    if (kind == BranchKind::resistor) {
      branches.push_back({"R" + id, kind, log_uniform(rng, lo, hi), a, b});
      return;
    }
    const std::string mid = "m" + std::to_string(internal++);
    branches.push_back({"R" + id, BranchKind::resistor, log_uniform(rng, lo, hi), a, mid});
    branches.push_back({(kind == BranchKind::inductor ? "L" : "C") + id, kind,
                        log_uniform(rng, lo, hi), mid, b});
  };
  std::uniform_int_distribution<int> extra_node(0, 1);
  if (extra_node(rng)) labels.push_back("n2");
  for (std::size_t k = 1; k < labels.size(); ++k) element(labels[k], labels[k - 1]);
  std::uniform_int_distribution<std::size_t> any(0, labels.size() - 1);
  while (branches.size() < 2 * elements) {
    const auto a = any(rng);
    const auto b = any(rng);
    if (a != b) element(labels[a], labels[b]);
  }
  return Netlist(std::move(branches), Port{"p", "0"});
}

struct SourceOptions {
  std::size_t max_lines = 8;
  bool allow_dc = false;
  double base_lo = 0.2;
  double base_hi = 5.0;
  int max_harmonic = 12;
};

/// Commensurate multi-tone voltage with 1..max_lines lines.
inline LineSpectrum random_source(std::mt19937_64& rng, const SourceOptions& opt = {}) {
  const double base = log_uniform(rng, opt.base_lo, opt.base_hi);
  std::uniform_int_distribution<std::size_t> count(1, opt.max_lines);
  std::uniform_int_distribution<int> harmonic(opt.allow_dc ? 0 : 1, opt.max_harmonic);
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  const std::size_t n = count(rng);
  std::vector<int> picked;
  while (picked.size() < n) {
    const int h = harmonic(rng);
    if (std::find(picked.begin(), picked.end(), h) == picked.end()) picked.push_back(h);
  }
  std::vector<SpectralLine> lines;
  for (int h : picked) {
    const double amp = log_uniform(rng, 0.1, 10.0);
    lines.push_back({h * base, h == 0 ? Complex(amp, 0.0) : std::polar(amp, phase(rng))});
  }
  return LineSpectrum(std::move(lines), Unit::volt);
}

/// Drops the DC line when the netlist has no DC operating point.
inline LineSpectrum solvable_source(const Netlist& net, const LineSpectrum& source) {
  if (source.dc() == 0.0) return source;
  try {
    solve_frequency(net, 0.0, Complex(1.0, 0.0));
    return source;
  } catch (const SingularNetwork&) {
    return source - LineSpectrum::constant(source.dc(), Unit::volt);
  }
}

}  // namespace tspower::testing
