/**
 * @file circuit.hpp
 * @brief Gate-level spring-balance circuit: an AND layer (x_i AND s_i) feeding
 *        a full/half-adder tree that outputs the Hamming weight.
 *
 * Wire numbering: wires 0..N-1 carry x_1..x_N, wires N..2N-1 carry s_1..s_N.
 * Every other wire is driven by exactly one gate output.
 */
#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "bsb/bits.hpp"
#include "bsb/errors.hpp"

namespace bsb {

enum class GateKind { and_gate, half_adder, full_adder };

inline std::string_view to_string(GateKind k) {
  switch (k) {
    case GateKind::and_gate: return "AND";
    case GateKind::half_adder: return "HALF_ADDER";
    case GateKind::full_adder: return "FULL_ADDER";
  }
  return "?";
}

inline GateKind parse_gate_kind(std::string_view text) {
  if (text == "AND") return GateKind::and_gate;
  if (text == "HALF_ADDER") return GateKind::half_adder;
  if (text == "FULL_ADDER") return GateKind::full_adder;
  throw NetlistError("unknown gate kind '" + std::string(text) + "'");
}

inline std::size_t gate_arity(GateKind k) {
  switch (k) {
    case GateKind::and_gate: return 2;
    case GateKind::half_adder: return 2;
    case GateKind::full_adder: return 3;
  }
  return 0;
}

inline std::size_t gate_outputs(GateKind k) { return k == GateKind::and_gate ? 1 : 2; }

/// Adders list outputs as (sum, carry).
struct Gate {
  std::size_t id = 0;
  GateKind kind = GateKind::and_gate;
  std::vector<std::size_t> inputs;
  std::vector<std::size_t> outputs;

  friend bool operator==(const Gate&, const Gate&) = default;
};

struct ComponentCount {
  std::size_t and_gates = 0;
  std::size_t full_adders = 0;
  std::size_t half_adders = 0;

  std::size_t total() const noexcept { return and_gates + full_adders + half_adders; }
  friend bool operator==(const ComponentCount&, const ComponentCount&) = default;
};

/// Width of the popcount bus for n inputs: floor(log2 n) + 1.
inline std::size_t output_width(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(std::bit_width(n)); }

class Netlist {
 public:
  /// Validates structure and fixes an evaluation order; throws NetlistError.
  Netlist(std::size_t n, std::vector<Gate> gates, std::vector<std::size_t> output_bus)
      : n_(n), gates_(std::move(gates)), bus_(std::move(output_bus)) {
    if (n_ == 0) throw DomainError("circuit needs at least one input pair");
    validate();
  }

  std::size_t inputs() const noexcept { return n_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  /// Least-significant wire first.
  const std::vector<std::size_t>& output_bus() const noexcept { return bus_; }
  /// Gate indices in dependency order.
  const std::vector<std::size_t>& evaluation_order() const noexcept { return order_; }
  std::size_t wire_count() const noexcept { return wire_count_; }

  static std::size_t x_wire(std::size_t position) { return position - 1; }
  std::size_t s_wire(std::size_t position) const { return n_ + position - 1; }

  friend bool operator==(const Netlist& a, const Netlist& b) {
    return a.n_ == b.n_ && a.gates_ == b.gates_ && a.bus_ == b.bus_;
  }

 private:
  void validate() {
    std::size_t max_wire = 2 * n_;
    for (const auto& g : gates_) {
      if (g.inputs.size() != gate_arity(g.kind) || g.outputs.size() != gate_outputs(g.kind)) {
        throw NetlistError("gate " + std::to_string(g.id) + " has wrong pin count");
      }
      for (auto w : g.outputs) max_wire = std::max(max_wire, w + 1);
      for (auto w : g.inputs) max_wire = std::max(max_wire, w + 1);
    }
    for (auto w : bus_) max_wire = std::max(max_wire, w + 1);
    wire_count_ = max_wire;

    constexpr std::size_t kPrimary = static_cast<std::size_t>(-2);
    constexpr std::size_t kUndriven = static_cast<std::size_t>(-1);
    std::vector<std::size_t> driver(wire_count_, kUndriven);
    for (std::size_t w = 0; w < 2 * n_; ++w) driver[w] = kPrimary;
    for (std::size_t gi = 0; gi < gates_.size(); ++gi) {
      for (auto w : gates_[gi].outputs) {
        if (driver[w] != kUndriven) throw NetlistError("wire " + std::to_string(w) + " has more than one driver");
        driver[w] = gi;
      }
    }

    // Kahn's algorithm over gate dependencies.
    std::vector<std::size_t> pending(gates_.size(), 0);
    std::vector<std::vector<std::size_t>> consumers(gates_.size());
    for (std::size_t gi = 0; gi < gates_.size(); ++gi) {
      for (auto w : gates_[gi].inputs) {
        if (driver[w] == kUndriven) throw NetlistError("wire " + std::to_string(w) + " is never driven");
        if (driver[w] != kPrimary) {
          ++pending[gi];
          consumers[driver[w]].push_back(gi);
        }
      }
    }
    std::queue<std::size_t> ready;
    for (std::size_t gi = 0; gi < gates_.size(); ++gi) {
      if (pending[gi] == 0) ready.push(gi);
    }
    order_.clear();
    while (!ready.empty()) {
      auto gi = ready.front();
      ready.pop();
      order_.push_back(gi);
      for (auto c : consumers[gi]) {
        if (--pending[c] == 0) ready.push(c);
      }
    }
    if (order_.size() != gates_.size()) throw NetlistError("netlist contains a cycle");

    if (bus_.size() != output_width(n_)) {
      throw NetlistError("output bus has " + std::to_string(bus_.size()) + " wires, expected " +
                         std::to_string(output_width(n_)));
    }
    for (auto w : bus_) {
      if (driver[w] == kUndriven) throw NetlistError("output wire " + std::to_string(w) + " is never driven");
    }
  }

  std::size_t n_;
  std::vector<Gate> gates_;
  std::vector<std::size_t> bus_;
  std::vector<std::size_t> order_;
  std::size_t wire_count_ = 0;
};

/// Builds the AND layer and a column-by-column 3:2 compressor tree.
///
/// Weights are processed from the lowest up. While a column holds three or
/// more wires a full adder consumes three of them, putting its sum back in the
/// column and its carry one weight up; a remaining pair goes through a half
/// adder. Each column ends with exactly one wire, which becomes its bus bit.
inline Netlist build_bsb_circuit(std::size_t n) {
  if (n == 0) throw DomainError("circuit needs at least one input pair");
  std::vector<Gate> gates;
  std::size_t next_wire = 2 * n;
  auto add = [&](GateKind kind, std::vector<std::size_t> in) {
    Gate g{gates.size(), kind, std::move(in), {}};
    for (std::size_t i = 0; i < gate_outputs(kind); ++i) g.outputs.push_back(next_wire++);
    gates.push_back(g);
    return g.outputs;
  };

  std::vector<std::deque<std::size_t>> columns(1);
  for (std::size_t i = 1; i <= n; ++i) {
    columns[0].push_back(add(GateKind::and_gate, {Netlist::x_wire(i), n + i - 1})[0]);
  }

  std::vector<std::size_t> bus;
  for (std::size_t w = 0; w < columns.size(); ++w) {
    auto take = [&] {
      auto wire = columns[w].front();
      columns[w].pop_front();
      return wire;
    };
    auto push_carry = [&](std::size_t wire) {
      if (columns.size() == w + 1) columns.emplace_back();
      columns[w + 1].push_back(wire);
    };
    while (columns[w].size() >= 3) {
      auto a = take(), b = take(), c = take();
      auto out = add(GateKind::full_adder, {a, b, c});
      columns[w].push_back(out[0]);
      push_carry(out[1]);
    }
    if (columns[w].size() == 2) {
      auto a = take(), b = take();
      auto out = add(GateKind::half_adder, {a, b});
      columns[w].push_back(out[0]);
      push_carry(out[1]);
    }
    bus.push_back(columns[w].front());
  }
  return Netlist(n, std::move(gates), std::move(bus));
}

inline ComponentCount component_counts(const Netlist& net) {
  ComponentCount c;
  for (const auto& g : net.gates()) {
    switch (g.kind) {
      case GateKind::and_gate: ++c.and_gates; break;
      case GateKind::half_adder: ++c.half_adders; break;
      case GateKind::full_adder: ++c.full_adders; break;
    }
  }
  return c;
}

/// Evaluates the netlist on one (secret, query) binding and decodes the bus.
inline std::uint64_t simulate(const Netlist& net, const SecretString& s, const QueryString& x) {
  const std::size_t n = net.inputs();
  if (s.size() != n || x.size() != n) {
    throw DimensionError("circuit has " + std::to_string(n) + " input pairs, got secret of " +
                         std::to_string(s.size()) + " and query of " + std::to_string(x.size()));
  }
  std::vector<std::uint8_t> wire(net.wire_count(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    wire[i] = x.bits()[i];
    wire[n + i] = s.bits()[i];
  }
  for (auto gi : net.evaluation_order()) {
    const Gate& g = net.gates()[gi];
    switch (g.kind) {
      case GateKind::and_gate:
        wire[g.outputs[0]] = wire[g.inputs[0]] & wire[g.inputs[1]];
        break;
      case GateKind::half_adder: {
        auto a = wire[g.inputs[0]], b = wire[g.inputs[1]];
        wire[g.outputs[0]] = a ^ b;
        wire[g.outputs[1]] = a & b;
        break;
      }
      case GateKind::full_adder: {
        auto a = wire[g.inputs[0]], b = wire[g.inputs[1]], c = wire[g.inputs[2]];
        wire[g.outputs[0]] = a ^ b ^ c;
        wire[g.outputs[1]] = (a & b) | (c & (a ^ b));
        break;
      }
    }
  }
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < net.output_bus().size(); ++i) {
    value |= std::uint64_t{wire[net.output_bus()[i]]} << i;
  }
  return value;
}

/// Bus value rendered most-significant bit first.
inline std::string format_bus(std::uint64_t value, std::size_t width) {
  std::string out(width, '0');
  for (std::size_t i = 0; i < width; ++i) {
    if ((value >> i) & 1U) out[width - 1 - i] = '1';
  }
  return out;
}

}  // namespace bsb
