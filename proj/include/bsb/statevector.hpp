/**
 * @file statevector.hpp
 * @brief Dense state-vector simulator for the Bernstein-Vazirani pipeline.
 *
 * Basis index bit q holds qubit q+1, so qubit 1 is least significant and
 * matches position 1 of a SecretString. With an ancilla, it is the highest
 * qubit.
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bsb/bits.hpp"
#include "bsb/errors.hpp"

namespace bsb {

using Amplitude = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 16;

class StateVector {
 public:
  /// Computational basis state |index>.
  static StateVector basis(std::size_t qubits, std::uint64_t index) {
    check_qubits(qubits);
    StateVector psi(qubits);
    if (index >= psi.amps_.size()) throw DomainError("basis index out of range");
    psi.amps_[index] = 1.0;
    return psi;
  }

  StateVector(std::size_t qubits, std::vector<Amplitude> amplitudes) : qubits_(qubits), amps_(std::move(amplitudes)) {
    check_qubits(qubits);
    if (amps_.size() != (std::size_t{1} << qubits)) {
      throw DimensionError("expected " + std::to_string(std::size_t{1} << qubits) + " amplitudes, got " +
                           std::to_string(amps_.size()));
    }
  }

  std::size_t qubits() const noexcept { return qubits_; }
  std::size_t dimension() const noexcept { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
  Amplitude operator[](std::uint64_t index) const { return amps_.at(index); }

  double norm() const {
    double total = 0.0;
    for (const auto& a : amps_) total += std::norm(a);
    return std::sqrt(total);
  }

  // Single- and two-qubit gates, in place. Qubit indices are 0-based.

  void apply_h(std::size_t q) {
    check_qubit(q);
    const double r = 1.0 / std::sqrt(2.0);
    const std::uint64_t bit = std::uint64_t{1} << q;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      if (i & bit) continue;
      Amplitude a = amps_[i], b = amps_[i | bit];
      amps_[i] = r * (a + b);
      amps_[i | bit] = r * (a - b);
    }
  }

  void apply_x(std::size_t q) {
    check_qubit(q);
    const std::uint64_t bit = std::uint64_t{1} << q;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      if (!(i & bit)) std::swap(amps_[i], amps_[i | bit]);
    }
  }

  void apply_z(std::size_t q) {
    check_qubit(q);
    const std::uint64_t bit = std::uint64_t{1} << q;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      if (i & bit) amps_[i] = -amps_[i];
    }
  }

  void apply_cnot(std::size_t control, std::size_t target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) throw DomainError("CNOT control and target must differ");
    const std::uint64_t c = std::uint64_t{1} << control;
    const std::uint64_t t = std::uint64_t{1} << target;
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
      if ((i & c) && !(i & t)) std::swap(amps_[i], amps_[i | t]);
    }
  }

 private:
  explicit StateVector(std::size_t qubits) : qubits_(qubits), amps_(std::size_t{1} << qubits, 0.0) {}

  static void check_qubits(std::size_t qubits) {
    if (qubits < 1 || qubits > kMaxQubits) {
      throw DomainError("qubit count must be in 1.." + std::to_string(kMaxQubits));
    }
  }

  void check_qubit(std::size_t q) const {
    if (q >= qubits_) throw DomainError("qubit " + std::to_string(q) + " out of range");
  }

  std::size_t qubits_;
  std::vector<Amplitude> amps_;
};

/// |a> (x) |b>, with `low` occupying the low qubits.
inline StateVector tensor(const StateVector& low, const StateVector& high) {
  std::vector<Amplitude> out(low.dimension() * high.dimension());
  for (std::uint64_t h = 0; h < high.dimension(); ++h) {
    for (std::uint64_t l = 0; l < low.dimension(); ++l) out[h * low.dimension() + l] = low[l] * high[h];
  }
  return StateVector(low.qubits() + high.qubits(), std::move(out));
}

/// Hadamard on qubits [0, count); the default covers the whole register.
inline StateVector apply_hadamard_all(StateVector psi, std::size_t count = static_cast<std::size_t>(-1)) {
  count = std::min(count, psi.qubits());
  for (std::size_t q = 0; q < count; ++q) psi.apply_h(q);
  return psi;
}

/// |+>^n, followed by an ancilla |-> = H X |0> when requested.
inline StateVector prepare_query_register(std::size_t n, bool with_ancilla) {
  const std::size_t total = n + (with_ancilla ? 1 : 0);
  if (n < 1) throw DomainError("query register needs at least one qubit");
  StateVector psi = StateVector::basis(total, 0);
  if (with_ancilla) psi.apply_x(n);
  return apply_hadamard_all(std::move(psi));
}

enum class OracleConstruction { z_only, cnot_ancilla };

inline std::string to_string(OracleConstruction c) { return c == OracleConstruction::z_only ? "z" : "cnot"; }

inline OracleConstruction parse_oracle_construction(std::string_view text) {
  if (text == "z") return OracleConstruction::z_only;
  if (text == "cnot") return OracleConstruction::cnot_ancilla;
  throw DomainError("oracle must be 'z' or 'cnot', got '" + std::string(text) + "'");
}

struct OracleSpec {
  SecretString secret;
  OracleConstruction construction = OracleConstruction::z_only;

  std::size_t register_qubits() const {
    return secret.size() + (construction == OracleConstruction::cnot_ancilla ? 1 : 0);
  }
};

/// Phase oracle: Z on every defective position, or CNOT from each defective
/// position onto the ancilla.
inline StateVector apply_oracle(StateVector psi, const OracleSpec& spec) {
  if (psi.qubits() != spec.register_qubits()) {
    throw DimensionError("oracle expects " + std::to_string(spec.register_qubits()) + " qubits, state has " +
                         std::to_string(psi.qubits()));
  }
  const std::size_t ancilla = spec.secret.size();
  for (auto pos : spec.secret.ones()) {
    if (spec.construction == OracleConstruction::z_only) {
      psi.apply_z(pos - 1);
    } else {
      psi.apply_cnot(pos - 1, ancilla);
    }
  }
  return psi;
}

/// Black box around apply_oracle that counts how often it is consulted.
class PhaseOracle {
 public:
  explicit PhaseOracle(OracleSpec spec) : spec_(std::move(spec)) {}

  StateVector operator()(StateVector psi) {
    ++calls_;
    return apply_oracle(std::move(psi), spec_);
  }

  std::size_t calls() const noexcept { return calls_; }
  std::size_t register_qubits() const { return spec_.register_qubits(); }
  std::size_t secret_length() const { return spec_.secret.size(); }
  bool has_ancilla() const { return spec_.construction == OracleConstruction::cnot_ancilla; }

 private:
  OracleSpec spec_;
  std::size_t calls_ = 0;
};

struct Measurement {
  std::uint64_t index = 0;
  /// Most-significant first, one character per measured qubit.
  std::string label;
  double probability = 0.0;
  bool deterministic = false;
};

/// Most probable outcome on qubits [0, measured), marginalising the rest.
inline Measurement measure_deterministic(const StateVector& psi, std::size_t measured = static_cast<std::size_t>(-1),
                                         double tol = 1e-10) {
  measured = std::min(measured, psi.qubits());
  const std::uint64_t outcomes = std::uint64_t{1} << measured;
  std::vector<double> prob(outcomes, 0.0);
  for (std::uint64_t i = 0; i < psi.dimension(); ++i) prob[i & (outcomes - 1)] += std::norm(psi[i]);
  Measurement m;
  for (std::uint64_t i = 0; i < outcomes; ++i) {
    if (prob[i] > m.probability) {
      m.probability = prob[i];
      m.index = i;
    }
  }
  m.label.assign(measured, '0');
  for (std::size_t q = 0; q < measured; ++q) {
    if ((m.index >> q) & 1U) m.label[measured - 1 - q] = '1';
  }
  m.deterministic = m.probability >= 1.0 - tol;
  return m;
}

/// True iff a = c b for some unit complex c, within `tol` in the 2-norm.
inline bool equal_up_to_global_phase(const StateVector& a, const StateVector& b, double tol = 1e-10) {
  if (a.qubits() != b.qubits()) return false;
  Amplitude overlap = 0.0;
  for (std::uint64_t i = 0; i < a.dimension(); ++i) overlap += std::conj(b[i]) * a[i];
  Amplitude phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Amplitude{1.0};
  double err = 0.0;
  for (std::uint64_t i = 0; i < a.dimension(); ++i) err += std::norm(a[i] - phase * b[i]);
  return std::sqrt(err) <= tol;
}

struct BVResult {
  SecretString recovered;
  std::size_t oracle_calls = 0;
  /// Probability of the recovered outcome on the data register.
  double probability = 0.0;
  StateVector final_state;
};

/// Prepare, one oracle call, Hadamard layer on the data register, readout.
inline BVResult run_bv(PhaseOracle& oracle) {
  const std::size_t n = oracle.secret_length();
  StateVector psi = prepare_query_register(n, oracle.has_ancilla());
  psi = oracle(std::move(psi));
  psi = apply_hadamard_all(std::move(psi), n);
  Measurement m = measure_deterministic(psi, n);
  return BVResult{SecretString::from_mask(m.index, n), oracle.calls(), m.probability, std::move(psi)};
}

inline BVResult run_bv(const SecretString& s, OracleConstruction construction) {
  PhaseOracle oracle(OracleSpec{s, construction});
  return run_bv(oracle);
}

/// (-1)^f(x) with f the spring-balance count.
inline int spring_balance_phase(std::uint64_t s, std::uint64_t x) {
  return (std::popcount(s & x) % 2 == 0) ? 1 : -1;
}

/// (-1)^h(x) with h(x) = sum x_i s_i mod 2, reduced by XOR folding.
inline int parity_phase(std::uint64_t s, std::uint64_t x) {
  std::uint64_t v = s & x;
  v ^= v >> 32;
  v ^= v >> 16;
  v ^= v >> 8;
  v ^= v >> 4;
  v ^= v >> 2;
  v ^= v >> 1;
  return (v & 1U) ? -1 : 1;
}

}  // namespace bsb
