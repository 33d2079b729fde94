/**
 * @file jones.hpp
 * @brief Jones-calculus model of the polarizer-only Bernstein-Vazirani setup.
 *
 * Horizontal polarization is |0> = (1, 0), vertical is |1> = (0, 1). Each beam
 * carries one secret position: beam 1 (the bottom one) reads s_1.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bsb/bits.hpp"
#include "bsb/errors.hpp"

namespace bsb {

using Complex = std::complex<double>;

inline constexpr double degrees_to_radians(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double radians_to_degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

struct JonesVector {
  Complex h{0.0};
  Complex v{0.0};

  double norm() const { return std::sqrt(std::norm(h) + std::norm(v)); }
  double intensity() const { return std::norm(h) + std::norm(v); }

  static JonesVector horizontal() { return {1.0, 0.0}; }
  static JonesVector vertical() { return {0.0, 1.0}; }
  static JonesVector diagonal() { return {1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2}; }
  static JonesVector antidiagonal() { return {1.0 / std::numbers::sqrt2, -1.0 / std::numbers::sqrt2}; }
};

/// Row-major 2x2 complex matrix.
struct JonesMatrix {
  Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

  static JonesMatrix identity() { return {}; }

  JonesVector operator*(const JonesVector& e) const { return {a * e.h + b * e.v, c * e.h + d * e.v}; }

  JonesMatrix operator*(const JonesMatrix& m) const {
    return {a * m.a + b * m.c, a * m.b + b * m.d, c * m.a + d * m.c, c * m.b + d * m.d};
  }

  JonesMatrix operator*(Complex k) const { return {k * a, k * b, k * c, k * d}; }

  JonesMatrix adjoint() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }

  std::array<Complex, 4> entries() const { return {a, b, c, d}; }

  /// Largest entry-wise modulus of the difference.
  double max_abs_diff(const JonesMatrix& m) const {
    double worst = 0.0;
    auto lhs = entries();
    auto rhs = m.entries();
    for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
    return worst;
  }
};

/// Birefringent plate with retardation eta, circularity phi and fast axis at
/// theta from horizontal. eta = pi is a half-wave plate, pi/2 a quarter-wave.
inline JonesMatrix bf_matrix(double eta, double phi, double theta) {
  const Complex i{0.0, 1.0};
  const Complex e_eta = std::exp(i * eta);
  const double c = std::cos(theta), s = std::sin(theta);
  const Complex off = (1.0 - e_eta) * c * s;
  JonesMatrix m{c * c + e_eta * s * s, off * std::exp(-i * phi), off * std::exp(i * phi), s * s + e_eta * c * c};
  return m * std::exp(-i * eta / 2.0);
}

/// Ideal linear polarizer with transmission axis at theta.
inline JonesMatrix lp_matrix(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * c, c * s, c * s, s * s};
}

/// True iff a = c b for some unit complex c, with ||a - c b|| <= tol.
inline bool equal_up_to_global_phase(const JonesVector& a, const JonesVector& b, double tol) {
  if (a.norm() == 0.0 || b.norm() == 0.0) throw DomainError("global-phase comparison of a zero vector");
  const Complex overlap = std::conj(b.h) * a.h + std::conj(b.v) * a.v;
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0};
  const double err = std::sqrt(std::norm(a.h - phase * b.h) + std::norm(a.v - phase * b.v));
  return err <= tol;
}

/// Matrix version: a = c b entry-wise within tol for some unit c.
inline bool equal_up_to_global_phase(const JonesMatrix& a, const JonesMatrix& b, double tol) {
  auto ea = a.entries();
  auto eb = b.entries();
  Complex overlap = 0.0;
  for (std::size_t i = 0; i < 4; ++i) overlap += std::conj(eb[i]) * ea[i];
  if (std::abs(overlap) == 0.0) return a.max_abs_diff(b) <= tol;
  return a.max_abs_diff(b * (overlap / std::abs(overlap))) <= tol;
}

enum class ElementKind { linear_polarizer, hadamard_plate, z_plate, identity };

inline std::string_view to_string(ElementKind k) {
  switch (k) {
    case ElementKind::linear_polarizer: return "LP";
    case ElementKind::hadamard_plate: return "H";
    case ElementKind::z_plate: return "Z";
    case ElementKind::identity: return "I";
  }
  return "?";
}

struct OpticalElement {
  ElementKind kind = ElementKind::identity;
  double eta = 0.0;
  double phi = 0.0;
  double theta = 0.0;
  JonesMatrix matrix;

  static OpticalElement polarizer(double theta) { return {ElementKind::linear_polarizer, 0.0, 0.0, theta, lp_matrix(theta)}; }
  static OpticalElement plate(ElementKind kind, double eta, double phi, double theta) {
    return {kind, eta, phi, theta, bf_matrix(eta, phi, theta)};
  }
  static OpticalElement hadamard() { return plate(ElementKind::hadamard_plate, std::numbers::pi, 0.0, degrees_to_radians(22.5)); }
  static OpticalElement z() { return plate(ElementKind::z_plate, std::numbers::pi, 0.0, 0.0); }
  static OpticalElement pass() { return {ElementKind::identity, 0.0, 0.0, 0.0, JonesMatrix::identity()}; }
};

/// beams[0] is beam 1. Every beam runs LP(0) -> H -> (Z | I) -> H.
struct OpticalPipeline {
  std::vector<std::vector<OpticalElement>> beams;

  std::size_t size() const noexcept { return beams.size(); }
};

inline OpticalPipeline build_optical_bv(const SecretString& s) {
  OpticalPipeline p;
  p.beams.reserve(s.size());
  for (std::size_t i = 1; i <= s.size(); ++i) {
    p.beams.push_back({OpticalElement::polarizer(0.0), OpticalElement::hadamard(),
                       s.at(i) ? OpticalElement::z() : OpticalElement::pass(), OpticalElement::hadamard()});
  }
  return p;
}

struct BeamOutput {
  JonesVector state;
  /// Fraction of input intensity surviving the polarizers.
  double attenuation = 1.0;
};

/// Unpolarized light has no Jones vector; the source is modelled as (1, 1)/sqrt(2).
inline JonesVector unpolarized_source() { return JonesVector::diagonal(); }

/// Left-multiplies each beam's elements in order. After a polarizer the beam
/// is renormalized and the intensity loss goes into `attenuation`.
inline std::vector<BeamOutput> propagate(const OpticalPipeline& pipeline, std::span<const JonesVector> inputs) {
  if (inputs.size() != pipeline.size()) {
    throw DimensionError("pipeline has " + std::to_string(pipeline.size()) + " beams, got " +
                         std::to_string(inputs.size()) + " inputs");
  }
  constexpr double kAbsorbed = 1e-12;
  std::vector<BeamOutput> out;
  out.reserve(inputs.size());
  for (std::size_t b = 0; b < pipeline.size(); ++b) {
    JonesVector e = inputs[b];
    const double in = e.intensity();
    if (!(in > 0.0)) throw DomainError("beam " + std::to_string(b + 1) + " has a zero input vector");
    e = {e.h / std::sqrt(in), e.v / std::sqrt(in)};
    double attenuation = 1.0;
    for (const auto& el : pipeline.beams[b]) {
      e = el.matrix * e;
      if (el.kind == ElementKind::linear_polarizer) {
        const double kept = e.intensity();
        if (kept < kAbsorbed) throw DegenerateBeamError("beam " + std::to_string(b + 1) + " absorbed by polarizer");
        attenuation *= kept;
        e = {e.h / std::sqrt(kept), e.v / std::sqrt(kept)};
      }
    }
    out.push_back({e, attenuation});
  }
  return out;
}

inline std::vector<BeamOutput> propagate(const OpticalPipeline& pipeline) {
  std::vector<JonesVector> inputs(pipeline.size(), unpolarized_source());
  return propagate(pipeline, inputs);
}

/// Beam i horizontal -> s_i = 0, vertical -> s_i = 1, up to global phase.
inline SecretString readout(std::span<const JonesVector> outputs, double tol = 1e-8) {
  if (outputs.empty()) throw DomainError("no beams to read");
  SecretString s(outputs.size());
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (equal_up_to_global_phase(outputs[i], JonesVector::vertical(), tol)) {
      s.set(i + 1, true);
    } else if (!equal_up_to_global_phase(outputs[i], JonesVector::horizontal(), tol)) {
      throw ReadoutError("beam " + std::to_string(i + 1) + " is neither horizontal nor vertical");
    }
  }
  return s;
}

inline SecretString readout(std::span<const BeamOutput> outputs, double tol = 1e-8) {
  std::vector<JonesVector> states;
  states.reserve(outputs.size());
  for (const auto& o : outputs) states.push_back(o.state);
  return readout(std::span<const JonesVector>(states), tol);
}

}  // namespace bsb
