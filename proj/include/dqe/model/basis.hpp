#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "dqe/core/linalg.hpp"
#include "dqe/core/spin.hpp"
#include "dqe/core/state.hpp"

namespace dqe {

// Symmetric ordering: bright block first, dark block last.
enum class Level : int { g00 = 0, p0p, p0m, p, n, ppm, n0p, n0m, npm };

inline constexpr int kBrightDim = 6;
inline constexpr int kDarkDim = 3;

inline constexpr std::array<std::string_view, 9> kSymmetricLabels = {
    "00", "P0+", "P0-", "P", "N", "P+-", "N0+", "N0-", "N+-"};
inline constexpr std::array<std::string_view, 9> kPmLabels = {
    "++", "+0", "+-", "0+", "00", "0-", "-+", "-0", "--"};
inline constexpr std::array<std::string_view, 9> kCanonicalLabels = {
    "+1+1", "+10", "+1-1", "0+1", "00", "0-1", "-1+1", "-10", "-1-1"};

inline int index_of(Level l) { return static_cast<int>(l); }
inline std::string_view label_of(Level l) { return kSymmetricLabels[static_cast<std::size_t>(l)]; }

inline const std::array<std::string_view, 9>& labels_of(Basis b) {
  switch (b) {
    case Basis::pm: return kPmLabels;
    case Basis::symmetric: return kSymmetricLabels;
    default: return kCanonicalLabels;
  }
}

// single-spin kets |+>, |0>, |-> in canonical coordinates
inline ComplexVector pm_ket(char c) {
  const double r = 1.0 / std::sqrt(2.0);
  ComplexVector v = ComplexVector::Zero(3);
  switch (c) {
    case '+': v(0) = r; v(2) = r; break;
    case '0': v(1) = 1.0; break;
    case '-': v(0) = r; v(2) = -r; break;
    default: throw ModelError(std::string("pm_ket: unknown single-spin label ") + c);
  }
  return v;
}

inline ComplexVector pm_product(char a, char b) { return kron(pm_ket(a), pm_ket(b)); }

namespace detail {
inline ComplexVector sym_ket(char a, char b, double sign) {
  return (pm_product(a, b) + sign * pm_product(b, a)) / std::sqrt(2.0);
}
}  // namespace detail

// Symmetric-basis ket in canonical coordinates.
inline ComplexVector symmetric_ket(Level l) {
  switch (l) {
    case Level::g00: return pm_product('0', '0');
    case Level::p0p: return detail::sym_ket('0', '+', 1.0);
    case Level::p0m: return detail::sym_ket('0', '-', 1.0);
    case Level::p: return (pm_product('+', '+') + pm_product('-', '-')) / std::sqrt(2.0);
    case Level::n: return (pm_product('+', '+') - pm_product('-', '-')) / std::sqrt(2.0);
    case Level::ppm: return detail::sym_ket('+', '-', 1.0);
    case Level::n0p: return detail::sym_ket('0', '+', -1.0);
    case Level::n0m: return detail::sym_ket('0', '-', -1.0);
    case Level::npm: return detail::sym_ket('+', '-', -1.0);
  }
  throw ModelError("symmetric_ket: bad level");
}

inline std::optional<Level> parse_level(std::string_view label) {
  for (std::size_t i = 0; i < kSymmetricLabels.size(); ++i)
    if (kSymmetricLabels[i] == label) return static_cast<Level>(i);
  return std::nullopt;
}

// Resolves a label from any of the three naming schemes to a canonical ket.
// "00" is the same physical state in every scheme.
inline ComplexVector canonical_ket(std::string_view label) {
  if (auto l = parse_level(label)) return symmetric_ket(*l);
  for (std::size_t i = 0; i < kPmLabels.size(); ++i)
    if (kPmLabels[i] == label) return pm_product(label[0], label[1]);
  for (std::size_t i = 0; i < kCanonicalLabels.size(); ++i)
    if (kCanonicalLabels[i] == label) {
      ComplexVector v = ComplexVector::Zero(9);
      v(static_cast<Eigen::Index>(i)) = 1.0;
      return v;
    }
  throw ModelError("unknown state label '" + std::string(label) + "'");
}

struct BasisTransform {
  ComplexMatrix u;  // target amplitudes = u * source amplitudes
  Basis source = Basis::canonical;
  Basis target = Basis::canonical;
  std::array<std::string_view, 9> index_map{};

  ComplexMatrix apply(const ComplexMatrix& h) const { return u * h * u.adjoint(); }
  StateVector apply(const StateVector& s) const {
    if (s.basis != source) throw ModelError("BasisTransform: state is not in the source basis");
    return {u * s.amplitudes, target};
  }
};

inline BasisTransform symmetric_transform() {
  BasisTransform t;
  t.u = ComplexMatrix(9, 9);
  for (int k = 0; k < 9; ++k) t.u.row(k) = symmetric_ket(static_cast<Level>(k)).adjoint();
  t.source = Basis::canonical;
  t.target = Basis::symmetric;
  t.index_map = kSymmetricLabels;
  return t;
}

inline BasisTransform pm_transform() {
  BasisTransform t;
  const ComplexMatrix u3 = pm_change_of_basis();
  t.u = kron(u3, u3);
  t.source = Basis::canonical;
  t.target = Basis::pm;
  t.index_map = kPmLabels;
  return t;
}

// canonical -> basis b
inline ComplexMatrix canonical_to(Basis b) {
  switch (b) {
    case Basis::pm: return pm_transform().u;
    case Basis::symmetric: return symmetric_transform().u;
    default: return identity(9);
  }
}

inline StateVector to_basis(const StateVector& s, Basis target) {
  if (s.dim() != 9) throw ModelError("to_basis: basis changes are defined on the 9-dim two-NV space");
  if (s.basis == target) return s;
  const ComplexMatrix to_canon = canonical_to(s.basis).adjoint();
  return {canonical_to(target) * (to_canon * s.amplitudes), target};
}

inline StateVector state_from_label(std::string_view label, Basis basis = Basis::symmetric) {
  return to_basis(StateVector{canonical_ket(label), Basis::canonical}, basis);
}

struct BrightDarkSplit {
  ComplexMatrix bright;  // 6x6 over 00, P0+, P0-, P, N, P+-
  ComplexMatrix dark;    // 3x3 over N0+, N0-, N+-
  double leakage = 0.0;
};

inline BrightDarkSplit split_bright_dark(const ComplexMatrix& h_sym, double tol = 1e-12) {
  if (h_sym.rows() != 9 || h_sym.cols() != 9) throw ModelError("split_bright_dark: expected 9x9");
  BrightDarkSplit s;
  s.bright = h_sym.topLeftCorner(kBrightDim, kBrightDim);
  s.dark = h_sym.bottomRightCorner(kDarkDim, kDarkDim);
  s.leakage = std::max(max_abs(h_sym.topRightCorner(kBrightDim, kDarkDim)),
                       max_abs(h_sym.bottomLeftCorner(kDarkDim, kBrightDim)));
  if (s.leakage > tol * std::max(1.0, max_abs(h_sym)))
    throw ModelError("split_bright_dark: bright/dark leakage " + std::to_string(s.leakage) +
                     " exceeds tolerance; basis ordering is inconsistent");
  return s;
}

// Exchanges the two NV factors in canonical coordinates.
inline ComplexMatrix swap_operator() {
  ComplexMatrix s = ComplexMatrix::Zero(9, 9);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) s(3 * b + a, 3 * a + b) = 1.0;
  return s;
}

}  // namespace dqe
