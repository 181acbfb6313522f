#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "dqe/core/linalg.hpp"
#include "dqe/model/hamiltonian.hpp"

namespace dqe {

enum class Protocol { N, P };

inline const char* to_string(Protocol p) { return p == Protocol::N ? "N" : "P"; }

struct EliminationSplit {
  std::vector<std::string> keep, drop;
  ComplexMatrix h1, h2, h3;  // keep-keep, keep-drop, drop-drop
  double h3_condition = 0.0;
};

inline double condition_number(const ComplexMatrix& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  return smin > 0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
}

// Partitions a Hermitian matrix by index. Every index must appear exactly once.
inline EliminationSplit make_split(const ComplexMatrix& h, const std::vector<int>& keep,
                                   const std::vector<int>& drop,
                                   const std::vector<std::string>& labels = {}) {
  const auto n = static_cast<std::size_t>(h.rows());
  std::vector<int> seen(n, 0);
  for (int i : keep) {
    if (i < 0 || static_cast<std::size_t>(i) >= n) throw ModelError("make_split: index out of range");
    ++seen[static_cast<std::size_t>(i)];
  }
  for (int i : drop) {
    if (i < 0 || static_cast<std::size_t>(i) >= n) throw ModelError("make_split: index out of range");
    ++seen[static_cast<std::size_t>(i)];
  }
  if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; }))
    throw ModelError("make_split: keep and drop must cover every index exactly once");
  auto name = [&](int i) { return labels.empty() ? std::to_string(i) : labels[static_cast<std::size_t>(i)]; };
  EliminationSplit s;
  const auto nk = static_cast<Eigen::Index>(keep.size()), nd = static_cast<Eigen::Index>(drop.size());
  s.h1.resize(nk, nk);
  s.h2.resize(nk, nd);
  s.h3.resize(nd, nd);
  for (Eigen::Index r = 0; r < nk; ++r) {
    for (Eigen::Index c = 0; c < nk; ++c) s.h1(r, c) = h(keep[r], keep[c]);
    for (Eigen::Index c = 0; c < nd; ++c) s.h2(r, c) = h(keep[r], drop[c]);
  }
  for (Eigen::Index r = 0; r < nd; ++r)
    for (Eigen::Index c = 0; c < nd; ++c) s.h3(r, c) = h(drop[r], drop[c]);
  for (int i : keep) s.keep.push_back(name(i));
  for (int i : drop) s.drop.push_back(name(i));
  s.h3_condition = condition_number(s.h3);
  return s;
}

// H_eff = H1 - H2 H3^-1 H2^dagger
inline ComplexMatrix adiabatic_eliminate(const EliminationSplit& s, double max_condition = 1e8) {
  if (s.h2.size() == 0 || s.h2.cwiseAbs().maxCoeff() == 0.0) return s.h1;
  if (!(s.h3_condition < max_condition)) {
    std::ostringstream os;
    os << "adiabatic_eliminate: dropped block is singular (condition number " << s.h3_condition << ")";
    throw SingularityError(os.str(), s.h3_condition);
  }
  const ComplexMatrix x = s.h3.partialPivLu().solve(s.h2.adjoint());
  ComplexMatrix h = s.h1 - s.h2 * x;
  return 0.5 * (h + h.adjoint());
}

inline std::vector<std::string> bright_labels() {
  std::vector<std::string> l;
  for (int i = 0; i < kBrightDim; ++i) l.emplace_back(kSymmetricLabels[static_cast<std::size_t>(i)]);
  return l;
}

// N keeps {00, N, P0+} and drops {P, P+-, P0-}; P keeps {00, P, P0+} and drops {P+-, P0-, N}.
inline EliminationSplit protocol_split(Protocol protocol, const ModelParams& p) {
  const ComplexMatrix b = bright_hamiltonian(p, EnergyOrigin::double_quantum);
  const int g = index_of(Level::g00), p0p = index_of(Level::p0p), p0m = index_of(Level::p0m),
            pp = index_of(Level::p), nn = index_of(Level::n), ppm = index_of(Level::ppm);
  EliminationSplit s = protocol == Protocol::N ? make_split(b, {g, nn, p0p}, {pp, ppm, p0m}, bright_labels())
                                               : make_split(b, {g, pp, p0p}, {ppm, p0m, nn}, bright_labels());
  return s;
}

inline std::string describe(const ModelParams& p) {
  std::ostringstream os;
  const DipoleCoeffs a = dipole_coeffs(p);
  os << "Omega=" << p.omega_rabi << " Delta=" << p.delta << " muB=" << p.mu_b << " axx=" << a.axx
     << " ayy=" << a.ayy << " azz=" << a.azz;
  return os.str();
}

inline ComplexMatrix protocol_effective_hamiltonian(Protocol protocol, const ModelParams& p) {
  const EliminationSplit s = protocol_split(protocol, p);
  try {
    return adiabatic_eliminate(s);
  } catch (const SingularityError& e) {
    throw SingularityError(std::string(e.what()) + " at " + describe(p), e.condition_number);
  }
}

}  // namespace dqe
