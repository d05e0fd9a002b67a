#pragma once

#include <string>
#include <vector>

#include "msim/qmath.hpp"

namespace msim {

/// Overlap <a1|a2> between the two detector (apparatus) pointer states.
class DetectorOverlap {
 public:
  DetectorOverlap() = default;
  explicit DetectorOverlap(Complex gamma);

  Complex value() const { return gamma_; }
  double magnitude() const { return std::abs(gamma_); }

 private:
  Complex gamma_{0.0, 0.0};
};

/// Pure state on a dS x dA space with basis labels for each factor.
class BipartitePureState {
 public:
  BipartitePureState(StateVector vector, Dims dims);
  BipartitePureState(StateVector vector, Dims dims, std::vector<std::string> labels_s,
                     std::vector<std::string> labels_a);

  const StateVector& vector() const { return vector_; }
  Dims dims() const { return dims_; }
  const std::vector<std::string>& labels_s() const { return labels_s_; }
  const std::vector<std::string>& labels_a() const { return labels_a_; }

 private:
  StateVector vector_;
  Dims dims_;
  std::vector<std::string> labels_s_;
  std::vector<std::string> labels_a_;
};

struct SchmidtForm {
  std::vector<double> coeffs;  // descending, zero coefficients dropped
  CMatrix basis_s;             // column k pairs with coeffs[k]
  CMatrix basis_a;
  bool degenerate = false;

  std::size_t rank() const { return coeffs.size(); }
  /// sum_k c_k |s_k>|a_k> as a flat composite vector.
  CVector reconstruct() const;
};

/// Schmidt coefficients at or below this are treated as zero.
inline constexpr double kSchmidtRankCutoff = 1e-12;

/// c1|s1> + c2|s2>
StateVector make_superposition(Complex c1, Complex c2);

/// c1|s1>|a1> + c2|s2>|a2> with <a1|a2> = gamma, embedded in a 2-dim
/// apparatus space as |a1> = (1, 0), |a2> = (gamma, sqrt(1 - |gamma|^2)).
BipartitePureState make_measurement_state(Complex c1, Complex c2, DetectorOverlap overlap = {});

DensityOperator local_state(const BipartitePureState& psi, Side side);

/// l1 coherence: sum of |rho_ij| over i != j, in the storage basis.
double coherence(const DensityOperator& rho);

/// l1 coherence in the orthonormal basis given by the columns of `basis`.
double coherence(const DensityOperator& rho, const CMatrix& basis);

SchmidtForm schmidt(const BipartitePureState& psi);

/// Overlap after n identical environment collisions: gamma0^n.
DetectorOverlap collision_decoherence(DetectorOverlap gamma0, unsigned n);

}  // namespace msim
