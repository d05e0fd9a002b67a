#include "msim/states.hpp"

#include <cmath>
#include <stdexcept>

namespace msim {

namespace {

std::vector<std::string> default_labels(const char* prefix, std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

}  // namespace

DetectorOverlap::DetectorOverlap(Complex gamma) : gamma_(gamma) {
  if (!std::isfinite(gamma.real()) || !std::isfinite(gamma.imag()))
    throw std::invalid_argument("detector overlap must be finite");
  if (std::abs(gamma) > 1.0 + kTolExact)
    throw std::invalid_argument("detector overlap magnitude " + std::to_string(std::abs(gamma)) +
                                " exceeds 1");
}

BipartitePureState::BipartitePureState(StateVector vector, Dims dims)
    : BipartitePureState(std::move(vector), dims, default_labels("s", dims.s),
                         default_labels("a", dims.a)) {}

BipartitePureState::BipartitePureState(StateVector vector, Dims dims,
                                       std::vector<std::string> labels_s,
                                       std::vector<std::string> labels_a)
    : vector_(std::move(vector)),
      dims_(dims),
      labels_s_(std::move(labels_s)),
      labels_a_(std::move(labels_a)) {
  if (dims.s == 0 || dims.a == 0 || vector_.dim() != dims.total())
    throw std::invalid_argument("state dimension does not match subsystem dimensions");
  if (labels_s_.size() != dims.s || labels_a_.size() != dims.a)
    throw std::invalid_argument("basis label count does not match subsystem dimension");
}

CVector SchmidtForm::reconstruct() const {
  const Eigen::Index ds = basis_s.rows();
  const Eigen::Index da = basis_a.rows();
  CVector out = CVector::Zero(ds * da);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    for (Eigen::Index i = 0; i < ds; ++i)
      for (Eigen::Index j = 0; j < da; ++j)
        out(i * da + j) += coeffs[k] * basis_s(i, col) * basis_a(j, col);
  }
  return out;
}

StateVector make_superposition(Complex c1, Complex c2) {
  const double norm2 = std::norm(c1) + std::norm(c2);
  if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > kTolNorm)
    throw std::invalid_argument("superposition amplitudes not normalized (|c1|^2 + |c2|^2 - 1 = " +
                                std::to_string(norm2 - 1.0) + ")");
  return StateVector{c1, c2};
}

BipartitePureState make_measurement_state(Complex c1, Complex c2, DetectorOverlap overlap) {
  make_superposition(c1, c2);  // validates the amplitudes
  const Complex g = overlap.value();
  const double perp = std::sqrt(std::max(0.0, 1.0 - std::norm(g)));
  // Basis order (s1 a1, s1 a2, s2 a1, s2 a2); |a1> = e1, |a2> = g e1 + perp e2.
  CVector v(4);
  v << c1, 0.0, c2 * g, c2 * perp;
  std::vector<std::string> labels_a{"a1", g == Complex{} ? "a2" : "a1_perp"};
  return BipartitePureState(StateVector(std::move(v)), Dims{2, 2}, {"s1", "s2"},
                            std::move(labels_a));
}

DensityOperator local_state(const BipartitePureState& psi, Side side) {
  return partial_trace(outer(psi.vector()), psi.dims(), side);
}

double coherence(const DensityOperator& rho) {
  const CMatrix& m = rho.matrix();
  return m.cwiseAbs().sum() - m.diagonal().cwiseAbs().sum();
}

double coherence(const DensityOperator& rho, const CMatrix& basis) {
  if (basis.rows() != static_cast<Eigen::Index>(rho.dim()) || basis.cols() != basis.rows())
    throw std::invalid_argument("coherence: basis dimension mismatch");
  if (unitarity_deviation(basis) > kTolNorm)
    throw std::invalid_argument("coherence: basis is not orthonormal");
  const CMatrix rotated = basis.adjoint() * rho.matrix() * basis;
  return rotated.cwiseAbs().sum() - rotated.diagonal().cwiseAbs().sum();
}

SchmidtForm schmidt(const BipartitePureState& psi) {
  const Dims dims = psi.dims();
  const SvdResult svd = svd_coeff_matrix(psi.vector(), dims);

  SchmidtForm out;
  std::size_t rank = 0;
  while (rank < svd.singular_values.size() && svd.singular_values[rank] > kSchmidtRankCutoff)
    ++rank;
  const auto r = static_cast<Eigen::Index>(rank);
  out.coeffs.assign(svd.singular_values.begin(), svd.singular_values.begin() + r);
  out.basis_s = svd.left.leftCols(r);
  // psi = sum sigma_k l_k (x) conj(r_k)
  out.basis_a = svd.right.leftCols(r).conjugate();
  for (std::size_t k = 0; k + 1 < rank; ++k)
    if (std::abs(out.coeffs[k] - out.coeffs[k + 1]) < kTolNorm) out.degenerate = true;
  return out;
}

DetectorOverlap collision_decoherence(DetectorOverlap gamma0, unsigned n) {
  Complex result{1.0, 0.0};
  Complex base = gamma0.value();
  for (; n != 0; n >>= 1) {
    if (n & 1u) result *= base;
    base *= base;
  }
  return DetectorOverlap(result);
}

}  // namespace msim
