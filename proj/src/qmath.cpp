#include "msim/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace msim {

namespace {

void check_dim(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("dimension must be positive");
  if (dim > kMaxDim)
    throw std::length_error("dimension " + std::to_string(dim) + " exceeds maximum " +
                            std::to_string(kMaxDim));
}

bool all_finite(const CMatrix& m) {
  return m.real().allFinite() && m.imag().allFinite();
}

Eigen::Index idx(std::size_t k) { return static_cast<Eigen::Index>(k); }

}  // namespace

const char* to_string(Side side) { return side == Side::S ? "S" : "A"; }

StateVector::StateVector(CVector amps) : amps_(std::move(amps)) {
  check_dim(dim());
  if (!all_finite(amps_)) throw std::invalid_argument("state amplitudes must be finite");
  const double dev = std::abs(amps_.squaredNorm() - 1.0);
  if (dev > kTolNorm)
    throw std::invalid_argument("state is not normalized (|norm^2 - 1| = " + std::to_string(dev) + ")");
}

StateVector::StateVector(std::initializer_list<Complex> amps)
    : StateVector(CVector(Eigen::Map<const CVector>(amps.begin(), idx(amps.size())))) {}

DensityOperator::DensityOperator(CMatrix entries) : rho_(std::move(entries)) {
  const auto report = validate(rho_);
  if (!report.square) throw std::invalid_argument("density operator must be square");
  check_dim(dim());
  if (!report.ok())
    throw std::invalid_argument(
        "invalid density operator (hermiticity " + std::to_string(report.hermiticity_deviation) +
        ", trace " + std::to_string(report.trace_deviation) + ", min eigenvalue " +
        std::to_string(report.min_eigenvalue) + ")");
}

ValidationReport validate(const CMatrix& rho) {
  ValidationReport r;
  r.square = rho.rows() == rho.cols() && rho.rows() > 0;
  r.finite = all_finite(rho);
  if (!r.square || !r.finite) {
    r.hermiticity_deviation = r.trace_deviation = std::numeric_limits<double>::infinity();
    r.min_eigenvalue = -std::numeric_limits<double>::infinity();
    return r;
  }
  const CMatrix adj = rho.adjoint();
  r.hermiticity_deviation = (rho - adj).cwiseAbs().maxCoeff();
  r.trace_deviation = std::abs(rho.trace() - Complex{1.0, 0.0});
  const CMatrix herm = 0.5 * (rho + adj);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = solver.eigenvalues().minCoeff();
  return r;
}

StateVector tensor(const StateVector& v, const StateVector& w) {
  const std::size_t dim = v.dim() * w.dim();
  check_dim(dim);
  CVector out(idx(dim));
  for (std::size_t i = 0; i < v.dim(); ++i)
    for (std::size_t j = 0; j < w.dim(); ++j) out(idx(i * w.dim() + j)) = v[i] * w[j];
  return StateVector(std::move(out));
}

DensityOperator outer(const StateVector& v) {
  CMatrix rho = v.amps() * v.amps().adjoint();
  // Exact Hermitian symmetry; the product can differ from its adjoint in the last ulp.
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityOperator(std::move(rho));
}

DensityOperator partial_trace(const DensityOperator& rho, Dims dims, Side keep) {
  if (rho.dim() != dims.total())
    throw std::invalid_argument("partial_trace: operator dimension " + std::to_string(rho.dim()) +
                                " does not match " + std::to_string(dims.s) + "x" +
                                std::to_string(dims.a));
  const std::size_t kept = dims.of(keep);
  const std::size_t traced = keep == Side::S ? dims.a : dims.s;
  const CMatrix& m = rho.matrix();
  CMatrix out = CMatrix::Zero(idx(kept), idx(kept));
  for (std::size_t i = 0; i < kept; ++i) {
    for (std::size_t j = 0; j < kept; ++j) {
      Complex sum{0.0, 0.0};
      for (std::size_t k = 0; k < traced; ++k) {
        const std::size_t row = keep == Side::S ? i * dims.a + k : k * dims.a + i;
        const std::size_t col = keep == Side::S ? j * dims.a + k : k * dims.a + j;
        sum += m(idx(row), idx(col));
      }
      out(idx(i), idx(j)) = sum;
    }
  }
  return DensityOperator(std::move(out));
}

CMatrix coefficient_matrix(const StateVector& psi, Dims dims) {
  if (psi.dim() != dims.total())
    throw std::invalid_argument("state dimension does not match subsystem dimensions");
  CMatrix m(idx(dims.s), idx(dims.a));
  for (std::size_t i = 0; i < dims.s; ++i)
    for (std::size_t j = 0; j < dims.a; ++j) m(idx(i), idx(j)) = psi[i * dims.a + j];
  return m;
}

SvdResult svd_coeff_matrix(const StateVector& psi, Dims dims) {
  const CMatrix m = coefficient_matrix(psi, dims);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const CMatrix& u = svd.matrixU();
  const CMatrix& v = svd.matrixV();
  const auto rank = sv.size();

  auto leading_index = [&](Eigen::Index k) {
    for (Eigen::Index r = 0; r < u.rows(); ++r)
      if (std::abs(u(r, k)) > kTolNorm) return r;
    return u.rows();
  };

  std::vector<Eigen::Index> order(static_cast<std::size_t>(rank));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    if (std::abs(sv(x) - sv(y)) >= kTolNorm) return sv(x) > sv(y);
    return leading_index(x) < leading_index(y);
  });

  SvdResult out;
  out.left = u;
  out.right = v;
  out.singular_values.reserve(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Eigen::Index src = order[k];
    out.singular_values.push_back(sv(src));
    CVector l = u.col(src);
    CVector r = v.col(src);
    const Eigen::Index lead = leading_index(src);
    if (lead < l.size()) {
      const Complex phase = std::polar(1.0, -std::arg(l(lead)));
      l *= phase;
      r *= phase;  // keeps sigma |l><r| unchanged
    }
    out.left.col(idx(k)) = l;
    out.right.col(idx(k)) = r;
  }
  return out;
}

double purity(const DensityOperator& rho) {
  // Tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho.
  return rho.matrix().cwiseAbs2().sum();
}

double unitarity_deviation(const CMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace msim
