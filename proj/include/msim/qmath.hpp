#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace msim {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Largest Hilbert-space dimension accepted by any dense routine.
inline constexpr std::size_t kMaxDim = 64;

inline constexpr double kTolNorm = 1e-9;
inline constexpr double kTolHerm = 1e-9;
inline constexpr double kPsdSlack = 1e-10;
inline constexpr double kTolExact = 1e-12;

enum class Side { S, A };

const char* to_string(Side side);

/// Subsystem dimensions of a bipartite space; composite index is i * a + j.
struct Dims {
  std::size_t s = 2;
  std::size_t a = 2;

  std::size_t total() const { return s * a; }
  std::size_t of(Side side) const { return side == Side::S ? s : a; }
  bool operator==(const Dims&) const = default;
};

/// Normalized pure state. Construction validates finiteness, dimension and norm.
class StateVector {
 public:
  explicit StateVector(CVector amps);
  StateVector(std::initializer_list<Complex> amps);

  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const CVector& amps() const { return amps_; }
  Complex operator[](std::size_t k) const { return amps_(static_cast<Eigen::Index>(k)); }

 private:
  CVector amps_;
};

/// Hermitian, unit-trace, positive-semidefinite matrix.
class DensityOperator {
 public:
  explicit DensityOperator(CMatrix entries);

  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
  const CMatrix& matrix() const { return rho_; }
  Complex operator()(std::size_t i, std::size_t j) const {
    return rho_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  CMatrix rho_;
};

struct ValidationReport {
  double hermiticity_deviation = 0.0;  // max |rho - rho^dagger|
  double trace_deviation = 0.0;        // |Tr rho - 1|
  double min_eigenvalue = 0.0;         // of the Hermitian part
  bool square = true;
  bool finite = true;

  bool hermitian() const { return hermiticity_deviation <= kTolHerm; }
  bool unit_trace() const { return trace_deviation <= kTolNorm; }
  bool positive() const { return min_eigenvalue >= -kPsdSlack; }
  bool ok() const { return square && finite && hermitian() && unit_trace() && positive(); }
};

/// Checks a square matrix against the density-operator invariants. Never throws.
ValidationReport validate(const CMatrix& rho);

StateVector tensor(const StateVector& v, const StateVector& w);

DensityOperator outer(const StateVector& v);

/// Traces out the subsystem that is not `keep`.
DensityOperator partial_trace(const DensityOperator& rho, Dims dims, Side keep);

/// Reshapes a composite vector into its dS x dA coefficient matrix.
CMatrix coefficient_matrix(const StateVector& psi, Dims dims);

struct SvdResult {
  std::vector<double> singular_values;  // descending
  CMatrix left;                         // columns are left singular vectors
  CMatrix right;                        // columns are right singular vectors
};

/// SVD of the coefficient matrix: M = sum_k sigma_k |l_k><r_k|.
///
/// Singular values within kTolNorm of each other are ordered by the index of
/// the first non-negligible component of their left vector, and each left
/// vector is rephased so that component is real and non-negative.
SvdResult svd_coeff_matrix(const StateVector& psi, Dims dims);

double purity(const DensityOperator& rho);

/// max_ij |U^dagger U - I|_ij
double unitarity_deviation(const CMatrix& u);

}  // namespace msim
