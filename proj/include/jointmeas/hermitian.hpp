#pragma once

// Dense complex linear algebra for the small (dim <= 16) operators that
// describe finite-dimensional measurements.

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace jointmeas {

using Complex = std::complex<double>;

/// Square complex matrix stored row-major.
class ComplexMatrix {
 public:
  /// Zero matrix of the given dimension. Throws InvalidInput for dim == 0.
  explicit ComplexMatrix(std::size_t dim);
  /// Row-major entries; throws InvalidInput unless entries.size() == dim*dim
  /// and every entry is finite.
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
  /// Nested rows, convenient in tests: {{1, 0}, {0, 1}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix outer(std::span<const Complex> ket);

  std::size_t dim() const { return dim_; }
  std::span<const Complex> entries() const { return data_; }

  Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return data_[row * dim_ + col];
  }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double frobenius_norm() const;
  /// Largest entry modulus.
  double max_abs() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scalar);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
  friend ComplexMatrix operator*(ComplexMatrix m, Complex s) { return m *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }
  friend ComplexMatrix operator-(ComplexMatrix m) { return m *= -1.0; }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t dim_;
  std::vector<Complex> data_;
};

/// Hermitian eigendecomposition M = U diag(values) U*, values ascending,
/// eigenvectors stored as the columns of `vectors`.
struct HermitianEigen {
  std::vector<double> values;
  ComplexMatrix vectors;

  std::vector<Complex> eigenvector(std::size_t k) const;
};

/// Default absolute scale for Hermiticity checks; scaled by max(1, |M|_max).
inline constexpr double kHermitianTolerance = 1e-9;

bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTolerance);

/// (M + M*) / 2.
ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// Cyclic complex Jacobi. Symmetrizes the input first; throws InvalidInput
/// if it is not Hermitian within tolerance.
HermitianEigen eigh(const ComplexMatrix& m);

/// U diag(fn(values)) U* for Hermitian m.
ComplexMatrix apply_spectral(const ComplexMatrix& m, const std::function<double(double)>& fn);
ComplexMatrix reassemble(const HermitianEigen& eig, std::span<const double> values);

/// Largest singular value.
double op_norm(const ComplexMatrix& m);

/// XY - YX.
ComplexMatrix commutator(const ComplexMatrix& x, const ComplexMatrix& y);

/// ||[X, Y]|| for Hermitian X and Y, computed from the spectrum of i[X, Y].
double commutator_norm(const ComplexMatrix& x, const ComplexMatrix& y);

/// True iff the smallest eigenvalue is >= -tol.
bool psd_check(const ComplexMatrix& m, double tol);

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped).
ComplexMatrix project_psd(const ComplexMatrix& m);

/// Nearest Hermitian matrix to m whose spectrum lies in [lo, hi].
ComplexMatrix project_spectrum_interval(const ComplexMatrix& m, double lo, double hi);

/// Pauli matrices.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

}  // namespace jointmeas
