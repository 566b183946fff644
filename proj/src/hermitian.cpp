#include "jointmeas/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "jointmeas/errors.hpp"

namespace jointmeas {

namespace {

constexpr int kMaxJacobiSweeps = 100;

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw InvalidInput(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                       " vs " + std::to_string(b.dim()) + ")");
  }
}

void require_hermitian(const ComplexMatrix& m, const char* what) {
  if (!is_hermitian(m)) {
    throw InvalidInput(std::string(what) + ": matrix is not Hermitian within tolerance");
  }
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (std::size_t p = 0; p < a.dim(); ++p) {
    for (std::size_t q = 0; q < a.dim(); ++q) {
      if (p != q) sum += std::norm(a(p, q));
    }
  }
  return std::sqrt(sum);
}

// One two-sided rotation zeroing a(p, q). The rotation is a phase on column q
// followed by a real Jacobi rotation, J = diag(1, e^{-i phi}) * [[c, s], [-s, c]].
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double b = std::abs(apq);
  if (b == 0.0) return;
  const Complex phase = apq / b;  // e^{i phi}
  const Complex phase_conj = std::conj(phase);

  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * b);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a.dim();

  // A <- A J, V <- V J
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = c * akp - s * phase_conj * akq;
    a(k, q) = s * akp + c * phase_conj * akq;
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = c * vkp - s * phase_conj * vkq;
    v(k, q) = s * vkp + c * phase_conj * vkq;
  }
  // A <- J* A
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = c * apk - s * phase * aqk;
    a(q, k) = s * apk + c * phase * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
  if (dim == 0) throw InvalidInput("ComplexMatrix: dimension must be positive");
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
  if (dim == 0) throw InvalidInput("ComplexMatrix: dimension must be positive");
  if (data_.size() != dim * dim) {
    throw InvalidInput("ComplexMatrix: expected " + std::to_string(dim * dim) + " entries, got " +
                       std::to_string(data_.size()));
  }
  if (!all_finite()) throw InvalidInput("ComplexMatrix: entries must be finite");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
  if (dim_ == 0) throw InvalidInput("ComplexMatrix: dimension must be positive");
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) throw InvalidInput("ComplexMatrix: rows must form a square matrix");
    data_.insert(data_.end(), row.begin(), row.end());
  }
  if (!all_finite()) throw InvalidInput("ComplexMatrix: entries must be finite");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> ket) {
  ComplexMatrix m(ket.size());
  for (std::size_t i = 0; i < ket.size(); ++i) {
    for (std::size_t j = 0; j < ket.size(); ++j) m(i, j) = ket[i] * std::conj(ket[j]);
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  }
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (const Complex& z : data_) sum += std::norm(z);
  return std::sqrt(sum);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& z : data_) m = std::max(m, std::abs(z));
  return m;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_dim(*this, other, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_dim(*this, other, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
  for (Complex& z : data_) z *= scalar;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  require_same_dim(lhs, rhs, "operator*");
  const std::size_t n = lhs.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex lik = lhs(i, k);
      if (lik == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += lik * rhs(k, j);
    }
  }
  return out;
}

std::vector<Complex> HermitianEigen::eigenvector(std::size_t k) const {
  std::vector<Complex> ket(vectors.dim());
  for (std::size_t i = 0; i < ket.size(); ++i) ket[i] = vectors(i, k);
  return ket;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  const std::size_t n = m.dim();
  double dev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      dev = std::max(dev, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  return dev <= tol * std::max(1.0, m.max_abs());
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  ComplexMatrix out = m + m.adjoint();
  out *= 0.5;
  return out;
}

HermitianEigen eigh(const ComplexMatrix& m) {
  require_hermitian(m, "eigh");
  ComplexMatrix a = hermitian_part(m);
  const std::size_t n = a.dim();
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = a.frobenius_norm();
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    const double off = off_diagonal_norm(a);
    if (off == 0.0 || off <= 1e-16 * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

ComplexMatrix reassemble(const HermitianEigen& eig, std::span<const double> values) {
  const std::size_t n = eig.vectors.dim();
  ComplexMatrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (values[k] == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex uik = eig.vectors(i, k) * values[k];
      for (std::size_t j = 0; j < n; ++j) out(i, j) += uik * std::conj(eig.vectors(j, k));
    }
  }
  return hermitian_part(out);
}

ComplexMatrix apply_spectral(const ComplexMatrix& m, const std::function<double(double)>& fn) {
  const HermitianEigen eig = eigh(m);
  std::vector<double> mapped(eig.values.size());
  std::transform(eig.values.begin(), eig.values.end(), mapped.begin(), fn);
  return reassemble(eig, mapped);
}

double op_norm(const ComplexMatrix& m) {
  if (!m.all_finite()) throw InvalidInput("op_norm: matrix has non-finite entries");
  if (is_hermitian(m)) {
    const HermitianEigen eig = eigh(m);
    return std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
  }
  const HermitianEigen eig = eigh(m.adjoint() * m);
  return std::sqrt(std::max(0.0, eig.values.back()));
}

ComplexMatrix commutator(const ComplexMatrix& x, const ComplexMatrix& y) {
  require_same_dim(x, y, "commutator");
  return x * y - y * x;
}

double commutator_norm(const ComplexMatrix& x, const ComplexMatrix& y) {
  require_same_dim(x, y, "commutator_norm");
  require_hermitian(x, "commutator_norm");
  require_hermitian(y, "commutator_norm");
  const ComplexMatrix k = hermitian_part(commutator(x, y) * Complex(0.0, 1.0));
  const HermitianEigen eig = eigh(k);
  return std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
}

bool psd_check(const ComplexMatrix& m, double tol) {
  require_hermitian(m, "psd_check");
  return eigh(m).values.front() >= -tol;
}

ComplexMatrix project_psd(const ComplexMatrix& m) {
  require_hermitian(m, "project_psd");
  return apply_spectral(m, [](double x) { return std::max(x, 0.0); });
}

ComplexMatrix project_spectrum_interval(const ComplexMatrix& m, double lo, double hi) {
  require_hermitian(m, "project_spectrum_interval");
  if (lo > hi) throw InvalidInput("project_spectrum_interval: empty interval");
  return apply_spectral(m, [lo, hi](double x) { return std::clamp(x, lo, hi); });
}

ComplexMatrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix pauli_y() { return {{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}}; }
ComplexMatrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

}  // namespace jointmeas
