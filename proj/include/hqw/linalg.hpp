// Dense complex linear algebra used by every walk in the library.

#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hqw {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NotHermitianError : public std::invalid_argument {
public:
    NotHermitianError(const std::string& what, double asymmetry)
        : std::invalid_argument(what), asymmetry_(asymmetry) {}
    double asymmetry() const noexcept { return asymmetry_; }

private:
    double asymmetry_;
};

/// Row-major dense complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
    /// |a><b| + |b><a| on an n-dim space.
    static ComplexMatrix transposition(std::size_t n, std::size_t a, std::size_t b);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const cplx> data() const noexcept { return data_; }
    std::span<cplx> data() noexcept { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix operator*(const ComplexMatrix& rhs) const;
    ComplexMatrix operator+(const ComplexMatrix& rhs) const;
    ComplexMatrix operator-(const ComplexMatrix& rhs) const;
    ComplexMatrix operator*(cplx s) const;
    std::vector<cplx> apply(std::span<const cplx> v) const;

    cplx trace() const;
    double frobenius_norm() const;
    /// max |M[i][j] - conj(M[j][i])|; requires a square matrix.
    double max_asymmetry() const;
    bool is_hermitian(double tol = 1e-12) const;
    /// max |(M^dagger M - I)_{ij}|
    double unitarity_defect() const;
    bool is_unitary(double tol = 1e-10) const { return unitarity_defect() < tol; }

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

/// Max-abs entrywise difference.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// min over global phases theta of max |A - e^{i theta} B|, theta chosen from tr(B^dagger A).
double phase_insensitive_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Pure state; optionally factored as coin (x) position.
class StateVector {
public:
    StateVector() = default;
    explicit StateVector(std::vector<cplx> amplitudes);
    StateVector(std::vector<cplx> amplitudes, std::size_t coin_dim, std::size_t pos_dim);

    static StateVector basis(std::size_t dim, std::size_t index);
    /// coin (x) position product state.
    static StateVector product(std::span<const cplx> coin, std::span<const cplx> position);

    std::size_t dim() const noexcept { return amps_.size(); }
    std::optional<std::size_t> coin_dim() const noexcept { return coin_dim_; }
    std::optional<std::size_t> pos_dim() const noexcept { return pos_dim_; }
    void set_factorization(std::size_t coin_dim, std::size_t pos_dim);

    cplx& operator[](std::size_t i) { return amps_[i]; }
    const cplx& operator[](std::size_t i) const { return amps_[i]; }
    std::span<const cplx> amplitudes() const noexcept { return amps_; }
    std::span<cplx> amplitudes() noexcept { return amps_; }

    double norm() const;
    double norm_squared() const;
    cplx inner(const StateVector& other) const;  // <this|other>

private:
    std::vector<cplx> amps_;
    std::optional<std::size_t> coin_dim_;
    std::optional<std::size_t> pos_dim_;
};

class DensityOperator {
public:
    DensityOperator() = default;
    /// Validates Hermiticity, unit trace and positivity.
    explicit DensityOperator(ComplexMatrix m);
    static DensityOperator from_pure(const StateVector& psi);
    /// Skips validation; for operators produced by trusted internal routines.
    static DensityOperator unchecked(ComplexMatrix m);

    std::size_t dim() const noexcept { return m_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return m_; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

private:
    ComplexMatrix m_;
};

struct EigenSystem {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // columns are eigenvectors
};

/// Eigendecomposition of a Hermitian matrix. Throws NotHermitianError when
/// max asymmetry exceeds `tol`, DimensionError for non-square input.
EigenSystem hermitian_eig(const ComplexMatrix& m, double tol = 1e-12);

/// e^{-iHt} via a cached eigendecomposition of H.
class Propagator {
public:
    explicit Propagator(const ComplexMatrix& h);
    explicit Propagator(EigenSystem eig);

    std::size_t dim() const noexcept { return eig_.values.size(); }
    const EigenSystem& eigensystem() const noexcept { return eig_; }

    ComplexMatrix unitary(double t) const;
    std::vector<cplx> apply(double t, std::span<const cplx> psi) const;

private:
    EigenSystem eig_;
};

StateVector evolve(const ComplexMatrix& h, double t, const StateVector& psi);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// tr_c over the leading (coin) factor of a coin (x) position operator.
DensityOperator partial_trace_coin(const DensityOperator& rho, std::size_t coin_dim,
                                   std::size_t pos_dim);
/// tr_p over the trailing factor; same nonzero spectrum as tr_c for pure states.
DensityOperator partial_trace_position(const DensityOperator& rho, std::size_t coin_dim,
                                       std::size_t pos_dim);

inline constexpr double kEntropyCutoff = 1e-12;

/// -sum lambda log2 lambda over eigenvalues above kEntropyCutoff, in bits.
double von_neumann_entropy(const DensityOperator& rho);

/// |<psi|phi>|, insensitive to global phase.
double fidelity(const StateVector& psi, const StateVector& phi);

}  // namespace hqw
