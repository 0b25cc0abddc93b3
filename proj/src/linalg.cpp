#include "hqw/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hqw {

namespace {

using EigenMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::ostringstream os;
        os << op << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows()
           << "x" << b.cols();
        throw DimensionError(os.str());
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("ComplexMatrix: entry count does not match rows*cols");
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) throw DimensionError("ComplexMatrix: ragged initializer");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::transposition(std::size_t n, std::size_t a, std::size_t b) {
    if (a >= n || b >= n) throw DimensionError("transposition: index out of range");
    ComplexMatrix m(n, n);
    m(a, b) += 1.0;
    m(b, a) += 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw DimensionError("matrix product: inner dimensions differ");
    ComplexMatrix out(rows_, rhs.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const cplx a = (*this)(r, k);
            if (a == cplx{}) continue;
            for (std::size_t c = 0; c < rhs.cols_; ++c) out(r, c) += a * rhs(k, c);
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
    require_same_shape(*this, rhs, "operator+");
    ComplexMatrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
    require_same_shape(*this, rhs, "operator-");
    ComplexMatrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator*(cplx s) const {
    ComplexMatrix out = *this;
    for (auto& x : out.data_) x *= s;
    return out;
}

std::vector<cplx> ComplexMatrix::apply(std::span<const cplx> v) const {
    if (v.size() != cols_) throw DimensionError("apply: vector length does not match columns");
    std::vector<cplx> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        cplx acc{};
        const cplx* row = data_.data() + r * cols_;
        for (std::size_t c = 0; c < cols_; ++c) acc += row[c] * v[c];
        out[r] = acc;
    }
    return out;
}

cplx ComplexMatrix::trace() const {
    if (!square()) throw DimensionError("trace: matrix is not square");
    cplx t{};
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& x : data_) s += std::norm(x);
    return std::sqrt(s);
}

double ComplexMatrix::max_asymmetry() const {
    if (!square()) throw DimensionError("max_asymmetry: matrix is not square");
    double worst = 0.0;
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = r; c < cols_; ++c)
            worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return worst;
}

bool ComplexMatrix::is_hermitian(double tol) const {
    return square() && max_asymmetry() < tol;
}

double ComplexMatrix::unitarity_defect() const {
    if (!square()) return std::numeric_limits<double>::infinity();
    const ComplexMatrix p = adjoint() * (*this);
    return max_abs_diff(p, identity(rows_));
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double worst = 0.0;
    auto da = a.data();
    auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) worst = std::max(worst, std::abs(da[i] - db[i]));
    return worst;
}

double phase_insensitive_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "phase_insensitive_distance");
    cplx overlap{};
    auto da = a.data();
    auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) overlap += std::conj(db[i]) * da[i];
    const cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx{1.0, 0.0};
    return max_abs_diff(a, b * phase);
}

// ---------------------------------------------------------------------------

StateVector::StateVector(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {}

StateVector::StateVector(std::vector<cplx> amplitudes, std::size_t coin_dim, std::size_t pos_dim)
    : amps_(std::move(amplitudes)) {
    set_factorization(coin_dim, pos_dim);
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw DimensionError("basis: index out of range");
    std::vector<cplx> v(dim);
    v[index] = 1.0;
    return StateVector(std::move(v));
}

StateVector StateVector::product(std::span<const cplx> coin, std::span<const cplx> position) {
    std::vector<cplx> v;
    v.reserve(coin.size() * position.size());
    for (const auto& c : coin)
        for (const auto& p : position) v.push_back(c * p);
    return StateVector(std::move(v), coin.size(), position.size());
}

void StateVector::set_factorization(std::size_t coin_dim, std::size_t pos_dim) {
    if (coin_dim * pos_dim != amps_.size()) {
        throw DimensionError("StateVector: coin_dim*pos_dim does not match dimension");
    }
    coin_dim_ = coin_dim;
    pos_dim_ = pos_dim;
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

double StateVector::norm() const { return std::sqrt(norm_squared()); }

cplx StateVector::inner(const StateVector& other) const {
    if (dim() != other.dim()) throw DimensionError("inner: dimension mismatch");
    cplx s{};
    for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
    return s;
}

// ---------------------------------------------------------------------------

DensityOperator::DensityOperator(ComplexMatrix m) : m_(std::move(m)) {
    if (!m_.square()) throw DimensionError("DensityOperator: matrix is not square");
    const double asym = m_.max_asymmetry();
    if (asym >= 1e-12) {
        throw NotHermitianError("DensityOperator: not Hermitian, max asymmetry " +
                                    std::to_string(asym),
                                asym);
    }
    if (std::abs(m_.trace() - cplx{1.0, 0.0}) >= 1e-10) {
        throw std::invalid_argument("DensityOperator: trace differs from 1");
    }
    const auto eig = hermitian_eig(m_);
    if (!eig.values.empty() && eig.values.front() < -1e-10) {
        throw std::invalid_argument("DensityOperator: negative eigenvalue " +
                                    std::to_string(eig.values.front()));
    }
}

DensityOperator DensityOperator::unchecked(ComplexMatrix m) {
    DensityOperator d;
    d.m_ = std::move(m);
    return d;
}

DensityOperator DensityOperator::from_pure(const StateVector& psi) {
    const std::size_t n = psi.dim();
    ComplexMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(r, c) = psi[r] * std::conj(psi[c]);
    return unchecked(std::move(m));
}

// ---------------------------------------------------------------------------

EigenSystem hermitian_eig(const ComplexMatrix& m, double tol) {
    if (!m.square()) {
        throw DimensionError("hermitian_eig: matrix is " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()) + ", expected square");
    }
    const double asym = m.max_asymmetry();
    if (asym >= tol) {
        std::ostringstream os;
        os << "hermitian_eig: matrix is not Hermitian (max asymmetry " << asym << ")";
        throw NotHermitianError(os.str(), asym);
    }
    const auto n = static_cast<Eigen::Index>(m.rows());
    EigenSystem out;
    if (n == 0) return out;
    Eigen::Map<const EigenMatrix> view(m.data().data(), n, n);
    // Symmetrize so rounding-level asymmetry never leaks into the solver.
    const Eigen::MatrixXcd herm = 0.5 * (view + view.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm);
    if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: no convergence");

    out.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    out.vectors = ComplexMatrix(m.rows(), m.cols());
    const auto& v = solver.eigenvectors();
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            out.vectors(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = v(r, c);
    return out;
}

Propagator::Propagator(const ComplexMatrix& h) : eig_(hermitian_eig(h)) {}

Propagator::Propagator(EigenSystem eig) : eig_(std::move(eig)) {}

ComplexMatrix Propagator::unitary(double t) const {
    const std::size_t n = dim();
    std::vector<cplx> phase(n);
    for (std::size_t k = 0; k < n; ++k) phase[k] = std::exp(-kI * (eig_.values[k] * t));
    const ComplexMatrix& v = eig_.vectors;
    ComplexMatrix u(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < n; ++k) {
            const cplx a = v(r, k) * phase[k];
            if (a == cplx{}) continue;
            for (std::size_t c = 0; c < n; ++c) u(r, c) += a * std::conj(v(c, k));
        }
    }
    return u;
}

std::vector<cplx> Propagator::apply(double t, std::span<const cplx> psi) const {
    const std::size_t n = dim();
    if (psi.size() != n) throw DimensionError("evolve: state dimension does not match H");
    const ComplexMatrix& v = eig_.vectors;
    std::vector<cplx> coeff(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{};
        for (std::size_t r = 0; r < n; ++r) acc += std::conj(v(r, k)) * psi[r];
        coeff[k] = acc * std::exp(-kI * (eig_.values[k] * t));
    }
    std::vector<cplx> out(n);
    for (std::size_t r = 0; r < n; ++r) {
        cplx acc{};
        for (std::size_t k = 0; k < n; ++k) acc += v(r, k) * coeff[k];
        out[r] = acc;
    }
    return out;
}

StateVector evolve(const ComplexMatrix& h, double t, const StateVector& psi) {
    if (!h.square() || h.rows() != psi.dim()) {
        throw DimensionError("evolve: H is " + std::to_string(h.rows()) + "x" +
                             std::to_string(h.cols()) + " but state has dimension " +
                             std::to_string(psi.dim()));
    }
    StateVector out(Propagator(h).apply(t, psi.amplitudes()));
    if (psi.coin_dim()) out.set_factorization(*psi.coin_dim(), *psi.pos_dim());
    return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar)
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const cplx s = a(ar, ac);
            if (s == cplx{}) continue;
            for (std::size_t br = 0; br < b.rows(); ++br)
                for (std::size_t bc = 0; bc < b.cols(); ++bc)
                    out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
        }
    return out;
}

DensityOperator partial_trace_coin(const DensityOperator& rho, std::size_t coin_dim,
                                   std::size_t pos_dim) {
    if (rho.dim() != coin_dim * pos_dim) {
        throw DimensionError("partial_trace_coin: dim " + std::to_string(rho.dim()) +
                             " != " + std::to_string(coin_dim) + "*" + std::to_string(pos_dim));
    }
    ComplexMatrix out(pos_dim, pos_dim);
    for (std::size_t c = 0; c < coin_dim; ++c)
        for (std::size_t r = 0; r < pos_dim; ++r)
            for (std::size_t s = 0; s < pos_dim; ++s)
                out(r, s) += rho(c * pos_dim + r, c * pos_dim + s);
    return DensityOperator::unchecked(std::move(out));
}

DensityOperator partial_trace_position(const DensityOperator& rho, std::size_t coin_dim,
                                       std::size_t pos_dim) {
    if (rho.dim() != coin_dim * pos_dim) {
        throw DimensionError("partial_trace_position: dimension factorization mismatch");
    }
    ComplexMatrix out(coin_dim, coin_dim);
    for (std::size_t a = 0; a < coin_dim; ++a)
        for (std::size_t b = 0; b < coin_dim; ++b)
            for (std::size_t p = 0; p < pos_dim; ++p)
                out(a, b) += rho(a * pos_dim + p, b * pos_dim + p);
    return DensityOperator::unchecked(std::move(out));
}

double von_neumann_entropy(const DensityOperator& rho) {
    const auto eig = hermitian_eig(rho.matrix(), 1e-10);
    double s = 0.0;
    for (double lambda : eig.values) {
        if (lambda > kEntropyCutoff) s -= lambda * std::log2(lambda);
    }
    return std::max(s, 0.0);
}

double fidelity(const StateVector& psi, const StateVector& phi) {
    if (psi.dim() != phi.dim()) throw DimensionError("fidelity: dimension mismatch");
    return std::abs(psi.inner(phi));
}

}  // namespace hqw
