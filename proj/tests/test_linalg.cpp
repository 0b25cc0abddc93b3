#include "hqw/graph.hpp"
#include "hqw/linalg.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace hqw;
using std::numbers::pi;

namespace {

const ComplexMatrix kX{{0, 1}, {1, 0}};

ComplexMatrix star_of(const LabeledGraph& g, std::size_t k) {
    const ComplexMatrix a = adjacency_matrix(g);
    ComplexMatrix s(a.rows(), a.cols());
    for (std::size_t p = 0; p < a.rows(); ++p) {
        s(p, k) = a(p, k);
        s(k, p) = a(k, p);
    }
    return s;
}

double reconstruction_error(const ComplexMatrix& m, const EigenSystem& es) {
    const std::size_t n = m.rows();
    ComplexMatrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = es.values[i];
    return (es.vectors * d * es.vectors.adjoint() - m).frobenius_norm();
}

double max_diff(std::span<const cplx> a, std::span<const cplx> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("ComplexMatrix basics") {
    CHECK_THROWS_AS(ComplexMatrix(2, 2, std::vector<cplx>(3)), DimensionError);
    CHECK(kX.is_hermitian());
    CHECK(kX.is_unitary());
    CHECK((kX * kX) == ComplexMatrix::identity(2));
    CHECK(ComplexMatrix::transposition(3, 0, 2)(2, 0) == cplx{1.0});
    ComplexMatrix h{{1, kI}, {-kI, 2}};
    CHECK(h.max_asymmetry() < 1e-15);
    h(0, 1) = 2.0;
    CHECK(h.max_asymmetry() == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("hermitian_eig: Pauli X") {
    const EigenSystem es = hermitian_eig(kX);
    CHECK(es.values[0] == doctest::Approx(-1.0));
    CHECK(es.values[1] == doctest::Approx(1.0));
    CHECK(reconstruction_error(kX, es) < 1e-12);
}

TEST_CASE("hermitian_eig: 10-star spectrum") {
    const EigenSystem es = hermitian_eig(adjacency_matrix(build::star(10)));
    REQUIRE(es.values.size() == 10);
    CHECK(es.values.front() == doctest::Approx(-3.0));
    CHECK(es.values.back() == doctest::Approx(3.0));
    for (std::size_t i = 1; i < 9; ++i) CHECK(std::abs(es.values[i]) < 1e-12);
}

TEST_CASE("hermitian_eig: star of a 3-regular vertex") {
    const EigenSystem es = hermitian_eig(star_of(build::benchmark8(), 0));
    CHECK(es.values.front() == doctest::Approx(-std::sqrt(3.0)));
    CHECK(es.values.back() == doctest::Approx(std::sqrt(3.0)));
    for (std::size_t i = 1; i < 7; ++i) CHECK(std::abs(es.values[i]) < 1e-12);
}

TEST_CASE("hermitian_eig: errors") {
    ComplexMatrix m{{0, 1}, {0.5, 0}};
    try {
        hermitian_eig(m);
        FAIL("accepted a non-Hermitian matrix");
    } catch (const NotHermitianError& e) {
        CHECK(e.asymmetry() == doctest::Approx(0.5));
        CHECK(std::string(e.what()).find("0.5") != std::string::npos);
    }
    CHECK_THROWS_AS(hermitian_eig(ComplexMatrix(2, 3)), DimensionError);
}

TEST_CASE("hermitian_eig: random reconstruction and ordering") {
    std::mt19937_64 rng(7);
    for (std::size_t n : {1, 2, 5, 17, 64, 200, 512}) {
        const ComplexMatrix m = oracle::random_hermitian(n, rng);
        const EigenSystem es = hermitian_eig(m);
        CHECK(reconstruction_error(m, es) < 1e-9 * std::max<double>(1.0, m.frobenius_norm()));
        CHECK(std::is_sorted(es.values.begin(), es.values.end()));
        CHECK(es.vectors.is_unitary(1e-9));
    }
}

TEST_CASE("evolve: examples") {
    const StateVector zero = StateVector::basis(2, 0);
    const StateVector a = evolve(kX, pi / 2, zero);
    CHECK(std::abs(a[0]) < 1e-15);
    CHECK(std::abs(a[1] - cplx{0, -1}) < 1e-15);
    const StateVector b = evolve(kX, 0.0, zero);
    CHECK(max_diff(b.amplitudes(), zero.amplitudes()) < 1e-15);

    const StateVector c = evolve(adjacency_matrix(build::star(10)), pi / 6, StateVector::basis(10, 0));
    CHECK(std::abs(c[0]) < 1e-12);
    for (std::size_t j = 1; j < 10; ++j) CHECK(std::abs(c[j] - cplx{0, -1.0 / 3.0}) < 1e-12);

    CHECK_THROWS_AS(evolve(kX, 1.0, StateVector::basis(3, 0)), DimensionError);
}

TEST_CASE("evolve matches the Taylor oracle") {
    std::mt19937_64 rng(11);
    for (std::size_t n : {2, 6, 12}) {
        const ComplexMatrix h = oracle::random_hermitian(n, rng);
        const double t = 0.37 * static_cast<double>(n);
        const ComplexMatrix u = oracle::expm(h, cplx{0, -t});
        CHECK(max_abs_diff(Propagator(h).unitary(t), u) < 1e-9);
    }
}

TEST_CASE("evolve: unitarity and group law") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> time(-5.0, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 9) * 3;
        const ComplexMatrix h = oracle::random_hermitian(n, rng);
        const StateVector psi(oracle::random_state(n, rng));
        const double t1 = time(rng), t2 = time(rng);
        const StateVector one = evolve(h, t1, psi);
        CHECK(std::abs(one.norm() - psi.norm()) < 1e-10);
        const StateVector two = evolve(h, t1, evolve(h, t2, psi));
        const StateVector both = evolve(h, t1 + t2, psi);
        CHECK(max_diff(two.amplitudes(), both.amplitudes()) < 1e-9);
    }
}

TEST_CASE("kron: examples") {
    const ComplexMatrix ix = kron(ComplexMatrix::identity(2), kX);
    ComplexMatrix expect(4, 4);
    expect(0, 1) = expect(1, 0) = expect(2, 3) = expect(3, 2) = 1.0;
    CHECK(ix == expect);

    ComplexMatrix p0(2, 2), p1(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    const ComplexMatrix h = kron(p0, kX) + kron(p1, kX * 2.0);
    CHECK(h(0, 1) == cplx{1.0});
    CHECK(h(2, 3) == cplx{2.0});
    CHECK(h(0, 3) == cplx{0.0});

    const ComplexMatrix xi = kron(kX, ComplexMatrix::identity(2));
    CHECK((xi * xi) == ComplexMatrix::identity(4));
    CHECK(kron(ComplexMatrix(2, 3), ComplexMatrix(4, 5)).rows() == 8);
}

TEST_CASE("partial trace: examples") {
    const DensityOperator r0 = partial_trace_coin(DensityOperator::from_pure(StateVector::basis(4, 0)), 2, 2);
    CHECK(r0(0, 0) == cplx{1.0});
    CHECK(std::abs(r0(1, 1)) < 1e-15);

    const double h = 1.0 / std::sqrt(2.0);
    const StateVector bell(std::vector<cplx>{h, 0, 0, h});
    const DensityOperator rb = partial_trace_coin(DensityOperator::from_pure(bell), 2, 2);
    CHECK(max_abs_diff(rb.matrix(), ComplexMatrix::identity(2) * 0.5) < 1e-15);
    CHECK(von_neumann_entropy(rb) == doctest::Approx(1.0));

    CHECK_THROWS_AS(partial_trace_coin(rb, 3, 2), DimensionError);
}

TEST_CASE("partial trace: linearity and trace preservation") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t c = 2 + trial % 3, p = 3 + trial % 4;
        const auto r1 = DensityOperator::from_pure(StateVector(oracle::random_state(c * p, rng)));
        const auto r2 = DensityOperator::from_pure(StateVector(oracle::random_state(c * p, rng)));
        const double a = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const DensityOperator mix(r1.matrix() * a + r2.matrix() * (1.0 - a));
        const auto lhs = partial_trace_coin(mix, c, p);
        const auto rhs = partial_trace_coin(r1, c, p).matrix() * a + partial_trace_coin(r2, c, p).matrix() * (1.0 - a);
        CHECK(max_abs_diff(lhs.matrix(), rhs) < 1e-10);
        CHECK(std::abs(lhs.matrix().trace() - 1.0) < 1e-10);
    }
}

TEST_CASE("entropy: examples and bounds") {
    std::mt19937_64 rng(9);
    const StateVector pure(oracle::random_state(6, rng));
    CHECK(von_neumann_entropy(DensityOperator::from_pure(pure)) < 1e-9);

    ComplexMatrix flat = ComplexMatrix::identity(10) * 0.1;
    CHECK(von_neumann_entropy(DensityOperator(flat)) == doctest::Approx(std::log2(10.0)).epsilon(1e-12));

    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 7;
        ComplexMatrix acc(n, n);
        const int parts = 1 + trial % 4;
        for (int k = 0; k < parts; ++k) acc = acc + DensityOperator::from_pure(StateVector(oracle::random_state(n, rng))).matrix() * (1.0 / parts);
        const double s = von_neumann_entropy(DensityOperator(acc));
        CHECK(s >= -1e-12);
        CHECK(s <= std::log2(static_cast<double>(n)) + 1e-9);
    }
}

TEST_CASE("DensityOperator validation") {
    CHECK_THROWS(DensityOperator(ComplexMatrix::identity(2)));              // trace 2
    CHECK_THROWS(DensityOperator(ComplexMatrix{{1.5, 0}, {0, -0.5}}));      // negative eigenvalue
    CHECK_THROWS(DensityOperator(ComplexMatrix{{0.5, 0.5}, {0, 0.5}}));     // not Hermitian
}

TEST_CASE("fidelity: examples") {
    std::mt19937_64 rng(1);
    const StateVector psi(oracle::random_state(5, rng));
    CHECK(fidelity(psi, psi) == doctest::Approx(1.0));
    CHECK(fidelity(StateVector::basis(3, 0), StateVector::basis(3, 2)) == 0.0);
    for (double theta : {0.3, 1.7, -2.9}) {
        std::vector<cplx> rot(psi.amplitudes().begin(), psi.amplitudes().end());
        for (auto& a : rot) a *= std::exp(cplx{0, theta});
        CHECK(fidelity(psi, StateVector(rot)) == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(fidelity(StateVector::basis(2, 0), StateVector::basis(3, 0)), DimensionError);
}
