#include "hqw/walk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hqw {

// ---------------------------------------------------------------------------
// Coins

CoinSpec CoinSpec::permutation(std::vector<std::pair<std::size_t, std::size_t>> swaps) {
    CoinSpec c(Kind::permutation);
    c.swaps_ = std::move(swaps);
    return c;
}

CoinSpec CoinSpec::custom(ComplexMatrix m) {
    CoinSpec c(Kind::custom);
    c.custom_ = std::move(m);
    return c;
}

std::string CoinSpec::name() const {
    switch (kind_) {
        case Kind::identity: return "identity";
        case Kind::hadamard: return "hadamard";
        case Kind::fourier: return "fourier";
        case Kind::grover: return "grover";
        case Kind::permutation: return "permutation";
        case Kind::custom: return "custom";
    }
    return "unknown";
}

ComplexMatrix CoinSpec::realize(std::size_t dim) const {
    if (dim == 0) throw DimensionError("coin: empty coin space");
    ComplexMatrix m;
    switch (kind_) {
        case Kind::identity:
            m = ComplexMatrix::identity(dim);
            break;
        case Kind::hadamard: {
            if (dim != 2) throw DimensionError("hadamard coin needs a 2-dim coin space");
            const double s = 1.0 / std::numbers::sqrt2;
            m = ComplexMatrix{{s, s}, {s, -s}};
            break;
        }
        case Kind::fourier: {
            m = ComplexMatrix(dim, dim);
            const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
            for (std::size_t j = 0; j < dim; ++j)
                for (std::size_t k = 0; k < dim; ++k) {
                    // reduce j*k mod dim first so the angle stays small
                    const double angle = 2.0 * std::numbers::pi *
                                         static_cast<double>((j * k) % dim) /
                                         static_cast<double>(dim);
                    m(j, k) = std::polar(norm, angle);
                }
            break;
        }
        case Kind::grover: {
            m = ComplexMatrix(dim, dim);
            const double off = 2.0 / static_cast<double>(dim);
            for (std::size_t j = 0; j < dim; ++j)
                for (std::size_t k = 0; k < dim; ++k) m(j, k) = off - (j == k ? 1.0 : 0.0);
            break;
        }
        case Kind::permutation: {
            std::vector<std::size_t> perm(dim);
            for (std::size_t i = 0; i < dim; ++i) perm[i] = i;
            for (auto [a, b] : swaps_) {
                if (a >= dim || b >= dim) throw DimensionError("permutation coin: index out of range");
                std::swap(perm[a], perm[b]);
            }
            m = ComplexMatrix(dim, dim);
            for (std::size_t i = 0; i < dim; ++i) m(perm[i], i) = 1.0;
            break;
        }
        case Kind::custom:
            if (custom_.rows() != dim || custom_.cols() != dim) {
                throw DimensionError("custom coin is " + std::to_string(custom_.rows()) + "x" +
                                     std::to_string(custom_.cols()) + ", coin space has dim " +
                                     std::to_string(dim));
            }
            m = custom_;
            break;
    }
    if (!m.is_unitary(1e-10)) {
        throw std::invalid_argument("coin '" + name() + "' is not unitary (defect " +
                                    std::to_string(m.unitarity_defect()) + ")");
    }
    return m;
}

// ---------------------------------------------------------------------------
// Hybrid walk

namespace {

bool is_zero(const ComplexMatrix& m) {
    auto d = m.data();
    return std::all_of(d.begin(), d.end(), [](const cplx& x) { return x == cplx{}; });
}

void apply_block(const ComplexMatrix& u, std::span<cplx> sector, std::vector<cplx>& scratch) {
    const std::size_t n = sector.size();
    scratch.assign(n, cplx{});
    for (std::size_t r = 0; r < n; ++r) {
        cplx acc{};
        for (std::size_t c = 0; c < n; ++c) acc += u(r, c) * sector[c];
        scratch[r] = acc;
    }
    std::copy(scratch.begin(), scratch.end(), sector.begin());
}

StateVector coin_times_identity(const ComplexMatrix& coin, std::size_t pos_dim,
                                const StateVector& psi) {
    const std::size_t cd = coin.rows();
    std::vector<cplx> out(psi.dim());
    for (std::size_t a = 0; a < cd; ++a)
        for (std::size_t b = 0; b < cd; ++b) {
            const cplx w = coin(a, b);
            if (w == cplx{}) continue;
            for (std::size_t p = 0; p < pos_dim; ++p) out[a * pos_dim + p] += w * psi[b * pos_dim + p];
        }
    return StateVector(std::move(out), cd, pos_dim);
}

}  // namespace

HybridWalk::HybridWalk(LabeledGraph graph, CoinSpec coin)
    : HybridWalk(graph, coin.realize(graph.labels().size())) {}

HybridWalk::HybridWalk(LabeledGraph graph, ComplexMatrix coin)
    : graph_(std::move(graph)), coin_(std::move(coin)) {
    if (graph_.labels().empty()) throw GraphError("hybrid walk needs at least one label");
    if (coin_.rows() != graph_.labels().size() || !coin_.square()) {
        throw DimensionError("coin dimension does not match the label count");
    }
    if (!coin_.is_unitary(1e-10)) throw std::invalid_argument("coin is not unitary");
    for (const auto& label : graph_.labels()) {
        blocks_.push_back(subgraph_adjacency(graph_, label));
        const ComplexMatrix& s = blocks_.back().matrix;
        if (is_zero(s)) {
            propagators_.emplace_back(std::nullopt);
        } else {
            propagators_.emplace_back(Propagator(s));
        }
    }
}

ComplexMatrix HybridWalk::assemble_hamiltonian() const {
    const std::size_t n = pos_dim();
    ComplexMatrix h(dim(), dim());
    for (std::size_t c = 0; c < coin_dim(); ++c) {
        const ComplexMatrix& s = blocks_[c].matrix;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t k = 0; k < n; ++k) h(c * n + r, c * n + k) = s(r, k);
    }
    return h;
}

void HybridWalk::check_state(const StateVector& psi) const {
    if (psi.dim() != dim()) {
        throw DimensionError("state dimension " + std::to_string(psi.dim()) +
                             " does not match walk dimension " + std::to_string(dim()));
    }
}

StateVector HybridWalk::apply_coin(const ComplexMatrix& coin, const StateVector& psi) const {
    check_state(psi);
    if (coin.rows() != coin_dim() || !coin.square()) {
        throw DimensionError("coin dimension does not match the walk");
    }
    return coin_times_identity(coin, pos_dim(), psi);
}

StateVector HybridWalk::propagate(double t, const StateVector& psi) const {
    check_state(psi);
    const std::size_t n = pos_dim();
    std::vector<cplx> out(psi.amplitudes().begin(), psi.amplitudes().end());
    for (std::size_t c = 0; c < coin_dim(); ++c) {
        if (!propagators_[c]) continue;
        std::span<const cplx> sector(out.data() + c * n, n);
        auto evolved = propagators_[c]->apply(t, sector);
        std::copy(evolved.begin(), evolved.end(), out.begin() + static_cast<std::ptrdiff_t>(c * n));
    }
    return StateVector(std::move(out), coin_dim(), n);
}

StateVector HybridWalk::step(double t, const StateVector& psi) const {
    return propagate(t, apply_coin(coin_, psi));
}

StateVector HybridWalk::step_with_coin(double t, const ComplexMatrix& coin,
                                       const StateVector& psi) const {
    return propagate(t, apply_coin(coin, psi));
}

StepOperator HybridWalk::step_operator(double t) const { return step_operator(t, coin_); }

StepOperator HybridWalk::step_operator(double t, const ComplexMatrix& coin) const {
    if (coin.rows() != coin_dim() || !coin.square()) {
        throw DimensionError("coin dimension does not match the walk");
    }
    StepOperator op;
    op.t_ = t;
    op.pos_dim_ = pos_dim();
    op.coin_ = coin;
    for (const auto& p : propagators_) {
        if (p) {
            op.block_unitaries_.emplace_back(p->unitary(t));
        } else {
            op.block_unitaries_.emplace_back(std::nullopt);
        }
    }
    return op;
}

StateVector StepOperator::propagate(const StateVector& psi) const {
    const std::size_t cd = block_unitaries_.size();
    if (psi.dim() != cd * pos_dim_) throw DimensionError("state dimension does not match walk");
    StateVector out = psi;
    std::vector<cplx> scratch;
    for (std::size_t c = 0; c < cd; ++c) {
        if (!block_unitaries_[c]) continue;
        apply_block(*block_unitaries_[c], out.amplitudes().subspan(c * pos_dim_, pos_dim_), scratch);
    }
    out.set_factorization(cd, pos_dim_);
    return out;
}

StateVector StepOperator::apply(const StateVector& psi) const {
    if (psi.dim() != coin_.rows() * pos_dim_) throw DimensionError("state dimension does not match walk");
    return propagate(coin_times_identity(coin_, pos_dim_, psi));
}

ComplexMatrix HybridWalk::walk_matrix(double t) const {
    const std::size_t n = pos_dim();
    ComplexMatrix s(dim(), dim());
    for (std::size_t c = 0; c < coin_dim(); ++c) {
        const ComplexMatrix u = propagators_[c] ? propagators_[c]->unitary(t) : ComplexMatrix::identity(n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t k = 0; k < n; ++k) s(c * n + r, c * n + k) = u(r, k);
    }
    return s * kron(coin_, ComplexMatrix::identity(n));
}

StateVector HybridWalk::initial_state(std::span<const cplx> coin_amplitudes,
                                      std::size_t vertex) const {
    if (coin_amplitudes.size() != coin_dim()) {
        throw DimensionError("initial coin has " + std::to_string(coin_amplitudes.size()) +
                             " amplitudes, coin space has dim " + std::to_string(coin_dim()));
    }
    if (vertex >= pos_dim()) throw DimensionError("initial vertex out of range");
    std::vector<cplx> pos(pos_dim());
    pos[vertex] = 1.0;
    return StateVector::product(coin_amplitudes, pos);
}

// ---------------------------------------------------------------------------
// Observables

std::vector<double> position_distribution(const StateVector& psi, std::size_t coin_dim,
                                          std::size_t pos_dim) {
    if (psi.dim() != coin_dim * pos_dim) {
        throw DimensionError("position_distribution: state dim does not factor as coin*pos");
    }
    std::vector<double> p(pos_dim, 0.0);
    for (std::size_t c = 0; c < coin_dim; ++c)
        for (std::size_t v = 0; v < pos_dim; ++v) p[v] += std::norm(psi[c * pos_dim + v]);
    return p;
}

double std_dev(std::span<const double> p, std::span<const double> coords) {
    if (p.size() != coords.size()) {
        throw DimensionError("std_dev: " + std::to_string(coords.size()) + " coordinates for " +
                             std::to_string(p.size()) + " probabilities");
    }
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        m1 += p[i] * coords[i];
        m2 += p[i] * coords[i] * coords[i];
    }
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

double entanglement_entropy(const StateVector& psi, std::size_t coin_dim, std::size_t pos_dim) {
    if (psi.dim() != coin_dim * pos_dim) {
        throw DimensionError("entanglement_entropy: state dim does not factor as coin*pos");
    }
    // tr_c and tr_p share their nonzero spectrum for a pure state; diagonalize the smaller one.
    const bool coin_side = coin_dim <= pos_dim;
    const std::size_t d = coin_side ? coin_dim : pos_dim;
    ComplexMatrix rho(d, d);
    if (coin_side) {
        for (std::size_t a = 0; a < coin_dim; ++a)
            for (std::size_t b = a; b < coin_dim; ++b) {
                cplx acc{};
                for (std::size_t p = 0; p < pos_dim; ++p)
                    acc += psi[a * pos_dim + p] * std::conj(psi[b * pos_dim + p]);
                rho(a, b) = acc;
                rho(b, a) = std::conj(acc);
            }
    } else {
        for (std::size_t r = 0; r < pos_dim; ++r)
            for (std::size_t s = r; s < pos_dim; ++s) {
                cplx acc{};
                for (std::size_t c = 0; c < coin_dim; ++c)
                    acc += psi[c * pos_dim + r] * std::conj(psi[c * pos_dim + s]);
                rho(r, s) = acc;
                rho(s, r) = std::conj(acc);
            }
    }
    return von_neumann_entropy(DensityOperator::unchecked(std::move(rho)));
}

Trajectory run(const HybridWalk& walk, double t, std::size_t steps, const StateVector& psi0,
               std::vector<double> coords) {
    if (coords.empty()) coords = walk.graph().coordinates();
    const std::size_t cd = walk.coin_dim();
    const std::size_t pd = walk.pos_dim();
    if (psi0.dim() != cd * pd) throw DimensionError("run: initial state does not match walk");

    Trajectory traj;
    traj.t = t;
    auto record = [&](StateVector psi) {
        psi.set_factorization(cd, pd);
        traj.distributions.push_back(position_distribution(psi, cd, pd));
        traj.sigmas.push_back(std_dev(traj.distributions.back(), coords));
        traj.entropies.push_back(entanglement_entropy(psi, cd, pd));
        traj.states.push_back(std::move(psi));
    };
    record(psi0);
    if (steps == 0) return traj;
    const StepOperator op = walk.step_operator(t);
    for (std::size_t k = 0; k < steps; ++k) record(op.apply(traj.states.back()));
    return traj;
}

// ---------------------------------------------------------------------------
// Reference walks

StateVector continuous_walk(const ComplexMatrix& a, double t, const StateVector& psi) {
    return evolve(a, t, psi);
}

ComplexMatrix line_reference_hamiltonian(std::size_t half_length) {
    const std::size_t n = 2 * half_length + 1;
    ComplexMatrix h(n, n);
    const double diag = 1.0 / std::numbers::sqrt2;
    const double hop = -1.0 / (2.0 * std::numbers::sqrt2);
    for (std::size_t i = 0; i < n; ++i) {
        h(i, i) = diag;
        if (i + 1 < n) {
            h(i, i + 1) = hop;
            h(i + 1, i) = hop;
        }
    }
    return h;
}

Trajectory discrete_coined_walk(std::size_t steps, const ComplexMatrix& coin,
                                const StateVector& psi0, std::size_t half_length) {
    const std::size_t n = 2 * half_length + 1;
    if (n < 2 * steps + 1) {
        throw DimensionError("discrete_coined_walk: line of " + std::to_string(n) +
                             " sites cannot hold " + std::to_string(steps) + " steps");
    }
    if (coin.rows() != 2 || coin.cols() != 2) throw DimensionError("discrete walk coin must be 2x2");
    if (psi0.dim() != 2 * n) throw DimensionError("discrete walk state must be 2*(2L+1)");

    std::vector<double> coords(n);
    for (std::size_t k = 0; k < n; ++k)
        coords[k] = static_cast<double>(k) - static_cast<double>(half_length);

    Trajectory traj;
    auto record = [&](StateVector psi) {
        psi.set_factorization(2, n);
        traj.distributions.push_back(position_distribution(psi, 2, n));
        traj.sigmas.push_back(std_dev(traj.distributions.back(), coords));
        traj.entropies.push_back(entanglement_entropy(psi, 2, n));
        traj.states.push_back(std::move(psi));
    };
    record(psi0);
    for (std::size_t s = 0; s < steps; ++s) {
        const StateVector flipped = coin_times_identity(coin, n, traj.states.back());
        std::vector<cplx> shifted(2 * n);
        for (std::size_t x = 0; x + 1 < n; ++x) {
            shifted[x + 1] = flipped[x];              // coin 0 moves right
            shifted[n + x] = flipped[n + x + 1];      // coin 1 moves left
        }
        record(StateVector(std::move(shifted)));
    }
    return traj;
}

double boundary_probability(std::span<const double> p, std::size_t band) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (i < band || i + band >= p.size()) s += p[i];
    return s;
}

// ---------------------------------------------------------------------------
// Two-vertex circle

double oracle_p1_two_cycle(double a, double b, double t) {
    return 0.5 * (1.0 - std::cos((a + b) * t) * std::cos((a - b) * t));
}

std::optional<CnotRealization> cnot_realizability(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("cnot_realizability: a, b must be > 0");
    constexpr std::size_t kMaxL = 10000;
    constexpr double kTol = 1e-9;
    const ComplexMatrix cnot{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};
    const double pi = std::numbers::pi;

    for (std::size_t l = 0; l <= kMaxL; ++l) {
        // a/b = 2k/(1+2l)  <=>  k = a(1+2l)/(2b)
        const double k_real = a * static_cast<double>(1 + 2 * l) / (2.0 * b);
        const double k_round = std::round(k_real);
        if (k_round < 1.0 || std::abs(k_real - k_round) > kTol * std::max(1.0, k_real)) continue;

        const double t = (pi / 2.0 + static_cast<double>(l) * pi) / b;
        // S(t) = |0><0| (x) s0 I + |1><1| (x) s1 X at this t; undo both phases in the coin.
        const cplx s0 = std::cos(a * t);
        const cplx s1 = -kI * std::sin(b * t);
        ComplexMatrix coin{{std::conj(s0) / std::abs(s0), 0}, {0, std::conj(s1) / std::abs(s1)}};
        const HybridWalk walk(build::circle2(a, b), coin);
        const double dist = phase_insensitive_distance(walk.walk_matrix(t), cnot);
        if (dist < kTol) {
            return CnotRealization{t, static_cast<std::size_t>(k_round), l, std::move(coin), dist};
        }
    }
    return std::nullopt;
}

}  // namespace hqw
