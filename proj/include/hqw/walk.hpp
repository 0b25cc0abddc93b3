// Hybrid quantum walks: W(t) = exp(-iHt) (C (x) I) with H = sum_c |c><c| (x) S_c,
// plus the continuous and discrete coined walks they are compared against.

#pragma once

#include "hqw/graph.hpp"
#include "hqw/linalg.hpp"

#include <optional>
#include <utility>

namespace hqw {

class CoinSpec {
public:
    enum class Kind { identity, hadamard, fourier, grover, permutation, custom };

    static CoinSpec identity() { return CoinSpec(Kind::identity); }
    static CoinSpec hadamard() { return CoinSpec(Kind::hadamard); }
    static CoinSpec fourier() { return CoinSpec(Kind::fourier); }
    static CoinSpec grover() { return CoinSpec(Kind::grover); }
    /// Product of the listed transpositions (a pair (i,i) is a fixed point).
    static CoinSpec permutation(std::vector<std::pair<std::size_t, std::size_t>> swaps);
    static CoinSpec custom(ComplexMatrix m);

    Kind kind() const noexcept { return kind_; }
    std::string name() const;

    /// Coin matrix on a `dim`-dimensional coin space; throws if the variant
    /// does not fit `dim` or the result is not unitary within 1e-10.
    ComplexMatrix realize(std::size_t dim) const;

private:
    explicit CoinSpec(Kind k) : kind_(k) {}

    Kind kind_;
    std::vector<std::pair<std::size_t, std::size_t>> swaps_;
    ComplexMatrix custom_;
};

class HybridWalk;

/// W(t) with the per-label propagators already evaluated at a fixed t.
class StepOperator {
public:
    StateVector apply(const StateVector& psi) const;
    /// exp(-iHt) only.
    StateVector propagate(const StateVector& psi) const;
    double time() const noexcept { return t_; }

private:
    friend class HybridWalk;
    double t_ = 0.0;
    std::size_t pos_dim_ = 0;
    ComplexMatrix coin_;
    std::vector<std::optional<ComplexMatrix>> block_unitaries_;  // nullopt: zero block
};

class HybridWalk {
public:
    HybridWalk(LabeledGraph graph, CoinSpec coin);
    HybridWalk(LabeledGraph graph, ComplexMatrix coin);

    const LabeledGraph& graph() const noexcept { return graph_; }
    std::size_t coin_dim() const noexcept { return blocks_.size(); }
    std::size_t pos_dim() const noexcept { return graph_.vertex_count(); }
    std::size_t dim() const noexcept { return coin_dim() * pos_dim(); }
    const ComplexMatrix& coin() const noexcept { return coin_; }
    const std::vector<SubgraphAdjacency>& blocks() const noexcept { return blocks_; }
    bool block_is_zero(std::size_t c) const { return !propagators_.at(c).has_value(); }

    ComplexMatrix assemble_hamiltonian() const;

    StateVector apply_coin(const ComplexMatrix& coin, const StateVector& psi) const;
    StateVector propagate(double t, const StateVector& psi) const;
    StateVector step(double t, const StateVector& psi) const;
    /// Same as step() but with a one-off coin (the walk's own coin is ignored).
    StateVector step_with_coin(double t, const ComplexMatrix& coin, const StateVector& psi) const;

    StepOperator step_operator(double t) const;
    StepOperator step_operator(double t, const ComplexMatrix& coin) const;

    /// Dense W(t), for small systems and tests.
    ComplexMatrix walk_matrix(double t) const;

    /// coin (x) |vertex> with the walk's factorization attached.
    StateVector initial_state(std::span<const cplx> coin_amplitudes, std::size_t vertex) const;

private:
    void check_state(const StateVector& psi) const;

    LabeledGraph graph_;
    ComplexMatrix coin_;
    std::vector<SubgraphAdjacency> blocks_;
    std::vector<std::optional<Propagator>> propagators_;
};

struct Trajectory {
    double t = 0.0;
    std::vector<StateVector> states;
    std::vector<std::vector<double>> distributions;
    std::vector<double> sigmas;
    std::vector<double> entropies;
};

/// states[k] = W(t)^k psi0, k = 0..steps, with per-step observables over
/// the supplied coordinates (graph coordinates when empty).
Trajectory run(const HybridWalk& walk, double t, std::size_t steps, const StateVector& psi0,
               std::vector<double> coords = {});

std::vector<double> position_distribution(const StateVector& psi, std::size_t coin_dim,
                                          std::size_t pos_dim);
/// sqrt(E[x^2] - E[x]^2) under distribution p.
double std_dev(std::span<const double> p, std::span<const double> coords);
/// Entropy of tr_c |psi><psi| in bits.
double entanglement_entropy(const StateVector& psi, std::size_t coin_dim, std::size_t pos_dim);

/// exp(-iAt) psi.
StateVector continuous_walk(const ComplexMatrix& a, double t, const StateVector& psi);
/// H(i,j) = delta_ij / sqrt2 - delta_{i+-1,j} / (2 sqrt2) on 2L+1 sites.
ComplexMatrix line_reference_hamiltonian(std::size_t half_length);

/// Coined walk on the line -L..L: each step applies the coin, then
/// S = |0><0| (x) sum|x+1><x| + |1><1| (x) sum|x-1><x|. psi0 is coin (x) position
/// with coin_dim 2 and pos_dim 2L+1. Throws if 2L+1 < 2*steps+1.
Trajectory discrete_coined_walk(std::size_t steps, const ComplexMatrix& coin,
                                const StateVector& psi0, std::size_t half_length);

/// Guard half-length used for s-step line walks.
constexpr std::size_t line_half_length(std::size_t steps) { return steps + 8; }
/// Probability on the outermost `band` sites at each end.
double boundary_probability(std::span<const double> p, std::size_t band);

/// P_1(t) = (1 - cos((a+b)t) cos((a-b)t)) / 2 on the 2-vertex circle, Hadamard coin, start |00>.
double oracle_p1_two_cycle(double a, double b, double t);

struct CnotRealization {
    double t;
    std::size_t k;         // t = k pi / a
    std::size_t l;         // t = (pi/2 + l pi) / b
    ComplexMatrix coin;    // diagonal phase coin making W(t) exactly CNOT
    double distance;       // phase-insensitive distance of W(t) to CNOT
};

/// Smallest verified t at which circle2(a,b) with a suitable coin realizes CNOT,
/// searching a/b = 2k/(1+2l) for l <= 10^4.
std::optional<CnotRealization> cnot_realizability(double a, double b);

}  // namespace hqw
