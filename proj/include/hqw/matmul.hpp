// Products of regular-graph adjacency matrices computed from hybrid walks on
// K+1 base-n registers, plus triangle counting built on them.

#pragma once

#include "hqw/graph.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace hqw {

class MatmulError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// 0/1 adjacency stored densely, row-major.
struct RegularAdjacency {
    std::size_t n = 0;
    std::size_t degree = 0;
    std::vector<std::uint8_t> entries;

    bool operator()(std::size_t r, std::size_t c) const { return entries[r * n + c] != 0; }
};

/// Validates simple, unweighted, loop-free, regular input.
RegularAdjacency regular_adjacency(const LabeledGraph& g);

class RegularGraphSequence {
public:
    /// factors[0] is A^(1), applied first.
    explicit RegularGraphSequence(std::vector<RegularAdjacency> factors);
    static RegularGraphSequence from_graphs(const std::vector<LabeledGraph>& graphs);
    static RegularGraphSequence power(const LabeledGraph& g, std::size_t k);

    std::size_t n() const noexcept { return n_; }
    std::size_t length() const noexcept { return factors_.size(); }  // K
    const RegularAdjacency& factor(std::size_t l) const { return factors_.at(l - 1); }  // 1-based
    /// d_K ... d_1
    double degree_product() const;

private:
    std::size_t n_ = 0;
    std::vector<RegularAdjacency> factors_;
};

using RegisterTuple = std::vector<std::uint32_t>;

/// Sparse amplitudes over (registers)-tuples of base-n digits. Registers are
/// 1-based in the API to match the circuit layout.
class MultiRegisterState {
public:
    MultiRegisterState(std::size_t base, std::size_t registers);
    /// |j 0 ... 0 j> on K+1 registers.
    static MultiRegisterState initial(std::size_t base, std::size_t k, std::size_t j);

    std::size_t base() const noexcept { return base_; }
    std::size_t registers() const noexcept { return registers_; }
    const std::map<RegisterTuple, cplx>& amplitudes() const noexcept { return amps_; }
    std::size_t support_size() const noexcept { return amps_.size(); }

    void add(RegisterTuple key, cplx amp);
    cplx amplitude(const RegisterTuple& key) const;
    double norm_squared() const;

private:
    friend MultiRegisterState stage_walk(const MultiRegisterState&, std::size_t,
                                         const RegularAdjacency&);
    friend MultiRegisterState generalized_cnot(const MultiRegisterState&, std::size_t,
                                               std::size_t);

    std::size_t base_;
    std::size_t registers_;
    std::map<RegisterTuple, cplx> amps_;
};

/// W^(l)(pi / (2 sqrt d)) acting on registers (l, K+1): register l is the coin k,
/// register K+1 evolves under exp(-i S_k t) with S_k the star of vertex k.
MultiRegisterState stage_walk(const MultiRegisterState& state, std::size_t coin_register,
                              const RegularAdjacency& adjacency);

/// target <- (target + control) mod n on every support tuple.
MultiRegisterState generalized_cnot(const MultiRegisterState& state, std::size_t control,
                                    std::size_t target);

/// |Psi_f> for column j.
MultiRegisterState final_state(const RegularGraphSequence& seq, std::size_t j);

/// ||Pi_ij Psi_f||^2: register 1 on |j>, register K+1 on |i>.
double projection_probability(const MultiRegisterState& state, std::size_t i, std::size_t j);

struct SampleResult {
    std::uint64_t hits = 0;
    double estimate = 0.0;
};

/// Binomial(shots, p) draw from a generator seeded with `seed`.
SampleResult sample_projector(double p, std::uint64_t shots, std::uint64_t seed);

struct EstimateMode {
    enum class Kind { exact, shots };
    Kind kind = Kind::exact;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;

    static EstimateMode exact() { return {}; }
    static EstimateMode sampled(std::uint64_t shots, std::uint64_t seed) {
        return {Kind::shots, shots, seed};
    }
    bool is_exact() const noexcept { return kind == Kind::exact; }
};

struct ProductEstimate {
    std::size_t i = 0;
    std::size_t j = 0;
    EstimateMode mode;
    double probability = 0.0;   // exact ||Pi_ij Psi_f||^2
    double estimate = 0.0;      // probability estimate used for value (== probability when exact)
    double value = 0.0;         // d_K...d_1 * estimate
    std::uint64_t hits = 0;
    /// Whether the estimate provably rounds to the right integer: always true in
    /// exact mode; in shots mode, whether the 3-sigma binomial radius times
    /// d_K...d_1 is below 1/2. The radius uses (hits + 1) / (shots + 2) so an
    /// all-miss or all-hit sample never reports zero spread.
    bool precision_met = true;

    long long rounded() const { return static_cast<long long>(std::llround(value)); }
};

ProductEstimate product_entry(const RegularGraphSequence& seq, std::size_t i, std::size_t j,
                              EstimateMode mode = EstimateMode::exact());

/// Row-major n x n matrix of values.
std::vector<double> product_matrix(const RegularGraphSequence& seq,
                                   EstimateMode mode = EstimateMode::exact());

double product_trace(const RegularGraphSequence& seq, EstimateMode mode = EstimateMode::exact());

/// round(A^3_kk) / 2.
long long triangles_at_vertex(const LabeledGraph& g, std::size_t k,
                              EstimateMode mode = EstimateMode::exact());

/// sum_k round(A^3_kk) / 6.
long long triangle_count(const LabeledGraph& g, EstimateMode mode = EstimateMode::exact());

/// Per-entry seed for shots mode so entries are independent but reproducible.
std::uint64_t entry_seed(std::uint64_t seed, std::size_t i, std::size_t j, std::size_t n);

}  // namespace hqw
