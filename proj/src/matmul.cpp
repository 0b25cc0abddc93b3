#include "hqw/matmul.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hqw {

RegularAdjacency regular_adjacency(const LabeledGraph& g) {
    const std::size_t n = g.vertex_count();
    RegularAdjacency adj;
    adj.n = n;
    adj.entries.assign(n * n, 0);
    for (const Edge& e : g.edges()) {
        if (e.is_loop()) throw MatmulError("adjacency factor has a self-loop at " + std::to_string(e.u));
        if (e.weight != 1.0) throw MatmulError("adjacency factor has a non-unit edge weight");
        if (adj(e.u, e.v)) {
            throw MatmulError("adjacency factor has parallel edges (" + std::to_string(e.u) + "," +
                              std::to_string(e.v) + ")");
        }
        adj.entries[e.u * n + e.v] = 1;
        adj.entries[e.v * n + e.u] = 1;
    }
    const RegularityReport report = validate_regular(g);
    if (!report.regular()) throw MatmulError("adjacency factor is " + report.describe());
    if (*report.degree == 0) throw MatmulError("adjacency factor has degree 0");
    adj.degree = *report.degree;
    return adj;
}

RegularGraphSequence::RegularGraphSequence(std::vector<RegularAdjacency> factors)
    : factors_(std::move(factors)) {
    if (factors_.empty()) throw MatmulError("need at least one factor");
    n_ = factors_.front().n;
    for (const auto& f : factors_) {
        if (f.n != n_) throw MatmulError("factors have different vertex counts");
        if (f.degree == 0) throw MatmulError("factor degree must be >= 1");
    }
}

RegularGraphSequence RegularGraphSequence::from_graphs(const std::vector<LabeledGraph>& graphs) {
    std::vector<RegularAdjacency> factors;
    for (const auto& g : graphs) factors.push_back(regular_adjacency(g));
    return RegularGraphSequence(std::move(factors));
}

RegularGraphSequence RegularGraphSequence::power(const LabeledGraph& g, std::size_t k) {
    if (k == 0) throw MatmulError("power must be >= 1");
    return RegularGraphSequence(std::vector<RegularAdjacency>(k, regular_adjacency(g)));
}

double RegularGraphSequence::degree_product() const {
    double p = 1.0;
    for (const auto& f : factors_) p *= static_cast<double>(f.degree);
    return p;
}

// ---------------------------------------------------------------------------

MultiRegisterState::MultiRegisterState(std::size_t base, std::size_t registers)
    : base_(base), registers_(registers) {
    if (base == 0 || registers < 2) throw MatmulError("register layout needs base >= 1, >= 2 registers");
}

MultiRegisterState MultiRegisterState::initial(std::size_t base, std::size_t k, std::size_t j) {
    if (j >= base) throw MatmulError("column index out of range");
    MultiRegisterState s(base, k + 1);
    RegisterTuple key(k + 1, 0);
    key.front() = static_cast<std::uint32_t>(j);
    key.back() = static_cast<std::uint32_t>(j);
    s.amps_.emplace(std::move(key), cplx{1.0, 0.0});
    return s;
}

void MultiRegisterState::add(RegisterTuple key, cplx amp) {
    if (key.size() != registers_) throw MatmulError("tuple length does not match register count");
    for (auto d : key)
        if (d >= base_) throw MatmulError("register digit out of range");
    auto [it, inserted] = amps_.try_emplace(std::move(key), amp);
    if (!inserted) it->second += amp;
}

cplx MultiRegisterState::amplitude(const RegisterTuple& key) const {
    auto it = amps_.find(key);
    return it == amps_.end() ? cplx{} : it->second;
}

double MultiRegisterState::norm_squared() const {
    double s = 0.0;
    for (const auto& [key, amp] : amps_) s += std::norm(amp);
    return s;
}

MultiRegisterState stage_walk(const MultiRegisterState& state, std::size_t coin_register,
                              const RegularAdjacency& adjacency) {
    const std::size_t regs = state.registers();
    if (coin_register < 1 || coin_register >= regs) {
        throw MatmulError("coin register " + std::to_string(coin_register) + " out of range");
    }
    if (adjacency.n != state.base()) throw MatmulError("adjacency size does not match register base");
    const std::size_t n = adjacency.n;
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(adjacency.degree));

    // With u = |k> and v = A|k>/sqrt(d), exp(-i S_k pi/(2 sqrt d)) = I - uu^T - vv^T - i(uv^T + vu^T).
    MultiRegisterState out(state.base(), regs);
    for (const auto& [key, amp] : state.amplitudes()) {
        const std::size_t k = key[coin_register - 1];
        const std::size_t m = key[regs - 1];
        RegisterTuple next = key;
        if (m == k) {
            for (std::size_t p = 0; p < n; ++p) {
                if (!adjacency(p, k)) continue;
                next.back() = static_cast<std::uint32_t>(p);
                out.add(next, -kI * inv_sqrt_d * amp);
            }
            continue;
        }
        out.add(next, amp);
        if (!adjacency(m, k)) continue;
        const double vm = inv_sqrt_d;
        for (std::size_t p = 0; p < n; ++p) {
            if (!adjacency(p, k)) continue;
            next.back() = static_cast<std::uint32_t>(p);
            out.add(next, -vm * inv_sqrt_d * amp);
        }
        next.back() = static_cast<std::uint32_t>(k);
        out.add(next, -kI * vm * amp);
    }
    std::erase_if(out.amps_, [](const auto& kv) { return kv.second == cplx{}; });
    return out;
}

MultiRegisterState generalized_cnot(const MultiRegisterState& state, std::size_t control,
                                    std::size_t target) {
    const std::size_t regs = state.registers();
    if (control < 1 || control > regs || target < 1 || target > regs) {
        throw MatmulError("register id out of range");
    }
    if (control == target) throw MatmulError("control and target must differ");
    const auto n = static_cast<std::uint32_t>(state.base());
    MultiRegisterState out(state.base(), regs);
    for (const auto& [key, amp] : state.amplitudes()) {
        RegisterTuple next = key;
        next[target - 1] = (key[target - 1] + key[control - 1]) % n;
        out.amps_.emplace(std::move(next), amp);
    }
    return out;
}

MultiRegisterState final_state(const RegularGraphSequence& seq, std::size_t j) {
    const std::size_t k = seq.length();
    MultiRegisterState psi = MultiRegisterState::initial(seq.n(), k, j);
    for (std::size_t l = 1; l <= k; ++l) {
        psi = stage_walk(psi, l, seq.factor(l));
        // Register K+1 already holds p_K after the last stage.
        if (l < k) psi = generalized_cnot(psi, k + 1, l + 1);
    }
    return psi;
}

double projection_probability(const MultiRegisterState& state, std::size_t i, std::size_t j) {
    if (i >= state.base() || j >= state.base()) throw MatmulError("projector index out of range");
    double p = 0.0;
    for (const auto& [key, amp] : state.amplitudes()) {
        if (key.front() == j && key.back() == i) p += std::norm(amp);
    }
    return p;
}

SampleResult sample_projector(double p, std::uint64_t shots, std::uint64_t seed) {
    if (shots == 0) throw MatmulError("shots must be >= 1");
    p = std::clamp(p, 0.0, 1.0);
    std::mt19937_64 rng(seed);
    std::binomial_distribution<std::uint64_t> draw(shots, p);
    SampleResult r;
    r.hits = draw(rng);
    r.estimate = static_cast<double>(r.hits) / static_cast<double>(shots);
    return r;
}

std::uint64_t entry_seed(std::uint64_t seed, std::size_t i, std::size_t j, std::size_t n) {
    // splitmix64 finalizer over the flat entry index
    std::uint64_t z = static_cast<std::uint64_t>(i * n + j) + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return seed ^ (z ^ (z >> 31));
}

namespace {

ProductEstimate estimate_from(double probability, double scale, std::size_t i, std::size_t j,
                              EstimateMode mode, std::uint64_t seed) {
    ProductEstimate est;
    est.i = i;
    est.j = j;
    est.mode = mode;
    est.probability = probability;
    if (mode.is_exact()) {
        est.estimate = probability;
    } else {
        const SampleResult s = sample_projector(probability, mode.shots, seed);
        est.hits = s.hits;
        est.estimate = s.estimate;
        const double shots = static_cast<double>(mode.shots);
        const double smoothed = (static_cast<double>(s.hits) + 1.0) / (shots + 2.0);
        const double radius = 3.0 * std::sqrt(smoothed * (1.0 - smoothed) / shots);
        est.precision_met = radius * scale < 0.5;
    }
    est.value = scale * est.estimate;
    return est;
}

}  // namespace

ProductEstimate product_entry(const RegularGraphSequence& seq, std::size_t i, std::size_t j,
                              EstimateMode mode) {
    if (i >= seq.n() || j >= seq.n()) {
        throw MatmulError("entry (" + std::to_string(i) + "," + std::to_string(j) +
                          ") out of range for n=" + std::to_string(seq.n()));
    }
    const MultiRegisterState psi = final_state(seq, j);
    return estimate_from(projection_probability(psi, i, j), seq.degree_product(), i, j, mode,
                         mode.is_exact() ? 0 : mode.seed);
}

std::vector<double> product_matrix(const RegularGraphSequence& seq, EstimateMode mode) {
    const std::size_t n = seq.n();
    std::vector<double> out(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const MultiRegisterState psi = final_state(seq, j);
        for (std::size_t i = 0; i < n; ++i) {
            const auto seed = mode.is_exact() ? 0 : entry_seed(mode.seed, i, j, n);
            out[i * n + j] = estimate_from(projection_probability(psi, i, j),
                                           seq.degree_product(), i, j, mode, seed)
                                 .value;
        }
    }
    return out;
}

double product_trace(const RegularGraphSequence& seq, EstimateMode mode) {
    double tr = 0.0;
    const std::size_t n = seq.n();
    for (std::size_t i = 0; i < n; ++i) {
        const auto seed = mode.is_exact() ? 0 : entry_seed(mode.seed, i, i, n);
        const MultiRegisterState psi = final_state(seq, i);
        tr += estimate_from(projection_probability(psi, i, i), seq.degree_product(), i, i, mode,
                            seed)
                  .value;
    }
    return tr;
}

long long triangles_at_vertex(const LabeledGraph& g, std::size_t k, EstimateMode mode) {
    const auto seq = RegularGraphSequence::power(g, 3);
    if (k >= seq.n()) throw MatmulError("vertex out of range");
    if (!mode.is_exact()) mode.seed = entry_seed(mode.seed, k, k, seq.n());
    return product_entry(seq, k, k, mode).rounded() / 2;
}

long long triangle_count(const LabeledGraph& g, EstimateMode mode) {
    const auto seq = RegularGraphSequence::power(g, 3);
    long long closed = 0;
    for (std::size_t k = 0; k < seq.n(); ++k) {
        EstimateMode m = mode;
        if (!m.is_exact()) m.seed = entry_seed(mode.seed, k, k, seq.n());
        closed += product_entry(seq, k, k, m).rounded();
    }
    return closed / 6;
}

}  // namespace hqw
