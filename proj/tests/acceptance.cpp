// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "hqw/matmul.hpp"
#include "hqw/pst.hpp"
#include "hqw/walk.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

using namespace hqw;
using std::numbers::pi;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

std::vector<cplx> basis_coin(std::size_t dim, std::size_t k) {
    std::vector<cplx> c(dim);
    c[k] = 1.0;
    return c;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
    return v;
}

Verdict circle_grid() {
    const auto start = Clock::now();
    double worst = 0.0;
    for (double a : linspace(0.25, 5.0, 10))
        for (double b : linspace(0.25, 5.0, 10)) {
            const HybridWalk walk(build::circle2(a, b), CoinSpec::hadamard());
            const StateVector psi0 = walk.initial_state(basis_coin(2, 0), 0);
            for (double t : linspace(0.0, 2.0 * pi, 100)) {
                const double p1 = position_distribution(walk.step(t, psi0), 2, 2)[1];
                worst = std::max(worst, std::abs(p1 - oracle::circle_p1(a, b, t)));
            }
        }
    const double secs = seconds_since(start);
    return {worst < 1e-10 && secs < 5.0, fmt("max error %.2e over 10000 points, %.2f s", worst, secs)};
}

Verdict stable_bands() {
    double worst = 0.0;
    for (double w : linspace(0.5, 5.0, 10)) {
        const HybridWalk walk(build::circle2(2 * w, 2 * w + 1), CoinSpec::hadamard());
        const StateVector psi0 = walk.initial_state(basis_coin(2, 0), 0);
        for (int k = 0; k <= 5; ++k) {
            const double p1 = position_distribution(walk.step(pi / 2 + k * pi, psi0), 2, 2)[1];
            worst = std::max(worst, std::abs(p1 - 0.5));
        }
    }
    return {worst < 1e-9, fmt("max |P1 - 1/2| %.2e for omega in 0.5..5, k = 0..5", worst)};
}

Verdict star_graphs() {
    double formula = 0.0, period = 0.0, half_pi = 0.0;
    for (std::size_t n = 4; n <= 12; ++n) {
        const HybridWalk walk(build::star(n), CoinSpec::fourier());
        const StateVector psi0 = walk.initial_state(basis_coin(n, 0), 0);
        std::vector<double> ids(n);
        std::iota(ids.begin(), ids.end(), 0.0);
        for (double t : linspace(0.0, pi, 25)) {
            const StateVector a = walk.step(t, psi0), b = walk.step(t + pi, psi0);
            const auto pa = position_distribution(a, n, n), pb = position_distribution(b, n, n);
            const auto want = oracle::star_distribution(n, t);
            for (std::size_t v = 0; v < n; ++v) {
                formula = std::max(formula, std::abs(pa[v] - want[v]));
                period = std::max(period, std::abs(pa[v] - pb[v]));
            }
            period = std::max(period, std::abs(std_dev(pa, ids) - std_dev(pb, ids)));
            period = std::max(period, std::abs(entanglement_entropy(a, n, n) - entanglement_entropy(b, n, n)));
        }
        const double s = entanglement_entropy(walk.step(pi / 2, psi0), n, n);
        half_pi = std::max(half_pi, std::abs(s - std::log2(static_cast<double>(n))));
    }
    return {formula < 1e-10 && period < 1e-9 && half_pi < 1e-9,
            fmt("formula %.2e, pi-period %.2e, S_E(pi/2) - log2 N %.2e", formula, period, half_pi)};
}

Verdict line_equivalence() {
    const auto start = Clock::now();
    const std::size_t steps = 100, half = 108;
    const HybridWalk walk(build::line2(half), CoinSpec::hadamard());
    const double h = 1.0 / std::sqrt(2.0);
    const std::vector<cplx> coin{h, -kI * h};
    const Trajectory tr = run(walk, pi / 2, steps, walk.initial_state(coin, half));
    const auto want = oracle::hadamard_walk(steps, coin[0], coin[1]);
    const auto& got = tr.distributions.back();
    double worst = 0.0;
    for (std::size_t v = 0; v < got.size(); ++v) {
        const long x = static_cast<long>(v) - static_cast<long>(half);
        const double w = std::labs(x) <= static_cast<long>(steps) ? want[static_cast<std::size_t>(x + static_cast<long>(steps))] : 0.0;
        worst = std::max(worst, std::abs(got[v] - w));
    }
    const double secs = seconds_since(start);
    return {worst < 1e-9 && secs < 30.0, fmt("max error %.2e at step 100, L = 108, %.2f s", worst, secs)};
}

struct LineRuns {
    std::vector<double> line2_sigma, discrete_sigma, line3_sigma, continuous_sigma;
    double line2_entropy = 0.0, line3_entropy = 0.0;
};

const LineRuns& line_runs() {
    static const LineRuns runs = [] {
        LineRuns r;
        const std::size_t steps = 100, half = line_half_length(steps);
        const double h = 1.0 / std::sqrt(2.0);
        const std::vector<cplx> coin{h, -kI * h};

        const HybridWalk l2(build::line2(half), CoinSpec::hadamard());
        const Trajectory t2 = run(l2, pi / 2, steps, l2.initial_state(coin, half));
        r.line2_sigma = t2.sigmas;
        r.line2_entropy = t2.entropies.back();

        std::vector<cplx> psi(2 * (2 * half + 1));
        psi[half] = coin[0];
        psi[(2 * half + 1) + half] = coin[1];
        const ComplexMatrix hadamard = ComplexMatrix{{1, 1}, {1, -1}} * h;
        r.discrete_sigma = discrete_coined_walk(steps, hadamard, StateVector(psi), half).sigmas;

        const HybridWalk l3(build::line3(half), CoinSpec::grover());
        const std::vector<cplx> uniform(3, 1.0 / std::sqrt(3.0));
        const Trajectory t3 = run(l3, pi / 2, steps, l3.initial_state(uniform, half));
        r.line3_sigma = t3.sigmas;
        r.line3_entropy = t3.entropies.back();

        const ComplexMatrix ham = line_reference_hamiltonian(half);
        std::vector<double> coords(2 * half + 1);
        std::iota(coords.begin(), coords.end(), -static_cast<double>(half));
        const Propagator prop(ham);
        const StateVector start = StateVector::basis(2 * half + 1, half);
        for (std::size_t s = 0; s <= steps; ++s) {
            const std::vector<cplx> out = prop.apply(static_cast<double>(s), start.amplitudes());
            std::vector<double> p(out.size());
            for (std::size_t v = 0; v < p.size(); ++v) p[v] = std::norm(out[v]);
            r.continuous_sigma.push_back(std_dev(p, coords));
        }
        return r;
    }();
    return runs;
}

double fit_slope(const std::vector<double>& sigma) {
    std::vector<double> xs, ys;
    for (std::size_t s = 20; s <= 100; ++s) {
        xs.push_back(static_cast<double>(s));
        ys.push_back(sigma[s]);
    }
    return oracle::slope(xs, ys);
}

Verdict spread_slopes() {
    const LineRuns& r = line_runs();
    const double s2 = fit_slope(r.line2_sigma), sd = fit_slope(r.discrete_sigma);
    const double s3 = fit_slope(r.line3_sigma), sc = fit_slope(r.continuous_sigma);
    const bool ok = std::abs(s2 - 0.54) <= 0.02 && std::abs(sd - 0.54) <= 0.02 && std::abs(s3 - 0.59) <= 0.02 &&
                    std::abs(sc - 0.50) <= 0.02;
    return {ok, fmt("line2 %.4f, discrete %.4f, line3 %.4f, continuous %.4f", s2, sd, s3, sc)};
}

Verdict entropy_ordering() {
    const LineRuns& r = line_runs();
    return {r.line3_entropy - r.line2_entropy > 0.05,
            fmt("S_E(line3) %.4f vs S_E(line2) %.4f bits at step 100", r.line3_entropy, r.line2_entropy)};
}

Verdict flat_band() {
    const std::size_t half = line_half_length(100);
    const HybridWalk walk(build::line3(half), CoinSpec::identity());
    double worst = 0.0;
    for (double t : {0.9, pi / 2, 2.3})
        for (std::size_t m = 0; m < 3; ++m) {
            const Trajectory tr = run(walk, t, 100, walk.initial_state(basis_coin(3, m), half));
            const std::size_t partner = half % 3 == m ? half + 1 : half - 1;
            for (const auto& p : tr.distributions) {
                double outside = 0.0;
                for (std::size_t v = 0; v < p.size(); ++v)
                    if (v != half && v != partner) outside += p[v];
                worst = std::max(worst, outside);
            }
        }
    return {worst < 1e-12, fmt("max leaked probability %.2e over 100 steps", worst)};
}

Verdict pst_suite() {
    std::mt19937_64 rng(20240611);
    double worst_fidelity = 0.0, worst_phase = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto c = oracle::random_colored_case(rng);
        const PstPlan plan = make_pst_plan(c.graph, c.path.front(), c.path.back(), c.path);
        const PstResult r = run_pst(plan, c.alpha);
        worst_fidelity = std::max(worst_fidelity, 1.0 - r.transcript.fidelity);
        cplx phase{1.0, 0.0};
        for (std::size_t k = 0; k < plan.path_length(); ++k) phase *= kI;
        const std::size_t n = plan.graph.vertex_count();
        for (std::size_t i = 0; i < plan.colors_count(); ++i)
            worst_phase = std::max(worst_phase, std::abs(r.final_state[i * n + plan.target] - phase * c.alpha[i]));
    }
    const PstPlan tree = make_pst_plan(build::colored_tree(16), 0, 14);
    std::vector<cplx> alpha(tree.colors_count());
    alpha[1] = alpha[2] = 1.0 / std::sqrt(2.0);
    worst_fidelity = std::max(worst_fidelity, 1.0 - run_pst(tree, alpha).transcript.fidelity);

    double worst_segment = 0.0;
    for (std::size_t m = 2; m <= 8; ++m)
        worst_segment = std::max(worst_segment, std::abs(1.0 - segment_line_transfer(m).arrival_probability));
    return {worst_fidelity <= 1e-9 && worst_phase < 1e-9 && worst_segment < 1e-9,
            fmt("1 - fidelity %.2e, phase error %.2e, segment 1 - P(M) %.2e", worst_fidelity, worst_phase,
                worst_segment)};
}

Verdict matmul_oracle() {
    static const std::vector<std::pair<std::size_t, std::size_t>> shapes{
        {2, 1}, {4, 1}, {6, 1}, {8, 1}, {3, 2}, {4, 2}, {5, 2}, {6, 2}, {7, 2}, {8, 2}, {4, 3}, {6, 3}, {8, 3}};
    std::mt19937_64 rng(777);
    double worst = 0.0, worst_col = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto [n, d0] = shapes[std::uniform_int_distribution<std::size_t>(0, shapes.size() - 1)(rng)];
        const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
        std::vector<LabeledGraph> graphs;
        while (graphs.size() < k) {
            const std::size_t d = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
            if (d >= n || (n * d) % 2 != 0) continue;
            graphs.push_back(build::random_regular(n, graphs.empty() ? d0 : d, rng()));
        }
        std::vector<oracle::IntMatrix> ints;
        for (const auto& g : graphs) ints.push_back(oracle::adjacency_ints(g));
        const auto want = oracle::product(ints);
        const RegularGraphSequence seq = RegularGraphSequence::from_graphs(graphs);
        const auto got = product_matrix(seq);
        for (std::size_t j = 0; j < n; ++j) {
            double col = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                worst = std::max(worst, std::abs(got[i * n + j] - static_cast<double>(want[i][j])));
                col += got[i * n + j];
            }
            worst_col = std::max(worst_col, std::abs(col - seq.degree_product()));
        }
    }
    return {worst < 1e-6 && worst_col < 1e-9, fmt("max entry error %.2e, max column-sum error %.2e", worst, worst_col)};
}

Verdict numeric_anchor() {
    const LabeledGraph g = build::benchmark8();
    const RegularGraphSequence seq = RegularGraphSequence::power(g, 3);
    const ProductEstimate exact = product_entry(seq, 0, 0);
    const double p = 2.0 / 27.0;
    const long long tri = triangles_at_vertex(g, 0);
    const double radius = 3.0 * std::sqrt(p * (1.0 - p) / 20000.0);
    int inside = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const ProductEstimate s = product_entry(seq, 0, 0, EstimateMode::sampled(20000, seed));
        if (std::abs(s.estimate - p) <= radius) ++inside;
    }
    const bool ok = std::abs(exact.probability - p) < 1e-12 && exact.rounded() == 2 && tri == 1 && inside >= 99;
    return {ok, fmt("p = %.12f, C00 = %.0f, triangles(0) = %.0f, shots within 3 sigma %.0f/100", exact.probability,
                    exact.value, static_cast<double>(tri), inside)};
}

Verdict cnot() {
    const auto yes = cnot_realizability(4, 2);
    const auto no = cnot_realizability(1, 1);
    const bool ok = yes.has_value() && yes->distance < 1e-9 && !no.has_value();
    const std::string first = yes ? fmt("(4,2): t = %.6f, distance %.2e", yes->t, yes->distance) : "(4,2): none";
    return {ok, first + (no ? "; (1,1): found" : "; (1,1): none")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"circle closed form", circle_grid},
        {"circle stable bands", stable_bands},
        {"star formulas and pi-periodicity", star_graphs},
        {"line2 equals Hadamard walk", line_equivalence},
        {"spread slopes", spread_slopes},
        {"entropy ordering", entropy_ordering},
        {"flat-band confinement", flat_band},
        {"perfect state transfer", pst_suite},
        {"matmul oracle equivalence", matmul_oracle},
        {"8-vertex anchor", numeric_anchor},
        {"CNOT realizability", cnot},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Verdict v;
        try {
            v = criteria[k].second();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, v.detail.c_str());
        std::fflush(stdout);
        failed += v.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
