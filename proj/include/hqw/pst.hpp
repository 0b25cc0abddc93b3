// Perfect state transfer of a coin superposition along a path of a properly
// edge-colored graph, and the segment-line transfer demo.

#pragma once

#include "hqw/graph.hpp"
#include "hqw/walk.hpp"

#include <numbers>
#include <string>
#include <vector>

namespace hqw {

class PstError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Suffix appended to a color to form its parked (primed) copy.
inline constexpr std::string_view kPrimeSuffix = "'";

inline constexpr double kPstStepTime = 1.5 * std::numbers::pi;

struct PstPlan {
    LabeledGraph graph;                  // original coloring, labels c_1..c_N
    std::vector<std::string> colors;     // c_1..c_N
    std::vector<std::string> primed;     // c_1'..c_N'
    std::size_t source = 0;
    std::size_t target = 0;
    std::vector<std::size_t> path;       // source, w_1, ..., w_{M-1}, target
    std::vector<std::size_t> path_color_index;  // i_1..i_M as 0-based color indices

    std::size_t colors_count() const noexcept { return colors.size(); }
    std::size_t coin_dim() const noexcept { return 2 * colors.size(); }
    std::size_t path_length() const noexcept { return path.size() - 1; }  // M
};

/// Validates the coloring and path; picks a BFS shortest path when `path` is empty.
PstPlan make_pst_plan(const LabeledGraph& g, std::size_t source, std::size_t target,
                      std::vector<std::size_t> path = {});

struct PstOperators {
    ComplexMatrix prepare;              // P
    std::vector<ComplexMatrix> relay;   // C_1..C_{M-1}
    std::vector<ComplexMatrix> depart;  // D_1..D_N
    std::vector<ComplexMatrix> arrive;  // E_1..E_N
};

/// All coin-space (2N x 2N) permutation operators of the protocol, verified unitary.
PstOperators build_operators(const PstPlan& plan);

struct PstStage {
    std::string name;
    StateVector state;
};

struct PstTranscript {
    std::vector<PstStage> stages;
    /// Fidelity with the ideal intermediate state after each iteration l = 1..N.
    std::vector<double> iteration_fidelity;
    /// <c_i, target | final> / alpha_i for every alpha_i != 0 (expected i^M).
    std::vector<cplx> phases;
    double fidelity = 0.0;
};

struct PstResult {
    StateVector final_state;
    PstTranscript transcript;
};

/// Runs the protocol on sum_i alpha_i |c_i>|source>. Throws PstError when
/// alpha is not normalized or has the wrong length.
PstResult run_pst(const PstPlan& plan, std::span<const cplx> alpha);

/// |< sum_i alpha_i |c_i> (x) |target>, final >| over the 2N-dim coin space.
double verify_pst(const StateVector& final_state, std::span<const cplx> alpha, std::size_t target,
                  std::size_t pos_dim);

/// Sparse JSON dump of the transcript (stage name, nonzero amplitudes, fidelity).
std::string transcript_json(const PstPlan& plan, const PstTranscript& transcript);

struct SegmentTransfer {
    std::size_t m = 0;
    std::vector<std::string> coins;      // coin applied at each step ("I" or "swap")
    std::vector<std::string> active;     // coin label carrying the walker after each step
    std::vector<StateVector> states;     // initial, then after each step
    double arrival_probability = 0.0;    // P(vertex M) at the end
};

/// |b>|1> walked M-1 steps with W_k(pi/2): C_1 = I, C_k = |r><b| + |b><r| for k >= 2.
SegmentTransfer segment_line_transfer(std::size_t m);

}  // namespace hqw
