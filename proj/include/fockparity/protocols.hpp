#pragma once

// End-to-end parity-heralded teleportation and generalized quantum scissors.
//
// Mode layout for every protocol: 0 = a (input), 1 = b and 2 = c (resource).
// Modes a and b are mixed on the 50/50 beamsplitter and counted as (A, B);
// mode c carries the output.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fockparity/fock_core.hpp"
#include "fockparity/measurement.hpp"
#include "fockparity/optics.hpp"
#include "fockparity/states.hpp"

namespace fockparity {

enum class Classification { success, failure, filtered };

inline std::string_view to_string(Classification c) {
    switch (c) {
        case Classification::success: return "success";
        case Classification::failure: return "failure";
        case Classification::filtered: return "filtered";
    }
    return "unknown";
}

struct OutcomeEntry {
    unsigned n_a = 0;
    unsigned n_b = 0;
    double probability = 0.0;
    /// Phase phi of the U_phi applied to mode c before comparing with the target.
    double correction_phase = 0.0;
    SingleModeState corrected_post_state;
    /// Empty when the protocol has no well-defined target.
    std::optional<double> fidelity_to_target;
    Classification classified = Classification::filtered;
};

struct ProtocolReport {
    std::string protocol;
    std::vector<OutcomeEntry> outcomes;
    double success_probability = 0.0;
    /// Value predicted analytically for this protocol and input.
    double expected_success_probability = 0.0;
    /// Probability-weighted mean fidelity over success outcomes.
    std::optional<double> mean_conditional_fidelity;
    /// Mode-c target; empty when the protocol cannot succeed.
    std::optional<SingleModeState> target;
    /// Three-mode state just before counting (A, B, c).
    MultiModeState measured_state = MultiModeState::vacuum(3, 0);

    double total_probability() const {
        double s = 0.0;
        for (const auto& o : outcomes) s += o.probability;
        return s;
    }
};

/// |<target|actual>|^2.
inline double fidelity(const SingleModeState& actual, const SingleModeState& target) {
    return std::norm(inner_product(target, actual));
}

/// Von Neumann entropy (bits) of either reduced state of a two-mode pure state.
inline double entanglement_entropy(const MultiModeState& state) {
    if (state.mode_count() != 2) throw InvalidArgument("entanglement entropy needs a two-mode state");
    if (state.size() == 0) throw DegenerateState("cannot take the entropy of a zero state");
    const Eigen::Index rows = state.max_occupation(0) + 1;
    const Eigen::Index cols = state.max_occupation(1) + 1;
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(rows, cols);
    for (const auto& [occ, amp] : state.amplitudes()) c(occ[0], occ[1]) = amp;
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c);
    const Eigen::VectorXd s = svd.singularValues();
    const double total = s.squaredNorm();
    double h = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double p = s(i) * s(i) / total;
        if (p < 1e-14) continue;
        h -= p * std::log2(p);
    }
    return h;
}

struct TeleportOptions {
    /// Re-encode the output into the phase-shifted basis (U_{pi/2}).
    bool retilde = false;
};

namespace detail {

inline SingleModeState to_single_mode(const MultiModeState& s, std::size_t cutoff) {
    if (s.mode_count() != 1) throw InvalidArgument("expected a one-mode state");
    std::vector<complex> amps(cutoff + 1);
    for (const auto& [occ, amp] : s.amplitudes()) {
        if (occ[0] > cutoff) throw CutoffOverflow("post-state exceeds output cutoff");
        amps[occ[0]] = amp;
    }
    return SingleModeState(std::move(amps));
}

/// Input on mode a, two-mode resource on (b, c), beamsplitter on (a, b).
inline MultiModeState mix_input_with_resource(const SingleModeState& input, const MultiModeState& resource) {
    const std::size_t room = input.cutoff() + resource.per_mode_cutoff();
    AmplitudeMap amps;
    for (std::size_t n = 0; n <= input.cutoff(); ++n) {
        if (std::abs(input[n]) < sparsity_floor) continue;
        for (const auto& [occ, amp] : resource.amplitudes()) {
            const complex v = input[n] * amp;
            if (std::abs(v) < sparsity_floor) continue;
            amps.emplace(Occupation{unsigned(n), occ[0], occ[1]}, v);
        }
    }
    return beamsplitter_5050(MultiModeState(3, room, std::move(amps)), 0, 1);
}

inline void finish_report(ProtocolReport& r) {
    double weighted = 0.0;
    bool any_fidelity = false;
    for (const auto& o : r.outcomes) {
        if (o.classified != Classification::success) continue;
        r.success_probability += o.probability;
        if (o.fidelity_to_target) {
            weighted += o.probability * *o.fidelity_to_target;
            any_fidelity = true;
        }
    }
    if (any_fidelity && r.success_probability > 0.0) r.mean_conditional_fidelity = weighted / r.success_probability;
}

inline ProtocolReport run_teleport(const QubitAmplitudes& q, const SingleModeState& u, const SingleModeState& v,
                                   bool enhanced, const TeleportOptions& opts) {
    const auto [plus, minus] = plus_minus(u, v);
    const std::size_t out_cutoff = plus.cutoff();
    const SingleModeState input = encode_qubit(q, u, v, /*tilde=*/true);
    const MultiModeState resource = make_resource(u, v, ResourceKind::phi_minus);

    ProtocolReport report;
    report.protocol = enhanced ? "teleport_enhanced" : "teleport_basic";
    report.expected_success_probability = enhanced ? 0.5 : 0.25;
    report.measured_state = mix_input_with_resource(input, resource);

    std::vector<complex> target_amps(out_cutoff + 1);
    for (std::size_t n = 0; n <= out_cutoff; ++n)
        target_amps[n] = q.eps_plus() * plus[n] + q.eps_minus() * minus[n];
    SingleModeState target = normalize(SingleModeState(std::move(target_amps)));
    const double retilde_phase = opts.retilde ? std::numbers::pi / 2.0 : 0.0;
    if (opts.retilde) target = phase_shift(target, retilde_phase);
    report.target = target;

    for (auto& o : enumerate_outcomes(report.measured_state, {0, 1})) {
        OutcomeEntry e;
        e.n_a = o.counts[0];
        e.n_b = o.counts[1];
        e.probability = o.probability;
        const bool odd_a = e.n_a % 2 == 1;
        const bool odd_b = e.n_b % 2 == 1;
        double correction = 0.0;
        if (enhanced) {
            if (odd_a != odd_b) {
                e.classified = Classification::success;
                // An odd count in B leaves eps+|+> - eps-|->; U_pi swaps u and v,
                // so it fixes |+> and flips the sign of |->.
                if (odd_b) correction = std::numbers::pi;
            } else {
                e.classified = odd_a ? Classification::failure : Classification::filtered;
            }
        } else {
            e.classified = odd_a ? Classification::success : odd_b ? Classification::failure : Classification::filtered;
        }
        e.correction_phase = correction + retilde_phase;
        e.corrected_post_state =
            phase_shift(to_single_mode(o.post_state, report.measured_state.per_mode_cutoff()).with_cutoff(out_cutoff),
                        e.correction_phase);
        e.fidelity_to_target = fidelity(e.corrected_post_state, target);
        report.outcomes.push_back(std::move(e));
    }
    finish_report(report);
    return report;
}

}  // namespace detail

/// Qubit eps+|+~> + eps-|-~> on mode a, resource |u>|v> - |v>|u> on (b, c).
/// Success: odd count in A. Odd-B-only outcomes are reported as failures with
/// their actual fidelities.
inline ProtocolReport teleport_basic(const QubitAmplitudes& q, const SingleModeState& u, const SingleModeState& v,
                                     const TeleportOptions& opts = {}) {
    return detail::run_teleport(q, u, v, /*enhanced=*/false, opts);
}

inline ProtocolReport teleport_basic(const QubitAmplitudes& q, const StateSpec& u_spec, const StateSpec& v_spec,
                                     const TeleportOptions& opts = {}) {
    return teleport_basic(q, build_state(u_spec), build_state(v_spec), opts);
}

/// As teleport_basic with v = U_pi u. Success: exactly one of A, B odd.
inline ProtocolReport teleport_enhanced(const QubitAmplitudes& q, const SingleModeState& u,
                                        const TeleportOptions& opts = {}) {
    return detail::run_teleport(q, u, phase_shift(u, std::numbers::pi), /*enhanced=*/true, opts);
}

inline ProtocolReport teleport_enhanced(const QubitAmplitudes& q, const StateSpec& u_spec,
                                        const TeleportOptions& opts = {}) {
    return teleport_enhanced(q, build_state(u_spec), opts);
}

/// Truncates sum_n alpha_n |n> to alpha_N |N> + alpha_M |M> using the resource
/// (|N>|M> - |M>|N>)/sqrt2. The i^n factors of the phase-shifted input are
/// applied here; `alpha` holds the caller's plain coefficients.
///
/// Outcomes with N_A + N_B = N + M leave mode c in
///     alpha_N |N> - (-1)^{N_A} alpha_M |M>
/// and are corrected by U_phi with phi = pi/(M - N) whenever that sign is -1.
inline ProtocolReport quantum_scissors(const SingleModeState& alpha, unsigned n_keep, unsigned m_keep) {
    if (n_keep == m_keep) throw InvalidResource("scissors resource needs N != M");
    const SingleModeState coeffs = normalize(alpha);
    const unsigned top = std::max(n_keep, m_keep);
    const MultiModeState resource =
        make_resource(SingleModeState::number(n_keep, top), SingleModeState::number(m_keep, top), ResourceKind::phi_minus);

    ProtocolReport report;
    report.protocol = "quantum_scissors";
    report.expected_success_probability = 0.5 * (std::norm(coeffs[n_keep]) + std::norm(coeffs[m_keep]));
    report.measured_state = detail::mix_input_with_resource(phase_shift(coeffs, std::numbers::pi / 2.0), resource);

    std::vector<complex> target_amps(top + 1);
    target_amps[n_keep] = coeffs[n_keep];
    target_amps[m_keep] = coeffs[m_keep];
    const SingleModeState raw_target(std::move(target_amps));
    if (raw_target.squared_norm() > degenerate_floor) report.target = normalize(raw_target);

    const double flip_phase = std::numbers::pi / (static_cast<double>(m_keep) - static_cast<double>(n_keep));
    for (auto& o : enumerate_outcomes(report.measured_state, {0, 1})) {
        OutcomeEntry e;
        e.n_a = o.counts[0];
        e.n_b = o.counts[1];
        e.probability = o.probability;
        e.classified = e.n_a + e.n_b == n_keep + m_keep ? Classification::success : Classification::filtered;
        if (e.classified == Classification::success && e.n_a % 2 == 0) e.correction_phase = flip_phase;
        const SingleModeState post = detail::to_single_mode(o.post_state, report.measured_state.per_mode_cutoff());
        e.corrected_post_state = phase_shift(post.with_cutoff(top), e.correction_phase);
        if (report.target) e.fidelity_to_target = fidelity(e.corrected_post_state, *report.target);
        report.outcomes.push_back(std::move(e));
    }
    detail::finish_report(report);
    return report;
}

}  // namespace fockparity
