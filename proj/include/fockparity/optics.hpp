#pragma once

// Phase shifter and 50/50 beamsplitter, plus the two-mode coefficient matrix
// K_nm whose (anti)symmetry controls output-port photon parity.
//
// Beamsplitter convention (output creation operators in terms of inputs):
//     A^dag = (a^dag + i b^dag) / sqrt(2),   B^dag = (i a^dag + b^dag) / sqrt(2)
// so an input monomial is rewritten with a^dag = (A^dag - i B^dag)/sqrt(2) and
// b^dag = (-i A^dag + B^dag)/sqrt(2). Output A occupies the slot of input a.

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "fockparity/fock_core.hpp"

namespace fockparity {

namespace detail {

/// e^{i theta}, exact when theta is an integer multiple of pi/2.
inline complex unit_phase(double theta) {
    const double quarter_turns = theta / (std::numbers::pi / 2.0);
    const double rounded = std::round(quarter_turns);
    if (std::abs(quarter_turns - rounded) < 1e-12 && std::abs(rounded) < 1e15) {
        const long long q = static_cast<long long>(rounded);
        switch (((q % 4) + 4) % 4) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
        }
    }
    return std::polar(1.0, theta);
}

/// Substitution rule for a pair of creation operators:
///     first^dag  -> m[0][0] first^dag + m[0][1] second^dag
///     second^dag -> m[1][0] first^dag + m[1][1] second^dag
using ModeMatrix = std::array<std::array<complex, 2>, 2>;

/// Expands (x^dag)^n (y^dag)^m / sqrt(n! m!) |0,0> where x, y are the rows of
/// `m`. Result index k holds the amplitude of |k, n+m-k>. Built by repeated
/// application of normalized ladder steps so every intermediate vector has
/// unit norm.
class MonomialExpander {
public:
    explicit MonomialExpander(const ModeMatrix& m) : m_(m) {}

    const std::vector<complex>& expand(unsigned n, unsigned m) {
        auto key = std::make_pair(n, m);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        std::vector<complex> out;
        if (n == 0 && m == 0) {
            out = {complex{1.0, 0.0}};
        } else if (n > 0) {
            out = raise(expand(n - 1, m), m_[0], n);
        } else {
            out = raise(expand(0, m - 1), m_[1], m);
        }
        return cache_.emplace(key, std::move(out)).first->second;
    }

private:
    // Applies (row[0] a^dag + row[1] b^dag) / sqrt(power) to a vector over total N-1.
    static std::vector<complex> raise(const std::vector<complex>& v, const std::array<complex, 2>& row,
                                      unsigned power) {
        const std::size_t total = v.size();  // new total photon number
        std::vector<complex> out(total + 1);
        const double scale = 1.0 / std::sqrt(static_cast<double>(power));
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (v[k] == complex{}) continue;
            const std::size_t rest = total - 1 - k;
            out[k + 1] += row[0] * std::sqrt(static_cast<double>(k + 1)) * v[k] * scale;
            out[k] += row[1] * std::sqrt(static_cast<double>(rest + 1)) * v[k] * scale;
        }
        return out;
    }

    ModeMatrix m_;
    std::map<std::pair<unsigned, unsigned>, std::vector<complex>> cache_;
};

inline void check_mode_pair(const MultiModeState& state, std::size_t a, std::size_t b) {
    state.check_mode(a);
    state.check_mode(b);
    if (a == b) throw InvalidMode("two-mode operation needs distinct modes, got " + std::to_string(a) + " twice");
}

/// Applies a linear substitution of the creation operators of modes (a, b).
/// Total photon number in the pair is conserved per basis tuple.
inline MultiModeState apply_two_mode_linear(const MultiModeState& state, std::size_t a, std::size_t b,
                                            const ModeMatrix& m) {
    check_mode_pair(state, a, b);
    MonomialExpander expander(m);
    AmplitudeMap out;
    const std::size_t cutoff = state.per_mode_cutoff();
    for (const auto& [occ, amp] : state.amplitudes()) {
        const auto& coeffs = expander.expand(occ[a], occ[b]);
        const unsigned total = occ[a] + occ[b];
        Occupation key = occ;
        for (unsigned k = 0; k <= total; ++k) {
            const complex v = amp * coeffs[k];
            if (v == complex{}) continue;
            key[a] = k;
            key[b] = total - k;
            out[key] += v;
        }
    }
    for (const auto& [occ, amp] : out) {
        if (std::abs(amp) < sparsity_floor) continue;
        if (occ[a] > cutoff || occ[b] > cutoff)
            throw CutoffOverflow("beamsplitter output (" + std::to_string(occ[a]) + ", " + std::to_string(occ[b]) +
                                 ") exceeds per-mode cutoff " + std::to_string(cutoff));
    }
    std::erase_if(out, [](const auto& kv) { return std::abs(kv.second) < sparsity_floor; });
    return MultiModeState(state.mode_count(), cutoff, std::move(out));
}

}  // namespace detail

/// U_phi = exp(i phi a^dag a): multiplies the n-photon amplitude by e^{i phi n}.
inline SingleModeState phase_shift(const SingleModeState& state, double phi) {
    std::vector<complex> amps(state.amplitudes().begin(), state.amplitudes().end());
    for (std::size_t n = 0; n < amps.size(); ++n) amps[n] *= detail::unit_phase(phi * static_cast<double>(n));
    return SingleModeState(std::move(amps), state.tail_mass());
}

inline SingleModeState phase_shift(const SingleModeState& state, std::size_t mode, double phi) {
    if (mode != 0) throw InvalidMode("single-mode state has only mode 0, got " + std::to_string(mode));
    return phase_shift(state, phi);
}

inline MultiModeState phase_shift(const MultiModeState& state, std::size_t mode, double phi) {
    state.check_mode(mode);
    AmplitudeMap amps = state.amplitudes();
    for (auto& [occ, amp] : amps) amp *= detail::unit_phase(phi * static_cast<double>(occ[mode]));
    return MultiModeState(state.mode_count(), state.per_mode_cutoff(), std::move(amps));
}

/// Symmetric 50/50 beamsplitter on (mode_a, mode_b). With `swap_ports` the
/// contents of the two slots enter the opposite input ports; outputs keep the
/// A-in-mode_a, B-in-mode_b placement.
inline MultiModeState beamsplitter_5050(const MultiModeState& state, std::size_t mode_a, std::size_t mode_b,
                                        bool swap_ports = false) {
    const double h = 1.0 / std::numbers::sqrt2;
    detail::ModeMatrix port_a{{{h, complex{0.0, -h}}, {complex{0.0, -h}, h}}};
    if (swap_ports) std::swap(port_a[0], port_a[1]);
    return detail::apply_two_mode_linear(state, mode_a, mode_b, port_a);
}

/// Dense row-major complex matrix; just enough structure for K_nm.
struct ComplexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<complex> data;

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    complex& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const complex& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    double squared_frobenius() const {
        double s = 0.0;
        for (const auto& v : data) s += std::norm(v);
        return s;
    }
};

struct BipartiteCoefficients {
    ComplexMatrix matrix;
    ComplexMatrix symmetric_part;
    ComplexMatrix antisymmetric_part;

    double total_weight() const { return matrix.squared_frobenius(); }
    double symmetric_weight() const { return symmetric_part.squared_frobenius(); }
    double antisymmetric_weight() const { return antisymmetric_part.squared_frobenius(); }

    /// Probability of an odd photon count in output A: sum|K^a|^2 / sum|K|^2.
    double odd_parity_probability() const {
        const double total = total_weight();
        if (total <= degenerate_floor) throw DegenerateState("coefficient matrix has zero weight");
        return antisymmetric_weight() / total;
    }
};

inline BipartiteCoefficients split_coefficients(ComplexMatrix k) {
    if (k.rows != k.cols) throw InvalidArgument("coefficient matrix must be square");
    BipartiteCoefficients out;
    out.symmetric_part = ComplexMatrix(k.rows, k.cols);
    out.antisymmetric_part = ComplexMatrix(k.rows, k.cols);
    for (std::size_t n = 0; n < k.rows; ++n) {
        for (std::size_t m = 0; m < k.cols; ++m) {
            out.symmetric_part(n, m) = (k(n, m) + k(m, n)) * 0.5;
            out.antisymmetric_part(n, m) = (k(n, m) - k(m, n)) * 0.5;
        }
    }
    out.matrix = std::move(k);
    return out;
}

/// Recovers K_nm for a state written as
///     sum_nm K_nm (B^dag + i A^dag)^n (B^dag - i A^dag)^m / (sqrt(2^{n+m} n! m!)) |0,0>
/// with A in `mode_a` and B in `mode_b`. Any other modes must sit in a single
/// definite occupation, which is factored out.
inline BipartiteCoefficients bipartite_coefficients(const MultiModeState& state, std::size_t mode_a,
                                                    std::size_t mode_b) {
    detail::check_mode_pair(state, mode_a, mode_b);
    const bool has_spectators = state.mode_count() > 2;
    if (has_spectators && !state.amplitudes().empty()) {
        const Occupation& ref = state.amplitudes().begin()->first;
        for (const auto& [occ, amp] : state.amplitudes()) {
            for (std::size_t j = 0; j < occ.size(); ++j) {
                if (j != mode_a && j != mode_b && occ[j] != ref[j])
                    throw InvalidMode("mode " + std::to_string(j) + " is not in a definite number state");
            }
        }
    }
    // A^dag = -i (X - Y)/sqrt2, B^dag = (X + Y)/sqrt2 with X, Y the n- and m-factors.
    const double h = 1.0 / std::numbers::sqrt2;
    const detail::ModeMatrix to_factors{{{complex{0.0, -h}, complex{0.0, h}}, {h, h}}};
    const MultiModeState factored = detail::apply_two_mode_linear(state, mode_a, mode_b, to_factors);

    std::size_t dim = 1;
    for (const auto& [occ, amp] : factored.amplitudes())
        dim = std::max<std::size_t>(dim, std::max(occ[mode_a], occ[mode_b]) + 1);
    ComplexMatrix k(dim, dim);
    for (const auto& [occ, amp] : factored.amplitudes()) k(occ[mode_a], occ[mode_b]) = amp;
    return split_coefficients(std::move(k));
}

}  // namespace fockparity
