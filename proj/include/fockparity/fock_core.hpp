#pragma once

// Truncated photon-number representations of single- and multimode pure
// states. Single modes are dense; multimode states are sparse maps keyed by
// occupation tuples, since linear optics only ever populates a handful of
// total-photon-number blocks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fockparity/errors.hpp"

namespace fockparity {

using complex = std::complex<double>;

/// Amplitudes with magnitude below this are never stored in a MultiModeState.
inline constexpr double sparsity_floor = 1e-15;
/// Squared norms at or below this cannot be normalized.
inline constexpr double degenerate_floor = 1e-14;

class SingleModeState {
public:
    /// The vacuum with cutoff 0.
    SingleModeState() : amplitudes_{complex{1.0, 0.0}} {}

    /// Takes ownership of `amplitudes` (index = photon number). `tail_mass`
    /// records the probability weight known to lie above the cutoff, as
    /// computed by a factory from an analytic series remainder.
    explicit SingleModeState(std::vector<complex> amplitudes, double tail_mass = 0.0)
        : amplitudes_(std::move(amplitudes)), tail_mass_(tail_mass) {
        if (amplitudes_.empty()) throw InvalidArgument("single-mode state needs at least one amplitude");
        for (const auto& a : amplitudes_) {
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
                throw InvalidArgument("single-mode amplitudes must be finite");
        }
        if (!(tail_mass_ >= 0.0)) throw InvalidArgument("tail mass must be non-negative");
    }

    static SingleModeState number(std::size_t n, std::size_t cutoff) {
        if (n > cutoff) throw CutoffOverflow("number state |" + std::to_string(n) + "> exceeds cutoff " + std::to_string(cutoff));
        std::vector<complex> amps(cutoff + 1);
        amps[n] = 1.0;
        return SingleModeState(std::move(amps));
    }

    std::size_t cutoff() const noexcept { return amplitudes_.size() - 1; }
    std::span<const complex> amplitudes() const noexcept { return amplitudes_; }
    double tail_mass() const noexcept { return tail_mass_; }

    /// Amplitude of |n>; zero above the cutoff.
    complex operator[](std::size_t n) const noexcept { return n < amplitudes_.size() ? amplitudes_[n] : complex{}; }

    double squared_norm() const noexcept {
        double s = 0.0;
        for (const auto& a : amplitudes_) s += std::norm(a);
        return s;
    }

    /// Zero-pads to a larger cutoff, or drops trailing zeros to a smaller one.
    SingleModeState with_cutoff(std::size_t cutoff) const {
        std::vector<complex> amps(cutoff + 1);
        for (std::size_t n = 0; n < amplitudes_.size(); ++n) {
            if (n <= cutoff) {
                amps[n] = amplitudes_[n];
            } else if (std::abs(amplitudes_[n]) >= sparsity_floor) {
                throw CutoffOverflow("cannot shrink cutoff below populated level " + std::to_string(n));
            }
        }
        return SingleModeState(std::move(amps), tail_mass_);
    }

private:
    std::vector<complex> amplitudes_;
    double tail_mass_ = 0.0;
};

using Occupation = std::vector<unsigned>;
using AmplitudeMap = std::map<Occupation, complex>;

class MultiModeState {
public:
    /// Validates every occupation tuple against `mode_count` and the cutoff;
    /// amplitudes below the sparsity floor are dropped.
    MultiModeState(std::size_t mode_count, std::size_t per_mode_cutoff, AmplitudeMap amplitudes)
        : mode_count_(mode_count), cutoff_(per_mode_cutoff) {
        if (mode_count_ == 0) throw InvalidArgument("multimode state needs at least one mode");
        for (auto& [occ, amp] : amplitudes) {
            if (occ.size() != mode_count_)
                throw InvalidArgument("occupation tuple has " + std::to_string(occ.size()) + " entries, expected " +
                                      std::to_string(mode_count_));
            if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag()))
                throw InvalidArgument("multimode amplitudes must be finite");
            if (std::abs(amp) < sparsity_floor) continue;
            for (unsigned n : occ) {
                if (n > cutoff_)
                    throw CutoffOverflow("occupation " + std::to_string(n) + " exceeds per-mode cutoff " +
                                         std::to_string(cutoff_));
            }
            amplitudes_.emplace_hint(amplitudes_.end(), occ, amp);
        }
    }

    static MultiModeState vacuum(std::size_t mode_count, std::size_t per_mode_cutoff) {
        return MultiModeState(mode_count, per_mode_cutoff, {{Occupation(mode_count, 0u), complex{1.0, 0.0}}});
    }

    std::size_t mode_count() const noexcept { return mode_count_; }
    std::size_t per_mode_cutoff() const noexcept { return cutoff_; }
    const AmplitudeMap& amplitudes() const noexcept { return amplitudes_; }
    std::size_t size() const noexcept { return amplitudes_.size(); }

    complex amplitude(const Occupation& occ) const {
        auto it = amplitudes_.find(occ);
        return it == amplitudes_.end() ? complex{} : it->second;
    }

    double squared_norm() const noexcept {
        double s = 0.0;
        for (const auto& [occ, amp] : amplitudes_) s += std::norm(amp);
        return s;
    }

    bool is_normalized(double tol = 1e-12) const noexcept { return std::abs(squared_norm() - 1.0) <= tol; }

    /// Largest photon number present in `mode`.
    unsigned max_occupation(std::size_t mode) const {
        check_mode(mode);
        unsigned m = 0;
        for (const auto& [occ, amp] : amplitudes_) m = std::max(m, occ[mode]);
        return m;
    }

    MultiModeState with_cutoff(std::size_t per_mode_cutoff) const {
        return MultiModeState(mode_count_, per_mode_cutoff, amplitudes_);
    }

    void check_mode(std::size_t mode) const {
        if (mode >= mode_count_)
            throw InvalidMode("mode index " + std::to_string(mode) + " out of range for " +
                              std::to_string(mode_count_) + "-mode state");
    }

private:
    std::size_t mode_count_;
    std::size_t cutoff_;
    AmplitudeMap amplitudes_;
};

struct TruncationReport {
    double tail_mass = 0.0;
    bool within_tolerance = true;
};

inline SingleModeState normalize(const SingleModeState& s) {
    const double n2 = s.squared_norm();
    if (n2 <= degenerate_floor) throw DegenerateState("cannot normalize a state with squared norm " + std::to_string(n2));
    const double scale = 1.0 / std::sqrt(n2);
    std::vector<complex> amps(s.amplitudes().begin(), s.amplitudes().end());
    for (auto& a : amps) a *= scale;
    return SingleModeState(std::move(amps), s.tail_mass());
}

inline MultiModeState normalize(const MultiModeState& s) {
    const double n2 = s.squared_norm();
    if (n2 <= degenerate_floor) throw DegenerateState("cannot normalize a state with squared norm " + std::to_string(n2));
    const double scale = 1.0 / std::sqrt(n2);
    AmplitudeMap amps = s.amplitudes();
    for (auto& [occ, amp] : amps) amp *= scale;
    return MultiModeState(s.mode_count(), s.per_mode_cutoff(), std::move(amps));
}

/// <s1|s2>, antilinear in the first argument. Unequal cutoffs are zero-padded.
inline complex inner_product(const SingleModeState& s1, const SingleModeState& s2) noexcept {
    const std::size_t n = std::min(s1.amplitudes().size(), s2.amplitudes().size());
    complex acc{};
    for (std::size_t k = 0; k < n; ++k) acc += std::conj(s1[k]) * s2[k];
    return acc;
}

inline complex inner_product(const MultiModeState& s1, const MultiModeState& s2) {
    if (s1.mode_count() != s2.mode_count()) throw InvalidArgument("inner product of states with different mode counts");
    complex acc{};
    for (const auto& [occ, amp] : s1.amplitudes()) acc += std::conj(amp) * s2.amplitude(occ);
    return acc;
}

/// Appends `s2` as a new last mode of `s1`.
inline MultiModeState tensor(const MultiModeState& s1, const SingleModeState& s2) {
    AmplitudeMap out;
    for (const auto& [occ, amp] : s1.amplitudes()) {
        Occupation key = occ;
        key.push_back(0);
        for (std::size_t n = 0; n <= s2.cutoff(); ++n) {
            const complex v = amp * s2[n];
            if (std::abs(v) < sparsity_floor) continue;
            key.back() = static_cast<unsigned>(n);
            out.emplace(key, v);
        }
    }
    return MultiModeState(s1.mode_count() + 1, std::max(s1.per_mode_cutoff(), s2.cutoff()), std::move(out));
}

inline MultiModeState as_multimode(const SingleModeState& s) {
    AmplitudeMap out;
    for (std::size_t n = 0; n <= s.cutoff(); ++n) out.emplace(Occupation{static_cast<unsigned>(n)}, s[n]);
    return MultiModeState(1, s.cutoff(), std::move(out));
}

/// Product state with amplitude s1_n * s2_m at (n, m).
inline MultiModeState tensor(const SingleModeState& s1, const SingleModeState& s2) {
    return tensor(as_multimode(s1), s2);
}

/// Reads the recorded tail mass above the cutoff; states without a factory
/// provenance are treated as exactly supported within their cutoff.
inline TruncationReport truncation_check(const SingleModeState& s, double tolerance) {
    if (!(tolerance > 0.0 && tolerance < 1.0)) throw InvalidArgument("truncation tolerance must lie in (0, 1)");
    return TruncationReport{s.tail_mass(), s.tail_mass() < tolerance};
}

}  // namespace fockparity
