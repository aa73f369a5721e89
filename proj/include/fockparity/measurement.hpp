#pragma once

// Photon counting by exhaustive enumeration of outcomes, parity statistics,
// post-selection, and a binomial-thinning model of inefficient detectors.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "fockparity/fock_core.hpp"

namespace fockparity {

/// Outcomes below this probability are treated as impossible.
inline constexpr double zero_probability_floor = 1e-14;

struct CountDistribution {
    std::map<unsigned, double> probabilities;

    double at(unsigned n) const {
        auto it = probabilities.find(n);
        return it == probabilities.end() ? 0.0 : it->second;
    }

    double odd_probability() const {
        double s = 0.0;
        for (const auto& [n, p] : probabilities)
            if (n % 2 == 1) s += p;
        return s;
    }

    double even_probability() const {
        double s = 0.0;
        for (const auto& [n, p] : probabilities)
            if (n % 2 == 0) s += p;
        return s;
    }

    double total() const {
        double s = 0.0;
        for (const auto& [n, p] : probabilities) s += p;
        return s;
    }
};

struct MeasurementOutcome {
    std::vector<unsigned> counts;
    double probability = 0.0;
    MultiModeState post_state;
};

class DetectorModel {
public:
    explicit DetectorModel(double efficiency) : efficiency_(efficiency) {
        if (!(efficiency_ >= 0.0 && efficiency_ <= 1.0))
            throw InvalidArgument("detector efficiency must lie in [0, 1], got " + std::to_string(efficiency_));
    }
    double efficiency() const noexcept { return efficiency_; }

private:
    double efficiency_;
};

/// Marginal photon-number distribution of `mode`, conditioned on the state's
/// own norm (truncated states need not be exactly normalized).
inline CountDistribution count_distribution(const MultiModeState& state, std::size_t mode) {
    state.check_mode(mode);
    const double total = state.squared_norm();
    if (total <= degenerate_floor) throw DegenerateState("cannot measure a zero state");
    CountDistribution d;
    for (const auto& [occ, amp] : state.amplitudes()) d.probabilities[occ[mode]] += std::norm(amp) / total;
    return d;
}

inline double odd_parity_probability(const MultiModeState& state, std::size_t mode) {
    return count_distribution(state, mode).odd_probability();
}

namespace detail {

inline void check_measured_modes(const MultiModeState& state, const std::vector<std::size_t>& modes) {
    std::vector<bool> seen(state.mode_count(), false);
    for (std::size_t m : modes) {
        state.check_mode(m);
        if (seen[m]) throw InvalidMode("mode " + std::to_string(m) + " measured twice");
        seen[m] = true;
    }
    if (modes.size() >= state.mode_count()) throw InvalidArgument("at least one mode must remain unmeasured");
}

inline std::vector<std::size_t> remaining_modes(std::size_t mode_count, const std::vector<std::size_t>& measured) {
    std::vector<std::size_t> rest;
    for (std::size_t j = 0; j < mode_count; ++j)
        if (std::find(measured.begin(), measured.end(), j) == measured.end()) rest.push_back(j);
    return rest;
}

}  // namespace detail

/// Every outcome of counting `measured_modes` with probability at least
/// zero_probability_floor, in lexicographic order of counts. Post-states are
/// normalized and range over the unmeasured modes in their original order.
inline std::vector<MeasurementOutcome> enumerate_outcomes(const MultiModeState& state,
                                                          const std::vector<std::size_t>& measured_modes) {
    detail::check_measured_modes(state, measured_modes);
    const double total = state.squared_norm();
    if (total <= degenerate_floor) throw DegenerateState("cannot measure a zero state");
    const auto rest = detail::remaining_modes(state.mode_count(), measured_modes);

    std::map<std::vector<unsigned>, AmplitudeMap> groups;
    for (const auto& [occ, amp] : state.amplitudes()) {
        std::vector<unsigned> counts;
        counts.reserve(measured_modes.size());
        for (std::size_t m : measured_modes) counts.push_back(occ[m]);
        Occupation sub;
        sub.reserve(rest.size());
        for (std::size_t m : rest) sub.push_back(occ[m]);
        groups[counts].emplace(std::move(sub), amp);
    }

    std::vector<MeasurementOutcome> out;
    for (auto& [counts, amps] : groups) {
        MultiModeState restricted(rest.size(), state.per_mode_cutoff(), std::move(amps));
        const double p = restricted.squared_norm() / total;
        if (p < zero_probability_floor) continue;
        out.push_back({counts, p, normalize(restricted)});
    }
    return out;
}

inline MeasurementOutcome project_counts(const MultiModeState& state, const std::vector<std::size_t>& measured_modes,
                                         const std::vector<unsigned>& counts) {
    detail::check_measured_modes(state, measured_modes);
    if (counts.size() != measured_modes.size()) throw InvalidArgument("one count is required per measured mode");
    for (unsigned c : counts)
        if (c > state.per_mode_cutoff()) throw InvalidArgument("count " + std::to_string(c) + " exceeds the cutoff");
    const double total = state.squared_norm();
    if (total <= degenerate_floor) throw DegenerateState("cannot measure a zero state");
    const auto rest = detail::remaining_modes(state.mode_count(), measured_modes);

    AmplitudeMap amps;
    for (const auto& [occ, amp] : state.amplitudes()) {
        bool match = true;
        for (std::size_t i = 0; i < measured_modes.size() && match; ++i) match = occ[measured_modes[i]] == counts[i];
        if (!match) continue;
        Occupation sub;
        for (std::size_t m : rest) sub.push_back(occ[m]);
        amps.emplace(std::move(sub), amp);
    }
    MultiModeState restricted(rest.size(), state.per_mode_cutoff(), std::move(amps));
    const double p = restricted.squared_norm() / total;
    if (p < zero_probability_floor)
        throw ZeroProbabilityOutcome("outcome has probability " + std::to_string(p) + ", post-state undefined");
    return {counts, p, normalize(restricted)};
}

/// Observed-count distribution when each photon is registered independently
/// with probability eta.
inline CountDistribution thin(const CountDistribution& ideal, const DetectorModel& det) {
    const double eta = det.efficiency();
    CountDistribution out;
    for (const auto& [n, p] : ideal.probabilities) {
        for (unsigned k = 0; k <= n; ++k) {
            double w;
            if (eta == 0.0) {
                w = k == 0 ? 1.0 : 0.0;
            } else if (eta == 1.0) {
                w = k == n ? 1.0 : 0.0;
            } else {
                w = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                             k * std::log(eta) + (n - k) * std::log1p(-eta));
            }
            if (w > 0.0) out.probabilities[k] += p * w;
        }
    }
    return out;
}

inline CountDistribution lossy_count_distribution(const MultiModeState& state, std::size_t mode,
                                                  const DetectorModel& det) {
    return thin(count_distribution(state, mode), det);
}

/// Total variation distance between the even/odd parity distributions.
inline double parity_total_variation(const CountDistribution& a, const CountDistribution& b) {
    return std::abs(a.odd_probability() - b.odd_probability());
}

/// Probability that the registered count has the other parity than the true
/// count, i.e. that an odd number of photons is lost. Unlike the distance
/// above, this grows with photon number.
inline double parity_flip_probability(const CountDistribution& ideal, const DetectorModel& det) {
    const double bias = 2.0 * det.efficiency() - 1.0;
    double flip = 0.0;
    for (const auto& [n, p] : ideal.probabilities) flip += p * 0.5 * (1.0 - std::pow(bias, n));
    return flip;
}

/// Draws a photon count from an exactly computed distribution.
template <class Rng>
unsigned sample_count(const CountDistribution& d, Rng& rng) {
    std::uniform_real_distribution<double> u(0.0, d.total());
    double x = u(rng);
    for (const auto& [n, p] : d.probabilities) {
        if (x < p) return n;
        x -= p;
    }
    return d.probabilities.empty() ? 0u : d.probabilities.rbegin()->first;
}

}  // namespace fockparity
