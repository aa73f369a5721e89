#pragma once

// Factories for coherent, squeezed-vacuum, number and explicit states, the
// orthonormal |+>/|-> superpositions of a real-overlap pair (u, v), the
// two-mode resource states built from such a pair, and qubit encodings.
//
// Resource labels, checked numerically in the tests:
//     psi_minus ~ |u>|u> - |v>|v>  = (|+>|-> + |->|+>) / sqrt2
//     phi_minus ~ |u>|v> - |v>|u>  = (|->|+> - |+>|->) / sqrt2
// with a positive real proportionality constant in both cases.

#include <cmath>
#include <cstdio>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fockparity/fock_core.hpp"
#include "fockparity/optics.hpp"

namespace fockparity {

enum class StateKind { coherent, squeezed_vacuum, number, explicit_coefficients };

inline std::string_view to_string(StateKind k) {
    switch (k) {
        case StateKind::coherent: return "coherent";
        case StateKind::squeezed_vacuum: return "squeezed_vacuum";
        case StateKind::number: return "number";
        case StateKind::explicit_coefficients: return "explicit";
    }
    return "unknown";
}

inline std::optional<StateKind> parse_state_kind(std::string_view s) {
    if (s == "coherent") return StateKind::coherent;
    if (s == "squeezed_vacuum") return StateKind::squeezed_vacuum;
    if (s == "number") return StateKind::number;
    if (s == "explicit") return StateKind::explicit_coefficients;
    return std::nullopt;
}

/// Declarative description of a single-mode state. Only the field matching
/// `kind` may be set. A negative `r` is the squeezed vacuum of opposite phase.
struct StateSpec {
    StateKind kind = StateKind::number;
    std::optional<complex> alpha;
    std::optional<double> r;
    std::optional<std::size_t> n;
    std::optional<std::vector<complex>> coefficients;
    std::size_t cutoff = 0;
    double tail_tolerance = 1e-12;

    static StateSpec coherent(complex alpha, std::size_t cutoff, double tail_tolerance = 1e-12) {
        StateSpec s;
        s.kind = StateKind::coherent;
        s.alpha = alpha;
        s.cutoff = cutoff;
        s.tail_tolerance = tail_tolerance;
        return s;
    }
    static StateSpec squeezed_vacuum(double r, std::size_t cutoff, double tail_tolerance = 1e-12) {
        StateSpec s;
        s.kind = StateKind::squeezed_vacuum;
        s.r = r;
        s.cutoff = cutoff;
        s.tail_tolerance = tail_tolerance;
        return s;
    }
    static StateSpec number(std::size_t n, std::size_t cutoff) {
        StateSpec s;
        s.kind = StateKind::number;
        s.n = n;
        s.cutoff = cutoff;
        return s;
    }
    static StateSpec explicit_coefficients(std::vector<complex> c, std::optional<std::size_t> cutoff = std::nullopt) {
        StateSpec s;
        s.kind = StateKind::explicit_coefficients;
        s.cutoff = cutoff.value_or(c.empty() ? 0 : c.size() - 1);
        s.coefficients = std::move(c);
        return s;
    }

    bool operator==(const StateSpec&) const = default;
};

/// Throws InvalidArgument naming the first field that does not match `kind`.
inline void validate(const StateSpec& s) {
    const bool want_alpha = s.kind == StateKind::coherent;
    const bool want_r = s.kind == StateKind::squeezed_vacuum;
    const bool want_n = s.kind == StateKind::number;
    const bool want_coeffs = s.kind == StateKind::explicit_coefficients;
    const std::string kind(to_string(s.kind));
    auto field = [&](bool want, bool have, const char* name) {
        if (want && !have) throw InvalidArgument(std::string(name) + " is required for kind " + kind);
        if (!want && have) throw InvalidArgument(std::string(name) + " is not allowed for kind " + kind);
    };
    field(want_alpha, s.alpha.has_value(), "alpha");
    field(want_r, s.r.has_value(), "r");
    field(want_n, s.n.has_value(), "n");
    field(want_coeffs, s.coefficients.has_value(), "coefficients");
    if (want_n && *s.n > s.cutoff) throw InvalidArgument("cutoff must be at least n for number states");
    if (want_coeffs && s.coefficients->empty()) throw InvalidArgument("coefficients must not be empty");
    if (!(s.tail_tolerance > 0.0 && s.tail_tolerance < 1.0)) throw InvalidArgument("tail_tolerance must lie in (0, 1)");
}

namespace detail {

/// Poisson weight above `cutoff` for mean photon number `mean`, summed directly.
inline double poisson_tail(double mean, std::size_t cutoff) {
    if (mean <= 0.0) return 0.0;
    double n = static_cast<double>(cutoff + 1);
    double term = std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
    double sum = 0.0;
    while (term > 0.0) {
        sum += term;
        term *= mean / (n + 1.0);
        n += 1.0;
        if (n > mean && term < sum * 1e-18) break;
    }
    return sum;
}

/// Photon-number weight of the squeezed vacuum S(r)|0> above `cutoff`.
inline double squeezed_tail(double r, std::size_t cutoff) {
    const double t2 = std::tanh(r) * std::tanh(r);
    if (t2 == 0.0) return 0.0;
    double p = 1.0 / std::cosh(r);  // weight at 2k = 0
    double sum = 0.0;
    for (std::size_t k = 1;; ++k) {
        p *= t2 * static_cast<double>(2 * k - 1) / static_cast<double>(2 * k);
        if (2 * k > cutoff) {
            sum += p;
            if (p < sum * 1e-18 || p == 0.0) break;
        } else if (p == 0.0) {
            break;
        }
    }
    return sum;
}

inline TruncationTooSevere too_severe(const char* what, double tail, const StateSpec& s) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s tail mass %.3e above cutoff %zu exceeds tolerance %.3e", what, tail, s.cutoff,
                  s.tail_tolerance);
    return TruncationTooSevere(buf);
}

}  // namespace detail

/// Smallest cutoff whose analytic tail is below `tail_tolerance`. Number and
/// explicit specs return their natural support.
inline std::size_t minimal_cutoff(const StateSpec& s) {
    switch (s.kind) {
        case StateKind::number: return s.n.value_or(0);
        case StateKind::explicit_coefficients: return s.coefficients ? s.coefficients->size() - 1 : 0;
        case StateKind::coherent: {
            const double mean = std::norm(s.alpha.value_or(0.0));
            std::size_t c = 0;
            while (detail::poisson_tail(mean, c) >= s.tail_tolerance) ++c;
            return c;
        }
        case StateKind::squeezed_vacuum: {
            const double r = s.r.value_or(0.0);
            std::size_t c = 0;
            while (detail::squeezed_tail(r, c) >= s.tail_tolerance) ++c;
            return c;
        }
    }
    return 0;
}

inline StateSpec with_minimal_cutoff(StateSpec s) {
    s.cutoff = minimal_cutoff(s);
    return s;
}

/// Coherent and squeezed states are truncated, not renormalized: the dropped
/// weight is recorded as the state's tail mass.
inline SingleModeState build_state(const StateSpec& s) {
    validate(s);
    const std::size_t dim = s.cutoff + 1;
    switch (s.kind) {
        case StateKind::number: return SingleModeState::number(*s.n, s.cutoff);
        case StateKind::coherent: {
            const complex alpha = *s.alpha;
            const double tail = detail::poisson_tail(std::norm(alpha), s.cutoff);
            if (tail >= s.tail_tolerance) throw detail::too_severe("coherent state", tail, s);
            std::vector<complex> amps(dim);
            amps[0] = std::exp(-0.5 * std::norm(alpha));
            for (std::size_t n = 1; n < dim; ++n) amps[n] = amps[n - 1] * alpha / std::sqrt(static_cast<double>(n));
            return SingleModeState(std::move(amps), tail);
        }
        case StateKind::squeezed_vacuum: {
            const double r = *s.r;
            const double tail = detail::squeezed_tail(r, s.cutoff);
            if (tail >= s.tail_tolerance) throw detail::too_severe("squeezed vacuum", tail, s);
            // c_{2k} = (-tanh r)^k sqrt((2k)!) / (2^k k!) / sqrt(cosh r)
            std::vector<complex> amps(dim);
            const double t = std::tanh(r);
            double c = 1.0 / std::sqrt(std::cosh(r));
            amps[0] = c;
            for (std::size_t k = 1; 2 * k < dim; ++k) {
                c *= -t * std::sqrt(static_cast<double>(2 * k - 1) / static_cast<double>(2 * k));
                amps[2 * k] = c;
            }
            return SingleModeState(std::move(amps), tail);
        }
        case StateKind::explicit_coefficients: {
            const auto& coeffs = *s.coefficients;
            double inside = 0.0;
            double outside = 0.0;
            for (std::size_t n = 0; n < coeffs.size(); ++n) (n < dim ? inside : outside) += std::norm(coeffs[n]);
            if (inside + outside <= degenerate_floor) throw DegenerateState("explicit coefficients are all zero");
            const double tail = outside / (inside + outside);
            if (tail >= s.tail_tolerance)
                throw TruncationTooSevere("explicit coefficients carry weight " + std::to_string(tail) +
                                          " above cutoff " + std::to_string(s.cutoff));
            std::vector<complex> amps(dim);
            for (std::size_t n = 0; n < dim && n < coeffs.size(); ++n) amps[n] = coeffs[n];
            return normalize(SingleModeState(std::move(amps)));
        }
    }
    throw InvalidArgument("unknown state kind");
}

/// Normalized real-overlap pair check shared by every (u, v) consumer.
/// Returns <u|v> for the normalized inputs.
inline double checked_overlap(const SingleModeState& u, const SingleModeState& v) {
    const double nu = std::sqrt(u.squared_norm());
    const double nv = std::sqrt(v.squared_norm());
    if (nu * nu <= degenerate_floor || nv * nv <= degenerate_floor)
        throw DegenerateState("u and v must be non-zero states");
    const complex overlap = inner_product(u, v) / (nu * nv);
    if (std::abs(overlap.imag()) > 1e-10)
        throw NonRealOverlap("<u|v> has imaginary part " + std::to_string(overlap.imag()));
    if (std::abs(overlap) >= 1.0 - 1e-12)
        throw DegenerateSuperposition("u and v coincide up to sign; |u> +- |v> is degenerate");
    return overlap.real();
}

struct PlusMinus {
    SingleModeState plus;
    SingleModeState minus;
};

/// Normalized |+> ~ u + v and |-> ~ u - v (u and v are normalized first).
inline PlusMinus plus_minus(const SingleModeState& u, const SingleModeState& v) {
    checked_overlap(u, v);
    const SingleModeState un = normalize(u);
    const SingleModeState vn = normalize(v);
    const std::size_t cutoff = std::max(un.cutoff(), vn.cutoff());
    std::vector<complex> sum(cutoff + 1), diff(cutoff + 1);
    for (std::size_t n = 0; n <= cutoff; ++n) {
        sum[n] = un[n] + vn[n];
        diff[n] = un[n] - vn[n];
    }
    return {normalize(SingleModeState(std::move(sum))), normalize(SingleModeState(std::move(diff)))};
}

enum class ResourceKind { psi_minus, phi_minus };

inline std::string_view to_string(ResourceKind k) { return k == ResourceKind::psi_minus ? "psi_minus" : "phi_minus"; }

inline std::optional<ResourceKind> parse_resource_kind(std::string_view s) {
    if (s == "psi_minus") return ResourceKind::psi_minus;
    if (s == "phi_minus") return ResourceKind::phi_minus;
    return std::nullopt;
}

/// Normalized |u>|u> - |v>|v> (psi_minus) or |u>|v> - |v>|u> (phi_minus).
inline MultiModeState make_resource(const SingleModeState& u, const SingleModeState& v, ResourceKind kind) {
    checked_overlap(u, v);
    const SingleModeState un = normalize(u);
    const SingleModeState vn = normalize(v);
    const std::size_t cutoff = std::max(un.cutoff(), vn.cutoff());
    AmplitudeMap amps;
    for (std::size_t n = 0; n <= cutoff; ++n) {
        for (std::size_t m = 0; m <= cutoff; ++m) {
            const complex a = kind == ResourceKind::psi_minus ? un[n] * un[m] - vn[n] * vn[m]
                                                              : un[n] * vn[m] - vn[n] * un[m];
            if (std::abs(a) >= sparsity_floor) amps.emplace(Occupation{unsigned(n), unsigned(m)}, a);
        }
    }
    return normalize(MultiModeState(2, cutoff, std::move(amps)));
}

struct EntangledResource {
    MultiModeState two_mode_state;
    ResourceKind kind;
    StateSpec u_spec;
    StateSpec v_spec;
};

inline EntangledResource build_resource(const StateSpec& u_spec, const StateSpec& v_spec, ResourceKind kind) {
    return {make_resource(build_state(u_spec), build_state(v_spec), kind), kind, u_spec, v_spec};
}

/// Logical qubit eps_plus |+> + eps_minus |->.
class QubitAmplitudes {
public:
    QubitAmplitudes(complex eps_plus, complex eps_minus) : plus_(eps_plus), minus_(eps_minus) {
        if (std::abs(std::norm(plus_) + std::norm(minus_) - 1.0) > 1e-12)
            throw InvalidArgument("qubit amplitudes must satisfy |eps+|^2 + |eps-|^2 = 1");
    }

    complex eps_plus() const noexcept { return plus_; }
    complex eps_minus() const noexcept { return minus_; }

private:
    complex plus_;
    complex minus_;
};

/// eps+ |+> + eps- |->, or its U_{pi/2} image when `tilde` is set.
inline SingleModeState encode_qubit(const QubitAmplitudes& q, const SingleModeState& u, const SingleModeState& v,
                                    bool tilde) {
    const auto [plus, minus] = plus_minus(u, v);
    std::vector<complex> amps(plus.cutoff() + 1);
    for (std::size_t n = 0; n < amps.size(); ++n) amps[n] = q.eps_plus() * plus[n] + q.eps_minus() * minus[n];
    SingleModeState s = normalize(SingleModeState(std::move(amps)));
    return tilde ? phase_shift(s, std::numbers::pi / 2.0) : s;
}

}  // namespace fockparity
