#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fockparity/fock_core.hpp"
#include "fockparity/states.hpp"
#include "test_support.hpp"

using namespace fockparity;
using Catch::Approx;

TEST_CASE("normalize", "[fock_core]") {
    SECTION("scaling") {
        const auto s = normalize(SingleModeState({2.0, 0.0}));
        CHECK(s[0] == complex{1.0, 0.0});
        CHECK(s[1] == complex{0.0, 0.0});
    }
    SECTION("symmetric pair") {
        const auto s = normalize(SingleModeState({1.0, 1.0}));
        CHECK(s[0].real() == Approx(1.0 / std::sqrt(2.0)).margin(1e-15));
        CHECK(s[1].real() == Approx(1.0 / std::sqrt(2.0)).margin(1e-15));
    }
    SECTION("all zero is degenerate") {
        CHECK_THROWS_AS(normalize(SingleModeState({0.0, 0.0, 0.0})), DegenerateState);
        CHECK_THROWS_AS(normalize(MultiModeState(2, 1, {})), DegenerateState);
    }
    SECTION("multimode") {
        const auto s = normalize(MultiModeState(2, 1, {{{0, 1}, 3.0}, {{1, 0}, complex{0.0, 4.0}}}));
        CHECK(s.squared_norm() == Approx(1.0).margin(1e-12));
        CHECK(s.amplitude({1, 0}).imag() == Approx(0.8).margin(1e-15));
    }
}

TEST_CASE("normalize is idempotent and preserves ratios", "[fock_core][property]") {
    testing::Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<complex> amps(6);
        for (auto& a : amps) a = 3.0 * testing::random_complex(rng);
        const SingleModeState raw(amps);
        const auto once = normalize(raw);
        const auto twice = normalize(once);
        CHECK(std::abs(once.squared_norm() - 1.0) <= 1e-12);
        CHECK(testing::max_abs_diff(once, twice) <= 1e-14);
        CHECK(std::abs(once[1] / once[0] - amps[1] / amps[0]) <= 1e-12 * std::abs(amps[1] / amps[0]));
    }
}

TEST_CASE("inner_product", "[fock_core]") {
    const auto zero = SingleModeState::number(0, 3);
    const auto one = SingleModeState::number(1, 3);
    CHECK(inner_product(zero, zero) == complex{1.0, 0.0});
    CHECK(inner_product(zero, one) == complex{0.0, 0.0});

    SECTION("opposite coherent states overlap as exp(-2|alpha|^2)") {
        // Oracle: sum_n (-1)^n e^{-1} / n! evaluated independently to 40 digits.
        const double expected = 0.1353352832366126919;
        const auto plus = build_state(StateSpec::coherent(1.0, 30));
        const auto minus = build_state(StateSpec::coherent(-1.0, 30));
        const complex ip = inner_product(plus, minus);
        CHECK(ip.real() == Approx(expected).margin(1e-14));
        CHECK(std::abs(ip.imag()) < 1e-16);
    }
    SECTION("unequal cutoffs are zero-padded") {
        const SingleModeState a({0.6, 0.8});
        const SingleModeState b({0.6, 0.8, 5.0});
        CHECK(inner_product(a, b).real() == Approx(1.0).margin(1e-15));
    }
}

TEST_CASE("inner product properties", "[fock_core][property]") {
    testing::Rng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = testing::random_state(rng, 5);
        std::vector<complex> raw(7);
        for (auto& x : raw) x = testing::random_complex(rng);
        const SingleModeState b(raw);
        const complex ab = inner_product(a, b);
        const complex ba = inner_product(b, a);
        CHECK(std::abs(ab - std::conj(ba)) <= 1e-14);
        const complex bb = inner_product(b, b);
        CHECK(std::abs(bb.imag()) <= 1e-14);
        CHECK(std::abs(bb.real() - b.squared_norm()) <= 1e-14 * b.squared_norm());
    }
}

TEST_CASE("tensor", "[fock_core]") {
    const auto zero = SingleModeState::number(0, 1);
    const auto one = SingleModeState::number(1, 1);
    CHECK(tensor(zero, zero).amplitude({0, 0}) == complex{1.0, 0.0});
    CHECK(tensor(zero, zero).size() == 1);
    CHECK(tensor(one, zero).amplitude({1, 0}) == complex{1.0, 0.0});

    const double h = 1.0 / std::sqrt(2.0);
    const auto t = tensor(SingleModeState({h, h}), one);
    CHECK(t.size() == 2);
    CHECK(t.amplitude({0, 1}).real() == Approx(h).margin(1e-16));
    CHECK(t.amplitude({1, 1}).real() == Approx(h).margin(1e-16));

    SECTION("norm is multiplicative") {
        testing::Rng rng(13);
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<complex> x(4), y(6);
            for (auto& c : x) c = testing::random_complex(rng);
            for (auto& c : y) c = testing::random_complex(rng);
            const SingleModeState a(x), b(y);
            const double expected = std::sqrt(a.squared_norm()) * std::sqrt(b.squared_norm());
            CHECK(std::sqrt(tensor(a, b).squared_norm()) == Approx(expected).margin(1e-12));
        }
    }
}

TEST_CASE("multimode state invariants", "[fock_core]") {
    SECTION("amplitudes below the sparsity floor are dropped") {
        const MultiModeState s(2, 2, {{{0, 0}, 1.0}, {{1, 1}, 1e-16}});
        CHECK(s.size() == 1);
    }
    SECTION("occupation tuples must match the mode count") {
        CHECK_THROWS_AS(MultiModeState(2, 2, {{{0, 0, 0}, 1.0}}), InvalidArgument);
    }
    SECTION("occupations above the cutoff are rejected") {
        CHECK_THROWS_AS(MultiModeState(2, 2, {{{3, 0}, 1.0}}), CutoffOverflow);
    }
    SECTION("non-finite amplitudes are rejected") {
        CHECK_THROWS_AS(SingleModeState({std::nan("")}), InvalidArgument);
        CHECK_THROWS_AS(MultiModeState(1, 1, {{{0}, complex{INFINITY, 0.0}}}), InvalidArgument);
    }
    SECTION("invalid modes") {
        CHECK_THROWS_AS(MultiModeState::vacuum(2, 1).check_mode(2), InvalidMode);
    }
}

TEST_CASE("truncation_check", "[fock_core]") {
    SECTION("number state has no tail") {
        const auto r = truncation_check(SingleModeState::number(3, 10), 1e-12);
        CHECK(r.tail_mass == 0.0);
        CHECK(r.within_tolerance);
    }
    SECTION("coherent alpha=1 at cutoff 20") {
        // Oracle: sum_{n>20} e^{-1}/n! = 7.5426e-21, evaluated independently.
        StateSpec spec = StateSpec::coherent(1.0, 20, 1e-12);
        const auto r = truncation_check(build_state(spec), 1e-12);
        CHECK(r.tail_mass == Approx(7.542625077205278e-21).epsilon(1e-10));
        CHECK(r.within_tolerance);
    }
    SECTION("coherent alpha=4 at cutoff 5 is far outside tolerance") {
        // Oracle: sum_{n>5} e^{-16} 16^n/n! = 0.998616214975237.
        CHECK(detail::poisson_tail(16.0, 5) == Approx(0.9986162149752371).epsilon(1e-13));
        // The factory refuses such a state; a hand-built state carrying that tail fails the check.
        CHECK_THROWS_AS(build_state(StateSpec::coherent(4.0, 5, 1e-12)), TruncationTooSevere);
        const SingleModeState truncated({1.0}, detail::poisson_tail(16.0, 5));
        CHECK_FALSE(truncation_check(truncated, 1e-12).within_tolerance);
    }
    SECTION("tolerance must be in (0,1)") {
        CHECK_THROWS_AS(truncation_check(SingleModeState(), 0.0), InvalidArgument);
        CHECK_THROWS_AS(truncation_check(SingleModeState(), 1.0), InvalidArgument);
    }
}
