#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "dense_oracle.hpp"
#include "fockparity/measurement.hpp"
#include "fockparity/optics.hpp"
#include "fockparity/states.hpp"
#include "test_support.hpp"

using namespace fockparity;
using Catch::Approx;

namespace {

const double h = 1.0 / std::sqrt(2.0);

MultiModeState epr() { return MultiModeState(2, 1, {{{0, 1}, h}, {{1, 0}, -h}}); }

}  // namespace

TEST_CASE("count_distribution", "[measurement]") {
    SECTION("single-photon EPR state") {
        const auto d = count_distribution(epr(), 0);
        CHECK(d.at(0) == Approx(0.5).margin(1e-15));
        CHECK(d.at(1) == Approx(0.5).margin(1e-15));
    }
    SECTION("vacuum") {
        const auto d = count_distribution(MultiModeState::vacuum(2, 3), 1);
        CHECK(d.probabilities.size() == 1);
        CHECK(d.at(0) == 1.0);
    }
    SECTION("coherent state gives Poisson weights") {
        const auto s = tensor(build_state(StateSpec::coherent(1.0, 30, 1e-13)), SingleModeState::number(0, 0));
        const auto d = count_distribution(s, 0);
        double factorial = 1.0;
        for (unsigned n = 0; n <= 15; ++n) {
            if (n > 0) factorial *= n;
            CHECK(d.at(n) == Approx(std::exp(-1.0) / factorial).epsilon(1e-12));
        }
        CHECK(d.total() == Approx(1.0).margin(1e-12));
    }
    SECTION("invalid mode") {
        CHECK_THROWS_AS(count_distribution(epr(), 2), InvalidMode);
        CHECK_THROWS_AS(odd_parity_probability(epr(), 5), InvalidMode);
    }
}

TEST_CASE("odd_parity_probability", "[measurement]") {
    CHECK(odd_parity_probability(MultiModeState::vacuum(2, 0), 0) == 0.0);
    CHECK(odd_parity_probability(epr(), 1) == Approx(0.5).margin(1e-15));

    SECTION("Fact 1 and Fact 2 on random inputs") {
        testing::Rng rng(41);
        for (int trial = 0; trial < 10; ++trial) {
            const auto psi = testing::random_state(rng, 5);
            const auto psi_t = phase_shift(psi, std::numbers::pi / 2.0);
            CHECK(odd_parity_probability(beamsplitter_5050(tensor(psi_t, psi).with_cutoff(10), 0, 1), 0) <= 1e-12);
            const auto phi = testing::random_orthogonal(rng, psi);
            const auto phi_t = phase_shift(phi, std::numbers::pi / 2.0);
            CHECK(odd_parity_probability(beamsplitter_5050(tensor(phi_t, psi).with_cutoff(10), 0, 1), 0) ==
                  Approx(0.5).margin(1e-12));
            // With the tilde state in port b, the balanced port becomes B.
            CHECK(odd_parity_probability(beamsplitter_5050(tensor(psi, phi_t).with_cutoff(10), 0, 1), 1) ==
                  Approx(0.5).margin(1e-12));
        }
    }
}

TEST_CASE("project_counts", "[measurement]") {
    SECTION("Schmidt form collapse") {
        const auto o = project_counts(epr(), {0}, {0});
        CHECK(o.probability == Approx(0.5).margin(1e-15));
        CHECK(o.post_state.mode_count() == 1);
        CHECK(std::abs(o.post_state.amplitude({1})) == Approx(1.0).margin(1e-15));
    }
    SECTION("impossible outcome") {
        CHECK_THROWS_AS(project_counts(MultiModeState::vacuum(3, 2), {0, 1}, {1, 0}), ZeroProbabilityOutcome);
    }
    SECTION("argument errors") {
        CHECK_THROWS_AS(project_counts(epr(), {0, 0}, {0, 0}), InvalidMode);
        CHECK_THROWS_AS(project_counts(epr(), {3}, {0}), InvalidMode);
        CHECK_THROWS_AS(project_counts(epr(), {0}, {0, 1}), InvalidArgument);
        CHECK_THROWS_AS(project_counts(epr(), {0}, {7}), InvalidArgument);
        CHECK_THROWS_AS(project_counts(epr(), {0, 1}, {0, 1}), InvalidArgument);
    }
    SECTION("matches explicit projectors") {
        testing::Rng rng(42);
        const int d = 4;
        AmplitudeMap amps;
        for (unsigned a = 0; a < 4; ++a)
            for (unsigned b = 0; b < 4; ++b)
                for (unsigned c = 0; c < 4; ++c)
                    if (a + b + c <= 4) amps[{a, b, c}] = testing::random_complex(rng);
        const auto s = normalize(MultiModeState(3, 3, amps));
        const auto dense = oracle::to_vec(s, d);
        for (unsigned a = 0; a < 3; ++a) {
            for (unsigned c = 0; c < 2; ++c) {
                const auto [p, projected] = oracle::project(dense, 3, d, {0, 2}, {int(a), int(c)});
                const auto o = project_counts(s, {0, 2}, {a, c});
                CHECK(o.probability == Approx(p).margin(1e-12));
                for (unsigned b = 0; b < 4; ++b) {
                    const complex want = projected(oracle::flat_index({a, b, c}, d)) / std::sqrt(p);
                    CHECK(std::abs(o.post_state.amplitude({b}) - want) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("joint outcomes are exhaustive", "[measurement][property]") {
    testing::Rng rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const auto u = testing::random_state(rng, 4);
        const auto v = testing::random_state(rng, 4);
        const auto s = beamsplitter_5050(tensor(tensor(u, v), testing::random_state(rng, 3)).with_cutoff(8), 0, 1);
        double total = 0.0;
        for (const auto& o : enumerate_outcomes(s, {0, 1})) {
            total += o.probability;
            CHECK(std::abs(o.post_state.squared_norm() - 1.0) < 1e-12);
            const auto p = project_counts(s, {0, 1}, o.counts);
            CHECK(p.probability == Approx(o.probability).margin(1e-15));
        }
        CHECK(total == Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("lossy_count_distribution", "[measurement]") {
    const auto state = tensor(build_state(StateSpec::coherent(1.2, 30, 1e-13)), SingleModeState());
    SECTION("perfect detector") {
        const auto ideal = count_distribution(state, 0);
        const auto lossy = lossy_count_distribution(state, 0, DetectorModel(1.0));
        for (const auto& [n, p] : ideal.probabilities) CHECK(lossy.at(n) == Approx(p).margin(1e-15));
    }
    SECTION("blind detector") {
        const auto lossy = lossy_count_distribution(state, 0, DetectorModel(0.0));
        CHECK(lossy.at(0) == Approx(1.0).margin(1e-12));
        CHECK(lossy.probabilities.size() == 1);
    }
    SECTION("single photon at 85 percent") {
        const auto lossy = lossy_count_distribution(MultiModeState(1, 1, {{{1}, 1.0}}), 0, DetectorModel(0.85));
        CHECK(lossy.at(1) == Approx(0.85).margin(1e-14));
        CHECK(lossy.at(0) == Approx(0.15).margin(1e-14));
    }
    SECTION("two photons thin binomially") {
        const auto lossy = thin(CountDistribution{{{2, 1.0}}}, DetectorModel(0.85));
        CHECK(lossy.at(2) == Approx(0.7225).margin(1e-14));
        CHECK(lossy.at(1) == Approx(0.255).margin(1e-14));
        CHECK(lossy.at(0) == Approx(0.0225).margin(1e-14));
    }
    SECTION("coherent light stays Poissonian with mean eta |alpha|^2") {
        const auto lossy = lossy_count_distribution(state, 0, DetectorModel(0.85));
        const double mean = 0.85 * 1.44;
        double factorial = 1.0;
        for (unsigned k = 0; k <= 10; ++k) {
            if (k > 0) factorial *= k;
            CHECK(lossy.at(k) == Approx(std::exp(-mean) * std::pow(mean, k) / factorial).epsilon(1e-11));
        }
    }
    SECTION("efficiency range") {
        CHECK_THROWS_AS(DetectorModel(1.2), InvalidArgument);
        CHECK_THROWS_AS(DetectorModel(-0.1), InvalidArgument);
        CHECK_THROWS_AS(lossy_count_distribution(state, 3, DetectorModel(0.5)), InvalidMode);
    }
}

TEST_CASE("parity distance under loss for coherent light", "[measurement]") {
    // Poisson statistics stay Poisson under thinning, so
    // P_odd = (1 - exp(-2 mean)) / 2 before and (1 - exp(-2 eta mean)) / 2 after.
    const double eta = 0.85;
    for (double mean : {0.5, 1.0, 2.0, 4.0}) {
        const auto spec = with_minimal_cutoff(StateSpec::coherent(std::sqrt(mean), 0, 1e-15));
        const auto s = as_multimode(build_state(spec));
        const double tv = parity_total_variation(count_distribution(s, 0), lossy_count_distribution(s, 0, DetectorModel(eta)));
        CHECK(tv == Approx(0.5 * (std::exp(-2.0 * eta * mean) - std::exp(-2.0 * mean))).margin(1e-13));
    }
}

TEST_CASE("parity flips from loss grow with photon number", "[measurement][property]") {
    const DetectorModel det(0.85);
    CHECK(parity_flip_probability(CountDistribution{{{0, 1.0}}}, det) == 0.0);
    CHECK(parity_flip_probability(CountDistribution{{{1, 1.0}}}, det) == Approx(0.15).margin(1e-15));
    CHECK(parity_flip_probability(CountDistribution{{{2, 1.0}}}, det) == Approx(0.255).margin(1e-15));
    CHECK(parity_flip_probability(CountDistribution{{{3, 1.0}}}, DetectorModel(1.0)) == 0.0);
    double previous = -1.0;
    for (double mean : {0.5, 1.0, 2.0, 4.0}) {
        const auto s = as_multimode(build_state(with_minimal_cutoff(StateSpec::coherent(std::sqrt(mean), 0, 1e-15))));
        const double flip = parity_flip_probability(count_distribution(s, 0), det);
        // Lost photons are Poisson with mean (1 - eta) |alpha|^2.
        CHECK(flip == Approx(0.5 * (1.0 - std::exp(-2.0 * 0.15 * mean))).margin(1e-13));
        CHECK(flip > previous);
        previous = flip;
    }
}

TEST_CASE("sampler draws from the exact distribution", "[measurement]") {
    const CountDistribution d{{{0, 0.25}, {1, 0.75}}};
    std::mt19937_64 rng(44);
    int ones = 0;
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) ones += sample_count(d, rng) == 1;
    CHECK(ones / double(draws) == Approx(0.75).margin(0.02));
    std::mt19937_64 a(7), b(7);
    for (int i = 0; i < 10; ++i) CHECK(sample_count(d, a) == sample_count(d, b));
}
