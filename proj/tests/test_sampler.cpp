#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qprob/checks.hpp"
#include "qprob/entanglement.hpp"
#include "qprob/sampler.hpp"

using namespace qprob;

namespace {

PureState plus_state() {
    CVector u(2);
    u << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return PureState(u);
}

} // namespace

TEST_CASE("sampling is deterministic in the seed") {
    CVector e1 = CVector::Unit(2, 0);
    EventSequence seq{Event::projector(plus_state().vector()), Event::projector(e1)};
    PureState psi{CVector(e1)}; // analytic value 1/4: far from degenerate
    SampleReport a = sample_sequence(seq, std::nullopt, std::nullopt, psi, 5000, 99);
    SampleReport b = sample_sequence(seq, std::nullopt, std::nullopt, psi, 5000, 99);
    SampleReport c = sample_sequence(seq, std::nullopt, std::nullopt, psi, 5000, 100);
    CHECK(a.successes == b.successes);
    CHECK(a.step_passes == b.step_passes);
    CHECK(a.successes != c.successes); // with overwhelming likelihood
}

TEST_CASE("degenerate sequences match exactly") {
    // Basis state: its squared norm is exactly 1.0 in floating point, so the
    // analytic value of an all-identity sequence is exactly 1.
    PureState psi(CVector(CVector::Unit(2, 0)));
    Event certain = Event::identity(2);
    SampleReport ones =
        sample_sequence({certain, certain}, std::nullopt, std::nullopt, psi, 2000, 1);
    CHECK(ones.exact_match);
    CHECK(ones.successes == 2000);
    CHECK(ones.analytic == doctest::Approx(1.0));

    Event never = Event::zero(2);
    SampleReport zeros =
        sample_sequence({certain, never}, std::nullopt, std::nullopt, psi, 2000, 1);
    CHECK(zeros.exact_match);
    CHECK(zeros.successes == 0);

    // Empty sequence: every trial succeeds vacuously.
    SampleReport empty = sample_sequence({}, std::nullopt, std::nullopt, psi, 100, 1);
    CHECK(empty.successes == 100);
}

TEST_CASE("frequency tracks the analytic value") {
    CVector e1(2);
    e1 << 1, 0;
    Event p1 = Event::projector(e1);
    Event p2 = Event::projector(plus_state().vector());

    SampleReport rep =
        sample_sequence({p2, p1}, std::nullopt, std::nullopt, PureState(e1), 100000, 42);
    CHECK(rep.analytic == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(std::abs(rep.z_score) < 4.0);
    CHECK(std::abs(rep.frequency - 0.25) < 0.01);
}

TEST_CASE("per-step tallies compose to the overall frequency") {
    std::mt19937_64 rng(127);
    EventSequence seq{random_event(4, rng), random_event(4, rng), random_event(4, rng)};
    PureState psi(random_unit_vector(4, rng));
    SampleReport rep = sample_sequence(seq, std::nullopt, std::nullopt, psi, 20000, 7);
    REQUIRE(rep.step_attempts.size() == 3);
    double chain = 1.0;
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(rep.step_passes[k] <= rep.step_attempts[k]);
        if (rep.step_attempts[k] > 0)
            chain *= static_cast<double>(rep.step_passes[k]) /
                     static_cast<double>(rep.step_attempts[k]);
        else
            chain = 0.0;
    }
    CHECK(rep.frequency == doctest::Approx(chain).epsilon(1e-12));
    CHECK(rep.successes == rep.step_passes.back());
}

TEST_CASE("sampling with evolution") {
    // Two-level oscillation: survival probability cos^2(t/2) under
    // H = diag(1,-1)/2 from the plus state.
    CMatrix h(2, 2);
    h << 0.5, 0, 0, -0.5;
    EvolutionFamily evo = EvolutionFamily::schrodinger(Observable(h));
    Event e = Event::projector(plus_state().vector());
    double t = 2.0 * M_PI / 3.0;
    SampleReport rep = sample_sequence({e}, std::vector<double>{0.0, t}, evo, plus_state(),
                                       50000, 11);
    CHECK(rep.analytic == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(std::abs(rep.z_score) < 4.0);

    CHECK_THROWS_AS(sample_sequence({e}, std::vector<double>{0.0}, evo, plus_state(), 10, 1),
                    NonIncreasingTimes);
    CHECK_THROWS_AS(sample_sequence({e}, std::nullopt, evo, plus_state(), 10, 1),
                    NonIncreasingTimes);
}

TEST_CASE("contractive evolution is rejected") {
    EvolutionFamily decay = EvolutionFamily::generic(2, [](double s, double t) {
        return CMatrix(std::exp(-(t - s)) * CMatrix::Identity(2, 2));
    });
    Event e = Event::identity(2);
    CHECK_THROWS_AS(
        sample_sequence({e}, std::vector<double>{0.0, 1.0}, decay, plus_state(), 10, 1),
        NonUnitaryEvolution);
}

TEST_CASE("conditional certainty shows up as a perfect step rate") {
    // After passing the spin-0 filter and the left-up filter, the right-down
    // filter passes every single time.
    EprTriple epr = epr_triple();
    std::mt19937_64 rng(131);
    PureState psi(random_unit_vector(4, rng));
    SampleReport rep = sample_sequence({epr.e0, epr.e1, epr.e2}, std::nullopt, std::nullopt,
                                       psi, 30000, 17);
    REQUIRE(rep.step_attempts.size() == 3);
    if (rep.step_attempts[2] > 0) CHECK(rep.step_passes[2] == rep.step_attempts[2]);
    CHECK(std::abs(rep.z_score) < 4.5);
}
