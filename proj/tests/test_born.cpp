#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qprob/born.hpp"
#include "qprob/checks.hpp"

using namespace qprob;

namespace {

PureState basis_state(Eigen::Index dim, Eigen::Index k) {
    CVector v = CVector::Zero(dim);
    v(k) = 1.0;
    return PureState(v);
}

} // namespace

TEST_CASE("single-event probability in all three state modes") {
    CVector u(2);
    u << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    Event e = Event::projector(u);
    PureState psi = basis_state(2, 0);

    CHECK(prob_event(e, psi).value == doctest::Approx(0.5));
    CHECK(prob_event(e, density_from_pure(psi)).value == doctest::Approx(0.5));
    CHECK(prob_event(e, NoState{}).value == doctest::Approx(1.0)); // ||E||^2 for E != 0
    CHECK(prob_event(Event::zero(2), NoState{}).value == doctest::Approx(0.0));
}

TEST_CASE("consecutive probabilities and order dependence") {
    CVector u(2);
    u << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    Event e1 = Event::projector(CVector(basis_state(2, 0).vector()));
    Event e2 = Event::projector(u);
    PureState psi = basis_state(2, 0);

    CHECK(consecutive({e1, e2}, psi).value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(consecutive({e2, e1}, psi).value == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(consecutive({}, psi).value == doctest::Approx(1.0));

    // Pure, density, and no-state forms agree where they should.
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i) {
        EventSequence seq{random_event(3, rng), random_event(3, rng), random_event(3, rng)};
        PureState p(random_unit_vector(3, rng));
        double via_pure = consecutive(seq, p).value;
        double via_density = consecutive(seq, QState{density_from_pure(p)}).value;
        CHECK(via_pure == doctest::Approx(via_density).epsilon(1e-12));
        // The no-state value bounds every state's value.
        CHECK(consecutive(seq, NoState{}).value >= via_pure - 1e-12);
    }
}

TEST_CASE("conditional probability and the zero-denominator convention") {
    Event e1 = Event::projector(CVector(basis_state(2, 0).vector()));
    Event e2 = Event::projector(CVector(basis_state(2, 1).vector()));
    PureState psi = basis_state(2, 0);

    ProbValue ok = conditional({e1}, {e1}, psi);
    CHECK(ok.value == doctest::Approx(1.0));
    CHECK_FALSE(ok.zero_denominator);

    // Conditioning on an event the state can never pass.
    ProbValue zero = conditional({e1}, {e2}, psi);
    CHECK(zero.value == 0.0);
    CHECK(zero.zero_denominator);
}

TEST_CASE("evolution-interleaved probability") {
    // H = diag(1, -1)/2; survival of u = (e1+e2)/sqrt 2 is cos^2(t/2).
    CMatrix h(2, 2);
    h << 0.5, 0, 0, -0.5;
    CVector u(2);
    u << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    Event e = Event::projector(u);
    PureState psi(u);
    EvolutionFamily evo = EvolutionFamily::schrodinger(Observable(h));

    for (double t : {0.3, 1.1, 2.7})
        CHECK(prob_with_evolution({e}, {0.0, t}, evo, psi).value ==
              doctest::Approx(std::cos(t / 2) * std::cos(t / 2)).epsilon(1e-12));

    CHECK_THROWS_AS(prob_with_evolution({e}, {1.0, 1.0}, evo, psi), NonIncreasingTimes);
    CHECK_THROWS_AS(prob_with_evolution({e}, {0.0}, evo, psi), NonIncreasingTimes);

    // Conditional form: the given events use the leading times.
    ProbValue c = conditional_with_evolution({e}, {e}, {0.0, 1.0, 2.0}, evo, psi);
    CHECK(c.value == doctest::Approx(std::pow(std::cos(0.5), 2)).epsilon(1e-10));
}

TEST_CASE("independence defect and sequence independence") {
    // Tensor-factor events on C2 x C2 are independent in a product state.
    CVector a(2), b(2);
    a << 1, 0;
    b << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    Event ea(kron(Event::projector(a).matrix(), CMatrix::Identity(2, 2)));
    Event eb(kron(CMatrix::Identity(2, 2), Event::projector(b).matrix()));
    CVector prod = kron(CMatrix(a), CMatrix(b)).col(0);
    PureState psi{prod};

    auto [d12, d21] = independence_defect(ea, eb, psi);
    CHECK(std::abs(d12) < 1e-12);
    CHECK(std::abs(d21) < 1e-12);
    CHECK(sequence_independent({ea, eb}, psi));

    // Non-commuting events on one qubit are order dependent and dependent.
    Event e1 = Event::projector(a);
    Event e2 = Event::projector(b);
    auto [f12, f21] = independence_defect(e1, e2, PureState(a));
    CHECK(f12 == doctest::Approx(0.0));   // P(E1,E2) = 1/2 = P(E1)P(E2)... checked below
    CHECK(f21 == doctest::Approx(-0.25)); // 1/4 - 1/2
    CHECK_FALSE(sequence_independent({e2, e1}, PureState(a)));

    EventSequence too_long(13, Event::identity(2));
    CHECK_THROWS_AS(sequence_independent(too_long, PureState(a)), TooLong);
}

TEST_CASE("identically distributed observables") {
    std::mt19937_64 rng(43);
    CMatrix t = random_hermitian(3, rng);
    CMatrix u = random_unitary(3, rng);
    DensityMatrix maximally_mixed{CMatrix(CMatrix::Identity(3, 3) / 3.0)};
    // A unitary conjugate has the same spectrum, and the maximally mixed
    // state weights each atom by its rank only.
    CHECK(identically_distributed(Observable(t), Observable(CMatrix(u * t * u.adjoint())),
                                  maximally_mixed));
    CMatrix shifted = t + CMatrix::Identity(3, 3);
    CHECK_FALSE(identically_distributed(Observable(t), Observable(shifted), maximally_mixed));
}

TEST_CASE("interference decomposition") {
    std::mt19937_64 rng(47);
    CMatrix u = random_unitary(4, rng);
    std::vector<Event> parts;
    for (int k = 0; k < 3; ++k)
        parts.push_back(Event(CMatrix(u.col(k) * u.col(k).adjoint())));
    Event e = random_event(4, rng);
    PureState psi(random_unit_vector(4, rng));

    Event f = parts[0];
    for (std::size_t k = 1; k < parts.size(); ++k) f = join(f, parts[k]);
    double total = consecutive({f, e}, psi).value;

    InterferenceTerms terms = interference_decomposition(e, parts, psi);
    CHECK(terms.diagonal + terms.cross == doctest::Approx(total).epsilon(1e-10));

    // Non-orthogonal parts are rejected.
    std::vector<Event> overlapping{parts[0], parts[0]};
    CHECK_THROWS_AS(interference_decomposition(e, overlapping, psi), NotOrthogonal);
}

TEST_CASE("amplitudes") {
    PureState a = basis_state(2, 0);
    CVector uv(2);
    uv << 1.0 / std::sqrt(2.0), Complex(0, 1.0 / std::sqrt(2.0));
    PureState b{uv};
    Complex amp = amplitude(a, b);
    CHECK(std::abs(amp - Complex(1.0 / std::sqrt(2.0), 0)) < 1e-12);
    CHECK(std::norm(amp) == doctest::Approx(prob_event(Event::projector(a.vector()), b).value));

    CVector ea = amplitude_event(Event::projector(a.vector()), b);
    CHECK(ea.squaredNorm() == doctest::Approx(0.5));
}

TEST_CASE("moments and expectation values") {
    std::mt19937_64 rng(53);
    CMatrix t = random_hermitian(4, rng);
    Observable obs(t);
    PureState psi(random_unit_vector(4, rng));

    double m1 = moment(obs, 1, psi);
    CHECK(m1 == doctest::Approx(expected_value(t, psi)).epsilon(1e-10));
    double var = central_moment(obs, 2, psi);
    CHECK(var == doctest::Approx(moment(obs, 2, psi) - m1 * m1).epsilon(1e-9));
    CHECK(std_dev(obs, psi) == doctest::Approx(std::sqrt(std::max(0.0, var))));

    CHECK_THROWS_AS(moment(obs, 0, psi), BadOrder);
    CHECK_THROWS_AS(central_moment(obs, 1, psi), BadOrder);
    CHECK_THROWS_AS(expected_value(t, QState{NoState{}}), NoStateUnsupported);
    CHECK_THROWS_AS(expected_value(CMatrix(Complex(0, 1) * CMatrix::Identity(4, 4)), psi),
                    NotHermitian);
}

TEST_CASE("time-ordered and conditional expectations") {
    std::mt19937_64 rng(59);
    CMatrix a = random_hermitian(3, rng);
    CMatrix b = random_hermitian(3, rng);
    DensityMatrix rho = random_density(3, rng);

    Complex direct = trace(CMatrix(b * a * rho.matrix()));
    CHECK(std::abs(time_ordered_expectation({a, b}, rho) - direct) < 1e-12);

    // Conditioning on the identity changes nothing.
    ConditionalExpectation ce =
        conditional_expectation({a}, {Event::identity(3)}, rho);
    CHECK(std::abs(ce.value - time_ordered_expectation({a}, rho)) < 1e-12);
    CHECK_FALSE(ce.zero_denominator);

    // Conditioning on the zero event trips the flag.
    ConditionalExpectation bad = conditional_expectation({a}, {Event::zero(3)}, rho);
    CHECK(bad.zero_denominator);
    CHECK(bad.value == Complex(0, 0));
}

TEST_CASE("entropy of the outcome distribution") {
    CMatrix t(2, 2);
    t << 1, 0, 0, -1;
    Observable obs(t);
    // Eigenstate: deterministic outcome, zero entropy.
    CHECK(entropy(obs, basis_state(2, 0)) == doctest::Approx(0.0));
    // Uniform over two outcomes: 1 bit.
    CVector u(2);
    u << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    CHECK(entropy(obs, PureState(u), 2.0) == doctest::Approx(1.0));
    CHECK(entropy(obs, PureState(u)) == doctest::Approx(std::log(2.0)));
    CHECK_THROWS_AS(entropy(obs, PureState(u), 1.0), InvariantViolation);
    CHECK_THROWS_AS(entropy(obs, QState{NoState{}}), NoStateUnsupported);
}

TEST_CASE("limits of infinite event sequences") {
    // Constant sequence: p_n = P(E) for every n >= 1, converges immediately.
    CVector u(2);
    u << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    Event e = Event::projector(u);
    DensityMatrix rho{CMatrix(CMatrix::Identity(2, 2) / 2.0)};
    SequenceLimit lim = sequence_limit([&](int) { return e; }, rho, 100, 1e-12);
    CHECK(lim.converged);
    CHECK(lim.value == doctest::Approx(0.5));

    // Alternating orthogonal projectors: the product dies at step 2.
    Event e1 = Event::projector(CVector(basis_state(2, 0).vector()));
    Event e2 = Event::projector(CVector(basis_state(2, 1).vector()));
    SequenceLimit dead =
        sequence_limit([&](int n) { return n % 2 == 0 ? e1 : e2; }, rho, 100, 1e-12);
    CHECK(dead.converged);
    CHECK(dead.value == doctest::Approx(0.0));
}

TEST_CASE("worked interference split at 50-50") {
    CVector e1 = CVector::Unit(2, 0), e2 = CVector::Unit(2, 1);
    CVector u(2);
    u << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    Event e = Event::projector(u);
    InterferenceTerms terms =
        interference_decomposition(e, {Event::projector(e1), Event::projector(e2)},
                                   PureState(u));
    CHECK(terms.diagonal == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(terms.cross == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("expectation marginals, and that it does not extend probability") {
    std::mt19937_64 rng(229);
    DensityMatrix rho = random_density(2, rng);
    CMatrix a = random_hermitian(2, rng);
    CMatrix id = CMatrix::Identity(2, 2);
    // E(I, ..., I | rho) = 1 and leading identities drop out.
    CHECK(std::abs(time_ordered_expectation({id, id, id}, rho) - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(time_ordered_expectation({id, a}, rho) -
                   time_ordered_expectation({a}, rho)) < 1e-12);

    // One projection: the expectation is the event probability.
    CVector e1 = CVector::Unit(2, 0);
    Event p1 = Event::projector(e1);
    CHECK(time_ordered_expectation({p1.matrix()}, rho).real() ==
          doctest::Approx(prob_event(p1, rho).value).epsilon(1e-12));

    // Two non-commuting projections: generally not the sequence probability.
    CVector u(2);
    u << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    Event p2 = Event::projector(u);
    DensityMatrix pure1 = density_from_pure(PureState(e1));
    double expect = time_ordered_expectation({p2.matrix(), p1.matrix()}, pure1).real();
    double seqprob = consecutive({p2, p1}, QState{pure1}).value;
    CHECK(std::abs(expect - seqprob) > 0.1); // 1/2 vs 1/4
}

TEST_CASE("entropy is invariant under joint conjugation") {
    std::mt19937_64 rng(233);
    CMatrix t = random_hermitian(3, rng);
    DensityMatrix rho = random_density(3, rng);
    CMatrix u = random_unitary(3, rng);
    DensityMatrix rho2{CMatrix(u * rho.matrix() * u.adjoint())};
    CHECK(entropy(Observable(t), rho) ==
          doctest::Approx(entropy(Observable(CMatrix(u * t * u.adjoint())), rho2))
              .epsilon(1e-9));
}

TEST_CASE("worked spin moments") {
    CMatrix s3(2, 2);
    s3 << 0.5, 0, 0, -0.5;
    Observable obs(s3);
    PureState up{CVector(CVector::Unit(2, 0))};
    CHECK(moment(obs, 1, up) == doctest::Approx(0.5));
    CHECK(central_moment(obs, 2, up) == doctest::Approx(0.0));

    CVector u(2);
    u << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    PureState plus{u};
    CHECK(moment(obs, 1, plus) == doctest::Approx(0.0));
    CHECK(central_moment(obs, 2, plus) == doctest::Approx(0.25));
    CHECK(std_dev(obs, plus) == doctest::Approx(0.5));
}

TEST_CASE("idempotence keeps the constant-sequence limit flat") {
    // E repeated: after the first application nothing more is lost.
    CVector e1 = CVector::Unit(2, 0);
    CVector u(2);
    u << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    Event e = Event::projector(e1);
    SequenceLimit lim = sequence_limit([&](int) { return e; },
                                       density_from_pure(PureState(u)), 50, 1e-12);
    CHECK(lim.converged);
    CHECK(lim.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(lim.steps <= 3);
}
