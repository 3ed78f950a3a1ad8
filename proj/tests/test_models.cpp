#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qprob/checks.hpp"
#include "qprob/models.hpp"

using namespace qprob;

TEST_CASE("state-evolving and operator-evolving models agree on everything") {
    std::mt19937_64 rng(61);
    for (int i = 0; i < 20; ++i) {
        Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng() % 5);
        Observable h(random_hermitian(dim, rng));
        Model a = Model::schrodinger(h);
        Model b = Model::heisenberg(h);

        Observable t_obs(random_hermitian(dim, rng));
        DensityMatrix rho = random_density(dim, rng);
        double t = -5.0 + 10.0 * (static_cast<double>(rng() % 1000) / 1000.0);
        BorelSet set = BorelSet::interval(-1.0, 1.5, true, true);

        CHECK(a.time_dependent_prob(t_obs, set, rho, t).value ==
              doctest::Approx(b.time_dependent_prob(t_obs, set, rho, t).value)
                  .epsilon(1e-10));

        EventSequence seq{random_event(dim, rng), random_event(dim, rng)};
        std::vector<double> times{t, t + 0.7, t + 1.3};
        PureState psi(random_unit_vector(dim, rng));
        CHECK(a.gbr(seq, times, psi).value ==
              doctest::Approx(b.gbr(seq, times, psi).value).epsilon(1e-10));

        ProbValue ca = a.gbr_conditional({seq[1]}, {seq[0]}, times, psi);
        ProbValue cb = b.gbr_conditional({seq[1]}, {seq[0]}, times, psi);
        CHECK(ca.value == doctest::Approx(cb.value).epsilon(1e-9));
        CHECK(ca.zero_denominator == cb.zero_denominator);
    }
}

TEST_CASE("state-evolving model reproduces the direct computation") {
    std::mt19937_64 rng(67);
    Observable h(random_hermitian(3, rng));
    Model m = Model::schrodinger(h);
    EvolutionFamily evo = EvolutionFamily::schrodinger(h);
    EventSequence seq{random_event(3, rng), random_event(3, rng)};
    std::vector<double> times{0.2, 1.1, 2.4};
    PureState psi(random_unit_vector(3, rng));
    CHECK(m.gbr(seq, times, psi).value ==
          doctest::Approx(prob_with_evolution(seq, times, evo, psi).value).epsilon(1e-12));
}

TEST_CASE("the flows compose as a group action") {
    std::mt19937_64 rng(71);
    Observable h(random_hermitian(3, rng));
    Model heis = Model::heisenberg(h);
    Event e = random_event(3, rng);
    // E_t at t = 0 is the identity map.
    CHECK(operator_norm(heis.evolve_event(0.0, e.matrix()) - e.matrix()) < 1e-12);
    Model schr = Model::schrodinger(h);
    DensityMatrix rho = random_density(3, rng);
    CHECK(operator_norm(schr.evolve_state(0.0, rho.matrix()) - rho.matrix()) < 1e-12);
    // Evolving a state preserves its trace and positivity.
    CMatrix moved = schr.evolve_state(2.3, rho.matrix());
    CHECK(std::abs(trace(moved) - Complex(1, 0)) < 1e-12);
    CHECK(is_hermitian(moved));
}

TEST_CASE("conjugated model is an equivalent model") {
    std::mt19937_64 rng(73);
    Eigen::Index dim = 4;
    CMatrix h_free = random_hermitian(dim, rng);
    CMatrix h_int = random_hermitian(dim, rng);
    Observable h_total(h_free + h_int);
    Pvm free_pvm = pvm_of(h_free);
    auto w = [free_pvm](double t) {
        return functional_calculus(free_pvm,
                                   [t](double x) { return std::exp(Complex(0.0, t) * x); });
    };
    Model lab = Model::schrodinger(h_total);
    Model rotating = Model::conjugated(lab, w, "rotating frame");
    CHECK(rotating.label() == "rotating frame");

    std::vector<BornInstance> instances;
    for (int k = 0; k < 5; ++k)
        instances.push_back({Observable(random_hermitian(dim, rng)),
                             BorelSet::interval(-2.0, 2.0, true, true),
                             random_density(dim, rng),
                             -3.0 + 6.0 * (static_cast<double>(rng() % 1000) / 1000.0)});
    CheckReport rep = check_isomorphism(w, lab, rotating, instances, 1e-9);
    CHECK(rep.pass());
    CHECK(rep.checked == 5);
}

TEST_CASE("interaction-style model leaves probabilities invariant") {
    // When both flows conjugate by the same unitary family the Born values
    // are time independent, and the model is isomorphic to the trivial one.
    std::mt19937_64 rng(79);
    Eigen::Index dim = 3;
    CMatrix h = random_hermitian(dim, rng);
    auto w = [h](double t) { return exp_unitary(h, t); };
    Model m = Model::interaction(dim, w);
    Observable t_obs(random_hermitian(dim, rng));
    DensityMatrix rho = random_density(dim, rng);
    BorelSet set = BorelSet::interval(-1.0, 1.0, true, true);
    double p0 = m.time_dependent_prob(t_obs, set, rho, 0.0).value;
    for (double t : {0.5, 1.7, -2.2})
        CHECK(m.time_dependent_prob(t_obs, set, rho, t).value ==
              doctest::Approx(p0).epsilon(1e-10));
}

TEST_CASE("invariance checker reports deviations instead of throwing") {
    // Free vs flipped dynamics give visibly different survival probabilities.
    CMatrix zero2 = CMatrix::Zero(2, 2);
    CMatrix sx(2, 2);
    sx << 0, 1, 1, 0;
    Observable h1(zero2), h2(sx);
    CMatrix sz(2, 2);
    sz << 1, 0, 0, -1;
    CMatrix ground = CMatrix::Zero(2, 2);
    ground(0, 0) = 1.0;
    std::vector<BornInstance> singles{{Observable(sz), BorelSet::point(1.0),
                                       DensityMatrix(ground), 1.3}};
    CheckReport rep =
        check_invariance(Model::schrodinger(h1), Model::schrodinger(h2), singles, {}, 1e-10);
    CHECK(rep.checked == 1);
    CHECK(rep.failed == 1);
    CHECK(rep.failures.size() == 1);
    CHECK_FALSE(rep.pass());
}

TEST_CASE("probability conservation") {
    std::mt19937_64 rng(89);
    Model m = Model::heisenberg(Observable(random_hermitian(4, rng)));
    CHECK(check_conservation(m, Observable(random_hermitian(4, rng)),
                             random_density(4, rng), 1.8, 1e-9));
}

TEST_CASE("derivative identity, including the worked two-level value") {
    // H = diag(1,-1)/2, E = |u><u|, psi = u: p(t) = cos^2(t/2), so
    // p'(pi/2) = -sin(pi/2)/2 = -1/2.
    CMatrix h(2, 2);
    h << 0.5, 0, 0, -0.5;
    CVector u(2);
    u << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    DerivativeCheck d = heisenberg_derivative_check(Observable(h), Event::projector(u),
                                                    PureState(u), M_PI / 2.0);
    CHECK(d.rhs == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(std::abs(d.lhs - d.rhs) < 1e-6);

    std::mt19937_64 rng(97);
    for (int i = 0; i < 10; ++i) {
        Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng() % 4);
        DerivativeCheck r = heisenberg_derivative_check(
            Observable(random_hermitian(dim, rng)), random_event(dim, rng),
            PureState(random_unit_vector(dim, rng)),
            -2.0 + 4.0 * (static_cast<double>(rng() % 1000) / 1000.0));
        CHECK(std::abs(r.lhs - r.rhs) < 1e-6);
    }
}

TEST_CASE("doubling the generator doubles the precession rate") {
    CMatrix s3(2, 2);
    s3 << 0.5, 0, 0, -0.5;
    Model a = Model::schrodinger(Observable(s3));
    Model b = Model::schrodinger(Observable(CMatrix(2.0 * s3)));
    CVector u(2);
    u << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    DensityMatrix rho = density_from_pure(PureState(u));
    CMatrix sx(2, 2);
    sx << 0, 0.5, 0.5, 0;
    Observable t_obs(sx);
    BorelSet b_set = BorelSet::interval(0.1, 1.0);
    double t = M_PI / 2.0;
    // Survival on the +x atom: cos^2(t/2) = 1/2 versus cos^2(t) = 0.
    double pa = a.time_dependent_prob(t_obs, b_set, rho, t).value;
    double pb = b.time_dependent_prob(t_obs, b_set, rho, t).value;
    CHECK(pa == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(pb == doctest::Approx(0.0).epsilon(1e-10));
    CheckReport rep = check_invariance(a, b, {{t_obs, b_set, rho, t}}, {}, 1e-8);
    CHECK_FALSE(rep.pass());
    CHECK(rep.max_dev == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("conservation fails for contractive state evolution") {
    // A propagator that shrinks every vector by half leaks total mass.
    Model m = Model::states_evolve(EvolutionFamily::generic(
        2, [](double, double) { return CMatrix(0.5 * CMatrix::Identity(2, 2)); }));
    CMatrix s3(2, 2);
    s3 << 0.5, 0, 0, -0.5;
    DensityMatrix rho = density_from_pure(PureState(CVector(CVector::Unit(2, 0))));
    CHECK_FALSE(check_conservation(m, Observable(s3), rho, 1.0, 1e-8));
    // Sanity: a unitary model on the same inputs passes.
    CHECK(check_conservation(Model::schrodinger(Observable(s3)), Observable(s3), rho,
                             1.0, 1e-8));
}

TEST_CASE("eigenvectors give a flat probability curve") {
    CMatrix s3(2, 2);
    s3 << 0.5, 0, 0, -0.5;
    CVector e1 = CVector::Unit(2, 0);
    DerivativeCheck dc = heisenberg_derivative_check(
        Observable(s3), Event::projector(e1), PureState(e1), 0.7);
    CHECK(std::abs(dc.lhs) < 1e-8);
    CHECK(std::abs(dc.rhs) < 1e-12);
}
