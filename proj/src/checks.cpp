#include "qprob/checks.hpp"

#include <cmath>
#include <sstream>

#include "qprob/born.hpp"
#include "qprob/entanglement.hpp"
#include "qprob/models.hpp"
#include "qprob/sampler.hpp"

namespace qprob {

CVector random_unit_vector(Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CVector v(dim);
    for (Eigen::Index k = 0; k < dim; ++k) v(k) = Complex(gauss(rng), gauss(rng));
    return v / v.norm();
}

CMatrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CMatrix a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
    return (a + adjoint(a)) / 2.0;
}

CMatrix random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CMatrix a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<CMatrix> qr(a);
    CMatrix q = qr.householderQ();
    // Normalize phases so the distribution doesn't favor the QR convention.
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < dim; ++k) {
        Complex d = r(k, k);
        q.col(k) *= (std::abs(d) > 0.0) ? d / std::abs(d) : Complex(1.0, 0.0);
    }
    return q;
}

Event random_event(Eigen::Index dim, std::mt19937_64& rng) {
    std::uniform_int_distribution<Eigen::Index> rank_dist(0, dim);
    Eigen::Index rank = rank_dist(rng);
    if (rank == 0) return Event::zero(dim);
    if (rank == dim) return Event::identity(dim);
    CMatrix u = random_unitary(dim, rng);
    CMatrix p = CMatrix::Zero(dim, dim);
    for (Eigen::Index k = 0; k < rank; ++k) p += u.col(k) * u.col(k).adjoint();
    return Event(p);
}

DensityMatrix random_density(Eigen::Index dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> un(0.0, 1.0);
    CMatrix u = random_unitary(dim, rng);
    Eigen::VectorXd w(dim);
    double total = 0.0;
    for (Eigen::Index k = 0; k < dim; ++k) {
        w(k) = un(rng) + 1e-6;
        total += w(k);
    }
    CMatrix rho = CMatrix::Zero(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k)
        rho += (w(k) / total) * (u.col(k) * u.col(k).adjoint());
    return DensityMatrix(rho);
}

bool SuiteReport::pass() const {
    for (const CheckResult& r : results)
        if (!r.passed) return false;
    return true;
}

std::string format_suite(const SuiteReport& report) {
    std::ostringstream out;
    for (const CheckResult& r : report.results) {
        out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name;
        if (!r.detail.empty()) out << "  (" << r.detail << ")";
        out << "\n";
    }
    return out.str();
}

namespace {

std::string dev_detail(double max_dev, int checked) {
    std::ostringstream s;
    s << "max deviation " << max_dev << " over " << checked << " instances";
    return s.str();
}

CheckResult guarded(const std::string& name, const std::function<CheckResult()>& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        return {name, false, std::string("threw: ") + e.what()};
    }
}

// --- worked examples ------------------------------------------------------

// The two-particle spin table: after conditioning on the spin-0 event, each
// one-sided spin event has probability 1/2, the two sides agree with
// certainty, and the joint outcome probability is 1/2 -- for every initial
// state that overlaps the spin-0 state.
CheckResult check_spin_table(std::uint64_t seed, int instances) {
    const std::string name = "two-particle spin table";
    std::mt19937_64 rng(seed);
    EprTriple epr = epr_triple();
    PureState psi0 = singlet();
    Event not_e1 = complement(epr.e1);
    Event not_e2 = complement(epr.e2);

    double max_dev = 0.0;
    int checked = 0;
    for (int i = 0; i < instances; ++i) {
        CVector v = random_unit_vector(4, rng);
        if (std::abs(psi0.vector().dot(v)) <= 1e-3) {
            --i;
            continue;
        }
        PureState psi{v};
        EventSequence e0{epr.e0};
        EventSequence e0e1{epr.e0, epr.e1};
        EventSequence e0e2{epr.e0, epr.e2};
        const std::pair<double, double> rows[] = {
            {conditional({epr.e1}, e0, psi).value, 0.5},
            {conditional({epr.e2}, e0, psi).value, 0.5},
            {conditional({epr.e2}, e0e1, psi).value, 1.0},
            {conditional({epr.e1}, e0e2, psi).value, 1.0},
            {conditional({not_e2}, e0e1, psi).value, 0.0},
            {conditional({not_e1}, e0e2, psi).value, 0.0},
            {conditional({epr.e1, epr.e2}, e0, psi).value, 0.5},
            {conditional({not_e1, not_e2}, e0, psi).value, 0.5},
            {conditional({epr.e1, not_e2}, e0, psi).value, 0.0},
            {conditional({not_e1, epr.e2}, e0, psi).value, 0.0},
        };
        for (const auto& [got, want] : rows) {
            max_dev = std::max(max_dev, std::abs(got - want));
            ++checked;
        }
    }
    return {name, max_dev <= 1e-12, dev_detail(max_dev, checked)};
}

// Operator identities behind the table: E1 E2 E0 = E2 E0, the product has
// operator norm 2^{-1/2}, the total-spin-squared operator has spectrum
// {0, 2} with multiplicities (1, 3), the spin-0 state spans its kernel, and
// the defect of (E1, E2) against E0 is 1/4 in both orders.
CheckResult check_spin_identities() {
    const std::string name = "two-particle spin operator identities";
    EprTriple epr = epr_triple();
    double max_dev = 0.0;

    CMatrix prod12 = epr.e1.matrix() * epr.e2.matrix() * epr.e0.matrix();
    CMatrix prod2 = epr.e2.matrix() * epr.e0.matrix();
    max_dev = std::max(max_dev, operator_norm(prod12 - prod2));
    max_dev = std::max(max_dev, std::abs(operator_norm(prod2) - 1.0 / std::sqrt(2.0)));

    Pvm spectrum = pvm_of(total_spin_sq());
    bool shape_ok = spectrum.atoms.size() == 2 &&
                    std::abs(spectrum.atoms[0].value - 0.0) < 1e-9 &&
                    std::abs(spectrum.atoms[1].value - 2.0) < 1e-9 &&
                    spectrum.atoms[0].projector.rank() == 1 &&
                    spectrum.atoms[1].projector.rank() == 3;
    CVector s0 = singlet().vector();
    max_dev = std::max(max_dev, (total_spin_sq() * s0).norm());

    auto [d12, d21] = delta(epr.e1, epr.e2, epr.e0);
    max_dev = std::max(max_dev, std::abs(d12 - 0.25));
    max_dev = std::max(max_dev, std::abs(d21 - 0.25));

    std::ostringstream detail;
    detail << "max deviation " << max_dev << (shape_ok ? "" : "; spectrum shape wrong");
    return {name, shape_ok && max_dev <= 1e-10, detail.str()};
}

// A two-outcome measuring device repeated twice with trivial dynamics: the
// second reading reproduces the first with certainty, giving the conditional
// outcome table (1, 0, 0, 1).
CheckResult check_device_table() {
    const std::string name = "repeated measuring device table";
    CMatrix e(2, 2);
    e << 1, 0, 0, 0;
    Event yes(e);
    Event no = complement(yes);
    CVector v(2);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    PureState psi(v);
    EvolutionFamily evo = EvolutionFamily::schrodinger(Observable(CMatrix::Zero(2, 2)));
    std::vector<double> times{0.0, 1.0, 2.0};

    const std::pair<double, double> rows[] = {
        {conditional_with_evolution({yes}, {yes}, times, evo, psi).value, 1.0},
        {conditional_with_evolution({yes}, {no}, times, evo, psi).value, 0.0},
        {conditional_with_evolution({no}, {yes}, times, evo, psi).value, 0.0},
        {conditional_with_evolution({no}, {no}, times, evo, psi).value, 1.0},
    };
    double max_dev = 0.0;
    for (const auto& [got, want] : rows) max_dev = std::max(max_dev, std::abs(got - want));
    return {name, max_dev <= 1e-12, dev_detail(max_dev, 4)};
}

// Consecutive probabilities depend on the order: for E1 = |e1><e1|,
// E2 = |u><u| with u = (e1 + e2)/sqrt(2), and psi = e1, the two orders give
// 1/2 and 1/4.
CheckResult check_order_dependence() {
    const std::string name = "order dependence of consecutive probabilities";
    CVector e1 = CVector::Zero(2);
    e1(0) = 1.0;
    CVector u(2);
    u << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    Event p1 = Event::projector(e1);
    Event p2 = Event::projector(u);
    PureState psi(e1);
    double p12 = consecutive({p1, p2}, psi).value;
    double p21 = consecutive({p2, p1}, psi).value;
    double max_dev = std::max(std::abs(p12 - 0.5), std::abs(p21 - 0.25));
    return {name, max_dev <= 1e-12, dev_detail(max_dev, 2)};
}

// Two-level oscillation: H = S3, E = |u><u|, psi = u with u = (e1+e2)/sqrt 2
// gives survival probability cos^2(t/2).
CheckResult check_two_level_oscillation() {
    const std::string name = "two-level oscillation";
    SpinMatrices s = spin_matrices();
    CVector u(2);
    u << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    Event e = Event::projector(u);
    PureState psi(u);
    EvolutionFamily evo = EvolutionFamily::schrodinger(Observable(s.s3));
    double max_dev = 0.0;
    int checked = 0;
    for (double t : {0.1, 0.5, 1.0, 2.0 * M_PI / 3.0, 2.5, M_PI, 5.0}) {
        double got = prob_with_evolution({e}, {0.0, t}, evo, psi).value;
        double want = std::cos(t / 2.0) * std::cos(t / 2.0);
        max_dev = std::max(max_dev, std::abs(got - want));
        ++checked;
    }
    return {name, max_dev <= 1e-10, dev_detail(max_dev, checked)};
}

// Inserting an intermediate filter between two orthogonal filters raises the
// pass-through probability from 0 to 1/4.
CheckResult check_intermediate_filter() {
    const std::string name = "intermediate filter effect";
    CVector e1 = CVector::Zero(2), e2 = CVector::Zero(2);
    e1(0) = 1.0;
    e2(1) = 1.0;
    CVector diag(2);
    diag << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    Event f0 = Event::projector(e1);
    Event f45 = Event::projector(diag);
    Event f90 = Event::projector(e2);
    PureState psi(e1);
    double without = consecutive({f0, f90}, psi).value;
    double with_filter = consecutive({f0, f45, f90}, psi).value;
    double max_dev = std::max(std::abs(without), std::abs(with_filter - 0.25));
    std::ostringstream detail;
    detail << "blocked " << without << ", with filter " << with_filter;
    return {name, max_dev <= 1e-12, detail.str()};
}

// --- randomized invariants ------------------------------------------------

CheckResult check_spectral_round_trip(std::uint64_t seed, int instances) {
    const std::string name = "spectral round trip";
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> dim_dist(2, 8);
    double max_dev = 0.0;
    for (int i = 0; i < instances; ++i) {
        Eigen::Index dim = dim_dist(rng);
        CMatrix t = random_hermitian(dim, rng);
        Pvm p = pvm_of(t);
        p.validate();
        max_dev = std::max(max_dev, operator_norm(reconstruct(p) - t));
    }
    return {name, max_dev <= 1e-9, dev_detail(max_dev, instances)};
}

CheckResult check_pvm_multiplicativity(std::uint64_t seed, int instances) {
    const std::string name = "pvm multiplicativity on intersections";
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> dim_dist(2, 6);
    std::uniform_real_distribution<double> un(-3.0, 3.0);
    double max_dev = 0.0;
    for (int i = 0; i < instances; ++i) {
        Eigen::Index dim = dim_dist(rng);
        Pvm p = pvm_of(random_hermitian(dim, rng));
        double a = un(rng), b = un(rng), c = un(rng), d = un(rng);
        BorelSet s1 = BorelSet::interval(std::min(a, b), std::max(a, b) + 1e-9, true, true);
        BorelSet s2 = BorelSet::interval(std::min(c, d), std::max(c, d) + 1e-9, true, true);
        // P(B1 /\ B2) as the product of the two spectral projectors.
        CMatrix product = pvm_eval(p, s1).matrix() * pvm_eval(p, s2).matrix();
        CMatrix direct = CMatrix::Zero(dim, dim);
        for (const Pvm::Atom& atom : p.atoms)
            if (s1.contains(atom.value) && s2.contains(atom.value))
                direct += atom.projector.matrix();
        max_dev = std::max(max_dev, operator_norm(product - direct));
    }
    return {name, max_dev <= 1e-10, dev_detail(max_dev, instances)};
}

CheckResult check_model_agreement(std::uint64_t seed, int instances) {
    const std::string name = "state-evolving vs operator-evolving models";
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> dim_dist(2, 8);
    std::uniform_real_distribution<double> time_dist(-10.0, 10.0);
    double max_dev = 0.0;
    int failed = 0;
    for (int i = 0; i < instances; ++i) {
        Eigen::Index dim = dim_dist(rng);
        Observable h(random_hermitian(dim, rng));
        Model a = Model::schrodinger(h);
        Model b = Model::heisenberg(h);

        std::vector<BornInstance> singles;
        singles.push_back({Observable(random_hermitian(dim, rng)),
                           BorelSet::interval(-1.0, 1.0, true, true),
                           random_density(dim, rng), time_dist(rng)});

        std::vector<double> times;
        for (int k = 0; k < 4; ++k) times.push_back(time_dist(rng));
        std::sort(times.begin(), times.end());
        for (int k = 1; k < 4; ++k)
            if (times[k] - times[k - 1] < 1e-6) times[k] = times[k - 1] + 0.1;
        EventSequence seq{random_event(dim, rng), random_event(dim, rng),
                          random_event(dim, rng)};
        std::vector<SequenceInstance> seqs;
        seqs.push_back({seq, {}, times, QState{random_density(dim, rng)}});
        seqs.push_back({{seq[1], seq[2]}, {seq[0]}, times,
                        QState{PureState(random_unit_vector(dim, rng))}});

        CheckReport rep = check_invariance(a, b, singles, seqs, 1e-10);
        max_dev = std::max(max_dev, rep.max_dev);
        failed += rep.failed;
    }
    return {name, failed == 0 && max_dev <= 1e-10, dev_detail(max_dev, instances)};
}

CheckResult check_model_isomorphism(std::uint64_t seed, int instances) {
    const std::string name = "unitary model isomorphism";
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> dim_dist(2, 6);
    std::uniform_real_distribution<double> time_dist(-5.0, 5.0);
    double max_dev = 0.0;
    int failed = 0;
    for (int i = 0; i < instances; ++i) {
        Eigen::Index dim = dim_dist(rng);
        CMatrix h_free = random_hermitian(dim, rng);
        CMatrix h_int = random_hermitian(dim, rng);
        Observable h_total(h_free + h_int);
        Pvm free_pvm = pvm_of(h_free);
        auto w = [free_pvm](double t) {
            return functional_calculus(free_pvm,
                                       [t](double x) { return std::exp(Complex(0.0, t) * x); });
        };
        Model full = Model::schrodinger(h_total);
        Model rotated = Model::conjugated(full, w, "rotating frame");
        std::vector<BornInstance> instances_list;
        for (int k = 0; k < 3; ++k)
            instances_list.push_back({Observable(random_hermitian(dim, rng)),
                                      BorelSet::interval(-0.5, 2.0, true, true),
                                      random_density(dim, rng), time_dist(rng)});
        CheckReport rep = check_isomorphism(w, full, rotated, instances_list, 1e-9);
        max_dev = std::max(max_dev, rep.max_dev);
        failed += rep.failed;
    }
    return {name, failed == 0, dev_detail(max_dev, instances)};
}

CheckResult check_probability_conservation(std::uint64_t seed, int instances) {
    const std::string name = "probability conservation under evolution";
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> dim_dist(2, 6);
    std::uniform_real_distribution<double> time_dist(-5.0, 5.0);
    int ok = 0;
    for (int i = 0; i < instances; ++i) {
        Eigen::Index dim = dim_dist(rng);
        Model m = Model::schrodinger(Observable(random_hermitian(dim, rng)));
        if (check_conservation(m, Observable(random_hermitian(dim, rng)),
                               random_density(dim, rng), time_dist(rng), 1e-9))
            ++ok;
    }
    std::ostringstream detail;
    detail << ok << "/" << instances << " conserved";
    return {name, ok == instances, detail.str()};
}

CheckResult check_monotonicity(std::uint64_t seed, int instances) {
    const std::string name = "sequence monotonicity";
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> dim_dist(2, 6);
    double worst_increase = 0.0;
    for (int i = 0; i < instances; ++i) {
        Eigen::Index dim = dim_dist(rng);
        PureState psi(random_unit_vector(dim, rng));
        EventSequence seq;
        double prev = 1.0;
        for (int k = 0; k < 10; ++k) {
            seq.push_back(random_event(dim, rng));
            double p = consecutive(seq, psi).value;
            worst_increase = std::max(worst_increase, p - prev);
            prev = p;
        }
    }
    std::ostringstream detail;
    detail << "worst increase " << worst_increase << " over " << instances << " sequences";
    return {name, worst_increase <= 1e-10, detail.str()};
}

CheckResult check_derivative_identity(std::uint64_t seed, int instances) {
    const std::string name = "evolution derivative identity";
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> dim_dist(2, 6);
    std::uniform_real_distribution<double> time_dist(-3.0, 3.0);
    double max_dev = 0.0;
    for (int i = 0; i < instances; ++i) {
        Eigen::Index dim = dim_dist(rng);
        DerivativeCheck d = heisenberg_derivative_check(
            Observable(random_hermitian(dim, rng)), random_event(dim, rng),
            PureState(random_unit_vector(dim, rng)), time_dist(rng));
        max_dev = std::max(max_dev, std::abs(d.lhs - d.rhs));
    }
    return {name, max_dev <= 1e-6, dev_detail(max_dev, instances)};
}

CheckResult check_entanglement_equivalence(std::uint64_t seed, int instances) {
    const std::string name = "entanglement equivalence";
    std::mt19937_64 rng(seed);
    const Bipartition parts[] = {{2, 2}, {2, 3}, {3, 3}};
    std::uniform_int_distribution<int> part_dist(0, 2);
    int ok = 0;
    double max_witness_err = 0.0;
    for (int i = 0; i < instances; ++i) {
        Bipartition bp = parts[part_dist(rng)];
        bool product = (i % 2 == 0);
        CVector v;
        if (product) {
            CVector a = random_unit_vector(bp.d1, rng);
            CVector b = random_unit_vector(bp.d2, rng);
            v = CVector(bp.d1 * bp.d2);
            for (Eigen::Index p = 0; p < bp.d1; ++p)
                for (Eigen::Index q = 0; q < bp.d2; ++q) v(p * bp.d2 + q) = a(p) * b(q);
        } else {
            v = random_unit_vector(bp.d1 * bp.d2, rng);
        }
        PureState psi(v);
        Prop301Report rep = verify_prop_301(psi, bp, 50, 1e-9, rng());
        if (rep.equivalent && rep.entangled_state == !product) ++ok;
        if (rep.entangled_state) {
            SchmidtForm sf = schmidt(psi, bp);
            double want = -sf.coefficients[0] * sf.coefficients[0] * sf.coefficients[1] *
                          sf.coefficients[1];
            max_witness_err = std::max(max_witness_err, std::abs(rep.delta12 - want));
        }
    }
    std::ostringstream detail;
    detail << ok << "/" << instances << " equivalent, witness defect error "
           << max_witness_err;
    return {name, ok == instances && max_witness_err <= 1e-9, detail.str()};
}

CheckResult check_sampler_calibration(std::uint64_t seed, int instances) {
    const std::string name = "sampler calibration";
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> dim_dist(2, 5);
    double worst_z = 0.0;
    int checked = 0;
    for (int i = 0; i < instances && checked < instances; ++i) {
        Eigen::Index dim = dim_dist(rng);
        EventSequence seq{random_event(dim, rng), random_event(dim, rng)};
        PureState psi(random_unit_vector(dim, rng));
        double analytic = consecutive(seq, psi).value;
        if (analytic < 0.05 || analytic > 0.95) continue;
        SampleReport rep =
            sample_sequence(seq, std::nullopt, std::nullopt, psi, 20000, rng());
        worst_z = std::max(worst_z, std::abs(rep.z_score));
        ++checked;
    }
    std::ostringstream detail;
    detail << "worst |z| " << worst_z << " over " << checked << " runs";
    return {name, checked > 0 && worst_z <= 4.5, detail.str()};
}

} // namespace

SuiteReport run_worked_examples_suite(std::uint64_t seed, int instances) {
    SuiteReport report;
    report.results.push_back(guarded("two-particle spin table",
                                     [&] { return check_spin_table(seed, instances); }));
    report.results.push_back(
        guarded("two-particle spin operator identities", [] { return check_spin_identities(); }));
    report.results.push_back(
        guarded("repeated measuring device table", [] { return check_device_table(); }));
    report.results.push_back(guarded("order dependence of consecutive probabilities",
                                     [] { return check_order_dependence(); }));
    report.results.push_back(
        guarded("two-level oscillation", [] { return check_two_level_oscillation(); }));
    report.results.push_back(
        guarded("intermediate filter effect", [] { return check_intermediate_filter(); }));
    return report;
}

SuiteReport run_invariants_suite(std::uint64_t seed, int instances) {
    SuiteReport report;
    auto add = [&](const std::string& n, std::function<CheckResult()> f) {
        report.results.push_back(guarded(n, f));
    };
    add("spectral round trip", [&] { return check_spectral_round_trip(seed + 1, instances); });
    add("pvm multiplicativity on intersections",
        [&] { return check_pvm_multiplicativity(seed + 2, instances); });
    add("state-evolving vs operator-evolving models",
        [&] { return check_model_agreement(seed + 3, instances); });
    add("unitary model isomorphism",
        [&] { return check_model_isomorphism(seed + 4, std::max(1, instances / 4)); });
    add("probability conservation under evolution",
        [&] { return check_probability_conservation(seed + 5, instances); });
    add("sequence monotonicity", [&] { return check_monotonicity(seed + 6, instances); });
    add("evolution derivative identity",
        [&] { return check_derivative_identity(seed + 7, instances); });
    add("entanglement equivalence",
        [&] { return check_entanglement_equivalence(seed + 8, instances); });
    add("sampler calibration",
        [&] { return check_sampler_calibration(seed + 9, std::min(instances, 10)); });
    return report;
}

} // namespace qprob
