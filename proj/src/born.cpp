#include "qprob/born.hpp"

#include <algorithm>
#include <cmath>

namespace qprob {

namespace {

Eigen::Index state_dim(const QState& s) {
    if (std::holds_alternative<PureState>(s)) return std::get<PureState>(s).dim();
    if (std::holds_alternative<DensityMatrix>(s)) return std::get<DensityMatrix>(s).dim();
    return -1; // no state: any dimension
}

void check_dim(Eigen::Index op_dim, const QState& s, const char* where) {
    Eigen::Index sd = state_dim(s);
    if (sd >= 0 && sd != op_dim)
        throw DimMismatch(std::string(where) + ": operator dim " +
                          std::to_string(op_dim) + " vs state dim " + std::to_string(sd));
}

ProbValue clamp01(double v, bool zero_den = false) {
    return ProbValue{std::clamp(v, 0.0, 1.0), zero_den};
}

// E_n ... E_1 as a matrix product; identity for the empty sequence.
CMatrix sequence_product(const EventSequence& seq, Eigen::Index dim) {
    CMatrix m = CMatrix::Identity(dim, dim);
    for (const Event& e : seq) {
        if (e.dim() != dim) throw DimMismatch("event sequence is not dimension-homogeneous");
        m = e.matrix() * m;
    }
    return m;
}

} // namespace

double prob_value(const CMatrix& product, const QState& s) {
    if (std::holds_alternative<PureState>(s))
        return (product * std::get<PureState>(s).vector()).squaredNorm();
    if (std::holds_alternative<DensityMatrix>(s))
        return trace(product.adjoint() * product * std::get<DensityMatrix>(s).matrix()).real();
    double n = operator_norm(product);
    return n * n;
}

ProbValue prob_event(const Event& e, const QState& s) {
    check_dim(e.dim(), s, "prob_event");
    return clamp01(prob_value(e.matrix(), s));
}

ProbValue prob_obs_in(const Observable& t, const BorelSet& b, const QState& s) {
    check_dim(t.dim(), s, "prob_obs_in");
    return prob_event(pvm_eval(t.pvm(), b), s);
}

ProbValue consecutive(const EventSequence& seq, const QState& s) {
    if (seq.empty()) return ProbValue{1.0, false}; // P(Lambda | s) = 1
    Eigen::Index dim = seq.front().dim();
    check_dim(dim, s, "consecutive");
    return clamp01(prob_value(sequence_product(seq, dim), s));
}

ProbValue conditional(const EventSequence& target, const EventSequence& given,
                      const QState& s) {
    EventSequence full = given;
    full.insert(full.end(), target.begin(), target.end());
    double den = consecutive(given, s).value;
    if (den <= 1e-12) return ProbValue{0.0, true};
    return clamp01(consecutive(full, s).value / den);
}

namespace {

void check_times(std::size_t n_events, const std::vector<double>& times) {
    if (times.size() != n_events + 1)
        throw NonIncreasingTimes("times must have one more entry than events");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            throw NonIncreasingTimes("times must be strictly increasing");
}

CMatrix evolved_product(const EventSequence& seq, const std::vector<double>& times,
                        const EvolutionFamily& evo) {
    CMatrix m = evo.at(times[0], times[1]);
    for (std::size_t k = 0; k < seq.size(); ++k) {
        if (seq[k].dim() != evo.dim())
            throw DimMismatch("prob_with_evolution: event/evolution dimension mismatch");
        m = seq[k].matrix() * m;
        if (k + 1 < seq.size()) m = evo.at(times[k + 1], times[k + 2]) * m;
    }
    return m;
}

} // namespace

ProbValue prob_with_evolution(const EventSequence& seq, const std::vector<double>& times,
                              const EvolutionFamily& evo, const QState& s) {
    check_dim(evo.dim(), s, "prob_with_evolution");
    if (seq.empty()) return ProbValue{1.0, false};
    check_times(seq.size(), times);
    return clamp01(prob_value(evolved_product(seq, times, evo), s));
}

ProbValue conditional_with_evolution(const EventSequence& target,
                                     const EventSequence& given,
                                     const std::vector<double>& times,
                                     const EvolutionFamily& evo, const QState& s) {
    EventSequence full = given;
    full.insert(full.end(), target.begin(), target.end());
    check_times(full.size(), times);
    if (given.empty()) return prob_with_evolution(target, times, evo, s);
    std::vector<double> given_times(times.begin(), times.begin() + given.size() + 1);
    double den = prob_with_evolution(given, given_times, evo, s).value;
    if (den <= 1e-12) return ProbValue{0.0, true};
    return clamp01(prob_with_evolution(full, times, evo, s).value / den);
}

std::pair<double, double> independence_defect(const Event& e1, const Event& e2,
                                              const QState& s) {
    double p1 = prob_event(e1, s).value;
    double p2 = prob_event(e2, s).value;
    double d12 = consecutive({e1, e2}, s).value - p1 * p2;
    double d21 = consecutive({e2, e1}, s).value - p1 * p2;
    return {d12, d21};
}

bool sequence_independent(const EventSequence& seq, const QState& s, double tol) {
    if (seq.size() > 12)
        throw TooLong("sequence_independent: sequence longer than 12");
    std::vector<double> singles;
    singles.reserve(seq.size());
    for (const Event& e : seq) singles.push_back(prob_event(e, s).value);

    const std::size_t n = seq.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        EventSequence sub;
        double product = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (mask & (std::size_t{1} << k)) {
                sub.push_back(seq[k]);
                product *= singles[k];
            }
        }
        if (std::abs(consecutive(sub, s).value - product) > tol) return false;
    }
    return true;
}

bool identically_distributed(const Observable& s_obs, const Observable& t_obs,
                             const DensityMatrix& rho, double tol) {
    if (s_obs.dim() != t_obs.dim() || s_obs.dim() != rho.dim())
        throw DimMismatch("identically_distributed: dimension mismatch");
    constexpr double merge_tol = 1e-8;
    std::vector<double> values;
    for (const auto& a : s_obs.pvm().atoms) values.push_back(a.value);
    for (const auto& a : t_obs.pvm().atoms) values.push_back(a.value);
    std::sort(values.begin(), values.end());

    auto mass_at = [&](const Observable& obs, double lambda) {
        double p = 0.0;
        for (const auto& a : obs.pvm().atoms)
            if (std::abs(a.value - lambda) <= merge_tol)
                p += prob_event(a.projector, QState{rho}).value;
        return p;
    };

    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0 && values[i] - values[i - 1] <= merge_tol) continue;
        if (std::abs(mass_at(s_obs, values[i]) - mass_at(t_obs, values[i])) > tol)
            return false;
    }
    return true;
}

InterferenceTerms interference_decomposition(const Event& e,
                                             const std::vector<Event>& f_parts,
                                             const PureState& psi) {
    for (std::size_t i = 0; i < f_parts.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (!orthogonal(f_parts[i], f_parts[j], 1e-9))
                throw NotOrthogonal("interference_decomposition: parts not orthogonal");

    const CVector& v = psi.vector();
    InterferenceTerms out;
    std::vector<CVector> fv; // F_j psi
    fv.reserve(f_parts.size());
    for (const Event& f : f_parts) {
        if (f.dim() != psi.dim())
            throw DimMismatch("interference_decomposition: dimension mismatch");
        fv.push_back(f.matrix() * v);
        out.diagonal += (e.matrix() * fv.back()).squaredNorm();
    }
    Complex cross{0.0, 0.0};
    for (std::size_t j = 0; j < f_parts.size(); ++j)
        for (std::size_t k = 0; k < f_parts.size(); ++k)
            if (j != k) cross += fv[j].dot(e.matrix() * fv[k]);
    out.cross = cross.real(); // imaginary part cancels across the double sum
    return out;
}

Complex amplitude(const PureState& phi, const PureState& psi) {
    if (phi.dim() != psi.dim()) throw DimMismatch("amplitude: dimension mismatch");
    return phi.vector().dot(psi.vector());
}

CVector amplitude_event(const Event& e, const PureState& psi) {
    if (e.dim() != psi.dim()) throw DimMismatch("amplitude_event: dimension mismatch");
    return e.matrix() * psi.vector();
}

double expected_value(const CMatrix& a, const QState& s) {
    if (!is_hermitian(a)) throw NotHermitian("expected_value: operator not Hermitian");
    if (std::holds_alternative<NoState>(s))
        throw NoStateUnsupported("expected_value: needs a state");
    check_dim(a.rows(), s, "expected_value");
    if (std::holds_alternative<PureState>(s)) {
        const CVector& v = std::get<PureState>(s).vector();
        return v.dot(a * v).real();
    }
    return trace(a * std::get<DensityMatrix>(s).matrix()).real();
}

namespace {

double spectral_moment(const Observable& t, int k, const QState& s, double center) {
    if (std::holds_alternative<NoState>(s))
        throw NoStateUnsupported("moment: needs a state");
    double m = 0.0;
    for (const auto& atom : t.pvm().atoms)
        m += std::pow(atom.value - center, k) * prob_event(atom.projector, s).value;
    return m;
}

} // namespace

double moment(const Observable& t, int k, const QState& s) {
    if (k < 1) throw BadOrder("moment: k must be >= 1");
    return spectral_moment(t, k, s, 0.0);
}

double central_moment(const Observable& t, int k, const QState& s) {
    if (k < 2) throw BadOrder("central_moment: k must be >= 2");
    return spectral_moment(t, k, s, moment(t, 1, s));
}

double std_dev(const Observable& t, const QState& s) {
    return std::sqrt(std::max(0.0, central_moment(t, 2, s)));
}

Complex time_ordered_expectation(const std::vector<CMatrix>& ops,
                                 const DensityMatrix& rho) {
    CMatrix m = CMatrix::Identity(rho.dim(), rho.dim());
    for (const CMatrix& a : ops) {
        if (a.rows() != rho.dim() || a.cols() != rho.dim())
            throw DimMismatch("time_ordered_expectation: dimension mismatch");
        m = a * m;
    }
    return trace(m * rho.matrix());
}

ConditionalExpectation conditional_expectation(const std::vector<CMatrix>& ops,
                                               const EventSequence& cond,
                                               const DensityMatrix& rho) {
    std::vector<CMatrix> cond_ops;
    cond_ops.reserve(cond.size());
    for (const Event& e : cond) cond_ops.push_back(e.matrix());

    Complex den = time_ordered_expectation(cond_ops, rho);
    if (std::abs(den) <= 1e-12) return {Complex{0.0, 0.0}, true};

    std::vector<CMatrix> full = ops;
    full.insert(full.end(), cond_ops.begin(), cond_ops.end());
    return {time_ordered_expectation(full, rho) / den, false};
}

double entropy(const Observable& t, const QState& s, double base) {
    if (std::holds_alternative<NoState>(s))
        throw NoStateUnsupported("entropy: needs a state");
    if (base > 0.0 && base <= 1.0)
        throw InvariantViolation("entropy: base must exceed 1");
    double h = 0.0;
    for (const auto& atom : t.pvm().atoms) {
        double p = prob_event(atom.projector, s).value;
        if (p > 0.0) h -= p * std::log(p); // 0 log 0 := 0
    }
    if (base > 1.0) h /= std::log(base);
    return h;
}

SequenceLimit sequence_limit(const std::function<Event(int)>& event_at,
                             const DensityMatrix& rho, int n_max, double tol) {
    if (n_max < 1) throw BadOrder("sequence_limit: n_max must be >= 1");
    CMatrix m = CMatrix::Identity(rho.dim(), rho.dim());
    double prev = 1.0; // P(Lambda | rho)
    for (int n = 1; n <= n_max; ++n) {
        Event e = event_at(n - 1);
        if (e.dim() != rho.dim()) throw DimMismatch("sequence_limit: dimension mismatch");
        m = e.matrix() * m;
        double p = std::clamp(trace(m.adjoint() * m * rho.matrix()).real(), 0.0, 1.0);
        if (p > prev + 1e-10)
            throw MonotonicityViolated("sequence_limit: partial probabilities increased");
        if (std::abs(p - prev) <= tol) return {p, true, n};
        prev = p;
    }
    return {prev, false, n_max};
}

} // namespace qprob
