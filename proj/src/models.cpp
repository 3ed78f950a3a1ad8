#include "qprob/models.hpp"

#include <algorithm>
#include <cmath>

namespace qprob {

Model Model::schrodinger(const Observable& h, double hbar) {
    Model m;
    m.kind_ = Kind::states_evolve;
    m.dim_ = h.dim();
    m.label_ = "schrodinger";
    m.evo_ = std::make_shared<EvolutionFamily>(EvolutionFamily::schrodinger(h, hbar));
    return m;
}

Model Model::states_evolve(EvolutionFamily evo) {
    Model m;
    m.kind_ = Kind::states_evolve;
    m.dim_ = evo.dim();
    m.label_ = "states-evolve";
    m.evo_ = std::make_shared<EvolutionFamily>(std::move(evo));
    return m;
}

Model Model::heisenberg(const Observable& h, double hbar) {
    Model m;
    m.kind_ = Kind::events_evolve;
    m.dim_ = h.dim();
    m.label_ = "heisenberg";
    m.evo_ = std::make_shared<EvolutionFamily>(EvolutionFamily::schrodinger(h, hbar));
    return m;
}

Model Model::interaction(Eigen::Index dim, std::function<CMatrix(double)> family) {
    Model m;
    m.kind_ = Kind::family_conjugation;
    m.dim_ = dim;
    m.label_ = "interaction";
    m.family_ = std::move(family);
    return m;
}

Model Model::conjugated(Model base, std::function<CMatrix(double)> family,
                        std::string label) {
    Model m;
    m.kind_ = Kind::conjugated;
    m.dim_ = base.dim();
    m.label_ = std::move(label);
    m.family_ = std::move(family);
    m.base_ = std::make_shared<Model>(std::move(base));
    return m;
}

namespace {

CMatrix checked_family_member(const std::function<CMatrix(double)>& family, double t) {
    CMatrix w = family(t);
    if (!is_unitary(w)) throw NotUnitary("model family member is not unitary");
    return w;
}

} // namespace

CMatrix Model::evolve_event(double t, const CMatrix& p) const {
    switch (kind_) {
        case Kind::states_evolve:
            return p;
        case Kind::events_evolve: {
            CMatrix u = evo_->at(0.0, t);
            return u.adjoint() * p * u;
        }
        case Kind::family_conjugation: {
            CMatrix w = checked_family_member(family_, t);
            return w * p * w.adjoint();
        }
        case Kind::conjugated: {
            CMatrix w = checked_family_member(family_, t);
            return w * base_->evolve_event(t, w.adjoint() * p * w) * w.adjoint();
        }
    }
    throw Error("unreachable");
}

CMatrix Model::evolve_state(double t, const CMatrix& rho) const {
    switch (kind_) {
        case Kind::states_evolve: {
            CMatrix u = evo_->at(0.0, t);
            return u * rho * u.adjoint();
        }
        case Kind::events_evolve:
            return rho;
        case Kind::family_conjugation: {
            CMatrix w = checked_family_member(family_, t);
            return w * rho * w.adjoint();
        }
        case Kind::conjugated: {
            CMatrix w = checked_family_member(family_, t);
            return w * base_->evolve_state(t, w.adjoint() * rho * w) * w.adjoint();
        }
    }
    throw Error("unreachable");
}

ProbValue Model::time_dependent_prob(const Observable& t_obs, const BorelSet& b,
                                     const DensityMatrix& rho, double t) const {
    if (t_obs.dim() != dim_ || rho.dim() != dim_)
        throw DimMismatch("time_dependent_prob: dimension mismatch");
    CMatrix p = evolve_event(t, pvm_eval(t_obs.pvm(), b).matrix());
    CMatrix r = evolve_state(t, rho.matrix());
    return ProbValue{std::clamp(trace(p * r).real(), 0.0, 1.0), false};
}

CMatrix Model::eff_event(double t0, double tk, const CMatrix& e) const {
    switch (kind_) {
        case Kind::states_evolve:
            return e;
        case Kind::events_evolve: {
            CMatrix u = evo_->at(t0, tk);
            return u.adjoint() * e * u;
        }
        case Kind::family_conjugation: {
            CMatrix w = checked_family_member(family_, tk);
            return w * e * w.adjoint();
        }
        case Kind::conjugated: {
            CMatrix w = checked_family_member(family_, tk);
            return w * base_->eff_event(t0, tk, e) * w.adjoint();
        }
    }
    throw Error("unreachable");
}

CMatrix Model::eff_prop(double s, double t) const {
    switch (kind_) {
        case Kind::states_evolve:
            return evo_->at(s, t);
        case Kind::events_evolve:
            return CMatrix::Identity(dim_, dim_);
        case Kind::family_conjugation: {
            CMatrix ws = checked_family_member(family_, s);
            CMatrix wt = checked_family_member(family_, t);
            return wt * ws.adjoint();
        }
        case Kind::conjugated: {
            CMatrix ws = checked_family_member(family_, s);
            CMatrix wt = checked_family_member(family_, t);
            return wt * base_->eff_prop(s, t) * ws.adjoint();
        }
    }
    throw Error("unreachable");
}

CMatrix Model::initial_conjugation(double t0) const {
    switch (kind_) {
        case Kind::states_evolve:
        case Kind::events_evolve:
            return CMatrix::Identity(dim_, dim_);
        case Kind::family_conjugation:
            return checked_family_member(family_, t0);
        case Kind::conjugated:
            return checked_family_member(family_, t0) * base_->initial_conjugation(t0);
    }
    throw Error("unreachable");
}

ProbValue Model::gbr(const EventSequence& seq, const std::vector<double>& times,
                     const QState& s) const {
    if (seq.empty()) return ProbValue{1.0, false};
    if (times.size() != seq.size() + 1)
        throw NonIncreasingTimes("gbr: times must have one more entry than events");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1]))
            throw NonIncreasingTimes("gbr: times must be strictly increasing");

    double t0 = times[0];
    CMatrix m = eff_prop(t0, times[1]);
    for (std::size_t k = 0; k < seq.size(); ++k) {
        if (seq[k].dim() != dim_) throw DimMismatch("gbr: event dimension mismatch");
        m = eff_event(t0, times[k + 1], seq[k].matrix()) * m;
        if (k + 1 < seq.size()) m = eff_prop(times[k + 1], times[k + 2]) * m;
    }

    CMatrix w0 = initial_conjugation(t0);
    QState transported = s;
    if (std::holds_alternative<PureState>(s)) {
        transported = PureState(CVector(w0 * std::get<PureState>(s).vector()));
    } else if (std::holds_alternative<DensityMatrix>(s)) {
        transported =
            DensityMatrix(CMatrix(w0 * std::get<DensityMatrix>(s).matrix() * w0.adjoint()));
    }
    return ProbValue{std::clamp(prob_value(m, transported), 0.0, 1.0), false};
}

ProbValue Model::gbr_conditional(const EventSequence& target, const EventSequence& given,
                                 const std::vector<double>& times, const QState& s) const {
    EventSequence full = given;
    full.insert(full.end(), target.begin(), target.end());
    if (given.empty()) return gbr(target, times, s);
    std::vector<double> given_times(times.begin(), times.begin() + given.size() + 1);
    double den = gbr(given, given_times, s).value;
    if (den <= 1e-12) return ProbValue{0.0, true};
    return ProbValue{std::clamp(gbr(full, times, s).value / den, 0.0, 1.0), false};
}

namespace {

void record(CheckReport& report, double dev, const std::string& what) {
    report.checked += 1;
    report.max_dev = std::max(report.max_dev, dev);
    if (dev > report.tol) {
        report.failed += 1;
        report.failures.push_back(what + ": deviation " + std::to_string(dev));
    }
}

} // namespace

CheckReport check_invariance(const Model& a, const Model& b,
                             const std::vector<BornInstance>& singles,
                             const std::vector<SequenceInstance>& sequences,
                             double tol) {
    CheckReport report;
    report.tol = tol;
    for (std::size_t i = 0; i < singles.size(); ++i) {
        const auto& inst = singles[i];
        double pa = a.time_dependent_prob(inst.obs, inst.set, inst.rho, inst.t).value;
        double pb = b.time_dependent_prob(inst.obs, inst.set, inst.rho, inst.t).value;
        record(report, std::abs(pa - pb), "single #" + std::to_string(i));
    }
    for (std::size_t i = 0; i < sequences.size(); ++i) {
        const auto& inst = sequences[i];
        double pa = a.gbr_conditional(inst.target, inst.given, inst.times, inst.state).value;
        double pb = b.gbr_conditional(inst.target, inst.given, inst.times, inst.state).value;
        record(report, std::abs(pa - pb), "sequence #" + std::to_string(i));
    }
    return report;
}

CheckReport check_isomorphism(const std::function<CMatrix(double)>& u_family,
                              const Model& a, const Model& b,
                              const std::vector<BornInstance>& instances, double tol) {
    CheckReport report;
    report.tol = tol;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& inst = instances[i];
        CMatrix u = u_family(inst.t);
        if (!is_unitary(u))
            throw NotUnitary("check_isomorphism: connecting family is not unitary");
        double pa = a.time_dependent_prob(inst.obs, inst.set, inst.rho, inst.t).value;
        Observable primed_obs(CMatrix(u * inst.obs.matrix() * u.adjoint()));
        DensityMatrix primed_rho(CMatrix(u * inst.rho.matrix() * u.adjoint()));
        double pb = b.time_dependent_prob(primed_obs, inst.set, primed_rho, inst.t).value;
        record(report, std::abs(pa - pb), "instance #" + std::to_string(i));
    }
    return report;
}

bool check_conservation(const Model& model, const Observable& t_obs,
                        const DensityMatrix& rho, double t, double tol) {
    CMatrix state = model.evolve_state(t, rho.matrix());
    double total = 0.0;
    for (const auto& atom : t_obs.pvm().atoms) {
        double p = trace(model.evolve_event(t, atom.projector.matrix()) * state).real();
        if (p < -tol || p > 1.0 + tol) return false;
        total += p;
    }
    return std::abs(total - 1.0) <= tol;
}

DerivativeCheck heisenberg_derivative_check(const Observable& h, const Event& e,
                                            const PureState& psi, double t,
                                            double step, double hbar) {
    if (step <= 0.0) throw BadOrder("heisenberg_derivative_check: step must be positive");
    auto p_at = [&](double tau) {
        CVector v = exp_unitary(h.matrix(), tau, hbar) * psi.vector();
        return (e.matrix() * v).squaredNorm();
    };
    DerivativeCheck out;
    out.lhs = (p_at(t + step) - p_at(t - step)) / (2.0 * step);

    CVector psi_t = exp_unitary(h.matrix(), t, hbar) * psi.vector();
    CMatrix commutator = h.matrix() * e.matrix() - e.matrix() * h.matrix();
    out.rhs = (Complex(0.0, 1.0 / hbar) * psi_t.dot(commutator * psi_t)).real();
    return out;
}

} // namespace qprob
