#include "qprob/sampler.hpp"

#include <cmath>
#include <random>

namespace qprob {

namespace {

// splitmix64; used to derive an independent stream seed per trial.
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace

SampleReport sample_sequence(const EventSequence& seq,
                             const std::optional<std::vector<double>>& times,
                             const std::optional<EvolutionFamily>& evo,
                             const PureState& psi, std::uint64_t trials,
                             std::uint64_t seed) {
    if (trials < 1) throw BadOrder("sample_sequence: trials must be >= 1");
    if (evo && !evo->unitary())
        throw NonUnitaryEvolution("sample_sequence: contractive evolution not samplable");
    if (evo) {
        if (!times) throw NonIncreasingTimes("sample_sequence: evolution requires times");
        if (times->size() != seq.size() + 1)
            throw NonIncreasingTimes("sample_sequence: times must cover the sequence");
        for (std::size_t k = 1; k < times->size(); ++k)
            if (!((*times)[k] > (*times)[k - 1]))
                throw NonIncreasingTimes("sample_sequence: times must be strictly increasing");
    }
    for (const Event& e : seq)
        if (e.dim() != psi.dim()) throw DimMismatch("sample_sequence: dimension mismatch");

    SampleReport report;
    report.trials = trials;
    report.seed = seed;
    report.analytic = evo ? prob_with_evolution(seq, *times, *evo, QState{psi}).value
                          : consecutive(seq, QState{psi}).value;
    report.step_attempts.assign(seq.size(), 0);
    report.step_passes.assign(seq.size(), 0);

    for (std::uint64_t i = 0; i < trials; ++i) {
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(i)));
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        CVector v = psi.vector();
        if (evo && !seq.empty()) v = evo->at((*times)[0], (*times)[1]) * v;
        bool all_yes = true;
        for (std::size_t k = 0; k < seq.size(); ++k) {
            report.step_attempts[k] += 1;
            double p = (seq[k].matrix() * v).squaredNorm() / v.squaredNorm();
            if (unit(rng) < p) {
                report.step_passes[k] += 1;
                v = seq[k].matrix() * v;
                if (evo && k + 1 < seq.size()) v = evo->at((*times)[k + 1], (*times)[k + 2]) * v;
            } else {
                all_yes = false;
                break;
            }
        }
        if (all_yes) report.successes += 1;
    }

    report.frequency =
        static_cast<double>(report.successes) / static_cast<double>(report.trials);
    if (report.analytic > 0.0 && report.analytic < 1.0) {
        double se = std::sqrt(report.analytic * (1.0 - report.analytic) /
                              static_cast<double>(report.trials));
        report.z_score = (report.frequency - report.analytic) / se;
    } else {
        report.exact_match = report.frequency == report.analytic;
    }
    return report;
}

} // namespace qprob
