#pragma once

// Scenario documents: a JSON format naming operators, states, an optional
// evolution law, and an ordered list of queries dispatched to the
// probability kernel. Complex scalars are [re, im] pairs; matrices are
// row-major nested arrays.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qprob/born.hpp"
#include "qprob/evolution.hpp"
#include "qprob/sampler.hpp"

namespace qprob {

using Json = nlohmann::ordered_json;

struct Query {
    std::string kind;
    std::string label;
    Json args; // the original query object, validated at parse time
};

class Scenario {
public:
    static Scenario parse(const std::string& text);
    static Scenario parse_json(const Json& doc);
    static Scenario load(const std::string& path);

    Json to_json() const;

    Eigen::Index dim() const { return dim_; }
    double hbar() const { return hbar_; }
    void set_hbar(double hbar) { hbar_ = hbar; }

    const std::vector<Query>& queries() const { return queries_; }

    bool has_matrix(const std::string& name) const { return matrices_.count(name) > 0; }
    bool has_vector(const std::string& name) const { return vectors_.count(name) > 0; }
    const CMatrix& matrix(const std::string& name) const;
    const CVector& vector(const std::string& name) const;

    Event event(const std::string& name) const;
    Observable observable(const std::string& name) const;
    /// A named vector resolves to a pure state, a named matrix to a density
    /// matrix; the name "" (query field absent) resolves to no state.
    QState state(const std::string& name) const;
    PureState pure_state(const std::string& name) const;

    std::optional<EvolutionFamily> evolution() const;

    bool operator==(const Scenario& other) const;

private:
    Eigen::Index dim_ = 0;
    double hbar_ = 1.0;
    std::vector<std::string> def_order_;
    std::map<std::string, CMatrix> matrices_;
    std::map<std::string, CVector> vectors_;
    Json evolution_spec_; // null when absent
    std::vector<Query> queries_;
};

struct QueryResult {
    std::string label;
    std::string kind;
    double value = 0.0;
    std::optional<double> value2;  // delta: the swapped order; expectation: imag part
    bool zero_denominator = false;
    std::string error; // empty on success
    std::optional<SampleReport> sample;
};

struct Report {
    std::vector<QueryResult> rows;
    bool all_ok() const;
};

/// Evaluates every query in document order; per-query failures land in the
/// row's error field and evaluation continues.
Report run_queries(const Scenario& s);

std::string format_table(const Report& report);
std::string format_json_lines(const Report& report);

/// Parses a Borel-set description: {"borel": [interval...], "points": [...]}
/// with interval endpoints numeric or "-inf"/"+inf".
BorelSet parse_borel(const Json& node, const std::string& path);

} // namespace qprob
