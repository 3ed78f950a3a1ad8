#include "qprob/scenario.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "qprob/entanglement.hpp"

namespace qprob {

namespace {

[[noreturn]] void fail_syntax(const std::string& path, const std::string& what) {
    throw SyntaxError(path + ": " + what);
}

Complex parse_complex(const Json& node, const std::string& path) {
    if (node.is_number()) return Complex(node.get<double>(), 0.0);
    if (node.is_array() && node.size() == 2 && node[0].is_number() && node[1].is_number())
        return Complex(node[0].get<double>(), node[1].get<double>());
    fail_syntax(path, "expected a complex scalar [re, im]");
}

CVector parse_vector_literal(const Json& node, const std::string& path) {
    if (!node.is_array() || node.empty())
        fail_syntax(path, "expected a non-empty array of complex entries");
    CVector v(node.size());
    for (std::size_t k = 0; k < node.size(); ++k)
        v(k) = parse_complex(node[k], path + "[" + std::to_string(k) + "]");
    if (!all_finite(v)) throw InvariantViolation(path + ": non-finite entries");
    return v;
}

CMatrix parse_matrix_literal(const Json& node, const std::string& path) {
    if (!node.is_array() || node.empty())
        fail_syntax(path, "expected a non-empty array of rows");
    std::size_t cols = 0;
    CMatrix m;
    for (std::size_t i = 0; i < node.size(); ++i) {
        const Json& row = node[i];
        if (!row.is_array() || row.empty())
            fail_syntax(path, "row " + std::to_string(i) + " is not a non-empty array");
        if (i == 0) {
            cols = row.size();
            m.resize(node.size(), cols);
        } else if (row.size() != cols) {
            fail_syntax(path, "ragged rows");
        }
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = parse_complex(row[j], path + "[" + std::to_string(i) + "][" +
                                                std::to_string(j) + "]");
    }
    if (!all_finite(m)) throw InvariantViolation(path + ": non-finite entries");
    return m;
}

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Json vector_to_json(const CVector& v) {
    Json out = Json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(complex_to_json(v(k)));
    return out;
}

Json matrix_to_json(const CMatrix& m) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        out.push_back(row);
    }
    return out;
}

double parse_endpoint(const Json& node, const std::string& path) {
    if (node.is_number()) return node.get<double>();
    if (node.is_string()) {
        std::string s = node.get<std::string>();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "+inf" || s == "inf") return std::numeric_limits<double>::infinity();
    }
    fail_syntax(path, "endpoint must be a number, \"-inf\", or \"+inf\"");
}

const std::set<std::string> kQueryKinds = {
    "prob_event", "prob_obs_in", "consecutive", "conditional", "with_evolution",
    "delta",      "entropy",     "moment",      "expectation", "sample"};

} // namespace

BorelSet parse_borel(const Json& node, const std::string& path) {
    std::vector<BorelSet::Interval> intervals;
    std::vector<double> points;
    if (node.contains("borel")) {
        const Json& arr = node["borel"];
        if (!arr.is_array()) fail_syntax(path + ".borel", "expected an array of intervals");
        for (std::size_t k = 0; k < arr.size(); ++k) {
            const Json& iv = arr[k];
            std::string ipath = path + ".borel[" + std::to_string(k) + "]";
            BorelSet::Interval out;
            if (iv.contains("lo")) out.lo = parse_endpoint(iv["lo"], ipath);
            if (iv.contains("hi")) out.hi = parse_endpoint(iv["hi"], ipath);
            out.lo_closed = iv.value("lo_closed", true);
            out.hi_closed = iv.value("hi_closed", false);
            intervals.push_back(out);
        }
    }
    if (node.contains("points")) {
        for (const Json& p : node["points"]) {
            if (!p.is_number()) fail_syntax(path + ".points", "points must be numbers");
            points.push_back(p.get<double>());
        }
    }
    try {
        return BorelSet(std::move(intervals), std::move(points));
    } catch (const InvariantViolation& e) {
        throw InvariantViolation(path + ": " + e.what());
    }
}

namespace {

struct DefContext {
    std::map<std::string, CMatrix>* matrices;
    std::map<std::string, CVector>* vectors;

    const CMatrix& matrix(const std::string& name, const std::string& path) const {
        auto it = matrices->find(name);
        if (it == matrices->end())
            throw UnknownName(path + ": no operator named '" + name + "'");
        return it->second;
    }
};

void eval_def(const std::string& name, const Json& expr, DefContext& ctx) {
    const std::string path = "defs." + name;
    auto store_matrix = [&](CMatrix m) { (*ctx.matrices)[name] = std::move(m); };
    auto store_vector = [&](CVector v) { (*ctx.vectors)[name] = std::move(v); };

    if (expr.is_array()) {
        // Literal shorthand: nested depth decides vector vs matrix.
        if (!expr.empty() && expr[0].is_array() && !expr[0].empty() && expr[0][0].is_array())
            store_matrix(parse_matrix_literal(expr, path));
        else
            store_vector(parse_vector_literal(expr, path));
        return;
    }
    if (!expr.is_object()) fail_syntax(path, "definition must be an object or array literal");

    if (expr.contains("matrix")) {
        store_matrix(parse_matrix_literal(expr["matrix"], path + ".matrix"));
    } else if (expr.contains("vector")) {
        store_vector(parse_vector_literal(expr["vector"], path + ".vector"));
    } else if (expr.contains("ctor")) {
        std::string ctor = expr["ctor"].get<std::string>();
        SpinMatrices s = spin_matrices();
        if (ctor == "spin_x") {
            store_matrix(s.s1);
        } else if (ctor == "spin_y") {
            store_matrix(s.s2);
        } else if (ctor == "spin_z") {
            store_matrix(s.s3);
        } else if (ctor == "total_spin_sq") {
            store_matrix(total_spin_sq());
        } else if (ctor == "identity") {
            if (!expr.contains("dim") || !expr["dim"].is_number_integer())
                fail_syntax(path, "identity ctor needs an integer dim");
            Eigen::Index d = expr["dim"].get<Eigen::Index>();
            if (d < 1) fail_syntax(path, "identity dim must be >= 1");
            store_matrix(CMatrix::Identity(d, d));
        } else {
            fail_syntax(path, "unknown ctor '" + ctor + "'");
        }
    } else if (expr.contains("projector")) {
        std::string ref = expr["projector"].get<std::string>();
        auto it = ctx.vectors->find(ref);
        if (it == ctx.vectors->end())
            throw UnknownName(path + ": no vector named '" + ref + "'");
        const CVector& v = it->second;
        if (v.norm() < 1e-14) throw InvariantViolation(path + ": projector of zero vector");
        store_matrix(CMatrix(v * v.adjoint() / v.squaredNorm()));
    } else if (expr.contains("tensor")) {
        const Json& operands = expr["tensor"];
        if (!operands.is_array() || operands.size() != 2)
            fail_syntax(path, "tensor needs exactly two operand names");
        store_matrix(kron(ctx.matrix(operands[0].get<std::string>(), path),
                          ctx.matrix(operands[1].get<std::string>(), path)));
    } else if (expr.contains("pvm_event")) {
        const Json& node = expr["pvm_event"];
        const CMatrix& obs = ctx.matrix(node.at("obs").get<std::string>(), path);
        BorelSet b = parse_borel(node, path + ".pvm_event");
        try {
            store_matrix(pvm_eval(pvm_of(obs), b).matrix());
        } catch (const NotHermitian& e) {
            throw InvariantViolation(path + ": " + e.what());
        }
    } else if (expr.contains("complement")) {
        const CMatrix& m = ctx.matrix(expr["complement"].get<std::string>(), path);
        if (m.rows() != m.cols()) throw InvariantViolation(path + ": complement of non-square");
        store_matrix(CMatrix(CMatrix::Identity(m.rows(), m.cols()) - m));
    } else if (expr.contains("adjoint")) {
        store_matrix(adjoint(ctx.matrix(expr["adjoint"].get<std::string>(), path)));
    } else if (expr.contains("scale")) {
        const Json& node = expr["scale"];
        Complex factor = parse_complex(node.at("factor"), path + ".scale.factor");
        std::string ref = node.at("operand").get<std::string>();
        if (auto it = ctx.vectors->find(ref); it != ctx.vectors->end()) {
            store_vector(CVector(factor * it->second));
        } else {
            store_matrix(CMatrix(factor * ctx.matrix(ref, path + ".scale")));
        }
    } else if (expr.contains("sum")) {
        const Json& operands = expr["sum"];
        if (!operands.is_array() || operands.empty())
            fail_syntax(path, "sum needs at least one operand name");
        std::string first = operands[0].get<std::string>();
        if (ctx.vectors->count(first)) {
            CVector acc = ctx.vectors->at(first);
            for (std::size_t k = 1; k < operands.size(); ++k) {
                const CVector& next = ctx.vectors->at(operands[k].get<std::string>());
                if (next.size() != acc.size())
                    throw DimMismatch(path + ": sum operands differ in dimension");
                acc += next;
            }
            store_vector(std::move(acc));
        } else {
            CMatrix acc = ctx.matrix(first, path);
            for (std::size_t k = 1; k < operands.size(); ++k) {
                const CMatrix& next = ctx.matrix(operands[k].get<std::string>(), path);
                if (next.rows() != acc.rows() || next.cols() != acc.cols())
                    throw DimMismatch(path + ": sum operands differ in dimension");
                acc += next;
            }
            store_matrix(std::move(acc));
        }
    } else {
        fail_syntax(path, "unrecognized expression form");
    }
}

std::vector<std::string> name_list(const Json& query, const std::string& key,
                                   const std::string& path, bool required) {
    if (!query.contains(key)) {
        if (required) fail_syntax(path, "missing required field '" + key + "'");
        return {};
    }
    if (!query[key].is_array()) fail_syntax(path + "." + key, "expected an array of names");
    std::vector<std::string> out;
    for (const Json& n : query[key]) {
        if (!n.is_string()) fail_syntax(path + "." + key, "names must be strings");
        out.push_back(n.get<std::string>());
    }
    return out;
}

void check_times_field(const Json& query, const std::string& path) {
    if (!query.contains("times")) return;
    const Json& times = query["times"];
    if (!times.is_array() || times.size() < 1)
        fail_syntax(path + ".times", "expected a non-empty numeric array");
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!times[k].is_number()) fail_syntax(path + ".times", "entries must be numbers");
        if (k > 0 && !(times[k].get<double>() > times[k - 1].get<double>()))
            fail_syntax(path + ".times", "entries must be strictly increasing");
    }
}

} // namespace

Scenario Scenario::parse(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SyntaxError(std::string("scenario: ") + e.what());
    }
    return parse_json(doc);
}

Scenario Scenario::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SyntaxError("scenario: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

Scenario Scenario::parse_json(const Json& doc) {
    if (!doc.is_object()) throw SyntaxError("scenario: document must be a JSON object");
    Scenario s;

    if (!doc.contains("dim") || !doc["dim"].is_number_integer())
        fail_syntax("dim", "required integer field");
    s.dim_ = doc["dim"].get<Eigen::Index>();
    if (s.dim_ < 1) fail_syntax("dim", "must be >= 1");

    if (doc.contains("hbar")) {
        if (!doc["hbar"].is_number() || doc["hbar"].get<double>() <= 0.0)
            fail_syntax("hbar", "must be a positive number");
        s.hbar_ = doc["hbar"].get<double>();
    }

    DefContext ctx{&s.matrices_, &s.vectors_};
    if (doc.contains("defs")) {
        if (!doc["defs"].is_object()) fail_syntax("defs", "must be an object");
        for (const auto& [name, expr] : doc["defs"].items()) {
            eval_def(name, expr, ctx);
            s.def_order_.push_back(name);
        }
    }

    if (doc.contains("evolution") && !doc["evolution"].is_null()) {
        const Json& evo = doc["evolution"];
        if (evo.contains("hamiltonian")) {
            std::string ref = evo["hamiltonian"].get<std::string>();
            const CMatrix& h = ctx.matrix(ref, "evolution.hamiltonian");
            if (h.rows() != s.dim_)
                throw DimMismatch("evolution.hamiltonian: dimension differs from scenario dim");
            if (!is_hermitian(h))
                throw InvariantViolation("evolution.hamiltonian: '" + ref + "' is not Hermitian");
        } else if (evo.contains("unitary_family")) {
            const Json& fam = evo["unitary_family"];
            if (!fam.is_object() || !fam.contains("fixed"))
                fail_syntax("evolution.unitary_family", "expected {\"fixed\": name}");
            const CMatrix& u = ctx.matrix(fam["fixed"].get<std::string>(), "evolution");
            if (u.rows() != s.dim_ || !is_unitary(u))
                throw InvariantViolation("evolution.unitary_family: not a unitary of scenario dim");
        } else {
            fail_syntax("evolution", "expected {\"hamiltonian\": name} or {\"unitary_family\": ...}");
        }
        s.evolution_spec_ = evo;
    }

    if (doc.contains("queries")) {
        if (!doc["queries"].is_array()) fail_syntax("queries", "must be an array");
        for (std::size_t i = 0; i < doc["queries"].size(); ++i) {
            const Json& q = doc["queries"][i];
            std::string path = "queries[" + std::to_string(i) + "]";
            if (!q.is_object() || !q.contains("kind") || !q["kind"].is_string())
                fail_syntax(path, "query needs a string 'kind'");
            std::string kind = q["kind"].get<std::string>();
            if (!kQueryKinds.count(kind)) fail_syntax(path, "unknown kind '" + kind + "'");
            check_times_field(q, path);
            // Every referenced name must resolve now, not at run time.
            for (const char* key : {"event", "obs", "e0", "e1", "e2"})
                if (q.contains(key) && q[key].is_string() &&
                    !s.matrices_.count(q[key].get<std::string>()))
                    throw UnknownName(path + "." + key + ": no operator named '" +
                                      q[key].get<std::string>() + "'");
            for (const char* key : {"events", "target", "given", "ops"})
                for (const std::string& n : name_list(q, key, path, false))
                    if (!s.matrices_.count(n))
                        throw UnknownName(path + "." + key + ": no operator named '" + n + "'");
            if (q.contains("state") && q["state"].is_string()) {
                std::string n = q["state"].get<std::string>();
                if (!s.matrices_.count(n) && !s.vectors_.count(n))
                    throw UnknownName(path + ".state: no definition named '" + n + "'");
            }
            Query query;
            query.kind = kind;
            query.label = q.value("label", "query" + std::to_string(i));
            query.args = q;
            s.queries_.push_back(std::move(query));
        }
    }
    return s;
}

Json Scenario::to_json() const {
    Json doc;
    doc["dim"] = dim_;
    doc["hbar"] = hbar_;
    Json defs = Json::object();
    for (const std::string& name : def_order_) {
        if (matrices_.count(name))
            defs[name] = Json{{"matrix", matrix_to_json(matrices_.at(name))}};
        else
            defs[name] = Json{{"vector", vector_to_json(vectors_.at(name))}};
    }
    doc["defs"] = defs;
    if (!evolution_spec_.is_null()) doc["evolution"] = evolution_spec_;
    Json queries = Json::array();
    for (const Query& q : queries_) queries.push_back(q.args);
    doc["queries"] = queries;
    return doc;
}

const CMatrix& Scenario::matrix(const std::string& name) const {
    auto it = matrices_.find(name);
    if (it == matrices_.end()) throw UnknownName("no operator named '" + name + "'");
    return it->second;
}

const CVector& Scenario::vector(const std::string& name) const {
    auto it = vectors_.find(name);
    if (it == vectors_.end()) throw UnknownName("no vector named '" + name + "'");
    return it->second;
}

Event Scenario::event(const std::string& name) const {
    const CMatrix& m = matrix(name);
    if (m.rows() != dim_)
        throw DimMismatch("'" + name + "' has dim " + std::to_string(m.rows()) +
                          ", scenario dim is " + std::to_string(dim_));
    try {
        return Event(m);
    } catch (const InvariantViolation& e) {
        throw InvariantViolation("defs." + name + ": " + e.what());
    }
}

Observable Scenario::observable(const std::string& name) const {
    const CMatrix& m = matrix(name);
    if (m.rows() != dim_) throw DimMismatch("'" + name + "': dimension mismatch");
    try {
        return Observable(m);
    } catch (const NotHermitian& e) {
        throw InvariantViolation("defs." + name + ": " + e.what());
    }
}

QState Scenario::state(const std::string& name) const {
    if (name.empty()) return NoState{};
    try {
        if (vectors_.count(name)) {
            const CVector& v = vectors_.at(name);
            if (v.size() != dim_) throw DimMismatch("'" + name + "': dimension mismatch");
            return PureState(v);
        }
        const CMatrix& m = matrix(name);
        if (m.rows() != dim_) throw DimMismatch("'" + name + "': dimension mismatch");
        return DensityMatrix(m);
    } catch (const InvariantViolation& e) {
        throw InvariantViolation("defs." + name + ": " + e.what());
    }
}

PureState Scenario::pure_state(const std::string& name) const {
    QState s = state(name);
    if (!std::holds_alternative<PureState>(s))
        throw InvariantViolation("'" + name + "' is not a pure state");
    return std::get<PureState>(s);
}

std::optional<EvolutionFamily> Scenario::evolution() const {
    if (evolution_spec_.is_null()) return std::nullopt;
    if (evolution_spec_.contains("hamiltonian")) {
        std::string ref = evolution_spec_["hamiltonian"].get<std::string>();
        return EvolutionFamily::schrodinger(Observable(matrix(ref)), hbar_);
    }
    CMatrix u = matrix(evolution_spec_["unitary_family"]["fixed"].get<std::string>());
    return EvolutionFamily::from_unitary_family(dim_, [u](double) { return u; });
}

bool Scenario::operator==(const Scenario& other) const {
    auto mat_eq = [](const std::map<std::string, CMatrix>& a,
                     const std::map<std::string, CMatrix>& b) {
        if (a.size() != b.size()) return false;
        for (const auto& [k, v] : a) {
            auto it = b.find(k);
            if (it == b.end() || it->second.rows() != v.rows() ||
                it->second.cols() != v.cols() || it->second != v)
                return false;
        }
        return true;
    };
    auto vec_eq = [](const std::map<std::string, CVector>& a,
                     const std::map<std::string, CVector>& b) {
        if (a.size() != b.size()) return false;
        for (const auto& [k, v] : a) {
            auto it = b.find(k);
            if (it == b.end() || it->second.size() != v.size() || it->second != v) return false;
        }
        return true;
    };
    if (dim_ != other.dim_ || hbar_ != other.hbar_) return false;
    if (!mat_eq(matrices_, other.matrices_) || !vec_eq(vectors_, other.vectors_)) return false;
    if (evolution_spec_ != other.evolution_spec_) return false;
    if (queries_.size() != other.queries_.size()) return false;
    for (std::size_t i = 0; i < queries_.size(); ++i)
        if (queries_[i].args != other.queries_[i].args) return false;
    return true;
}

namespace {

EventSequence resolve_events(const Scenario& s, const Json& query, const std::string& key) {
    EventSequence out;
    for (const Json& n : query.at(key)) out.push_back(s.event(n.get<std::string>()));
    return out;
}

std::vector<double> resolve_times(const Json& query) {
    std::vector<double> out;
    for (const Json& t : query.at("times")) out.push_back(t.get<double>());
    return out;
}

QueryResult evaluate_query(const Scenario& s, const Query& q) {
    QueryResult row;
    row.label = q.label;
    row.kind = q.kind;
    const Json& args = q.args;
    std::string state_name = args.value("state", "");

    if (q.kind == "prob_event") {
        ProbValue p = prob_event(s.event(args.at("event").get<std::string>()),
                                 s.state(state_name));
        row.value = p.value;
    } else if (q.kind == "prob_obs_in") {
        ProbValue p = prob_obs_in(s.observable(args.at("obs").get<std::string>()),
                                  parse_borel(args, q.label), s.state(state_name));
        row.value = p.value;
    } else if (q.kind == "consecutive") {
        row.value = consecutive(resolve_events(s, args, "events"), s.state(state_name)).value;
    } else if (q.kind == "conditional") {
        ProbValue p = conditional(resolve_events(s, args, "target"),
                                  args.contains("given") ? resolve_events(s, args, "given")
                                                         : EventSequence{},
                                  s.state(state_name));
        row.value = p.value;
        row.zero_denominator = p.zero_denominator;
    } else if (q.kind == "with_evolution") {
        auto evo = s.evolution();
        if (!evo) throw InvariantViolation(q.label + ": scenario declares no evolution");
        EventSequence target = resolve_events(s, args, "target");
        EventSequence given = args.contains("given") ? resolve_events(s, args, "given")
                                                     : EventSequence{};
        ProbValue p = conditional_with_evolution(target, given, resolve_times(args), *evo,
                                                 s.state(state_name));
        row.value = p.value;
        row.zero_denominator = p.zero_denominator;
    } else if (q.kind == "delta") {
        auto [d12, d21] = delta(s.event(args.at("e1").get<std::string>()),
                                s.event(args.at("e2").get<std::string>()),
                                s.event(args.at("e0").get<std::string>()));
        row.value = d12;
        row.value2 = d21;
    } else if (q.kind == "entropy") {
        double base = args.value("base", 0.0);
        row.value = entropy(s.observable(args.at("obs").get<std::string>()),
                            s.state(state_name), base);
    } else if (q.kind == "moment") {
        Observable obs = s.observable(args.at("obs").get<std::string>());
        int k = args.at("k").get<int>();
        row.value = args.value("central", false) ? central_moment(obs, k, s.state(state_name))
                                                 : moment(obs, k, s.state(state_name));
    } else if (q.kind == "expectation") {
        std::vector<CMatrix> ops;
        for (const Json& n : args.at("ops")) ops.push_back(s.matrix(n.get<std::string>()));
        QState st = s.state(state_name);
        if (std::holds_alternative<NoState>(st))
            throw NoStateUnsupported(q.label + ": expectation queries need a state");
        DensityMatrix rho = std::holds_alternative<PureState>(st)
                                ? density_from_pure(std::get<PureState>(st))
                                : std::get<DensityMatrix>(st);
        if (args.contains("given")) {
            ConditionalExpectation ce =
                conditional_expectation(ops, resolve_events(s, args, "given"), rho);
            row.value = ce.value.real();
            row.value2 = ce.value.imag();
            row.zero_denominator = ce.zero_denominator;
        } else {
            Complex v = time_ordered_expectation(ops, rho);
            row.value = v.real();
            row.value2 = v.imag();
        }
    } else if (q.kind == "sample") {
        EventSequence seq = resolve_events(s, args, "events");
        std::optional<std::vector<double>> times;
        std::optional<EvolutionFamily> evo;
        if (args.contains("times")) {
            times = resolve_times(args);
            evo = s.evolution();
            if (!evo) throw InvariantViolation(q.label + ": times given but no evolution");
        }
        SampleReport rep = sample_sequence(seq, times, evo, s.pure_state(state_name),
                                           args.value("trials", std::uint64_t{10000}),
                                           args.value("seed", std::uint64_t{0}));
        row.value = rep.frequency;
        row.value2 = rep.analytic;
        row.sample = rep;
    }
    return row;
}

} // namespace

bool Report::all_ok() const {
    for (const QueryResult& row : rows)
        if (!row.error.empty()) return false;
    return true;
}

Report run_queries(const Scenario& s) {
    Report report;
    for (const Query& q : s.queries()) {
        try {
            report.rows.push_back(evaluate_query(s, q));
        } catch (const std::exception& e) {
            QueryResult row;
            row.label = q.label;
            row.kind = q.kind;
            row.error = e.what();
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

std::string format_table(const Report& report) {
    std::size_t label_w = 5, kind_w = 4;
    for (const QueryResult& row : report.rows) {
        label_w = std::max(label_w, row.label.size());
        kind_w = std::max(kind_w, row.kind.size());
    }
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(label_w) + 2) << "label"
        << std::setw(static_cast<int>(kind_w) + 2) << "kind"
        << std::setw(22) << "value" << "flags\n";
    for (const QueryResult& row : report.rows) {
        out << std::left << std::setw(static_cast<int>(label_w) + 2) << row.label
            << std::setw(static_cast<int>(kind_w) + 2) << row.kind;
        if (!row.error.empty()) {
            out << std::setw(22) << "-" << "error: " << row.error << "\n";
            continue;
        }
        std::ostringstream val;
        val << std::setprecision(15) << row.value;
        if (row.value2) val << ", " << std::setprecision(15) << *row.value2;
        out << std::setw(22) << val.str();
        std::string flags;
        if (row.zero_denominator) flags += "zero_denominator";
        if (row.sample) {
            if (!flags.empty()) flags += " ";
            flags += "trials=" + std::to_string(row.sample->trials) +
                     " successes=" + std::to_string(row.sample->successes) +
                     " z=" + std::to_string(row.sample->z_score);
        }
        out << flags << "\n";
    }
    return out.str();
}

std::string format_json_lines(const Report& report) {
    std::ostringstream out;
    for (const QueryResult& row : report.rows) {
        Json obj;
        obj["label"] = row.label;
        obj["kind"] = row.kind;
        if (!row.error.empty()) {
            obj["error"] = row.error;
        } else {
            obj["value"] = row.value;
            if (row.value2) obj["value2"] = *row.value2;
            obj["zero_denominator"] = row.zero_denominator;
            if (row.sample) {
                obj["sample"] = Json{{"trials", row.sample->trials},
                                     {"successes", row.sample->successes},
                                     {"frequency", row.sample->frequency},
                                     {"analytic", row.sample->analytic},
                                     {"z_score", row.sample->z_score},
                                     {"exact_match", row.sample->exact_match},
                                     {"seed", row.sample->seed}};
            }
        }
        out << obj.dump() << "\n";
    }
    return out.str();
}

} // namespace qprob
