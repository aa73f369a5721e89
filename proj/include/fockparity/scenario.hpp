#pragma once

// Declarative scenario documents (JSON) and the results documents produced by
// running them. Validation collects every field-level problem before anything
// executes.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fockparity/fock_core.hpp"
#include "fockparity/measurement.hpp"
#include "fockparity/optics.hpp"
#include "fockparity/protocols.hpp"
#include "fockparity/states.hpp"

#ifndef FOCKPARITY_VERSION
#define FOCKPARITY_VERSION "0.1.0"
#endif

namespace fockparity {

using json = nlohmann::json;

enum class ProtocolKind { teleport_basic, teleport_enhanced, quantum_scissors, facts_check, entropy };

inline constexpr std::array<std::pair<ProtocolKind, std::string_view>, 5> protocol_names{{
    {ProtocolKind::teleport_basic, "teleport_basic"},
    {ProtocolKind::teleport_enhanced, "teleport_enhanced"},
    {ProtocolKind::quantum_scissors, "quantum_scissors"},
    {ProtocolKind::facts_check, "facts_check"},
    {ProtocolKind::entropy, "entropy"},
}};

inline std::string_view to_string(ProtocolKind k) {
    for (const auto& [kind, name] : protocol_names)
        if (kind == k) return name;
    return "unknown";
}

struct Tolerances {
    double probability = 1e-9;
    double fidelity = 1e-9;
    bool operator==(const Tolerances&) const = default;
};

struct Scenario {
    ProtocolKind protocol = ProtocolKind::teleport_enhanced;
    std::optional<StateSpec> u;
    std::optional<StateSpec> v;
    /// [re+, im+, re-, im-]
    std::optional<std::array<double, 4>> qubit;
    std::optional<unsigned> scissors_n;
    std::optional<unsigned> scissors_m;
    std::optional<std::vector<complex>> input_coefficients;
    /// Resource used by the entropy protocol.
    ResourceKind resource = ResourceKind::phi_minus;
    bool retilde = false;
    std::optional<double> detector_efficiency;
    Tolerances tolerances;

    bool operator==(const Scenario&) const = default;
};

struct FieldError {
    std::string kind;  // SchemaError or ValueError
    std::string path;
    std::string message;
};

class ScenarioInvalid : public std::runtime_error {
public:
    explicit ScenarioInvalid(std::vector<FieldError> errors)
        : std::runtime_error(summarize(errors)), errors_(std::move(errors)) {}
    const std::vector<FieldError>& errors() const noexcept { return errors_; }

private:
    static std::string summarize(const std::vector<FieldError>& errors) {
        std::string s;
        for (const auto& e : errors) {
            if (!s.empty()) s += "; ";
            s += e.kind + " at " + e.path + ": " + e.message;
        }
        return s;
    }
    std::vector<FieldError> errors_;
};

namespace detail {

class Validator {
public:
    void schema(std::string path, std::string msg) { errors.push_back({"SchemaError", std::move(path), std::move(msg)}); }
    void value(std::string path, std::string msg) { errors.push_back({"ValueError", std::move(path), std::move(msg)}); }

    std::optional<double> number(const json& j, const std::string& path) {
        if (!j.is_number()) {
            schema(path, "expected a number");
            return std::nullopt;
        }
        const double x = j.get<double>();
        if (!std::isfinite(x)) {
            value(path, "must be finite");
            return std::nullopt;
        }
        return x;
    }

    std::optional<unsigned> count(const json& j, const std::string& path) {
        if (!j.is_number_integer() || j.get<long long>() < 0) {
            schema(path, "expected a non-negative integer");
            return std::nullopt;
        }
        return j.get<unsigned>();
    }

    std::optional<std::vector<complex>> complex_array(const json& j, const std::string& path) {
        if (!j.is_array()) {
            schema(path, "expected an array of [re, im] pairs");
            return std::nullopt;
        }
        std::vector<complex> out;
        bool ok = true;
        for (std::size_t i = 0; i < j.size(); ++i) {
            const std::string p = path + "[" + std::to_string(i) + "]";
            if (!j[i].is_array() || j[i].size() != 2) {
                schema(p, "expected a [re, im] pair");
                ok = false;
                continue;
            }
            auto re = number(j[i][0], p + "[0]");
            auto im = number(j[i][1], p + "[1]");
            if (re && im) out.emplace_back(*re, *im);
            else ok = false;
        }
        if (ok && out.empty()) value(path, "must not be empty");
        if (!ok || out.empty()) return std::nullopt;
        return out;
    }

    std::optional<StateSpec> state_spec(const json& j, const std::string& path) {
        if (!j.is_object()) {
            schema(path, "expected an object");
            return std::nullopt;
        }
        static const std::set<std::string> known{"kind", "alpha_re", "alpha_im", "r", "n", "coefficients", "cutoff",
                                                 "tail_tolerance"};
        const std::size_t before = errors.size();
        for (const auto& [key, val] : j.items())
            if (!known.contains(key)) schema(path + "." + key, "unknown field");

        StateSpec s;
        if (!j.contains("kind") || !j["kind"].is_string()) {
            schema(path + ".kind", "required string field");
            return std::nullopt;
        }
        auto kind = parse_state_kind(j["kind"].get<std::string>());
        if (!kind) {
            value(path + ".kind", "must be one of coherent, squeezed_vacuum, number, explicit");
            return std::nullopt;
        }
        s.kind = *kind;
        auto forbid = [&](const char* field) {
            if (j.contains(field)) schema(path + "." + field, std::string("not allowed for kind ") + std::string(to_string(s.kind)));
        };
        auto require = [&](const char* field) {
            if (!j.contains(field)) schema(path + "." + field, std::string("required for kind ") + std::string(to_string(s.kind)));
            return j.contains(field);
        };

        if (s.kind == StateKind::coherent) {
            if (require("alpha_re")) {
                auto re = number(j["alpha_re"], path + ".alpha_re");
                double im = 0.0;
                if (j.contains("alpha_im")) im = number(j["alpha_im"], path + ".alpha_im").value_or(0.0);
                if (re) s.alpha = complex{*re, im};
            }
        } else {
            forbid("alpha_re");
            forbid("alpha_im");
        }
        if (s.kind == StateKind::squeezed_vacuum) {
            if (require("r")) s.r = number(j["r"], path + ".r");
        } else {
            forbid("r");
        }
        if (s.kind == StateKind::number) {
            if (require("n")) {
                if (auto n = count(j["n"], path + ".n")) s.n = *n;
            }
        } else {
            forbid("n");
        }
        if (s.kind == StateKind::explicit_coefficients) {
            if (require("coefficients")) s.coefficients = complex_array(j["coefficients"], path + ".coefficients");
        } else {
            forbid("coefficients");
        }
        if (require("cutoff")) {
            if (auto c = count(j["cutoff"], path + ".cutoff")) s.cutoff = *c;
        }
        if (j.contains("tail_tolerance")) {
            if (auto t = number(j["tail_tolerance"], path + ".tail_tolerance")) {
                if (!(*t > 0.0 && *t < 1.0)) value(path + ".tail_tolerance", "must lie in (0, 1)");
                s.tail_tolerance = *t;
            }
        }
        if (s.n && *s.n > s.cutoff) value(path + ".cutoff", "must be at least n for number states");
        if (errors.size() != before) return std::nullopt;
        return s;
    }

    std::vector<FieldError> errors;
};

inline json complex_array_to_json(const std::vector<complex>& v) {
    json a = json::array();
    for (const auto& c : v) a.push_back(json::array({c.real(), c.imag()}));
    return a;
}

}  // namespace detail

inline json to_json(const StateSpec& s) {
    json j;
    j["kind"] = std::string(to_string(s.kind));
    if (s.alpha) {
        j["alpha_re"] = s.alpha->real();
        j["alpha_im"] = s.alpha->imag();
    }
    if (s.r) j["r"] = *s.r;
    if (s.n) j["n"] = *s.n;
    if (s.coefficients) j["coefficients"] = detail::complex_array_to_json(*s.coefficients);
    j["cutoff"] = s.cutoff;
    j["tail_tolerance"] = s.tail_tolerance;
    return j;
}

inline json to_json(const Scenario& s) {
    json j;
    j["protocol"] = std::string(to_string(s.protocol));
    if (s.u) j["u"] = to_json(*s.u);
    if (s.v) j["v"] = to_json(*s.v);
    if (s.qubit) j["qubit"] = *s.qubit;
    if (s.scissors_n) j["scissors_n"] = *s.scissors_n;
    if (s.scissors_m) j["scissors_m"] = *s.scissors_m;
    if (s.input_coefficients) j["input_coefficients"] = detail::complex_array_to_json(*s.input_coefficients);
    if (s.protocol == ProtocolKind::entropy) j["resource"] = std::string(to_string(s.resource));
    if (s.protocol == ProtocolKind::teleport_basic || s.protocol == ProtocolKind::teleport_enhanced)
        j["retilde"] = s.retilde;
    if (s.detector_efficiency) j["detector_efficiency"] = *s.detector_efficiency;
    j["tolerances"] = {{"probability", s.tolerances.probability}, {"fidelity", s.tolerances.fidelity}};
    return j;
}

/// Throws ScenarioInvalid listing every problem found.
inline Scenario validate_scenario(const json& doc) {
    detail::Validator v;
    Scenario s;
    if (!doc.is_object()) {
        v.schema("$", "scenario must be a JSON object");
        throw ScenarioInvalid(v.errors);
    }
    if (!doc.contains("protocol") || !doc["protocol"].is_string()) {
        v.schema("protocol", "required string field");
        throw ScenarioInvalid(v.errors);
    }
    const std::string name = doc["protocol"].get<std::string>();
    bool found = false;
    for (const auto& [kind, pname] : protocol_names) {
        if (pname == name) {
            s.protocol = kind;
            found = true;
        }
    }
    if (!found) {
        v.value("protocol", "unknown protocol '" + name + "'");
        throw ScenarioInvalid(v.errors);
    }

    // Top-level fields each protocol needs or accepts.
    std::set<std::string> required, optional{"tolerances", "detector_efficiency"};
    switch (s.protocol) {
        case ProtocolKind::teleport_basic:
            required = {"u", "v", "qubit"};
            optional.insert("retilde");
            break;
        case ProtocolKind::teleport_enhanced:
            required = {"u", "qubit"};
            optional.insert("retilde");
            break;
        case ProtocolKind::quantum_scissors:
            required = {"input_coefficients", "scissors_n", "scissors_m"};
            break;
        case ProtocolKind::facts_check:
            required = {"u"};
            optional.insert("v");
            break;
        case ProtocolKind::entropy:
            required = {"u", "v"};
            optional.insert("resource");
            optional.erase("detector_efficiency");
            break;
    }
    for (const auto& [key, val] : doc.items()) {
        if (key == "protocol" || required.contains(key) || optional.contains(key)) continue;
        v.schema(key, "field not accepted by protocol " + name);
    }
    for (const auto& key : required)
        if (!doc.contains(key)) v.schema(key, "required by protocol " + name);

    if (doc.contains("u") && required.contains("u")) s.u = v.state_spec(doc["u"], "u");
    if (doc.contains("v") && (required.contains("v") || optional.contains("v"))) s.v = v.state_spec(doc["v"], "v");

    if (doc.contains("qubit") && required.contains("qubit")) {
        const json& q = doc["qubit"];
        if (!q.is_array() || q.size() != 4) {
            v.schema("qubit", "expected [re+, im+, re-, im-]");
        } else {
            std::array<double, 4> a{};
            bool ok = true;
            for (std::size_t i = 0; i < 4; ++i) {
                auto x = v.number(q[i], "qubit[" + std::to_string(i) + "]");
                if (x) a[i] = *x;
                else ok = false;
            }
            if (ok) {
                const double n2 = a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3];
                if (std::abs(n2 - 1.0) > 1e-12) v.value("qubit", "|eps+|^2 + |eps-|^2 must equal 1");
                else s.qubit = a;
            }
        }
    }
    if (required.contains("scissors_n")) {
        if (doc.contains("scissors_n")) s.scissors_n = v.count(doc["scissors_n"], "scissors_n");
        if (doc.contains("scissors_m")) s.scissors_m = v.count(doc["scissors_m"], "scissors_m");
        if (s.scissors_n && s.scissors_m && *s.scissors_n == *s.scissors_m)
            v.value("scissors_n,scissors_m", "scissors_n and scissors_m must differ");
        if (doc.contains("input_coefficients")) {
            s.input_coefficients = v.complex_array(doc["input_coefficients"], "input_coefficients");
            if (s.input_coefficients) {
                double n2 = 0.0;
                for (const auto& c : *s.input_coefficients) n2 += std::norm(c);
                if (n2 <= degenerate_floor) v.value("input_coefficients", "must not be all zero");
            }
        }
    }
    if (optional.contains("resource") && doc.contains("resource")) {
        const json& r = doc["resource"];
        auto kind = r.is_string() ? parse_resource_kind(r.get<std::string>()) : std::nullopt;
        if (!kind) v.value("resource", "must be psi_minus or phi_minus");
        else s.resource = *kind;
    }
    if (optional.contains("retilde") && doc.contains("retilde")) {
        if (!doc["retilde"].is_boolean()) v.schema("retilde", "expected a boolean");
        else s.retilde = doc["retilde"].get<bool>();
    }
    if (optional.contains("detector_efficiency") && doc.contains("detector_efficiency")) {
        if (auto e = v.number(doc["detector_efficiency"], "detector_efficiency")) {
            if (*e < 0.0 || *e > 1.0) v.value("detector_efficiency", "must lie in [0, 1]");
            else s.detector_efficiency = *e;
        }
    }
    if (doc.contains("tolerances")) {
        const json& t = doc["tolerances"];
        if (!t.is_object()) {
            v.schema("tolerances", "expected an object");
        } else {
            for (const auto& [key, val] : t.items()) {
                if (key != "probability" && key != "fidelity") {
                    v.schema("tolerances." + key, "unknown field");
                    continue;
                }
                if (auto x = v.number(val, "tolerances." + key)) {
                    if (*x <= 0.0 || *x >= 1.0) v.value("tolerances." + key, "must lie in (0, 1)");
                    (key == "probability" ? s.tolerances.probability : s.tolerances.fidelity) = *x;
                }
            }
        }
    }
    if (!v.errors.empty()) throw ScenarioInvalid(v.errors);
    return s;
}

inline Scenario validate_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioInvalid({{"SchemaError", "$", std::string("not valid JSON: ") + e.what()}});
    }
    return validate_scenario(doc);
}

/// Outcome of running one scenario. `status` is "ok", "assertion_failure" or
/// "error"; `document` is the full machine-readable results document.
struct RunResult {
    std::string status;
    json document;
    std::string summary;
};

namespace detail {

struct AssertionLog {
    json entries = json::array();
    bool all_passed = true;

    void check(const std::string& name, double actual, double expected, double tolerance) {
        const bool ok = std::abs(actual - expected) <= tolerance;
        add(name, actual, expected, tolerance, ok);
    }
    void at_least(const std::string& name, double actual, double bound) {
        add(name, actual, bound, 0.0, actual >= bound);
    }
    void add(const std::string& name, double actual, double expected, double tolerance, bool ok) {
        entries.push_back({{"name", name}, {"actual", actual}, {"expected", expected}, {"tolerance", tolerance},
                           {"passed", ok}});
        all_passed = all_passed && ok;
    }
};

inline json lossy_parity(const MultiModeState& state, std::size_t mode, double efficiency) {
    const DetectorModel det(efficiency);
    const CountDistribution ideal = count_distribution(state, mode);
    const CountDistribution lossy = thin(ideal, det);
    return {{"odd_ideal", ideal.odd_probability()},
            {"odd_lossy", lossy.odd_probability()},
            {"parity_total_variation", parity_total_variation(ideal, lossy)},
            {"parity_flip_probability", parity_flip_probability(ideal, det)}};
}

inline json report_outcomes(const ProtocolReport& r) {
    json rows = json::array();
    for (const auto& o : r.outcomes) {
        rows.push_back({{"counts", json::array({o.n_a, o.n_b})},
                        {"probability", o.probability},
                        {"classification", std::string(to_string(o.classified))},
                        {"fidelity", o.fidelity_to_target ? json(*o.fidelity_to_target) : json(nullptr)},
                        {"correction_phase", o.correction_phase}});
    }
    return rows;
}

inline void add_protocol_assertions(const ProtocolReport& r, const Tolerances& tol, AssertionLog& log) {
    log.check("total_probability", r.total_probability(), 1.0, tol.probability);
    log.check("success_probability", r.success_probability, r.expected_success_probability, tol.probability);
    double worst = 1.0;
    for (const auto& o : r.outcomes)
        if (o.classified == Classification::success && o.fidelity_to_target) worst = std::min(worst, *o.fidelity_to_target);
    log.at_least("min_success_fidelity", worst, 1.0 - tol.fidelity);
}

}  // namespace detail

/// Deterministic: identical scenarios give identical documents.
inline RunResult run_scenario(const Scenario& s) {
    json doc;
    doc["scenario"] = to_json(s);
    json env = {{"version", FOCKPARITY_VERSION}};
    json aggregates = json::object();
    json outcomes = json::array();
    detail::AssertionLog log;

    auto record_state = [&](const char* name, const SingleModeState& st) {
        env["cutoffs"][name] = st.cutoff();
        env["tail_masses"][name] = st.tail_mass();
    };

    try {
        switch (s.protocol) {
            case ProtocolKind::teleport_basic:
            case ProtocolKind::teleport_enhanced:
            case ProtocolKind::quantum_scissors: {
                ProtocolReport report;
                if (s.protocol == ProtocolKind::quantum_scissors) {
                    const SingleModeState input(*s.input_coefficients);
                    record_state("input", input);
                    report = quantum_scissors(input, *s.scissors_n, *s.scissors_m);
                } else {
                    const auto& q = *s.qubit;
                    const QubitAmplitudes qubit({q[0], q[1]}, {q[2], q[3]});
                    const SingleModeState u = build_state(*s.u);
                    record_state("u", u);
                    TeleportOptions opts{s.retilde};
                    if (s.protocol == ProtocolKind::teleport_basic) {
                        const SingleModeState v = build_state(*s.v);
                        record_state("v", v);
                        report = teleport_basic(qubit, u, v, opts);
                    } else {
                        report = teleport_enhanced(qubit, u, opts);
                    }
                }
                env["cutoffs"]["measured_modes"] = report.measured_state.per_mode_cutoff();
                outcomes = detail::report_outcomes(report);
                aggregates["success_probability"] = report.success_probability;
                aggregates["expected_success_probability"] = report.expected_success_probability;
                aggregates["mean_conditional_fidelity"] =
                    report.mean_conditional_fidelity ? json(*report.mean_conditional_fidelity) : json(nullptr);
                aggregates["total_probability"] = report.total_probability();
                detail::add_protocol_assertions(report, s.tolerances, log);
                if (s.detector_efficiency) {
                    aggregates["lossy_parity"] = {
                        {"efficiency", *s.detector_efficiency},
                        {"mode_A", detail::lossy_parity(report.measured_state, 0, *s.detector_efficiency)},
                        {"mode_B", detail::lossy_parity(report.measured_state, 1, *s.detector_efficiency)}};
                }
                break;
            }
            case ProtocolKind::facts_check: {
                const SingleModeState psi = build_state(*s.u);
                record_state("u", psi);
                const SingleModeState psi_t = phase_shift(psi, std::numbers::pi / 2.0);
                const std::size_t room = 2 * psi.cutoff();
                const MultiModeState split = beamsplitter_5050(tensor(psi_t, psi).with_cutoff(room), 0, 1);
                const CountDistribution dist_a = count_distribution(split, 0);
                const double p_odd = dist_a.odd_probability();
                const double p_odd_k = bipartite_coefficients(split, 0, 1).odd_parity_probability();
                const MultiModeState swapped = beamsplitter_5050(tensor(psi_t, psi).with_cutoff(room), 0, 1, true);
                aggregates["fact1_p_odd_A"] = p_odd;
                aggregates["fact1_p_odd_A_from_coefficients"] = p_odd_k;
                aggregates["fact1_p_odd_B_swapped_ports"] = odd_parity_probability(swapped, 1);
                log.check("fact1_p_odd_A", p_odd, 0.0, s.tolerances.probability);
                log.check("fact1_p_odd_B_swapped_ports", odd_parity_probability(swapped, 1), 0.0,
                          s.tolerances.probability);
                for (const auto& [n, p] : dist_a.probabilities)
                    outcomes.push_back({{"counts", json::array({n})},
                                        {"probability", p},
                                        {"classification", n % 2 ? "odd" : "even"},
                                        {"fidelity", nullptr}});
                if (s.detector_efficiency)
                    aggregates["lossy_parity"] = {{"efficiency", *s.detector_efficiency},
                                                  {"mode_A", detail::lossy_parity(split, 0, *s.detector_efficiency)}};
                if (s.v) {
                    const SingleModeState phi = build_state(*s.v);
                    record_state("v", phi);
                    const double overlap = std::abs(inner_product(normalize(psi), normalize(phi)));
                    if (overlap > 1e-10)
                        throw InvalidArgument("facts_check needs v orthogonal to u, |<u|v>| = " + std::to_string(overlap));
                    const std::size_t room2 = psi.cutoff() + phi.cutoff();
                    const MultiModeState split2 = beamsplitter_5050(
                        tensor(phase_shift(phi, std::numbers::pi / 2.0), psi).with_cutoff(room2), 0, 1);
                    const double p2 = odd_parity_probability(split2, 0);
                    aggregates["fact2_p_odd_A"] = p2;
                    aggregates["fact2_p_odd_A_from_coefficients"] =
                        bipartite_coefficients(split2, 0, 1).odd_parity_probability();
                    log.check("fact2_p_odd_A", p2, 0.5, s.tolerances.probability);
                }
                break;
            }
            case ProtocolKind::entropy: {
                const SingleModeState u = build_state(*s.u);
                const SingleModeState v = build_state(*s.v);
                record_state("u", u);
                record_state("v", v);
                const MultiModeState res = make_resource(u, v, s.resource);
                const double h = entanglement_entropy(res);
                aggregates["entropy"] = h;
                aggregates["overlap_uv"] = checked_overlap(u, v);
                log.check("entropy_one_ebit", h, 1.0, s.tolerances.probability);
                break;
            }
        }
    } catch (const Error& e) {
        doc["status"] = "error";
        doc["errors"] = json::array({{{"kind", e.kind()}, {"message", e.what()}}});
        doc["environment"] = env;
        return {"error", doc, std::string(to_string(s.protocol)) + ": error " + e.kind() + ": " + e.what()};
    }

    doc["outcomes"] = outcomes;
    doc["aggregates"] = aggregates;
    doc["assertions"] = log.entries;
    doc["environment"] = env;
    doc["errors"] = json::array();
    const std::string status = log.all_passed ? "ok" : "assertion_failure";
    doc["status"] = status;

    std::string summary = std::string(to_string(s.protocol)) + ": " + status;
    for (const char* key : {"success_probability", "mean_conditional_fidelity", "fact1_p_odd_A", "fact2_p_odd_A", "entropy"}) {
        if (aggregates.contains(key) && aggregates[key].is_number()) {
            char buf[64];
            std::snprintf(buf, sizeof buf, " %s=%.15g", key, aggregates[key].get<double>());
            summary += buf;
        }
    }
    return {status, doc, summary};
}

}  // namespace fockparity
