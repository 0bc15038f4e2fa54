#pragma once

// File-level interface: job requests parsed from a structured document,
// dispatched to the math core, and reported back as a machine-readable
// document. Numbers are serialized as decimals with 17 significant digits
// so doubles round-trip bit-faithfully; identical requests produce
// byte-identical reports.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cohtrans/errors.hpp"
#include "cohtrans/kraus.hpp"
#include "cohtrans/locc.hpp"
#include "cohtrans/sequence.hpp"
#include "cohtrans/solver.hpp"
#include "cohtrans/state.hpp"

namespace cohtrans::job {

using json = nlohmann::ordered_json;

enum class Command { check, synthesize, sequence, locc, verify };

inline const char* command_name(Command c) {
    switch (c) {
        case Command::check: return "check";
        case Command::synthesize: return "synthesize";
        case Command::sequence: return "sequence";
        case Command::locc: return "locc";
        case Command::verify: return "verify";
    }
    return "?";
}

struct JobOptions {
    int d_prime = 5;
    bool enumerate_all = false;
    std::uint64_t seed = 0;
    Tolerances tol;
};

struct JobRequest {
    Command command = Command::check;
    std::vector<double> source;  ///< amplitudes, pre-canonicalization
    std::vector<double> target;
    JobOptions options;
    json verify_report;  ///< prior report, for Command::verify
};

// exit codes: 0 ok, 2 parse, 3 majorization violated, 4 no feasible SP,
// 5 no intermediate found, 6 internal verification failure
struct JobResult {
    int exit_code = 0;
    json report;
};

namespace detail {

inline std::vector<double> parse_state(const json& doc, const std::string& key) {
    const std::string mu_key = key + "_mu";
    const bool has_amp = doc.contains(key);
    const bool has_mu = doc.contains(mu_key);
    if (has_amp == has_mu)
        throw ParseError("exactly one of \"" + key + "\" and \"" + mu_key +
                         "\" must be given");
    const json& arr = has_amp ? doc.at(key) : doc.at(mu_key);
    if (!arr.is_array() || arr.empty())
        throw ParseError("\"" + (has_amp ? key : mu_key) + "\" must be a nonempty array");
    std::vector<double> amps;
    amps.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number()) throw ParseError("state entries must be numbers");
        const double x = v.get<double>();
        if (has_mu) {
            if (x < 0.0) throw ParseError("squared amplitudes must be nonnegative");
            amps.push_back(std::sqrt(x));
        } else {
            amps.push_back(x);
        }
    }
    return amps;
}

inline JobOptions parse_options(const json& doc) {
    JobOptions opt;
    if (!doc.contains("options")) return opt;
    const json& o = doc.at("options");
    if (!o.is_object()) throw ParseError("\"options\" must be an object");
    if (o.contains("d_prime")) opt.d_prime = o.at("d_prime").get<int>();
    if (o.contains("enumerate_all")) opt.enumerate_all = o.at("enumerate_all").get<bool>();
    if (o.contains("seed")) opt.seed = o.at("seed").get<std::uint64_t>();
    if (o.contains("tolerances")) {
        const json& t = o.at("tolerances");
        if (t.contains("norm")) opt.tol.norm = t.at("norm").get<double>();
        if (t.contains("amp")) opt.tol.amp = t.at("amp").get<double>();
        if (t.contains("maj")) opt.tol.maj = t.at("maj").get<double>();
        if (t.contains("psd")) opt.tol.psd = t.at("psd").get<double>();
        if (t.contains("prob")) opt.tol.prob = t.at("prob").get<double>();
        if (t.contains("res")) opt.tol.res = t.at("res").get<double>();
        if (t.contains("comp")) opt.tol.comp = t.at("comp").get<double>();
    }
    return opt;
}

inline json amps_json(const std::vector<double>& amps) {
    return json(amps);
}

inline json sp_json(const PermutationSet& sp) {
    json arr = json::array();
    for (const auto& t : sp.transpositions) arr.push_back(json::array({t.x, t.y}));
    return arr;
}

inline json probabilities_json(const ProbabilityVector& p) {
    return json(p.p);
}

/// Kraus operators as per-operator [row, col, value] triples, 1-based.
inline json kraus_json(const IncoherentChannel& ch) {
    json ops = json::array();
    for (const auto& k : ch.kraus) {
        json triples = json::array();
        for (int j = 0; j < k.dim; ++j) {
            const double v = k.value[static_cast<std::size_t>(j)];
            if (v == 0.0) continue;
            triples.push_back(json::array({k.row[static_cast<std::size_t>(j)] + 1, j + 1, v}));
        }
        ops.push_back(std::move(triples));
    }
    return ops;
}

inline json options_json(const JobOptions& opt) {
    json t;
    t["norm"] = opt.tol.norm;
    t["amp"] = opt.tol.amp;
    t["maj"] = opt.tol.maj;
    t["psd"] = opt.tol.psd;
    t["prob"] = opt.tol.prob;
    t["res"] = opt.tol.res;
    t["comp"] = opt.tol.comp;
    json o;
    o["d_prime"] = opt.d_prime;
    o["enumerate_all"] = opt.enumerate_all;
    o["seed"] = opt.seed;
    o["tolerances"] = std::move(t);
    return o;
}

inline double channel_exactness(const IncoherentChannel& ch, const CoherenceVector& src,
                                const CoherenceVector& tgt) {
    const auto out = apply_channel(ch, pure_density(src));
    return (out.entries - pure_density(tgt).entries).cwiseAbs().maxCoeff();
}

}  // namespace detail

/// Parses the request document for the given command.
inline JobRequest parse_request(Command command, const json& doc) {
    JobRequest req;
    req.command = command;
    if (!doc.is_object()) throw ParseError("request must be a JSON object");
    if (command == Command::verify) {
        req.verify_report = doc;
        return req;
    }
    req.source = detail::parse_state(doc, "source");
    req.target = detail::parse_state(doc, "target");
    req.options = detail::parse_options(doc);
    return req;
}

namespace detail {

inline void run_synthesize(const JobRequest& req, const CoherenceVector& src,
                           const CoherenceVector& tgt, JobResult& result) {
    auto solution = find_feasible_sp(src, tgt, req.options.tol);
    auto channel = build_kraus(solution.sp, solution.probabilities, solution.cmat, src,
                               req.options.tol);
    result.report["sp"] = sp_json(solution.sp);
    result.report["probabilities"] = probabilities_json(solution.probabilities);
    result.report["kraus"] = kraus_json(channel);
    json res;
    res["completeness"] = verify_completeness(channel);
    res["channel_exactness"] = channel_exactness(channel, src, tgt);
    result.report["residuals"] = std::move(res);
    if (req.options.enumerate_all) {
        json alts = json::array();
        for (const auto& [sp, desc] : enumerate_feasible(src, tgt, req.options.tol).feasible_sets) {
            auto outcome = solve_probabilities(coefficient_matrix(sp, tgt), src, req.options.tol);
            json alt;
            alt["sp"] = sp_json(sp);
            alt["probabilities"] = probabilities_json(*outcome.probabilities);
            alts.push_back(std::move(alt));
        }
        result.report["alternatives"] = std::move(alts);
    }
}

inline void run_sequence(const JobRequest& req, const CoherenceVector& src,
                         const CoherenceVector& tgt, JobResult& result) {
    auto plan = plan_sequence(src, tgt, req.options.d_prime, req.options.tol);
    json steps = json::array();
    for (const auto& step : plan.steps) {
        json s;
        s["intermediate"] = amps_json(step.target_state.state.amps());
        s["active_levels"] = json(step.active_levels);
        s["block_norm"] = step.block_norm;
        s["sp"] = sp_json(step.channel.sp);  // subspace SP in global level labels
        s["probabilities"] = probabilities_json(step.probabilities);
        s["kraus"] = kraus_json(step.channel);
        s["completeness"] = verify_completeness(step.channel);
        steps.push_back(std::move(s));
    }
    result.report["d_prime"] = plan.d_prime;
    result.report["step_count"] = plan.step_count();
    result.report["fallback_used"] = plan.fallback_used;
    result.report["steps"] = std::move(steps);
    const auto out = execute_plan(plan, pure_density(src));
    json res;
    res["channel_exactness"] =
        (out.entries - pure_density(tgt).entries).cwiseAbs().maxCoeff();
    result.report["residuals"] = std::move(res);
}

inline void run_locc(const JobRequest& req, const CoherenceVector& src,
                     const CoherenceVector& tgt, JobResult& result) {
    auto solution = find_feasible_sp(src, tgt, req.options.tol);
    auto plan = build_locc_plan(solution.sp, solution.probabilities, solution.cmat, src,
                                req.options.tol);
    json l;
    json meas = json::array();
    for (const auto& diag : plan.measurement) meas.push_back(json(diag));
    l["measurements"] = std::move(meas);
    json corr = json::array();
    for (const auto& c : plan.corrections)
        corr.push_back(c ? json(json::array({c->x, c->y})) : json(nullptr));
    l["corrections"] = std::move(corr);
    l["probabilities"] = probabilities_json(plan.probabilities);
    if (src.dim() <= 16) {
        const auto sim = simulate_locc(plan, src, tgt, req.options.tol);
        json outcomes = json::array();
        for (const auto& o : sim.outcomes) {
            json e;
            e["probability"] = o.probability;
            e["overlap"] = o.overlap;
            outcomes.push_back(std::move(e));
        }
        l["outcomes"] = std::move(outcomes);
        l["total_probability"] = sim.total_probability;
    }
    result.report["locc"] = std::move(l);
}

/// Rebuilds the channel of a synthesize report (or one sequence step) from
/// its serialized triples.
inline IncoherentChannel channel_from_json(const json& kraus, const json& probabilities,
                                           int dim) {
    IncoherentChannel ch;
    ch.dim = dim;
    ch.probabilities.p = probabilities.get<std::vector<double>>();
    for (const auto& op : kraus) {
        KrausOperator k = KrausOperator::zero(dim);
        for (const auto& triple : op) {
            const int r = triple.at(0).get<int>();
            const int c = triple.at(1).get<int>();
            if (r < 1 || r > dim || c < 1 || c > dim)
                throw ParseError("kraus triple index out of range");
            k.row[static_cast<std::size_t>(c - 1)] = r - 1;
            k.value[static_cast<std::size_t>(c - 1)] = triple.at(2).get<double>();
        }
        ch.kraus.push_back(std::move(k));
    }
    return ch;
}

inline void run_verify(const JobRequest& req, JobResult& result) {
    const json& rep = req.verify_report;
    if (!rep.contains("command") || !rep.contains("source") || !rep.contains("target"))
        throw ParseError("verify: input is not a cohtrans report");
    const std::string cmd = rep.at("command").get<std::string>();
    const JobOptions opt = rep.contains("options") ? parse_options(rep) : JobOptions{};
    CoherenceVector src(rep.at("source").get<std::vector<double>>(), opt.tol);
    CoherenceVector tgt(rep.at("target").get<std::vector<double>>(), opt.tol);
    const int d = src.dim();
    constexpr double kMatchTol = 1e-12;
    bool match = true;
    json recomputed;
    if (cmd == "synthesize") {
        auto ch = channel_from_json(rep.at("kraus"), rep.at("probabilities"), d);
        const double comp = verify_completeness(ch);
        const double exact = channel_exactness(ch, src, tgt);
        recomputed["completeness"] = comp;
        recomputed["channel_exactness"] = exact;
        match = std::abs(comp - rep.at("residuals").at("completeness").get<double>()) <= kMatchTol &&
                std::abs(exact - rep.at("residuals").at("channel_exactness").get<double>()) <= kMatchTol &&
                verify_incoherent(ch);
    } else if (cmd == "sequence") {
        DensityMatrix rho = pure_density(src);
        json step_comps = json::array();
        for (const auto& s : rep.at("steps")) {
            auto ch = channel_from_json(s.at("kraus"), s.at("probabilities"), d);
            const double comp = verify_completeness(ch);
            step_comps.push_back(comp);
            match = match && std::abs(comp - s.at("completeness").get<double>()) <= kMatchTol &&
                    verify_incoherent(ch);
            rho = apply_channel(ch, rho);
        }
        const double exact =
            (rho.entries - pure_density(tgt).entries).cwiseAbs().maxCoeff();
        recomputed["step_completeness"] = std::move(step_comps);
        recomputed["channel_exactness"] = exact;
        match = match &&
                std::abs(exact - rep.at("residuals").at("channel_exactness").get<double>()) <= kMatchTol;
    } else {
        throw ParseError("verify: only synthesize and sequence reports carry Kraus data");
    }
    result.report["verified_command"] = cmd;
    result.report["recomputed"] = std::move(recomputed);
    result.report["match"] = match;
    if (!match) {
        result.report["status"] = "verification_failed";
        result.exit_code = 6;
    }
}

}  // namespace detail

/// Runs one request. Never throws: failures land in the report with a
/// machine-readable reason code and the documented exit code.
inline JobResult run(const JobRequest& req) {
    JobResult result;
    result.report["command"] = command_name(req.command);
    result.report["status"] = "ok";
    try {
        if (req.command == Command::verify) {
            detail::run_verify(req, result);
            return result;
        }
        auto src_canonical = canonicalize(std::span<const double>(req.source), req.options.tol);
        auto tgt_canonical = canonicalize(std::span<const double>(req.target), req.options.tol);
        const auto& src = src_canonical.state;
        const auto& tgt = tgt_canonical.state;
        if (src.dim() != tgt.dim())
            throw ParseError("source and target dimensions differ (" +
                             std::to_string(src.dim()) + " vs " + std::to_string(tgt.dim()) + ")");
        result.report["source"] = detail::amps_json(src.amps());
        result.report["target"] = detail::amps_json(tgt.amps());
        const auto maj = majorizes(tgt, src, req.options.tol);
        {
            json m;
            m["holds"] = maj.holds;
            m["first_violation"] =
                maj.first_violation ? json(*maj.first_violation) : json(nullptr);
            result.report["majorization"] = std::move(m);
        }
        if (req.command == Command::check) {
            if (!maj.holds) {
                result.report["status"] = "majorization_violated";
                result.exit_code = 3;
            }
            result.report["options"] = detail::options_json(req.options);
            return result;
        }
        if (!maj.holds)
            throw MajorizationError("target does not majorize source (first violation k=" +
                                    std::to_string(*maj.first_violation) + ")");
        switch (req.command) {
            case Command::synthesize:
                detail::run_synthesize(req, src, tgt, result);
                break;
            case Command::sequence:
                detail::run_sequence(req, src, tgt, result);
                break;
            case Command::locc:
                detail::run_locc(req, src, tgt, result);
                break;
            case Command::check:
            case Command::verify:
                break;  // handled above
        }
        result.report["options"] = detail::options_json(req.options);
        return result;
    } catch (const ParseError& e) {
        result.exit_code = 2;
        result.report["status"] = "error";
        result.report["error"] = {{"code", "parse_error"}, {"message", e.what()}};
    } catch (const NormError& e) {
        result.exit_code = 2;
        result.report["status"] = "error";
        result.report["error"] = {{"code", "parse_error"}, {"message", e.what()}};
    } catch (const ZeroAmplitudeError& e) {
        result.exit_code = 2;
        result.report["status"] = "error";
        result.report["error"] = {{"code", "parse_error"}, {"message", e.what()}};
    } catch (const MajorizationError& e) {
        result.exit_code = 3;
        result.report["status"] = "error";
        result.report["error"] = {{"code", "majorization_violated"}, {"message", e.what()}};
    } catch (const NoFeasibleSP& e) {
        result.exit_code = 4;
        result.report["status"] = "error";
        result.report["error"] = {{"code", "no_feasible_sp"}, {"message", e.what()}};
    } catch (const NoCandidateError& e) {
        result.exit_code = 4;
        result.report["status"] = "error";
        result.report["error"] = {{"code", "no_feasible_sp"}, {"message", e.what()}};
    } catch (const NoIntermediateFound& e) {
        result.exit_code = 5;
        result.report["status"] = "error";
        result.report["error"] = {{"code", "no_intermediate_found"}, {"message", e.what()}};
    } catch (const std::exception& e) {
        result.exit_code = 6;
        result.report["status"] = "error";
        result.report["error"] = {{"code", "internal_error"}, {"message", e.what()}};
    }
    return result;
}

namespace detail {

inline void dump17(const json& j, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
    if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first) out += ",\n";
            first = false;
            out += pad_in;
            out += json(key).dump();  // escaped key
            out += ": ";
            dump17(value, out, indent + 1);
        }
        out += "\n" + pad + "}";
    } else if (j.is_array()) {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        bool first = true;
        for (const auto& value : j) {
            if (!first) out += ",\n";
            first = false;
            out += pad_in;
            dump17(value, out, indent + 1);
        }
        out += "\n" + pad + "]";
    } else if (j.is_number_float()) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
        out += buf;
    } else {
        out += j.dump();
    }
}

}  // namespace detail

/// Serializes a report with 17-significant-digit decimals (bit-faithful
/// double round-trip) and a fixed layout, so identical requests produce
/// byte-identical documents.
inline std::string serialize_report(const json& report) {
    std::string out;
    detail::dump17(report, out, 0);
    out += "\n";
    return out;
}

}  // namespace cohtrans::job
