#pragma once

// Command-line front end. `parse` turns argv into a CliConfig; `run` executes it, writing the
// report to `out` and diagnostics to `err`, and returns the exit code.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>

#include "ropacity/ropacity.hpp"

namespace ropacity::cli {

enum Exit : int { kOk = 0, kNotOpaque = 1, kError = 2 };

struct CliConfig {
    std::string command;
    std::string model;
    std::string property = "rcso";
    std::string method = "observer";
    std::optional<std::size_t> bound;
    std::optional<std::vector<std::string>> secret;
    std::optional<std::vector<std::string>> nonsecret;
    std::string secret_spec;
    std::string nonsecret_spec;
    std::optional<std::vector<std::string>> secret_initial;
    std::optional<std::vector<std::string>> nonsecret_initial;
    std::optional<std::vector<std::string>> observability;
    std::string format = "text";
    std::string output;
    std::string kind;
    std::optional<std::vector<std::string>> pooled_word;
    bool diagnose_quantifier = false;
    bool color = false;
};

struct Parsed {
    std::optional<CliConfig> config;
    int exit_code = kOk;
};

namespace detail {

inline std::string one_line(std::string s) {
    for (auto& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
}

inline StateSet to_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

inline bool color_enabled() {
    const char* env = std::getenv("RO_COLOR");
    if (env && std::string(env) == "0") return false;
    return isatty(STDOUT_FILENO) != 0;
}

class Report {
public:
    Report(const CliConfig& c, std::ostream& out) : config_(c), out_(out) {}

    /// Sends `text` to --output when given, to `out` otherwise.
    void emit(const std::string& text) {
        if (config_.output.empty()) {
            out_ << text;
        } else {
            std::ofstream f(config_.output, std::ios::binary);
            if (!f) throw Error("cannot write " + ropacity::detail::squote(config_.output));
            f << text;
        }
    }

    std::string paint(const std::string& text, bool good) const {
        if (!config_.color) return text;
        return std::string(good ? "\033[32m" : "\033[31m") + text + "\033[0m";
    }

private:
    const CliConfig& config_;
    std::ostream& out_;
};

inline void require(bool ok, const std::string& message) {
    if (!ok) throw Error(message);
}

inline OpenDes load(const CliConfig& c) {
    require(!c.model.empty(), "--model is required");
    auto m = load_model(c.model);
    if (c.observability) {
        m.alphabet.observable = to_set(*c.observability);
        auto ds = validate(m);
        if (!ds.empty()) throw Error("--observability: " + ds.front().message);
    }
    return m;
}

inline SecretSets query_sets(const CliConfig& c, const OpenDes& m) {
    StateSet secret = c.secret ? to_set(*c.secret) : m.secret;
    std::optional<StateSet> nonsecret = m.nonsecret;
    if (c.nonsecret)
        nonsecret = to_set(*c.nonsecret);
    else if (c.secret)
        nonsecret.reset();
    return secret_sets(m, secret, nonsecret);
}

inline RlboProblem rlbo_problem(const CliConfig& c, const OpenDes& m) {
    require(!c.secret_spec.empty() && !c.nonsecret_spec.empty(),
            "--secret-spec and --nonsecret-spec are required for rlbo");
    return {m, load_language_spec(c.secret_spec), load_language_spec(c.nonsecret_spec), {}};
}

inline RisoQuery riso_query(const CliConfig& c, const OpenDes& m) {
    require(c.secret_initial.has_value(), "--secret-initial is required for riso");
    RisoQuery q{to_set(*c.secret_initial), {}};
    if (c.nonsecret_initial) {
        q.nonsecret_initial = to_set(*c.nonsecret_initial);
    } else {
        for (const auto& s : m.initial)
            if (!q.secret_initial.contains(s)) q.nonsecret_initial.insert(s);
    }
    return q;
}

inline std::string verdict_text(const Verdict& v, const Report& r) {
    std::ostringstream s;
    s << "property: " << v.property << "\n";
    s << "method: " << method_name(v.method);
    if (v.bound) s << " (certified for label words up to length " << *v.bound << ")";
    s << "\n";
    s << "verdict: " << r.paint(v.opaque ? "opaque" : "not opaque", v.opaque) << "\n";
    if (v.witness) {
        const auto& w = *v.witness;
        if (!w.labels.empty() || v.property != "cso") s << "witness inputs: " << join(w.inputs) << "\n";
        s << "witness observation: " << join(w.observation) << "\n";
        if (!w.labels.empty()) {
            s << "witness labels:";
            for (const auto& l : w.labels) s << " " << label_text(l);
            s << "\n";
        }
        s << "final estimate: " << subset_name(w.estimate) << "\n";
    }
    return s.str();
}

inline int finish_verdict(const CliConfig& c, const Verdict& v, Report& r, std::string extra = "") {
    if (c.format == "json")
        r.emit(to_json(v).dump(2) + "\n");
    else
        r.emit(verdict_text(v, r) + extra);
    return v.opaque ? kOk : kNotOpaque;
}

inline Verdict verify_for(const CliConfig& c, const OpenDes& m) {
    const bool oracle = c.method == "oracle";
    require(!oracle || c.bound.has_value(), "--method oracle requires --bound");
    if (c.property == "rcso") {
        auto sets = query_sets(c, m);
        return oracle ? oracle_verify_rcso(m, sets, *c.bound) : verify_rcso(m, sets);
    }
    if (c.property == "cso") {
        require(!oracle, "property cso has no oracle method");
        return verify_cso_passive(m, query_sets(c, m));
    }
    if (c.property == "rlbo") {
        auto p = rlbo_problem(c, m);
        return oracle ? oracle_verify_rlbo(p, *c.bound) : verify_rlbo(p);
    }
    auto q = riso_query(c, m);
    return oracle ? oracle_verify_riso(m, q, *c.bound) : verify_riso(m, q);
}

inline int cmd_verify(const CliConfig& c, Report& r) {
    auto m = load(c);
    auto v = verify_for(c, m);
    std::string extra;
    if (c.diagnose_quantifier) {
        require(c.property == "rcso", "--diagnose-quantifier applies to rcso only");
        const std::size_t k = c.bound.value_or(4);
        auto sets = query_sets(c, m);
        auto pooled = oracle_verify_rcso(m, sets, k);
        auto per = oracle_verify_rcso_per_initial(m, sets, k);
        extra = "quantifier diagnostic (k=" + std::to_string(k) + "): pooled estimate " +
                (pooled.opaque ? "opaque" : "not opaque") + ", per-initial-state " +
                (per.opaque ? "opaque" : "not opaque") +
                (pooled.opaque == per.opaque ? "; formulations agree\n" : "; formulations differ\n");
    }
    return finish_verdict(c, v, r, extra);
}

inline int cmd_validate(const CliConfig& c, Report& r) {
    auto m = load(c);
    std::ostringstream s;
    s << "valid: " << m.states.size() << " states, " << m.edges.size() << " edges, "
      << m.alphabet.inputs.size() << " inputs, " << m.alphabet.outputs.size() << " outputs ("
      << m.alphabet.observable.size() << " observable)\n";
    if (c.pooled_word) {
        Word w(c.pooled_word->begin(), c.pooled_word->end());
        auto exact = output_words(m, w);
        auto pooled = pooled_output_words(m, w);
        auto show = [](const std::set<Word>& ws) {
            std::string t = "{";
            bool first = true;
            for (const auto& x : ws) {
                t += (first ? "" : ", ") + (x.empty() ? std::string("ε") : join(x, ""));
                first = false;
            }
            return t + "}";
        };
        s << "output words (run-based): " << show(exact) << "\n";
        s << "output words (pooled recursion): " << show(pooled) << "\n";
        s << (exact == pooled ? "pooled recursion agrees\n"
                              : "pooled recursion differs; it is a diagnostic, not ground truth\n");
    }
    r.emit(s.str());
    return kOk;
}

inline int cmd_observer(const CliConfig& c, Report& r) {
    auto m = load(c);
    const std::string kind = c.kind.empty() ? "rcso" : c.kind;
    if (kind == "passive") {
        auto det = determinize(build_passive_nfa(m), m.alphabet.observable).automaton;
        if (c.format == "dot")
            r.emit(to_dot(det));
        else if (c.format == "json")
            r.emit(to_json(det).dump(2) + "\n");
        else
            r.emit("passive observer: " + std::to_string(det.states.size()) + " states, " +
                   std::to_string(det.transitions.size()) + " transitions\n" + [&] {
                       std::string t;
                       for (const auto& tr : det.transitions)
                           t += "  " + tr.from + " --" + tr.event + "--> " + tr.to + "\n";
                       return t;
                   }());
        return kOk;
    }
    require(kind == "rcso", "unknown observer kind " + ropacity::detail::squote(kind));
    auto obs = build_rcso_observer(m);
    if (c.format == "dot") {
        r.emit(to_dot(obs, c.secret ? to_set(*c.secret) : m.secret));
    } else if (c.format == "json") {
        r.emit(to_json(obs).dump(2) + "\n");
    } else {
        std::string t = "observer: " + std::to_string(obs.states.size()) + " states, " +
                        std::to_string(obs.transitions.size()) + " transitions\n";
        for (const auto& [key, to] : obs.transitions)
            t += "  " + obs.name(key.first) + " --" + label_text(key.second) + "--> " + obs.name(to) + "\n";
        r.emit(t);
    }
    return kOk;
}

inline int cmd_attack(const CliConfig& c, Report& r) {
    auto m = load(c);
    auto sets = query_sets(c, m);
    auto plan = synthesize_attack(m, sets);
    if (c.format == "json") {
        Json j;
        j["opaque"] = !plan.has_value();
        if (plan) {
            j["plan"] = to_json(*plan);
            j["replayed"] = replay(m, *plan, sets);
        }
        r.emit(j.dump(2) + "\n");
    } else if (!plan) {
        r.emit("no attack: the secret is opaque against an active intruder\n");
    } else {
        std::string t = "attack plan (open loop):\n";
        t += "  inject: " + join(plan->inputs) + "\n";
        t += "  on observing: " + join(plan->observation) + "\n";
        t += "  labels:";
        for (const auto& l : plan->labels) t += " " + label_text(l);
        t += "\n  conclude: current state in " + subset_name(plan->final_estimate) + "\n";
        t += std::string("  replay: ") + (replay(m, *plan, sets) ? "confirmed" : "FAILED") + "\n";
        r.emit(t);
    }
    return plan ? kNotOpaque : kOk;
}

inline Json query_json(const RisoQuery& q) {
    Json j;
    j["secret_initial"] = ropacity::detail::to_array(q.secret_initial);
    j["nonsecret_initial"] = ropacity::detail::to_array(q.nonsecret_initial);
    return j;
}

inline Json notes_json(const std::vector<std::string>& notes) {
    Json j = Json::array();
    for (const auto& n : notes) j.push_back(n);
    return j;
}

inline int cmd_transform(const CliConfig& c, Report& r) {
    auto m = load(c);
    Json j;
    j["kind"] = c.kind;
    if (c.kind == "rlbo-to-rcso") {
        auto p = rlbo_to_rcso(rlbo_problem(c, m));
        j["model"] = to_json(p.model);
    } else if (c.kind == "rcso-to-rlbo") {
        auto p = rcso_to_rlbo(m, query_sets(c, m));
        j["model"] = to_json(p.model);
        j["secret_spec"] = to_json(p.secret.nfa);
        j["nonsecret_spec"] = to_json(p.nonsecret.nfa);
    } else if (c.kind == "riso-to-rlbo") {
        auto p = riso_to_rlbo(m, riso_query(c, m));
        j["model"] = to_json(p.model);
        j["secret_spec"] = to_json(p.secret.nfa);
        j["nonsecret_spec"] = to_json(p.nonsecret.nfa);
        j["notes"] = notes_json(p.notes);
    } else if (c.kind == "rlbo-to-riso") {
        auto p = rlbo_to_riso(rlbo_problem(c, m));
        j["model"] = to_json(p.model);
        j["query"] = query_json(p.query);
        j["notes"] = notes_json(p.notes);
    } else {
        throw Error("--kind must be one of rlbo-to-rcso, rcso-to-rlbo, riso-to-rlbo, rlbo-to-riso");
    }
    r.emit(j.dump(2) + "\n");
    return kOk;
}

inline int cmd_export_dot(const CliConfig& c, Report& r) {
    r.emit(to_dot(load(c)));
    return kOk;
}

}  // namespace detail

inline Parsed parse(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CliConfig c;
    CLI::App app{"Opacity verification for open discrete-event systems", "ropacity"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--model", c.model, "model file (.odes)")->required();
        sub->add_option_function<std::string>(
            "--observability",
            [&](const std::string& list) {
                std::vector<std::string> symbols;
                std::stringstream in(list);
                for (std::string s; std::getline(in, s, ',');)
                    if (!s.empty()) symbols.push_back(s);
                c.observability = symbols;
            },
            "override the observable outputs (comma-separated, empty for none)");
        sub->add_option("--output", c.output, "write the report to this file");
    };
    auto add_query = [&](CLI::App* sub) {
        sub->add_option("--secret", c.secret, "secret states (overrides the model)")->delimiter(',');
        sub->add_option("--nonsecret", c.nonsecret, "non-secret states")->delimiter(',');
    };
    auto add_specs = [&](CLI::App* sub) {
        sub->add_option("--secret-spec", c.secret_spec, "secret output language (automaton JSON)");
        sub->add_option("--nonsecret-spec", c.nonsecret_spec, "non-secret output language");
        sub->add_option("--secret-initial", c.secret_initial, "secret initial states")->delimiter(',');
        sub->add_option("--nonsecret-initial", c.nonsecret_initial, "non-secret initial states")
            ->delimiter(',');
    };
    auto add_format = [&](CLI::App* sub, std::vector<std::string> allowed) {
        sub->add_option("--format", c.format, "output format")->check(CLI::IsMember(allowed));
    };

    auto* validate_cmd = app.add_subcommand("validate", "check a model file");
    add_common(validate_cmd);
    validate_cmd->add_option("--pooled-oracle", c.pooled_word,
                             "compare run-based and pooled output words for an input word")
        ->delimiter(',');

    auto* observer_cmd = app.add_subcommand("observer", "build an observer");
    add_common(observer_cmd);
    add_query(observer_cmd);
    add_format(observer_cmd, {"text", "json", "dot"});
    observer_cmd->add_option("--kind", c.kind, "rcso (active intruder) or passive")
        ->check(CLI::IsMember({"rcso", "passive"}));

    auto* verify_cmd = app.add_subcommand("verify", "decide an opacity property");
    add_common(verify_cmd);
    add_query(verify_cmd);
    add_specs(verify_cmd);
    add_format(verify_cmd, {"text", "json"});
    verify_cmd->add_option("--property", c.property)->check(CLI::IsMember({"rcso", "cso", "rlbo", "riso"}));
    verify_cmd->add_option("--method", c.method)->check(CLI::IsMember({"observer", "oracle"}));
    verify_cmd->add_option("--bound", c.bound, "oracle bound k")->check(CLI::PositiveNumber);
    verify_cmd->add_flag("--diagnose-quantifier", c.diagnose_quantifier,
                         "compare pooled and per-initial-state rcso formulations");

    auto* attack_cmd = app.add_subcommand("attack", "synthesize an attack plan");
    add_common(attack_cmd);
    add_query(attack_cmd);
    add_format(attack_cmd, {"text", "json"});

    auto* transform_cmd = app.add_subcommand("transform", "apply a reduction between properties");
    add_common(transform_cmd);
    add_query(transform_cmd);
    add_specs(transform_cmd);
    transform_cmd->add_option("--kind", c.kind)
        ->required()
        ->check(CLI::IsMember({"rlbo-to-rcso", "rcso-to-rlbo", "riso-to-rlbo", "rlbo-to-riso"}));

    auto* dot_cmd = app.add_subcommand("export-dot", "write the model as Graphviz DOT");
    add_common(dot_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return {std::nullopt, kOk};
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return {std::nullopt, kOk};
    } catch (const CLI::ParseError& e) {
        err << "error: " << detail::one_line(e.what()) << "\n";
        return {std::nullopt, kError};
    }
    c.command = app.get_subcommands().front()->get_name();
    c.color = detail::color_enabled();
    return {c, kOk};
}

inline int run(const CliConfig& c, std::ostream& out, std::ostream& err) {
    try {
        detail::Report r(c, out);
        if (c.bound && *c.bound < 1) throw Error("--bound must be at least 1");
        if (c.command == "validate") return detail::cmd_validate(c, r);
        if (c.command == "observer") return detail::cmd_observer(c, r);
        if (c.command == "verify") return detail::cmd_verify(c, r);
        if (c.command == "attack") return detail::cmd_attack(c, r);
        if (c.command == "transform") return detail::cmd_transform(c, r);
        if (c.command == "export-dot") return detail::cmd_export_dot(c, r);
        throw Error("unknown command " + ropacity::detail::squote(c.command));
    } catch (const std::exception& e) {
        err << "error: " << detail::one_line(e.what()) << "\n";
        return kError;
    }
}

inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    auto parsed = parse(argc, argv, out, err);
    if (!parsed.config) return parsed.exit_code;
    return run(*parsed.config, out, err);
}

}  // namespace ropacity::cli
