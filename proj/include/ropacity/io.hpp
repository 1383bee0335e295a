#pragma once

// File formats: the JSON model format (.odes), the automaton/language-spec JSON format,
// observer and verdict JSON, and Graphviz DOT export.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "attack.hpp"
#include "automata_ops.hpp"
#include "core_model.hpp"
#include "nfa.hpp"
#include "observer.hpp"
#include "transforms.hpp"
#include "verify.hpp"

namespace ropacity {

using Json = nlohmann::ordered_json;

class ParseError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + squote(path));
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + squote(path));
    out << text;
    if (!out) throw Error("failed writing " + squote(path));
}

inline Json parse_json(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                         ": malformed JSON");
    }
}

class FieldReader {
public:
    FieldReader(const Json& object, std::string source, std::initializer_list<const char*> known)
        : object_(object), source_(std::move(source)) {
        if (!object_.is_object()) fail("", "top-level value must be an object");
        for (const auto& [key, value] : object_.items()) {
            bool ok = false;
            for (const char* k : known) ok = ok || key == k;
            if (!ok) fail(key, "unknown key");
        }
    }

    bool has(const char* key) const { return object_.contains(key); }

    [[noreturn]] void fail(const std::string& field, const std::string& message) const {
        throw ParseError(source_ + (field.empty() ? "" : ": field '" + field + "'") + ": " + message);
    }

    std::string string(const char* key) const {
        const auto& v = require(key);
        if (!v.is_string()) fail(key, "expected a string");
        return v.get<std::string>();
    }

    std::vector<std::string> strings(const Json& array, const std::string& field) const {
        if (!array.is_array()) fail(field, "expected an array of strings");
        std::vector<std::string> out;
        for (std::size_t i = 0; i < array.size(); ++i) {
            if (!array[i].is_string())
                fail(field + "[" + std::to_string(i) + "]", "expected a string");
            out.push_back(array[i].get<std::string>());
        }
        return out;
    }

    /// Array of distinct strings; a repeated entry is reported by name.
    std::set<std::string> string_set(const char* key, const char* what) const {
        std::set<std::string> out;
        auto items = strings(require(key), key);
        for (std::size_t i = 0; i < items.size(); ++i)
            if (!out.insert(items[i]).second)
                fail(std::string(key) + "[" + std::to_string(i) + "]",
                     std::string("duplicate ") + what + " " + squote(items[i]));
        return out;
    }

    std::set<std::string> optional_set(const char* key, const char* what) const {
        return has(key) ? string_set(key, what) : std::set<std::string>{};
    }

    std::vector<std::vector<std::string>> tuples(const char* key, std::size_t arity) const {
        const auto& v = require(key);
        if (!v.is_array()) fail(key, "expected an array");
        std::vector<std::vector<std::string>> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            auto field = std::string(key) + "[" + std::to_string(i) + "]";
            auto items = strings(v[i], field);
            if (items.size() != arity)
                fail(field, "expected " + std::to_string(arity) + " elements");
            out.push_back(std::move(items));
        }
        return out;
    }

    const Json& require(const char* key) const {
        if (!object_.contains(key)) fail(key, "missing required key");
        return object_.at(key);
    }

private:
    const Json& object_;
    std::string source_;
};

inline Json to_array(const std::set<std::string>& s) {
    Json a = Json::array();
    for (const auto& v : s) a.push_back(v);
    return a;
}

inline Json to_array(const Word& w) {
    Json a = Json::array();
    for (const auto& v : w) a.push_back(v);
    return a;
}

inline std::string diagnostics_text(const std::vector<Diagnostic>& ds) {
    std::string out;
    for (const auto& d : ds) out += (out.empty() ? "" : "; ") + d.message;
    return out;
}

}  // namespace detail

/// Parses a model without validating it.
inline OpenDes model_from_json(const Json& j, const std::string& source = "model") {
    detail::FieldReader r(j, source,
                          {"states", "inputs", "outputs", "observable", "initial", "marked",
                           "secret", "nonsecret", "edges", "epsilon_output", "comment"});
    OpenDes m;
    m.states = r.string_set("states", "state");
    m.alphabet.inputs = r.string_set("inputs", "input symbol");
    m.alphabet.outputs = r.string_set("outputs", "output symbol");
    m.alphabet.observable = r.string_set("observable", "observable symbol");
    m.initial = r.string_set("initial", "initial state");
    m.marked = r.optional_set("marked", "marked state");
    m.secret = r.optional_set("secret", "secret state");
    if (r.has("nonsecret")) m.nonsecret = r.string_set("nonsecret", "nonsecret state");
    if (r.has("comment")) m.comment = r.string("comment");
    for (const auto& t : r.tuples("edges", 4)) m.edges.insert({t[0], t[1], t[2], t[3]});
    if (r.has("epsilon_output")) {
        if (r.string("epsilon_output") != "all")
            r.fail("epsilon_output", "the only supported value is \"all\"");
        m = with_silent_outputs(std::move(m));
    }
    return m;
}

inline Json to_json(const OpenDes& m) {
    Json j;
    if (!m.comment.empty()) j["comment"] = m.comment;
    j["states"] = detail::to_array(m.states);
    j["inputs"] = detail::to_array(m.alphabet.inputs);
    j["outputs"] = detail::to_array(m.alphabet.outputs);
    j["observable"] = detail::to_array(m.alphabet.observable);
    j["initial"] = detail::to_array(m.initial);
    j["marked"] = detail::to_array(m.marked);
    j["secret"] = detail::to_array(m.secret);
    if (m.nonsecret) j["nonsecret"] = detail::to_array(*m.nonsecret);
    Json edges = Json::array();
    for (const auto& e : m.edges) edges.push_back({e.from, e.input, e.output, e.to});
    j["edges"] = std::move(edges);
    return j;
}

/// Parses and validates a model; invalid models are rejected with every diagnostic.
inline OpenDes parse_model(const std::string& text, const std::string& source = "model") {
    auto m = model_from_json(detail::parse_json(text, source), source);
    auto ds = validate(m);
    if (!ds.empty()) throw Error(source + ": invalid model: " + detail::diagnostics_text(ds));
    return m;
}

inline OpenDes load_model(const std::string& path) {
    return parse_model(detail::read_file(path), path);
}

inline std::string dump_model(const OpenDes& m) { return to_json(m).dump(2) + "\n"; }

inline void save_model(const OpenDes& m, const std::string& path) {
    detail::write_file(path, dump_model(m));
}

inline Nfa nfa_from_json(const Json& j, const std::string& source = "automaton") {
    detail::FieldReader r(j, source, {"states", "events", "initial", "marked", "transitions", "comment"});
    Nfa a;
    a.states = r.string_set("states", "state");
    a.events = r.string_set("events", "event");
    a.initial = r.string_set("initial", "initial state");
    a.marked = r.optional_set("marked", "marked state");
    for (const auto& t : r.tuples("transitions", 3)) a.transitions.insert({t[0], t[1], t[2]});
    auto ds = validate(a);
    if (!ds.empty()) throw Error(source + ": invalid automaton: " + detail::diagnostics_text(ds));
    return a;
}

inline Json to_json(const Nfa& a) {
    Json j;
    j["states"] = detail::to_array(a.states);
    j["events"] = detail::to_array(a.events);
    j["initial"] = detail::to_array(a.initial);
    j["marked"] = detail::to_array(a.marked);
    Json ts = Json::array();
    for (const auto& t : a.transitions) ts.push_back({t.from, t.event, t.to});
    j["transitions"] = std::move(ts);
    return j;
}

inline LanguageSpec load_language_spec(const std::string& path) {
    return {nfa_from_json(detail::parse_json(detail::read_file(path), path), path)};
}

inline void save_language_spec(const LanguageSpec& spec, const std::string& path) {
    detail::write_file(path, to_json(spec.nfa).dump(2) + "\n");
}

inline Json to_json(const Observer& obs) {
    Json j;
    Json states = Json::array();
    for (std::size_t i = 0; i < obs.states.size(); ++i) states.push_back(obs.name(i));
    j["states"] = std::move(states);
    j["inputs"] = detail::to_array(obs.inputs);
    j["observable"] = detail::to_array(obs.observable);
    j["initial"] = obs.states.empty() ? Json() : Json(obs.name(0));
    Json ts = Json::array();
    for (const auto& [key, to] : obs.transitions)
        ts.push_back({obs.name(key.first), key.second.input, key.second.output, obs.name(to)});
    j["transitions"] = std::move(ts);
    return j;
}

inline Json to_json(const Witness& w) {
    Json j;
    j["inputs"] = detail::to_array(w.inputs);
    j["observation"] = detail::to_array(w.observation);
    j["estimate"] = detail::to_array(w.estimate);
    Json labels = Json::array();
    for (const auto& l : w.labels) labels.push_back({l.input, l.output});
    j["labels"] = std::move(labels);
    return j;
}

inline Json to_json(const Verdict& v) {
    Json j;
    j["property"] = v.property;
    j["opaque"] = v.opaque;
    j["method"] = method_name(v.method);
    if (v.bound) j["bound"] = *v.bound;
    if (v.witness) j["witness"] = to_json(*v.witness);
    return j;
}

inline Json to_json(const AttackPlan& p) {
    return to_json(Witness{p.inputs, p.observation, p.final_estimate, p.labels});
}

// ---------------------------------------------------------------------------------------------
// DOT export. Legend: doublecircle = marked, grey fill = secret, bold outline = initial.
// Nodes and edges are emitted in sorted order so the output is byte-stable.

namespace detail {

inline std::string dot_id(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

inline std::string dot_node(const std::string& id, bool initial, bool marked, bool secret) {
    std::vector<std::string> attrs;
    if (marked) attrs.push_back("shape=doublecircle");
    std::string style;
    if (initial) style = "bold";
    if (secret) {
        style += style.empty() ? "filled" : ",filled";
        attrs.push_back("fillcolor=lightgrey");
    }
    if (!style.empty()) attrs.push_back("style=\"" + style + "\"");
    std::string line = "  " + dot_id(id);
    if (!attrs.empty()) {
        line += " [";
        for (std::size_t i = 0; i < attrs.size(); ++i) line += (i ? ", " : "") + attrs[i];
        line += "]";
    }
    return line + ";\n";
}

inline std::string dot_header(const std::string& name) {
    return "digraph " + dot_id(name) +
           " {\n  rankdir=LR;\n  // legend: doublecircle = marked, filled = secret, bold = initial\n"
           "  node [shape=circle];\n";
}

inline std::string dot_edge(const std::string& from, const std::string& to, const std::string& label) {
    return "  " + dot_id(from) + " -> " + dot_id(to) + " [label=" + dot_id(label) + "];\n";
}

}  // namespace detail

inline std::string to_dot(const OpenDes& m) {
    std::string out = detail::dot_header("open_des");
    for (const auto& q : m.states)
        out += detail::dot_node(q, m.initial.contains(q), m.marked.contains(q), m.secret.contains(q));
    for (const auto& e : m.edges) out += detail::dot_edge(e.from, e.to, e.input + "/" + e.output);
    return out + "}\n";
}

inline std::string to_dot(const Nfa& a) {
    std::string out = detail::dot_header("nfa");
    for (const auto& q : a.states)
        out += detail::dot_node(q, a.initial.contains(q), a.marked.contains(q), false);
    for (const auto& t : a.transitions) out += detail::dot_edge(t.from, t.to, t.event);
    return out + "}\n";
}

/// `secret`, when given, fills the observer states lying entirely inside it.
inline std::string to_dot(const Observer& obs, const StateSet& secret = {}) {
    std::string out = detail::dot_header("observer");
    std::vector<std::size_t> order(obs.states.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return obs.name(a) < obs.name(b); });
    for (auto i : order) {
        bool leaks = !secret.empty() && detail::is_subset(obs.states[i], secret);
        out += detail::dot_node(obs.name(i), i == 0, false, leaks);
    }
    std::vector<std::tuple<std::string, Label, std::string>> edges;
    for (const auto& [key, to] : obs.transitions)
        edges.emplace_back(obs.name(key.first), key.second, obs.name(to));
    std::sort(edges.begin(), edges.end());
    for (const auto& [from, label, to] : edges) out += detail::dot_edge(from, to, label_text(label));
    return out + "}\n";
}

template <class Automaton>
void export_dot(const Automaton& a, const std::string& path) {
    detail::write_file(path, to_dot(a));
}

}  // namespace ropacity
