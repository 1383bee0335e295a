#pragma once

// Open discrete-event system (nondeterministic finite-state transducer) model.

#include <algorithm>
#include <compare>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ropacity {

using StateId = std::string;
using Symbol = std::string;
using StateSet = std::set<StateId>;
using SymbolSet = std::set<Symbol>;
using Word = std::vector<Symbol>;

/// Reserved token standing for the empty symbol, both in memory and in files.
inline const Symbol kSilent = "~";

inline bool is_silent(std::string_view s) { return s == kSilent; }

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Alphabet {
    SymbolSet inputs;
    SymbolSet outputs;
    SymbolSet observable;

    SymbolSet unobservable() const {
        SymbolSet result;
        std::set_difference(outputs.begin(), outputs.end(), observable.begin(), observable.end(),
                            std::inserter(result, result.end()));
        return result;
    }

    bool is_observable(const Symbol& output) const { return observable.contains(output); }

    friend bool operator==(const Alphabet&, const Alphabet&) = default;
};

/// One transition (q, x, δ, q'). Input and output may be kSilent.
struct Edge {
    StateId from;
    Symbol input;
    Symbol output;
    StateId to;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct OpenDes {
    StateSet states;
    Alphabet alphabet;
    StateSet initial;
    std::set<Edge> edges;
    StateSet marked;
    StateSet secret;
    /// Unset means "every state that is not secret".
    std::optional<StateSet> nonsecret;
    std::string comment;

    StateSet effective_nonsecret() const {
        if (nonsecret) return *nonsecret;
        StateSet result;
        std::set_difference(states.begin(), states.end(), secret.begin(), secret.end(),
                            std::inserter(result, result.end()));
        return result;
    }

    friend bool operator==(const OpenDes&, const OpenDes&) = default;
};

struct Diagnostic {
    std::string code;
    std::string message;
};

namespace detail {

inline std::string squote(std::string_view s) { return "'" + std::string(s) + "'"; }

inline std::string edge_text(const Edge& e) {
    return "[" + e.from + ", " + e.input + ", " + e.output + ", " + e.to + "]";
}

inline void check_subset(const StateSet& subset, const StateSet& states, const char* what,
                         std::vector<Diagnostic>& out) {
    for (const auto& q : subset)
        if (!states.contains(q))
            out.push_back({std::string("unknown ") + what + " state",
                           std::string("unknown ") + what + " state " + squote(q)});
}

inline StateSet set_union(const StateSet& a, const StateSet& b) {
    StateSet r = a;
    r.insert(b.begin(), b.end());
    return r;
}

inline StateSet set_intersection(const StateSet& a, const StateSet& b) {
    StateSet r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(r, r.end()));
    return r;
}

inline bool intersects(const StateSet& a, const StateSet& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) ++i;
        else if (*j < *i) ++j;
        else return true;
    }
    return false;
}

inline bool is_subset(const StateSet& a, const StateSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace detail

/// Returns every violated well-formedness rule; an empty result means the model is valid.
inline std::vector<Diagnostic> validate(const OpenDes& model) {
    std::vector<Diagnostic> out;
    const auto& ab = model.alphabet;

    if (ab.inputs.empty()) out.push_back({"empty input alphabet", "input alphabet is empty"});
    if (ab.outputs.empty()) out.push_back({"empty output alphabet", "output alphabet is empty"});
    for (const auto& x : ab.inputs) {
        if (is_silent(x))
            out.push_back({"reserved symbol", "reserved token '~' declared as an input"});
        if (ab.outputs.contains(x))
            out.push_back({"overlapping alphabets",
                           "symbol " + detail::squote(x) + " is both an input and an output"});
    }
    for (const auto& d : ab.outputs)
        if (is_silent(d))
            out.push_back({"reserved symbol", "reserved token '~' declared as an output"});
    for (const auto& d : ab.observable)
        if (!ab.outputs.contains(d))
            out.push_back({"unknown observable symbol",
                           "observable symbol " + detail::squote(d) + " is not an output"});

    if (model.initial.empty()) out.push_back({"empty initial set", "initial state set is empty"});
    detail::check_subset(model.initial, model.states, "initial", out);
    detail::check_subset(model.marked, model.states, "marked", out);
    detail::check_subset(model.secret, model.states, "secret", out);
    if (model.nonsecret) detail::check_subset(*model.nonsecret, model.states, "nonsecret", out);

    for (const auto& e : model.edges) {
        if (!model.states.contains(e.from))
            out.push_back({"unknown source state", "unknown source state " + detail::squote(e.from) +
                                                       " in edge " + detail::edge_text(e)});
        if (!model.states.contains(e.to))
            out.push_back({"unknown target state", "unknown target state " + detail::squote(e.to) +
                                                       " in edge " + detail::edge_text(e)});
        if (!is_silent(e.input) && !ab.inputs.contains(e.input))
            out.push_back({"unknown input symbol", "unknown input symbol " + detail::squote(e.input) +
                                                       " in edge " + detail::edge_text(e)});
        if (!is_silent(e.output) && !ab.outputs.contains(e.output))
            out.push_back({"unknown output symbol", "unknown output symbol " +
                                                        detail::squote(e.output) + " in edge " +
                                                        detail::edge_text(e)});
    }
    return out;
}

inline void require_state(const OpenDes& model, const StateId& q) {
    if (!model.states.contains(q)) throw Error("unknown state " + detail::squote(q));
}

/// Successor states T(q, x). For x = kSilent the current state is always included.
inline StateSet transitions(const OpenDes& model, const StateId& q, const Symbol& x) {
    require_state(model, q);
    StateSet result;
    if (is_silent(x)) result.insert(q);
    for (auto it = model.edges.lower_bound(Edge{q, x, "", ""});
         it != model.edges.end() && it->from == q && it->input == x; ++it)
        result.insert(it->to);
    return result;
}

/// Output symbols λ(q, x). For x = kSilent the silent output is always included.
inline SymbolSet outputs(const OpenDes& model, const StateId& q, const Symbol& x) {
    require_state(model, q);
    SymbolSet result;
    if (is_silent(x)) result.insert(kSilent);
    for (auto it = model.edges.lower_bound(Edge{q, x, "", ""});
         it != model.edges.end() && it->from == q && it->input == x; ++it)
        result.insert(it->output);
    return result;
}

/// Natural projection: erases silent and unobservable symbols.
inline Word project(const Word& word, const Alphabet& alphabet) {
    Word result;
    for (const auto& d : word) {
        if (is_silent(d)) continue;
        if (!alphabet.outputs.contains(d))
            throw Error("symbol " + detail::squote(d) + " is not an output symbol");
        if (alphabet.is_observable(d)) result.push_back(d);
    }
    return result;
}

/// Drops silent symbols, keeping everything else in order.
inline Word erase_silent(const Word& word) {
    Word result;
    for (const auto& s : word)
        if (!is_silent(s)) result.push_back(s);
    return result;
}

/// Adds a silent-output copy of every edge that emits a symbol.
inline OpenDes with_silent_outputs(OpenDes model) {
    std::vector<Edge> extra;
    for (const auto& e : model.edges)
        if (!is_silent(e.output)) extra.push_back({e.from, e.input, kSilent, e.to});
    model.edges.insert(extra.begin(), extra.end());
    return model;
}

/// Canonical name of a state subset, e.g. "{1,3}".
inline std::string subset_name(const StateSet& subset) {
    std::string name = "{";
    bool first = true;
    for (const auto& q : subset) {
        if (!first) name += ",";
        name += q;
        first = false;
    }
    return name + "}";
}

inline std::string join(const Word& word, std::string_view sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i) out += sep;
        out += word[i];
    }
    return out;
}

}  // namespace ropacity
