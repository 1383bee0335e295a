#pragma once

#include <compare>
#include <map>
#include <set>
#include <vector>

#include "core_model.hpp"

namespace ropacity {

struct Transition {
    StateId from;
    Symbol event;
    StateId to;

    friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// Plain nondeterministic automaton without silent moves. Its language is the marked language.
struct Nfa {
    StateSet states;
    SymbolSet events;
    StateSet initial;
    std::set<Transition> transitions;
    StateSet marked;

    friend bool operator==(const Nfa&, const Nfa&) = default;
};

inline std::vector<Diagnostic> validate(const Nfa& a) {
    std::vector<Diagnostic> out;
    detail::check_subset(a.initial, a.states, "initial", out);
    detail::check_subset(a.marked, a.states, "marked", out);
    for (const auto& e : a.events)
        if (is_silent(e)) out.push_back({"reserved symbol", "reserved token '~' declared as an event"});
    for (const auto& t : a.transitions) {
        if (!a.states.contains(t.from))
            out.push_back({"unknown source state", "unknown source state " + detail::squote(t.from)});
        if (!a.states.contains(t.to))
            out.push_back({"unknown target state", "unknown target state " + detail::squote(t.to)});
        if (!a.events.contains(t.event))
            out.push_back({"unknown event", "unknown event " + detail::squote(t.event)});
    }
    return out;
}

inline StateSet successors(const Nfa& a, const StateSet& from, const Symbol& event) {
    StateSet result;
    for (const auto& q : from)
        for (auto it = a.transitions.lower_bound(Transition{q, event, ""});
             it != a.transitions.end() && it->from == q && it->event == event; ++it)
            result.insert(it->to);
    return result;
}

/// Membership of a word in the marked language.
inline bool accepts(const Nfa& a, const Word& word) {
    StateSet current = a.initial;
    for (const auto& s : word) {
        current = successors(a, current, s);
        if (current.empty()) return false;
    }
    return detail::intersects(current, a.marked);
}

/// Universal one-state automaton over `events`, accepting every word.
inline Nfa universal_nfa(const SymbolSet& events) {
    Nfa a;
    a.states = {"0"};
    a.events = events;
    a.initial = {"0"};
    a.marked = {"0"};
    for (const auto& e : events) a.transitions.insert({"0", e, "0"});
    return a;
}

}  // namespace ropacity
