#pragma once

// Automaton algebra shared by the verifiers and the reductions between opacity notions.

#include <deque>
#include <map>
#include <utility>

#include "core_model.hpp"
#include "nfa.hpp"

namespace ropacity {

namespace detail {

template <class Adjacency>
StateSet reach(const StateSet& from, const Adjacency& adjacency) {
    StateSet seen;
    std::deque<StateId> queue;
    for (const auto& q : from)
        if (seen.insert(q).second) queue.push_back(q);
    while (!queue.empty()) {
        auto q = queue.front();
        queue.pop_front();
        auto it = adjacency.find(q);
        if (it == adjacency.end()) continue;
        for (const auto& next : it->second)
            if (seen.insert(next).second) queue.push_back(next);
    }
    return seen;
}

inline std::map<StateId, StateSet> forward_graph(const OpenDes& m) {
    std::map<StateId, StateSet> g;
    for (const auto& e : m.edges) g[e.from].insert(e.to);
    return g;
}

inline std::map<StateId, StateSet> backward_graph(const OpenDes& m) {
    std::map<StateId, StateSet> g;
    for (const auto& e : m.edges) g[e.to].insert(e.from);
    return g;
}

inline std::map<StateId, StateSet> forward_graph(const Nfa& a) {
    std::map<StateId, StateSet> g;
    for (const auto& t : a.transitions) g[t.from].insert(t.to);
    return g;
}

inline std::map<StateId, StateSet> backward_graph(const Nfa& a) {
    std::map<StateId, StateSet> g;
    for (const auto& t : a.transitions) g[t.to].insert(t.from);
    return g;
}

}  // namespace detail

/// Keeps only the states in `keep` together with the edges between them.
inline OpenDes restrict_to(const OpenDes& m, const StateSet& keep) {
    OpenDes r;
    r.alphabet = m.alphabet;
    r.comment = m.comment;
    r.states = detail::set_intersection(m.states, keep);
    r.initial = detail::set_intersection(m.initial, keep);
    r.marked = detail::set_intersection(m.marked, keep);
    r.secret = detail::set_intersection(m.secret, keep);
    if (m.nonsecret) r.nonsecret = detail::set_intersection(*m.nonsecret, keep);
    for (const auto& e : m.edges)
        if (keep.contains(e.from) && keep.contains(e.to)) r.edges.insert(e);
    return r;
}

inline Nfa restrict_to(const Nfa& a, const StateSet& keep) {
    Nfa r;
    r.events = a.events;
    r.states = detail::set_intersection(a.states, keep);
    r.initial = detail::set_intersection(a.initial, keep);
    r.marked = detail::set_intersection(a.marked, keep);
    for (const auto& t : a.transitions)
        if (keep.contains(t.from) && keep.contains(t.to)) r.transitions.insert(t);
    return r;
}

template <class Automaton>
Automaton accessible(const Automaton& a) {
    return restrict_to(a, detail::reach(a.initial, detail::forward_graph(a)));
}

template <class Automaton>
Automaton coaccessible(const Automaton& a) {
    return restrict_to(a, detail::reach(a.marked, detail::backward_graph(a)));
}

template <class Automaton>
Automaton trim(const Automaton& a) {
    return accessible(coaccessible(a));
}

struct UnionResult {
    OpenDes model;
    /// New state id -> (side, original id); side 0 is the first operand.
    std::map<StateId, std::pair<int, StateId>> provenance;
};

inline std::string union_state_name(int side, const StateId& q) {
    return std::to_string(side + 1) + ":" + q;
}

inline UnionResult disjoint_union(const OpenDes& a, const OpenDes& b) {
    if (!(a.alphabet == b.alphabet)) throw Error("disjoint union requires identical alphabets");
    UnionResult result;
    auto& u = result.model;
    u.alphabet = a.alphabet;
    const bool explicit_nonsecret = a.nonsecret || b.nonsecret;
    if (explicit_nonsecret) u.nonsecret.emplace();
    int side = 0;
    for (const OpenDes* part : {&a, &b}) {
        auto name = [side](const StateId& q) { return union_state_name(side, q); };
        for (const auto& q : part->states) {
            u.states.insert(name(q));
            result.provenance[name(q)] = {side, q};
        }
        for (const auto& q : part->initial) u.initial.insert(name(q));
        for (const auto& q : part->marked) u.marked.insert(name(q));
        for (const auto& q : part->secret) u.secret.insert(name(q));
        if (explicit_nonsecret)
            for (const auto& q : part->effective_nonsecret()) u.nonsecret->insert(name(q));
        for (const auto& e : part->edges) u.edges.insert({name(e.from), e.input, e.output, name(e.to)});
        ++side;
    }
    return result;
}

inline std::string product_state_name(const StateId& q, const StateId& p) {
    return "(" + q + "," + p + ")";
}

/// Synchronous product of a transducer with an automaton reading its outputs. Silent outputs
/// leave the automaton in place. A product state is marked when the automaton state is marked
/// (and the transducer state too, if the transducer marks anything).
inline OpenDes io_product(const OpenDes& g, const Nfa& spec) {
    for (const auto& e : spec.events)
        if (!g.alphabet.outputs.contains(e))
            throw Error("specification event " + detail::squote(e) + " is not an output of the model");
    OpenDes r;
    r.alphabet = g.alphabet;
    for (const auto& q : g.states)
        for (const auto& p : spec.states) {
            auto name = product_state_name(q, p);
            r.states.insert(name);
            if (spec.marked.contains(p) && (g.marked.empty() || g.marked.contains(q)))
                r.marked.insert(name);
        }
    for (const auto& q : g.initial)
        for (const auto& p : spec.initial) r.initial.insert(product_state_name(q, p));
    for (const auto& e : g.edges)
        for (const auto& p : spec.states) {
            if (is_silent(e.output)) {
                r.edges.insert({product_state_name(e.from, p), e.input, e.output,
                                product_state_name(e.to, p)});
                continue;
            }
            for (auto it = spec.transitions.lower_bound(Transition{p, e.output, ""});
                 it != spec.transitions.end() && it->from == p && it->event == e.output; ++it)
                r.edges.insert({product_state_name(e.from, p), e.input, e.output,
                                product_state_name(e.to, it->to)});
        }
    return r;
}

struct Determinized {
    Nfa automaton;
    /// Canonical state name -> subset of original states.
    std::map<StateId, StateSet> subsets;
    /// Discovery (breadth-first) order of the states.
    std::vector<StateId> order;
};

/// Subset construction over `observable` events, closing every subset under the other events.
inline Determinized determinize(const Nfa& a, const SymbolSet& observable) {
    SymbolSet hidden;
    for (const auto& e : a.events)
        if (!observable.contains(e)) hidden.insert(e);

    auto closure = [&](StateSet s) {
        std::deque<StateId> queue(s.begin(), s.end());
        while (!queue.empty()) {
            auto q = queue.front();
            queue.pop_front();
            for (const auto& h : hidden)
                for (const auto& next : successors(a, {q}, h))
                    if (s.insert(next).second) queue.push_back(next);
        }
        return s;
    };

    Determinized d;
    auto& dfa = d.automaton;
    for (const auto& e : observable)
        if (a.events.contains(e)) dfa.events.insert(e);
    auto start = closure(a.initial);
    if (start.empty()) return d;

    std::deque<StateSet> queue;
    auto visit = [&](const StateSet& s) {
        auto name = subset_name(s);
        if (!dfa.states.insert(name).second) return name;
        d.subsets[name] = s;
        d.order.push_back(name);
        if (detail::intersects(s, a.marked)) dfa.marked.insert(name);
        queue.push_back(s);
        return name;
    };
    dfa.initial.insert(visit(start));
    while (!queue.empty()) {
        auto s = queue.front();
        queue.pop_front();
        auto from = subset_name(s);
        for (const auto& e : dfa.events) {
            auto next = closure(successors(a, s, e));
            if (next.empty()) continue;
            dfa.transitions.insert({from, e, visit(next)});
        }
    }
    return d;
}

/// True when the marked language contains every prefix of its words.
inline bool is_prefix_closed(const Nfa& a) {
    auto dfa = trim(determinize(a, a.events).automaton);
    return detail::is_subset(dfa.states, dfa.marked);
}

}  // namespace ropacity
