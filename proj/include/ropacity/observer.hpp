#pragma once

#include <deque>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "core_model.hpp"
#include "nfa.hpp"
#include "semantics.hpp"

namespace ropacity {

/// Deterministic automaton over (input, observed output) labels whose states are state
/// estimates of the observed system. State 0 is the initial estimate; states are numbered in
/// breadth-first discovery order with labels expanded in canonical order.
struct Observer {
    std::vector<StateSet> states;
    std::map<std::pair<std::size_t, Label>, std::size_t> transitions;
    /// Breadth-first tree: how each non-initial state was first reached.
    std::vector<std::optional<std::pair<std::size_t, Label>>> parent;
    SymbolSet inputs;
    SymbolSet observable;

    std::optional<std::size_t> step(std::size_t from, const Label& label) const {
        auto it = transitions.find({from, label});
        if (it == transitions.end()) return std::nullopt;
        return it->second;
    }

    /// Estimate after `labels`, or nothing when the label word is infeasible.
    std::optional<std::size_t> run(std::span<const Label> labels) const {
        std::size_t at = 0;
        for (const auto& l : labels) {
            auto next = step(at, l);
            if (!next) return std::nullopt;
            at = *next;
        }
        return at;
    }

    /// Shortest label word reaching `state`, canonical among equally short ones.
    LabelWord path_to(std::size_t state) const {
        LabelWord labels;
        while (parent[state]) {
            labels.push_back(parent[state]->second);
            state = parent[state]->first;
        }
        return {labels.rbegin(), labels.rend()};
    }

    std::string name(std::size_t state) const { return subset_name(states[state]); }

    std::optional<std::size_t> find(const StateSet& subset) const {
        for (std::size_t i = 0; i < states.size(); ++i)
            if (states[i] == subset) return i;
        return std::nullopt;
    }
};

/// Observer of an active intruder. A label (x, δ) with δ observable follows the edges that
/// consume x and emit δ; a label (x, ~) follows those that emit an unobservable or silent
/// output. Successors are unions over the current estimate; empty successors are omitted.
inline Observer build_rcso_observer(const OpenDes& model) {
    Observer obs;
    obs.inputs = model.alphabet.inputs;
    obs.observable = model.alphabet.observable;

    std::map<std::pair<StateId, Label>, StateSet> moves;
    for (const auto& e : model.edges) {
        Label l{e.input, model.alphabet.is_observable(e.output) ? e.output : kSilent};
        moves[{e.from, l}].insert(e.to);
    }

    StateSet start = model.initial;
    for (const auto& e : model.edges)
        if (is_silent(e.input) && model.initial.contains(e.from)) start.insert(e.to);

    std::map<StateSet, std::size_t> index;
    std::deque<std::size_t> queue;
    auto visit = [&](const StateSet& s, std::optional<std::pair<std::size_t, Label>> via) {
        auto [it, fresh] = index.emplace(s, obs.states.size());
        if (fresh) {
            obs.states.push_back(s);
            obs.parent.push_back(std::move(via));
            queue.push_back(it->second);
        }
        return it->second;
    };
    visit(start, std::nullopt);

    const auto labels = label_alphabet(model.alphabet);
    while (!queue.empty()) {
        auto current = queue.front();
        queue.pop_front();
        for (const auto& l : labels) {
            StateSet next;
            for (const auto& q : obs.states[current]) {
                auto it = moves.find({q, l});
                if (it != moves.end()) next.insert(it->second.begin(), it->second.end());
            }
            if (next.empty()) continue;
            obs.transitions[{current, l}] = visit(next, std::pair{current, l});
        }
    }
    return obs;
}

/// Automaton seen by a passive intruder: inputs are erased and only emitted symbols remain.
inline Nfa build_passive_nfa(const OpenDes& model) {
    Nfa a;
    a.states = model.states;
    a.events = model.alphabet.outputs;
    a.initial = model.initial;
    a.marked = model.marked;
    for (const auto& e : model.edges)
        if (!is_silent(e.output)) a.transitions.insert({e.from, e.output, e.to});
    return a;
}

}  // namespace ropacity
