#pragma once

// Run-based ground-truth semantics. Everything here works by explicit enumeration of
// executions and is kept independent of the subset constructions in observer.hpp, so it can
// serve as the oracle those constructions are tested against.

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "core_model.hpp"

namespace ropacity {

struct Step {
    Symbol input;
    Symbol output;
    StateId to;

    friend auto operator<=>(const Step&, const Step&) = default;
};

struct Run {
    StateId start;
    std::vector<Step> steps;

    const StateId& end() const { return steps.empty() ? start : steps.back().to; }

    Word inputs() const {
        Word w;
        for (const auto& s : steps)
            if (!is_silent(s.input)) w.push_back(s.input);
        return w;
    }

    /// Output word with silent outputs erased.
    Word output() const {
        Word w;
        for (const auto& s : steps)
            if (!is_silent(s.output)) w.push_back(s.output);
        return w;
    }

    friend auto operator<=>(const Run&, const Run&) = default;
};

/// What the intruder learns from one step: the injected input (or kSilent for a spontaneous
/// move) and the observed output, kSilent when nothing observable was emitted.
struct Label {
    Symbol input;
    Symbol output;

    friend auto operator<=>(const Label&, const Label&) = default;
};

using LabelWord = std::vector<Label>;

inline Label label_of(const Step& step, const Alphabet& alphabet) {
    return {step.input, alphabet.is_observable(step.output) ? step.output : kSilent};
}

inline Word label_inputs(std::span<const Label> labels) {
    Word w;
    for (const auto& l : labels)
        if (!is_silent(l.input)) w.push_back(l.input);
    return w;
}

inline Word label_observation(std::span<const Label> labels) {
    Word w;
    for (const auto& l : labels)
        if (!is_silent(l.output)) w.push_back(l.output);
    return w;
}

inline std::string label_text(const Label& l) { return "(" + l.input + "," + l.output + ")"; }

namespace detail {

inline void require_inputs(const OpenDes& model, const Word& w) {
    for (const auto& x : w)
        if (!model.alphabet.inputs.contains(x))
            throw Error("symbol " + squote(x) + " is not an input symbol");
}

inline void require_observation(const OpenDes& model, const Word& alpha) {
    for (const auto& d : alpha)
        if (!model.alphabet.observable.contains(d))
            throw Error("symbol " + squote(d) + " is not an observable output symbol");
}

inline std::vector<const Edge*> edges_from(const OpenDes& model, const StateId& q,
                                           const Symbol& input) {
    std::vector<const Edge*> out;
    for (auto it = model.edges.lower_bound(Edge{q, input, "", ""});
         it != model.edges.end() && it->from == q && it->input == input; ++it)
        out.push_back(&*it);
    return out;
}

}  // namespace detail

/// All runs from `q0` whose input projection is `w`. Explicit silent-input edges may be taken
/// before, between and after inputs, at most `silent_bound` in a row (default |Q|).
inline std::set<Run> enumerate_runs(const OpenDes& model, const Word& w, const StateId& q0,
                                    std::optional<std::size_t> silent_bound = std::nullopt) {
    require_state(model, q0);
    detail::require_inputs(model, w);
    const std::size_t bound = silent_bound.value_or(model.states.size());
    std::set<Run> runs;
    Run current{q0, {}};

    auto explore = [&](auto&& self, std::size_t pos, std::size_t silent_used) -> void {
        const StateId here = current.end();
        if (pos == w.size()) runs.insert(current);
        if (silent_used < bound)
            for (const Edge* e : detail::edges_from(model, here, kSilent)) {
                current.steps.push_back({e->input, e->output, e->to});
                self(self, pos, silent_used + 1);
                current.steps.pop_back();
            }
        if (pos < w.size())
            for (const Edge* e : detail::edges_from(model, here, w[pos])) {
                current.steps.push_back({e->input, e->output, e->to});
                self(self, pos + 1, 0);
                current.steps.pop_back();
            }
    };
    explore(explore, 0, 0);
    return runs;
}

/// States reachable from `q0` under `w` (the extended transition function).
inline StateSet reach(const OpenDes& model, const Word& w, const StateId& q0) {
    StateSet result;
    for (const auto& r : enumerate_runs(model, w, q0)) result.insert(r.end());
    return result;
}

inline StateSet reach(const OpenDes& model, const Word& w) {
    StateSet result;
    for (const auto& q0 : model.initial) result.merge(reach(model, w, q0));
    return result;
}

inline bool accepts(const OpenDes& model, const Word& w) {
    detail::require_inputs(model, w);
    for (const auto& q0 : model.initial)
        if (!enumerate_runs(model, w, q0).empty()) return true;
    return false;
}

/// Output words of runs from `q0` on `w`; each output stays tied to the path that produced it.
inline std::set<Word> output_words(const OpenDes& model, const Word& w, const StateId& q0) {
    std::set<Word> result;
    for (const auto& r : enumerate_runs(model, w, q0)) result.insert(r.output());
    return result;
}

inline std::set<Word> output_words(const OpenDes& model, const Word& w) {
    std::set<Word> result;
    for (const auto& q0 : model.initial) result.merge(output_words(model, w, q0));
    return result;
}

/// Literal inductive output-word recursion, which pools outputs over every state reached so
/// far instead of following paths. Diagnostic only; not used as ground truth.
inline std::set<Word> pooled_output_words(const OpenDes& model, const Word& w, const StateId& q0) {
    require_state(model, q0);
    detail::require_inputs(model, w);
    std::set<Word> words{Word{}};
    StateSet current{q0};
    for (const auto& x : w) {
        SymbolSet emitted;
        StateSet next;
        for (const auto& q : current) {
            emitted.merge(outputs(model, q, x));
            next.merge(transitions(model, q, x));
        }
        if (next.empty()) return {};
        std::set<Word> extended;
        for (const auto& s : words)
            for (const auto& d : emitted) {
                Word t = s;
                if (!is_silent(d)) t.push_back(d);
                extended.insert(std::move(t));
            }
        words = std::move(extended);
        current = std::move(next);
    }
    return words;
}

inline std::set<Word> pooled_output_words(const OpenDes& model, const Word& w) {
    std::set<Word> result;
    for (const auto& q0 : model.initial) result.merge(pooled_output_words(model, w, q0));
    return result;
}

using IoPair = std::pair<Symbol, Symbol>;

/// Membership in the input-output language (or its marked variant).
inline bool io_language_member(const OpenDes& model, const std::vector<IoPair>& rho, bool marked) {
    Word w, s;
    for (const auto& [x, d] : rho) {
        if (!is_silent(x)) {
            if (!model.alphabet.inputs.contains(x))
                throw Error("symbol " + detail::squote(x) + " is not an input symbol");
            w.push_back(x);
        }
        if (!is_silent(d)) {
            if (!model.alphabet.outputs.contains(d))
                throw Error("symbol " + detail::squote(d) + " is not an output symbol");
            s.push_back(d);
        }
    }
    for (const auto& q0 : model.initial)
        for (const auto& r : enumerate_runs(model, w, q0))
            if (r.output() == s && (!marked || model.marked.contains(r.end()))) return true;
    return false;
}

/// Current-state estimate for input word `w` and observation `alpha`: end states of runs (from
/// `from`, or from every initial state) that consume `w` and whose projected output is `alpha`.
inline StateSet estimate(const OpenDes& model, const Word& w, const Word& alpha,
                         const std::optional<StateId>& from = std::nullopt) {
    detail::require_inputs(model, w);
    detail::require_observation(model, alpha);
    StateSet starts = from ? StateSet{*from} : model.initial;
    StateSet result;
    for (const auto& q0 : starts)
        for (const auto& r : enumerate_runs(model, w, q0))
            if (project(r.output(), model.alphabet) == alpha) result.insert(r.end());
    return result;
}

/// Starting estimate: the given states plus their one-step silent-input successors.
inline StateSet initial_estimate(const OpenDes& model, const StateSet& from) {
    StateSet result = from;
    for (const auto& q : from)
        for (const Edge* e : detail::edges_from(model, q, kSilent)) result.insert(e->to);
    return result;
}

/// Extends every run by one step carrying `label`.
inline std::vector<Run> extend_runs(const OpenDes& model, const std::vector<Run>& runs,
                                    const Label& label) {
    std::vector<Run> next;
    for (const auto& r : runs)
        for (const Edge* e : detail::edges_from(model, r.end(), label.input)) {
            Step step{e->input, e->output, e->to};
            if (label_of(step, model.alphabet) != label) continue;
            Run extended = r;
            extended.steps.push_back(step);
            next.push_back(std::move(extended));
        }
    return next;
}

/// Runs whose step-by-step labels are exactly `labels`, starting from the initial estimate of
/// `from` (the model's initial states by default).
inline std::vector<Run> aligned_runs(const OpenDes& model, std::span<const Label> labels,
                                     const std::optional<StateSet>& from = std::nullopt) {
    std::vector<Run> runs;
    for (const auto& q : initial_estimate(model, from.value_or(model.initial))) runs.push_back({q, {}});
    for (const auto& label : labels) runs = extend_runs(model, runs, label);
    return runs;
}

/// Estimate for an intruder who sees the response (or its absence) to each injected input.
inline StateSet estimate_labels(const OpenDes& model, std::span<const Label> labels) {
    StateSet result;
    for (const auto& r : aligned_runs(model, labels)) result.insert(r.end());
    return result;
}

/// Every label an observer of `model` can use, in canonical order.
inline std::vector<Label> label_alphabet(const Alphabet& alphabet) {
    std::vector<Label> labels;
    SymbolSet inputs = alphabet.inputs;
    inputs.insert(kSilent);
    SymbolSet outs = alphabet.observable;
    outs.insert(kSilent);
    for (const auto& x : inputs)
        for (const auto& d : outs) labels.push_back({x, d});
    return labels;
}

}  // namespace ropacity
