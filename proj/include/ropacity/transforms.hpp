#pragma once

// Reductions between the reactive opacity notions (current-state, language-based, initial-state)
// and brute-force checks of the language-based and initial-state notions.
//
// Output languages that must remember which input produced each output are expressed over
// "io symbols": the model is relabeled so that every edge (q, x, d, q') emits the symbol "x/d".
// An io symbol is observable exactly when d is. The relabeled model has the same label words
// as the original, so the intruder learns nothing more or less from it.

#include <string>
#include <utility>
#include <vector>

#include "automata_ops.hpp"
#include "core_model.hpp"
#include "nfa.hpp"
#include "semantics.hpp"
#include "verify.hpp"

namespace ropacity {

/// Output language given as the marked language of an automaton over the model's outputs.
struct LanguageSpec {
    Nfa nfa;

    friend bool operator==(const LanguageSpec&, const LanguageSpec&) = default;
};

struct RisoQuery {
    StateSet secret_initial;
    StateSet nonsecret_initial;
};

struct RcsoProblem {
    OpenDes model;
    SecretSets sets;
};

struct RlboProblem {
    OpenDes model;
    LanguageSpec secret;
    LanguageSpec nonsecret;
    std::vector<std::string> notes;
};

struct RisoProblem {
    OpenDes model;
    RisoQuery query;
    std::vector<std::string> notes;
};

inline std::string io_symbol(const Symbol& input, const Symbol& output) {
    return input + "/" + output;
}

/// Splits an io symbol back into (input, output); nothing if `s` is not one.
inline std::optional<std::pair<Symbol, Symbol>> split_io_symbol(const Symbol& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return std::nullopt;
    return std::pair{s.substr(0, slash), s.substr(slash + 1)};
}

/// Same model with every edge emitting the io symbol of its (input, output) pair.
inline OpenDes io_relabel(const OpenDes& model) {
    OpenDes r = model;
    r.alphabet.outputs.clear();
    r.alphabet.observable.clear();
    r.edges.clear();
    SymbolSet inputs = model.alphabet.inputs;
    inputs.insert(kSilent);
    SymbolSet outs = model.alphabet.outputs;
    outs.insert(kSilent);
    for (const auto& x : inputs)
        for (const auto& d : outs) {
            auto s = io_symbol(x, d);
            if (model.alphabet.inputs.contains(s))
                throw Error("io symbol " + detail::squote(s) + " collides with an input symbol");
            r.alphabet.outputs.insert(s);
            if (model.alphabet.is_observable(d)) r.alphabet.observable.insert(s);
        }
    for (const auto& e : model.edges)
        r.edges.insert({e.from, e.input, io_symbol(e.input, e.output), e.to});
    return r;
}

/// Marked language of a transducer read as an automaton over its (non-silent) outputs.
inline Nfa output_automaton(const OpenDes& model) {
    Nfa a;
    a.states = model.states;
    a.events = model.alphabet.outputs;
    a.initial = model.initial;
    a.marked = model.marked;
    for (const auto& e : model.edges)
        if (!is_silent(e.output)) a.transitions.insert({e.from, e.output, e.to});
    return a;
}

namespace detail {

inline OpenDes query_free(OpenDes m) {
    m.marked.clear();
    m.secret.clear();
    m.nonsecret.reset();
    return m;
}

inline StateSet renamed(int side, const StateSet& states) {
    StateSet r;
    for (const auto& q : states) r.insert(union_state_name(side, q));
    return r;
}

}  // namespace detail

/// Language-based to current-state: product of the model with each output language, joined
/// by disjoint union. Secret states are the accepting states of the secret product, non-secret
/// states those of the non-secret product.
inline RcsoProblem rlbo_to_rcso(const RlboProblem& p) {
    const OpenDes g = detail::query_free(p.model);
    auto gs = io_product(g, p.secret.nfa);
    auto gns = io_product(g, p.nonsecret.nfa);
    auto u = disjoint_union(gs, gns);
    RcsoProblem r{std::move(u.model), {detail::renamed(0, gs.marked), detail::renamed(1, gns.marked)}};
    r.model.secret = r.sets.secret;
    r.model.nonsecret = r.sets.nonsecret;
    return r;
}

/// Current-state to language-based: the secret (non-secret) language is the io language of
/// runs ending in a secret (non-secret) state, taken from the trimmed model marked there.
inline RlboProblem rcso_to_rlbo(const OpenDes& model, const SecretSets& sets) {
    auto relabeled = detail::query_free(io_relabel(model));
    auto marked_at = [&](const StateSet& marked) {
        auto m = relabeled;
        m.marked = marked;
        auto a = output_automaton(trim(m));
        a.events = relabeled.alphabet.outputs;
        return a;
    };
    return {relabeled, {marked_at(sets.secret)}, {marked_at(sets.nonsecret)}, {}};
}

inline RlboProblem rcso_to_rlbo(const RcsoProblem& p) { return rcso_to_rlbo(p.model, p.sets); }

inline void check_riso_query(const OpenDes& model, const RisoQuery& q) {
    for (const auto& s : q.secret_initial)
        if (!model.initial.contains(s))
            throw Error("secret initial state " + detail::squote(s) + " is not an initial state");
    for (const auto& s : q.nonsecret_initial)
        if (!model.initial.contains(s))
            throw Error("nonsecret initial state " + detail::squote(s) + " is not an initial state");
}

/// Initial-state to language-based: the secret (non-secret) language is the io language of
/// every run from the secret (non-secret) initial states; the model is trimmed to both.
inline RlboProblem riso_to_rlbo(const OpenDes& model, const RisoQuery& q) {
    check_riso_query(model, q);
    auto relabeled = detail::query_free(io_relabel(model));
    relabeled.marked = relabeled.states;
    auto from = [&](const StateSet& initial) {
        auto m = relabeled;
        m.initial = initial;
        auto a = output_automaton(trim(m));
        a.events = relabeled.alphabet.outputs;
        return a;
    };
    RlboProblem r;
    auto combined = relabeled;
    combined.initial = detail::set_union(q.secret_initial, q.nonsecret_initial);
    r.model = trim(combined);
    r.model.marked.clear();
    r.secret = {from(q.secret_initial)};
    r.nonsecret = {from(q.nonsecret_initial)};
    if (q.nonsecret_initial.empty() && !q.secret_initial.empty())
        r.notes.push_back("nonsecret initial set is empty: any behaviour from a secret initial "
                          "state exposes it");
    return r;
}

/// Language-based to initial-state, for prefix-closed languages only: each side is the model
/// restricted to outputs the language can read, and its initial states become the query.
inline RisoProblem rlbo_to_riso(const RlboProblem& p) {
    if (!is_prefix_closed(p.secret.nfa)) throw Error("secret output language is not prefix-closed");
    if (!is_prefix_closed(p.nonsecret.nfa))
        throw Error("nonsecret output language is not prefix-closed");
    const OpenDes g = detail::query_free(p.model);
    auto side = [&](const Nfa& spec) {
        auto prod = io_product(g, trim(spec));
        prod.marked = prod.states;
        return prod;
    };
    auto gs = side(p.secret.nfa);
    auto gns = side(p.nonsecret.nfa);
    auto u = disjoint_union(gs, gns);
    RisoProblem r{std::move(u.model),
                  {detail::renamed(0, gs.initial), detail::renamed(1, gns.initial)},
                  p.notes};
    r.model.marked.clear();
    return r;
}

/// Brute-force language-based opacity: for every label word of length at most `bound`, if some
/// run with that label word emits a secret output word, another emits a non-secret one.
inline Verdict oracle_verify_rlbo(const RlboProblem& p, std::size_t bound) {
    if (bound < 1) throw Error("oracle bound must be at least 1");
    Verdict v{"rlbo", true, Method::oracle_bounded, bound, std::nullopt};
    v.witness = search_label_words(
        p.model, {start_runs(p.model, p.model.initial)}, bound,
        [&](const LabelWord& labels, const RunGroups& groups) -> std::optional<Witness> {
            StateSet secret_ends;
            bool shadowed = false;
            for (const auto& r : groups.front()) {
                auto out = r.output();
                if (accepts(p.secret.nfa, out)) secret_ends.insert(r.end());
                if (accepts(p.nonsecret.nfa, out)) shadowed = true;
            }
            if (secret_ends.empty() || shadowed) return std::nullopt;
            return Witness{label_inputs(labels), label_observation(labels), secret_ends, labels};
        });
    v.opaque = !v.witness;
    return v;
}

/// Brute-force initial-state opacity: every label word a secret initial state can produce up to
/// `bound` can also be produced from a non-secret initial state.
inline Verdict oracle_verify_riso(const OpenDes& model, const RisoQuery& q, std::size_t bound) {
    if (bound < 1) throw Error("oracle bound must be at least 1");
    check_riso_query(model, q);
    Verdict v{"riso", true, Method::oracle_bounded, bound, std::nullopt};
    v.witness = search_label_words(
        model, {start_runs(model, q.secret_initial), start_runs(model, q.nonsecret_initial)}, bound,
        [&](const LabelWord& labels, const RunGroups& groups) -> std::optional<Witness> {
            if (groups[0].empty() || !groups[1].empty()) return std::nullopt;
            return Witness{label_inputs(labels), label_observation(labels), run_ends(groups[0]),
                           labels};
        });
    v.opaque = !v.witness;
    return v;
}

namespace detail {

/// Maps io-symbol observations of a relabeled model back to the original output symbols.
inline void strip_io_symbols(Witness& w) {
    for (auto& l : w.labels)
        if (auto parts = split_io_symbol(l.output)) l.output = parts->second;
    w.observation = label_observation(w.labels);
}

}  // namespace detail

inline Verdict verify_rlbo(const RlboProblem& p) {
    auto reduced = rlbo_to_rcso(p);
    auto v = verify_rcso(reduced.model, reduced.sets);
    v.property = "rlbo";
    return v;
}

inline Verdict verify_riso(const OpenDes& model, const RisoQuery& q) {
    auto v = verify_rlbo(riso_to_rlbo(model, q));
    v.property = "riso";
    if (v.witness) detail::strip_io_symbols(*v.witness);
    return v;
}

}  // namespace ropacity
