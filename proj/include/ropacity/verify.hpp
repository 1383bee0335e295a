#pragma once

// Opacity verdicts. Exact verdicts come from the observer constructions; the bounded verdicts
// come from brute-force enumeration of label words and runs and are certified only up to the
// stated length.

#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "automata_ops.hpp"
#include "core_model.hpp"
#include "observer.hpp"
#include "semantics.hpp"

namespace ropacity {

enum class Method { observer, oracle_bounded };

inline const char* method_name(Method m) {
    return m == Method::observer ? "observer" : "oracle-bounded";
}

struct Witness {
    Word inputs;
    Word observation;
    StateSet estimate;
    LabelWord labels;
};

struct Verdict {
    std::string property;
    bool opaque = true;
    Method method = Method::observer;
    std::optional<std::size_t> bound;
    std::optional<Witness> witness;
};

/// An estimate exposes the secret when it contains a secret state and no non-secret one.
/// With the default non-secret set this is "nonempty and entirely secret".
inline bool exposes(const StateSet& estimate, const StateSet& secret, const StateSet& nonsecret) {
    return detail::intersects(estimate, secret) && !detail::intersects(estimate, nonsecret);
}

/// Secret and non-secret state sets of one query.
struct SecretSets {
    StateSet secret;
    StateSet nonsecret;
};

/// Default non-secret set is the complement; the secret set must then be a strict subset.
inline SecretSets secret_sets(const OpenDes& model, const StateSet& secret,
                              const std::optional<StateSet>& nonsecret = std::nullopt) {
    for (const auto& q : secret)
        if (!model.states.contains(q)) throw Error("unknown secret state " + detail::squote(q));
    if (nonsecret) {
        for (const auto& q : *nonsecret)
            if (!model.states.contains(q)) throw Error("unknown nonsecret state " + detail::squote(q));
        return {secret, *nonsecret};
    }
    if (secret == model.states) throw Error("secret set must be strict subset of the states");
    StateSet rest;
    std::set_difference(model.states.begin(), model.states.end(), secret.begin(), secret.end(),
                        std::inserter(rest, rest.end()));
    return {secret, rest};
}

/// Query sets stored in the model itself.
inline SecretSets secret_sets(const OpenDes& model) {
    return secret_sets(model, model.secret, model.nonsecret);
}

inline Verdict verify_rcso(const OpenDes& model, const SecretSets& sets) {
    Verdict v{"rcso", true, Method::observer, std::nullopt, std::nullopt};
    auto obs = build_rcso_observer(model);
    for (std::size_t i = 0; i < obs.states.size(); ++i) {
        if (!exposes(obs.states[i], sets.secret, sets.nonsecret)) continue;
        auto labels = obs.path_to(i);
        v.opaque = false;
        v.witness = Witness{label_inputs(labels), label_observation(labels), obs.states[i], labels};
        break;
    }
    return v;
}

inline Verdict verify_rcso(const OpenDes& model, const StateSet& secret,
                           const std::optional<StateSet>& nonsecret = std::nullopt) {
    return verify_rcso(model, secret_sets(model, secret, nonsecret));
}

inline Verdict verify_rcso(const OpenDes& model) { return verify_rcso(model, secret_sets(model)); }

/// Current-state opacity against an intruder who only sees projected outputs.
inline Verdict verify_cso_passive(const OpenDes& model, const SecretSets& sets) {
    Verdict v{"cso", true, Method::observer, std::nullopt, std::nullopt};
    auto det = determinize(build_passive_nfa(model), model.alphabet.observable);
    if (det.order.empty()) return v;

    std::map<StateId, std::pair<StateId, Symbol>> parent;
    std::deque<StateId> queue{det.order.front()};
    StateSet seen{det.order.front()};
    std::vector<StateId> order;
    while (!queue.empty()) {
        auto s = queue.front();
        queue.pop_front();
        order.push_back(s);
        for (auto it = det.automaton.transitions.lower_bound(Transition{s, "", ""});
             it != det.automaton.transitions.end() && it->from == s; ++it)
            if (seen.insert(it->to).second) {
                parent[it->to] = {s, it->event};
                queue.push_back(it->to);
            }
    }
    for (const auto& s : order) {
        const auto& subset = det.subsets.at(s);
        if (!exposes(subset, sets.secret, sets.nonsecret)) continue;
        Word observation;
        for (auto at = s; parent.contains(at); at = parent.at(at).first)
            observation.push_back(parent.at(at).second);
        std::reverse(observation.begin(), observation.end());
        v.opaque = false;
        v.witness = Witness{{}, observation, subset, {}};
        break;
    }
    return v;
}

inline Verdict verify_cso_passive(const OpenDes& model, const StateSet& secret,
                                  const std::optional<StateSet>& nonsecret = std::nullopt) {
    return verify_cso_passive(model, secret_sets(model, secret, nonsecret));
}

/// Groups of runs tracked side by side for one label word.
using RunGroups = std::vector<std::vector<Run>>;

/// Breadth-first enumeration of label words up to length `bound`, in canonical order, keeping
/// only words with at least one run in some group. Returns the first word `check` rejects.
inline std::optional<Witness> search_label_words(
    const OpenDes& model, RunGroups start, std::size_t bound,
    const std::function<std::optional<Witness>(const LabelWord&, const RunGroups&)>& check) {
    struct Node {
        LabelWord labels;
        RunGroups groups;
    };
    std::vector<Node> layer{{{}, std::move(start)}};
    const auto alphabet = label_alphabet(model.alphabet);
    for (std::size_t depth = 0;; ++depth) {
        for (const auto& node : layer)
            if (auto w = check(node.labels, node.groups)) return w;
        if (depth == bound) return std::nullopt;
        std::vector<Node> next;
        for (const auto& node : layer)
            for (const auto& label : alphabet) {
                Node child{node.labels, {}};
                child.labels.push_back(label);
                bool any = false;
                for (const auto& runs : node.groups) {
                    child.groups.push_back(extend_runs(model, runs, label));
                    any = any || !child.groups.back().empty();
                }
                if (any) next.push_back(std::move(child));
            }
        if (next.empty()) return std::nullopt;
        layer = std::move(next);
    }
}

inline std::vector<Run> start_runs(const OpenDes& model, const StateSet& from) {
    std::vector<Run> runs;
    for (const auto& q : initial_estimate(model, from)) runs.push_back({q, {}});
    return runs;
}

inline StateSet run_ends(const std::vector<Run>& runs) {
    StateSet ends;
    for (const auto& r : runs) ends.insert(r.end());
    return ends;
}

/// Brute-force current-state opacity check over every label word of length at most `bound`.
inline Verdict oracle_verify_rcso(const OpenDes& model, const SecretSets& sets, std::size_t bound) {
    if (bound < 1) throw Error("oracle bound must be at least 1");
    Verdict v{"rcso", true, Method::oracle_bounded, bound, std::nullopt};
    v.witness = search_label_words(
        model, {start_runs(model, model.initial)}, bound,
        [&](const LabelWord& labels, const RunGroups& groups) -> std::optional<Witness> {
            auto ends = run_ends(groups.front());
            if (!exposes(ends, sets.secret, sets.nonsecret)) return std::nullopt;
            return Witness{label_inputs(labels), label_observation(labels), ends, labels};
        });
    v.opaque = !v.witness;
    return v;
}

inline Verdict oracle_verify_rcso(const OpenDes& model, const StateSet& secret, std::size_t bound,
                                  const std::optional<StateSet>& nonsecret = std::nullopt) {
    return oracle_verify_rcso(model, secret_sets(model, secret, nonsecret), bound);
}

/// Bounded check of the per-initial-state formulation: for every input word some initial
/// state must keep a non-secret state possible, both overall and for each observation
/// sequence that initial state can produce. Input words no run accepts are skipped.
inline Verdict oracle_verify_rcso_per_initial(const OpenDes& model, const SecretSets& sets,
                                              std::size_t bound) {
    if (bound < 1) throw Error("oracle bound must be at least 1");
    Verdict v{"rcso-per-initial", true, Method::oracle_bounded, bound, std::nullopt};

    std::vector<Word> layer{{}};
    for (std::size_t depth = 0; depth <= bound; ++depth) {
        for (const auto& w : layer) {
            bool accepted = false;
            bool some_initial_hides = false;
            std::optional<Witness> first_leak;
            for (const auto& q0 : model.initial) {
                std::vector<Run> runs = start_runs(model, {q0});
                for (const auto& x : w) {
                    std::vector<Run> next;
                    for (const auto& r : runs)
                        for (const Edge* e : detail::edges_from(model, r.end(), x)) {
                            Run extended = r;
                            extended.steps.push_back({e->input, e->output, e->to});
                            next.push_back(std::move(extended));
                        }
                    runs = std::move(next);
                }
                if (runs.empty()) continue;
                accepted = true;
                std::map<LabelWord, StateSet> by_observation;
                for (const auto& r : runs) {
                    LabelWord labels;
                    for (const auto& s : r.steps) labels.push_back(label_of(s, model.alphabet));
                    by_observation[labels].insert(r.end());
                }
                bool hides = detail::intersects(run_ends(runs), sets.nonsecret);
                for (const auto& [labels, ends] : by_observation) {
                    if (detail::intersects(ends, sets.nonsecret)) continue;
                    hides = false;
                    if (!first_leak)
                        first_leak = Witness{w, label_observation(labels), ends, labels};
                }
                if (hides) {
                    some_initial_hides = true;
                    break;
                }
                if (!first_leak)
                    first_leak = Witness{w, {}, run_ends(runs), {}};
            }
            if (accepted && !some_initial_hides) {
                v.opaque = false;
                v.witness = first_leak;
                return v;
            }
        }
        std::vector<Word> next;
        for (const auto& w : layer)
            for (const auto& x : model.alphabet.inputs) {
                auto longer = w;
                longer.push_back(x);
                next.push_back(std::move(longer));
            }
        layer = std::move(next);
    }
    return v;
}

/// Certified answer of an exact verdict when only label words up to `bound` are considered.
inline bool opaque_within(const Verdict& v, std::size_t bound) {
    return v.opaque || (v.witness && v.witness->labels.size() > bound);
}

}  // namespace ropacity
