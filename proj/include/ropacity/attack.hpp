#pragma once

// Attack plans extracted from the active-intruder observer. A plan is open-loop: it names one
// input sequence and one response sequence that, if observed, pins the system inside the
// secret. It does not claim the system is forced to respond that way.

#include <optional>

#include "observer.hpp"
#include "semantics.hpp"
#include "verify.hpp"

namespace ropacity {

struct AttackPlan {
    LabelWord labels;
    Word inputs;
    Word observation;
    StateSet final_estimate;
};

inline std::optional<AttackPlan> synthesize_attack(const OpenDes& model, const SecretSets& sets) {
    auto verdict = verify_rcso(model, sets);
    if (verdict.opaque) return std::nullopt;
    const auto& w = *verdict.witness;
    return AttackPlan{w.labels, w.inputs, w.observation, w.estimate};
}

inline std::optional<AttackPlan> synthesize_attack(const OpenDes& model, const StateSet& secret) {
    return synthesize_attack(model, secret_sets(model, secret));
}

/// Re-checks a plan against run enumeration only: the labels must agree with the plan's
/// inputs and observation, and the runs they admit must end in an exposing estimate.
inline bool replay(const OpenDes& model, const AttackPlan& plan, const SecretSets& sets) {
    if (label_inputs(plan.labels) != plan.inputs) return false;
    if (label_observation(plan.labels) != plan.observation) return false;
    auto estimate = estimate_labels(model, plan.labels);
    return !estimate.empty() && exposes(estimate, sets.secret, sets.nonsecret);
}

inline bool replay(const OpenDes& model, const AttackPlan& plan, const StateSet& secret) {
    return replay(model, plan, secret_sets(model, secret));
}

}  // namespace ropacity
