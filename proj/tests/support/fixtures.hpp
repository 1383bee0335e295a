#pragma once

#include <filesystem>
#include <string>

#include "ropacity/ropacity.hpp"

namespace fixtures {

using namespace ropacity;

inline OpenDes fig1() { return load_model(ROPACITY_MODELS "/fig1.odes"); }

/// The four-state example exactly as drawn, without the extra silent response at state 3.
inline OpenDes fig1_as_drawn() {
    auto m = fig1();
    m.edges.erase({"3", "x2", "~", "3"});
    return m;
}

inline OpenDes make(StateSet states, SymbolSet inputs, SymbolSet outputs, SymbolSet observable,
                    StateSet initial, std::set<Edge> edges) {
    OpenDes m;
    m.states = std::move(states);
    m.alphabet = {std::move(inputs), std::move(outputs), std::move(observable)};
    m.initial = std::move(initial);
    m.edges = std::move(edges);
    return m;
}

inline Nfa nfa(StateSet states, SymbolSet events, StateSet initial, StateSet marked,
               std::set<Transition> transitions) {
    return {std::move(states), std::move(events), std::move(initial), std::move(transitions),
            std::move(marked)};
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("ropacity_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace fixtures
