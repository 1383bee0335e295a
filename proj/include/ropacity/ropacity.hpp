#pragma once

#include "attack.hpp"
#include "automata_ops.hpp"
#include "core_model.hpp"
#include "io.hpp"
#include "nfa.hpp"
#include "observer.hpp"
#include "semantics.hpp"
#include "transforms.hpp"
#include "verify.hpp"
