// Copyright (c) altest contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "altest/ast.hpp"
#include "altest/instance.hpp"

namespace altest {

using Env = std::map<std::string, int>;  // variable -> atom id

// Thrown when an evaluation would materialize an unreasonably large relation
// (adversarial product chains); the solver reports this as inconclusive.
struct EvalLimitExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxRelationTuples = 1u << 20;

// Standard relational semantics over a finite instance. `e` must be resolved
// against the instance's model; `env` must bind every free variable.
Relation eval_expr(const Instance& inst, const Env& env, const Expr& e);

// Classical two-valued semantics; quantifiers range over the evaluated unary
// bound, `disj` blocks require pairwise-distinct bindings, and lone/one are
// decided by counting satisfying bindings.
bool eval_formula(const Instance& inst, const Env& env, const Formula& f);

}  // namespace altest
