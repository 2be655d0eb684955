// Copyright (c) altest contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "altest/ast.hpp"
#include "altest/instance.hpp"

namespace altest {

struct ScopeBound {
    int bound = 3;
    bool exact = false;
};

// Effective per-top-level-signature scopes for a command: explicit entries,
// the default bound of 3 for missing signatures, exactness forced for
// ordered signatures.
using ScopeMap = std::map<int, ScopeBound>;
ScopeMap effective_scopes(const Model& model, const RunCommand& cmd);
ScopeMap default_scopes(const Model& model, int bound);

struct SolveBudget {
    std::int64_t time_ms = 10'000;
    std::uint64_t max_nodes = 10'000'000;
};

enum class Outcome { Sat, Unsat, Exhausted };

const char* to_string(Outcome o);

struct SolveStats {
    std::uint64_t nodes = 0;
    std::uint64_t instances_examined = 0;
    double elapsed_ms = 0.0;
    bool used_valuation_fast_path = false;
};

struct SolveResult {
    Outcome outcome = Outcome::Unsat;
    std::optional<Instance> witness;  // present iff Sat
    SolveStats stats;
};

// Decides satisfiability of `cmd.body` under the model's facts plus
// `extra_facts`, within the command's scopes. Backtracking search over
// signature extents, hierarchy memberships and field values; full
// valuations written in the `some disj` idiom short-circuit the search.
// Budget exhaustion is a distinct outcome, never silently Unsat.
SolveResult solve(const Model& model, const std::vector<FormulaPtr>& extra_facts,
                  const RunCommand& cmd, const SolveBudget& budget = {});

// Recognizes the `some disj` full-valuation idiom: an outer existential
// prefix of disjoint variables over top-level signatures followed by a
// conjunction of ground equalities covering every signature, field and
// ordering. Returns the directly constructed instance, or nothing when the
// body does not match.
std::optional<Instance> extract_valuation(const Model& model, const RunCommand& cmd);

struct EnumerateOptions {
    bool break_symmetry = false;
    std::uint64_t limit = UINT64_MAX;      // max instances yielded
    std::uint64_t max_nodes = UINT64_MAX;  // search-node guard
};

struct EnumerateResult {
    std::uint64_t count = 0;
    bool limit_hit = false;
    bool nodes_exhausted = false;
};

// Yields every structurally valid instance within `scopes` satisfying the
// model's facts plus `extra_facts`, without duplicates under exact atom
// identity. The sink returns false to stop early. Intended for small scopes
// only; this is the brute-force oracle behind the solver.
EnumerateResult enumerate(const Model& model,
                          const std::vector<FormulaPtr>& extra_facts,
                          const ScopeMap& scopes, const EnumerateOptions& opts,
                          const std::function<bool(const Instance&)>& sink);

}  // namespace altest
