// Copyright (c) altest contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "altest/ast.hpp"
#include "altest/parser.hpp"

namespace altest {

// Column type at top-level-signature granularity: the set of top-level
// signatures whose atoms may appear in that column. `any` covers univ/iden.
struct ColType {
    bool any = false;
    std::uint64_t mask = 0;

    static ColType of_top(int top) { return {false, std::uint64_t{1} << top}; }
    static ColType anything() { return {true, 0}; }
    static ColType empty() { return {false, 0}; }
    bool is_empty() const { return !any && mask == 0; }
    ColType meet(const ColType& o) const;
    ColType join(const ColType& o) const;
};

struct TypeInfo {
    std::vector<ColType> cols;
    int arity() const { return static_cast<int>(cols.size()); }
};

using VarSigEnv = std::map<std::string, std::string>;  // variable -> signature

// Resolves names in-place (unresolved nodes only) and computes the arity of
// `e` in the model, with quantified variables typed by `env`. Pure in the
// sense that repeated calls return identical results.
ParseResult<int> arity_of(const Model& model, const VarSigEnv& env, Expr& e);

// Full resolution passes used by the parser; exposed for tests and for
// resolving caller-built ASTs against a model.
ParseResult<TypeInfo> resolve_expr(const Model& model, const VarSigEnv& env, Expr& e);
ParseResult<std::monostate> resolve_formula(const Model& model, const VarSigEnv& env,
                                            Formula& f);

// Builds lookup tables, resolves the signature hierarchy, orderings and all
// declaration bodies. `ordering_names` are the `open util/ordering[S]`
// targets in source order.
std::optional<ParseError> resolve_model(Model& model,
                                        const std::vector<std::string>& ordering_names);

// Resolves a command's scopes and body against an already resolved model.
std::optional<ParseError> resolve_command(const Model& model, RunCommand& cmd);

}  // namespace altest
