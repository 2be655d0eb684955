// Copyright (c) altest contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "altest/ast.hpp"

namespace altest {

enum class ErrorKind { Lexical, Syntactic, Resolution, Arity };

const char* to_string(ErrorKind k);

struct ParseError {
    SourceSpan span;
    std::string message;
    ErrorKind kind = ErrorKind::Syntactic;

    std::string to_string() const;  // "line:col: kind: message"
};

template <class T>
using ParseResult = std::variant<T, ParseError>;

template <class T>
bool is_ok(const ParseResult<T>& r) {
    return std::holds_alternative<T>(r);
}
template <class T>
const T& get_value(const ParseResult<T>& r) {
    return std::get<T>(r);
}
template <class T>
T& get_value(ParseResult<T>& r) {
    return std::get<T>(r);
}
template <class T>
const ParseError& get_error(const ParseResult<T>& r) {
    return std::get<ParseError>(r);
}

// Parses and resolves a full model: ordering opens, signature blocks, facts,
// predicates, functions and run commands. All names are bound and all bodies
// arity-checked on success.
ParseResult<Model> parse_model(std::string_view text);

// Parses a single run command in the context of an already resolved model.
// `require_expect` is on for corpus files; text extracted from LLM responses
// may omit the expect clause, which is recorded and fails classification
// later instead of failing here.
ParseResult<RunCommand> parse_command(const Model& model, std::string_view text,
                                      bool require_expect = true);

// Parses a sequence of 0-ary predicate declarations (wrong-spec pools).
// A `-- freq: n` comment immediately before a predicate attaches to it.
struct NamedFormula {
    std::string name;
    FormulaPtr body;
    std::optional<int> freq;
};
ParseResult<std::vector<NamedFormula>> parse_pred_fragment(const Model& model,
                                                           std::string_view text);

// One candidate test case recovered from free-form response text.
struct ExtractedCommand {
    std::string raw;                     // source slice starting at `run`
    std::optional<std::string> comment;  // natural-language comment right before it
};

// Splits response text on top-level `run` keywords, stripping markdown code
// fences first. Never fails; garbage yields an empty list or commands that
// fail to parse downstream.
std::vector<ExtractedCommand> extract_commands(std::string_view response_text);

}  // namespace altest
