// Copyright (c) altest contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "altest/ast.hpp"

namespace altest {

// Concrete-syntax emitters. Output re-parses to a structurally equal AST.
std::string render(const Expr& e);
std::string render(const Formula& f);
std::string render(const RunCommand& cmd);
std::string render(const Model& model);

}  // namespace altest
