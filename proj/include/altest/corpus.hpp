// Copyright (c) altest contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "altest/ast.hpp"
#include "altest/mutation.hpp"
#include "altest/pipeline.hpp"

namespace altest {

// Corpus layout, one directory per example:
//   <example>/model.als
//   <example>/requirements.yaml      - text, oracle        (ordered list)
//   <example>/suites/<run-id>/<i>.als
//   <example>/wrong_specs/<i>.als
// Reports are written to <root>/reports/.

struct CorpusError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CorpusExample {
    std::string name;
    std::filesystem::path dir;
    std::string model_text;
    Model model;
    std::vector<Requirement> requirements;
};

CorpusExample load_example(const std::filesystem::path& dir);
std::vector<CorpusExample> load_corpus(const std::filesystem::path& root);

// Suite files hold extracted run commands; polarity comes from a
// Positive/Negative name prefix when present, otherwise from the expect
// clause.
std::vector<TestCase> load_suite_file(const std::filesystem::path& file,
                                      int requirement);
std::vector<TestCase> load_suite_dir(const CorpusExample& ex,
                                     const std::filesystem::path& suite_dir);

std::vector<WrongSpec> load_wrong_specs(const CorpusExample& ex, int requirement);

void write_suite_file(const std::filesystem::path& file,
                      const std::vector<ExtractedCommand>& commands);

}  // namespace altest
