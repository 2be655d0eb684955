// Copyright (c) altest contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "altest/llm.hpp"
#include "altest/pipeline.hpp"
#include "altest/solver.hpp"

namespace altest::cli {

// Exit codes: 0 success / expectation match, 1 semantic mismatch or failed
// check, 2 usage and I/O errors.
inline constexpr int kOk = 0;
inline constexpr int kMismatch = 1;
inline constexpr int kUsage = 2;

struct RunConfig {
    std::filesystem::path corpus;
    std::string run_id;
    PromptKind prompt = PromptKind::FewShot;
    int n = 3;
    std::string provider_id;
    std::filesystem::path providers_file;
    std::filesystem::path prompts_dir;
    bool repair = false;
    int jobs = 1;
    SolveBudget budget;
    std::vector<ReportFormat> formats = {ReportFormat::Json};
    bool strict_unique = false;
};

int cmd_parse(const std::filesystem::path& path, std::ostream& out, std::ostream& err);

int cmd_run(const std::filesystem::path& model_path, const std::string& command_name,
            const std::vector<std::string>& assume_preds,
            const std::vector<std::string>& assume_formulas, const SolveBudget& budget,
            bool print_witness, std::ostream& out, std::ostream& err);

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err);

int cmd_detect(const RunConfig& config, std::ostream& out, std::ostream& err);

int cmd_generate(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace altest::cli
