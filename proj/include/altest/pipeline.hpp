// Copyright (c) altest contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "altest/ast.hpp"
#include "altest/instance.hpp"
#include "altest/solver.hpp"

namespace altest {

enum class Polarity { Positive, Negative };

struct TestCase {
    int requirement = 0;
    std::optional<Polarity> polarity;  // declared by the generator
    std::string raw;
    std::optional<std::string> comment;
};

enum class Stage { SyntaxFail, Inconsistent, PreviousFail, OracleFail, Valid, Inconclusive };

const char* to_string(Stage s);

struct StageResult {
    Stage reached = Stage::SyntaxFail;
    // Funnel stages passed: 1 syntax, 2 consistent, 3 previous, 4 valid.
    int stages_passed = 0;
    std::string detail;
    std::optional<Instance> witness;
};

struct ClassifyOptions {
    SolveBudget budget;
    // Diagnostic only: probe whether a consistent test admits a second
    // witness (under-specified valuation). Does not change the stage.
    bool report_nonunique = false;
};

// Runs one test through the four-stage funnel: parse, consistency,
// previous-requirements, oracle agreement. Requirement 0 skips the previous
// stage. Budget exhaustion at any stage yields Inconclusive.
StageResult classify_test(const Model& model, const std::vector<Requirement>& reqs,
                          const TestCase& t, const ClassifyOptions& opts = {});

// The oracle formulas of requirements [0, upto). Throws std::invalid_argument
// if an oracle predicate is missing or takes parameters.
std::vector<FormulaPtr> oracle_formulas(const Model& model,
                                        const std::vector<Requirement>& reqs,
                                        std::size_t upto);

struct RequirementCounts {
    int requirement = 0;
    int tests = 0;
    int syntax = 0;
    int consistent = 0;
    int previous = 0;
    int valid = 0;
    int inconclusive = 0;

    bool operator==(const RequirementCounts&) const = default;
};

struct CostEcho {
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;
    std::int64_t reasoning_tokens = 0;
    double price_usd = 0.0;

    bool operator==(const CostEcho&) const = default;
};

struct SuiteReport {
    std::string label;  // run id / example name
    std::vector<RequirementCounts> rows;
    RequirementCounts totals;  // requirement field unused
    double percent = 0.0;      // valid / tests * 100
    std::optional<CostEcho> cost;
    std::optional<int> pre_repair_syntax;  // set when repaired suites are classified

    // Provenance.
    std::string tool_version;
    SolveBudget budget;
    std::optional<std::string> prompt_hash;

    bool operator==(const SuiteReport&) const = default;
};

SuiteReport validate_suite(const Model& model, const std::vector<Requirement>& reqs,
                           const std::vector<TestCase>& suite,
                           const ClassifyOptions& opts = {}, int jobs = 1);

// Aggregation from per-test classifications alone; validate_suite is
// classify-then-aggregate, and replaying published per-test data reuses
// this entry point.
struct ClassificationRecord {
    int requirement = 0;
    int stages_passed = 0;
    bool inconclusive = false;
};
SuiteReport aggregate_classifications(const std::vector<ClassificationRecord>& records);

enum class ReportFormat { Json, Csv, Markdown };

std::string emit_report(const SuiteReport& report, ReportFormat format);

nlohmann::json report_to_json(const SuiteReport& report);
SuiteReport report_from_json(const nlohmann::json& doc);

}  // namespace altest
