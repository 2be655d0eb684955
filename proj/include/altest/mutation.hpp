// Copyright (c) altest contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "altest/ast.hpp"
#include "altest/pipeline.hpp"
#include "altest/solver.hpp"

namespace altest {

struct WrongSpec {
    int requirement = 0;
    std::string name;
    FormulaPtr formula;
    std::optional<int> frequency;
};

struct DetectOutcome {
    bool detected = false;
    bool inconclusive = false;           // some pair exhausted before any disagreement
    int distinguishing_test = -1;        // index into the suite when detected
    std::string detail;
};

// A wrong spec is detected when some valid test's solve outcome under it
// (plus the previous oracles) disagrees with the test's expectation. A
// completed disagreeing solve is a proof either way, so detection takes
// precedence over exhaustion elsewhere in the suite.
DetectOutcome detect(const Model& model, const std::vector<Requirement>& reqs, int i,
                     const std::vector<TestCase>& valid_suite, const WrongSpec& w,
                     const SolveBudget& budget = {});

struct RequirementDetection {
    int requirement = 0;
    bool complete = false;
    int wrong = 0;         // pool size
    int missed = 0;        // decided, undetected
    int inconclusive = 0;  // excluded from missed and from the ratio
    double missed_percent = 0.0;

    bool operator==(const RequirementDetection&) const = default;
};

struct DetectionReport {
    int n = 0;  // tests per polarity
    std::vector<RequirementDetection> rows;
    int complete = 0;
    int wrong = 0;   // over complete requirements only
    int missed = 0;
    double mean_percent = 0.0;  // mean of per-requirement missed ratios

    bool operator==(const DetectionReport&) const = default;
};

// Per-requirement valid suites (only requirements with a complete suite of
// 2*N valid tests contribute) run against per-requirement wrong-spec pools.
DetectionReport detection_report(const Model& model,
                                 const std::vector<Requirement>& reqs,
                                 const std::vector<std::vector<TestCase>>& suites,
                                 const std::vector<std::vector<WrongSpec>>& wrongs,
                                 int n, const SolveBudget& budget = {});

// Groups candidate formalizations by bounded equivalence within `scopes`
// under the previous oracles, drops the class equivalent to the oracle, and
// returns one representative per class (the most frequent formulation,
// frequencies summed). Budget exhaustion keeps a pair conservatively
// distinct.
std::vector<WrongSpec> dedupe_wrong_specs(const Model& model,
                                          const std::vector<Requirement>& reqs, int i,
                                          const std::vector<WrongSpec>& candidates,
                                          const ScopeMap& scopes,
                                          const SolveBudget& budget = {});

std::string emit_detection_report(const DetectionReport& report, ReportFormat format);
nlohmann::json detection_report_to_json(const DetectionReport& report);

}  // namespace altest
