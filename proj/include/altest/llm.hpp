// Copyright (c) altest contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "altest/ast.hpp"
#include "altest/parser.hpp"

namespace altest {

enum class PromptKind { ZeroShot, OneShot, FewShot };

const char* to_string(PromptKind k);
std::optional<PromptKind> prompt_kind_from_string(const std::string& s);

struct PromptVariant {
    PromptKind kind = PromptKind::FewShot;
    std::string system_text;
};

// Loads `<dir>/{zero,one,few}_shot.txt`.
PromptVariant load_prompt(PromptKind kind, const std::filesystem::path& prompts_dir);

struct GenerationJob {
    std::string model_text;
    std::vector<Requirement> requirements;
    int target_index = 0;      // i
    int tests_per_polarity = 1;  // N
    std::string provider_id;
    std::optional<double> temperature;
};

// The user prompt: the request sentence, the previous-requirements sentence
// (dropped for i = 0, singular for i = 1), then the model source.
std::string build_user_prompt(const GenerationJob& job);

// ---------------------------------------------------------------------------
// Providers
// ---------------------------------------------------------------------------

struct ProviderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TokenUsage {
    std::int64_t input = 0;
    std::int64_t output = 0;
    std::int64_t reasoning = 0;
};

struct ChatRequest {
    std::string system_text;
    std::string user_text;
    std::optional<double> temperature;
    std::string tag;  // caller-provided key, e.g. "courses/0"; mock replay keys on it
};

struct ChatResponse {
    std::string text;
    TokenUsage usage;
    std::string provider_version;
};

class ChatProvider {
  public:
    virtual ~ChatProvider() = default;
    virtual ChatResponse complete(const ChatRequest& req) = 0;
};

using ConfigValue = std::variant<std::string, double, bool>;
using ConfigTable = std::map<std::string, ConfigValue>;

struct ProviderConfig {
    std::string id;
    std::string type;  // "openai-chat" or "mock"
    std::string endpoint;
    std::string model;
    std::string key_env;
    double input_price_per_mtok = 0.0;
    double output_price_per_mtok = 0.0;
    std::optional<double> temperature;
    // mock:
    std::filesystem::path replay_dir;
    std::optional<std::string> fixed_response;

    double price_for(const TokenUsage& usage) const;
};

// Minimal TOML subset: [tables], string/number/bool values, # comments.
std::map<std::string, ConfigTable> parse_toml_tables(std::string_view text);
std::map<std::string, ProviderConfig> load_providers(const std::filesystem::path& file);

std::unique_ptr<ChatProvider> make_provider(const ProviderConfig& config);

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

struct GenerationRecord {
    std::string provider_id;
    std::string provider_version;
    PromptKind prompt_kind = PromptKind::FewShot;
    int requirement = 0;
    int tests_per_polarity = 1;
    std::optional<double> temperature;
    std::string user_prompt;
    std::string prompt_hash;   // system text fingerprint
    std::string raw_response;  // persisted verbatim before post-processing
    std::vector<ExtractedCommand> extracted;
    bool flagged_empty = false;  // response contained no run command
    TokenUsage usage;
    double price_usd = 0.0;
    std::string timestamp;
};

GenerationRecord generate(const GenerationJob& job, const PromptVariant& prompt,
                          ChatProvider& provider, const std::string& tag = {});

nlohmann::json generation_record_to_json(const GenerationRecord& rec);

// ---------------------------------------------------------------------------
// Syntax repair (the `R = none` arity fix)
// ---------------------------------------------------------------------------

struct RepairResult {
    std::string repaired;
    std::vector<std::string> edits;
};

// Rewrites `F = none` (and `F = no F`) to the arity-correct product of
// `none` when F resolves to a field or ordering relation of arity >= 2.
// Commands that already parse are returned untouched; the rewritten text is
// kept only if it parses.
RepairResult repair_syntax(const Model& model, const std::string& raw);

}  // namespace altest
