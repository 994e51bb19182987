#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "factjudge/core_model.hpp"

namespace factjudge {

inline constexpr std::string_view kAiResponseSlot = "{ai_response}";
inline constexpr std::string_view kGoldResponseSlot = "{gold_response}";

// A judging prompt with exactly one {ai_response} and one {gold_response}
// slot. Substitution is literal; there is no other template syntax.
struct PromptTemplate {
  PromptKind kind = PromptKind::Weighted;
  std::string body;

  bool operator==(const PromptTemplate&) const = default;
};

enum class TemplateIssueKind { Empty, MissingPlaceholder, DuplicatePlaceholder };

struct TemplateIssue {
  TemplateIssueKind kind;
  std::string placeholder;  // empty for Empty

  bool operator==(const TemplateIssue&) const = default;
};

std::vector<TemplateIssue> validate(const PromptTemplate& tmpl);

// Replaces the two slots with the verbatim inputs. Inputs are never rescanned,
// so an input containing "{gold_response}" is copied as-is.
// Throws PromptError (MissingPlaceholder, DuplicatePlaceholder, EmptyTemplate,
// EmptyInput).
std::string render(const PromptTemplate& tmpl, std::string_view ai_response,
                   std::string_view gold_response);

// Weighted fact-taxonomy prompt: critical and supporting facts must be kept,
// trivial omissions and extra facts are tolerated, seven-field JSON output.
PromptTemplate builtin_weighted_template();

// Unweighted first-step prompt. Same output format, no fact tiers and no
// tolerance criteria.
PromptTemplate builtin_baseline_template();

PromptTemplate builtin_template(PromptKind kind);

// Loads a UTF-8 template file, normalizing CRLF to LF, and validates it.
PromptTemplate load_template_file(const std::filesystem::path& path, PromptKind kind);

}  // namespace factjudge
