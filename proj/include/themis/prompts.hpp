#pragma once

#include <map>
#include <string>
#include <vector>

#include "themis/backend.hpp"

namespace themis {

enum class AgentRole { selector_initial, selector_refine, verifier, reviewer, judge };

std::string to_string(AgentRole r);

/// A system/user prompt pair with {{placeholder}} markers. The user text may
/// contain {{image}} slots; when present, render() requires the image count
/// to match exactly. Without slots, images are attached after the text.
struct PromptTemplate {
    AgentRole agent_role = AgentRole::judge;
    std::string name;          // library key, e.g. "reviewer_critic"
    std::string system_text;
    std::string user_text;
};

/// Renders a template into a ChatRequest. Every {{placeholder}} the template
/// names must be present in the context; expansion is deterministic.
ChatRequest render(const PromptTemplate& tmpl, const std::map<std::string, std::string>& context,
                   const std::vector<ImageRef>& images = {});

/// Named prompt store. Ships with built-in texts for all six templates
/// (selector_initial, selector_refine, verifier, reviewer_critic,
/// reviewer_advisor, judge); any of them can be overridden from a directory
/// of "<name>.txt" files using `<<<SYSTEM>>>` / `<<<USER>>>` section markers.
class PromptLibrary {
public:
    static PromptLibrary builtin();
    static PromptLibrary from_dir(const std::string& dir);   // builtin + overrides

    const PromptTemplate& get(const std::string& name) const;
    bool has(const std::string& name) const;
    void set(PromptTemplate tmpl);

    /// Writes the built-in texts as template files (used by `prompts export`).
    static void export_builtin(const std::string& dir);

private:
    std::map<std::string, PromptTemplate> templates_;
};

PromptTemplate parse_template_file(const std::string& path, const std::string& name,
                                   AgentRole role);

}  // namespace themis
