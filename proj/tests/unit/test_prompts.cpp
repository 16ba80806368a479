#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "themis/prompts.hpp"

using namespace themis;

TEST_SUITE("prompts") {

TEST_CASE("reviewer render embeds context values verbatim") {
    PromptLibrary lib = PromptLibrary::builtin();
    ChatRequest request = render(lib.get("reviewer_critic"),
                                 {{"task_goal", "open app"},
                                  {"agent_history", "[{\"step_index\":0}]"},
                                  {"milestone_report", "{}"}});
    REQUIRE(request.messages.size() == 2);
    const std::string& user = request.messages[1].text;
    CHECK(user.find("Task goal:\nopen app") != std::string::npos);
    CHECK(user.find("Agent history:\n[{\"step_index\":0}]") != std::string::npos);
    CHECK(request.messages[0].text.find("risk") != std::string::npos);
}

TEST_CASE("zero-placeholder template is an identity") {
    PromptTemplate tmpl{AgentRole::judge, "t", "system text", "user text"};
    ChatRequest request = render(tmpl, {});
    CHECK(request.messages[0].text == "system text");
    CHECK(request.messages[1].text == "user text");
}

TEST_CASE("images attach in pre-then-post order") {
    PromptLibrary lib = PromptLibrary::builtin();
    std::vector<ImageRef> images = {ImageRef::from_base64("PRE"), ImageRef::from_base64("POST")};
    ChatRequest request = render(lib.get("verifier"),
                                 {{"task_goal", "g"},
                                  {"step_index", "3"},
                                  {"milestone", "{}"},
                                  {"criterion", "c"},
                                  {"action", "a"},
                                  {"think", "t"},
                                  {"image_note", "two screenshots"}},
                                 images);
    REQUIRE(request.messages[1].images.size() == 2);
    CHECK(request.messages[1].images[0].value == "PRE");
    CHECK(request.messages[1].images[1].value == "POST");
}

TEST_CASE("missing placeholder is an error") {
    PromptTemplate tmpl{AgentRole::judge, "t", "", "needs {{thing}}"};
    CHECK_THROWS_AS(render(tmpl, {}), SchemaError);
}

TEST_CASE("declared image slots must match the attachment count") {
    PromptTemplate tmpl{AgentRole::verifier, "t", "", "before {{image}} after {{image}}"};
    std::vector<ImageRef> one = {ImageRef::from_base64("A")};
    CHECK_THROWS_AS(render(tmpl, {}, one), SchemaError);
    std::vector<ImageRef> two = {ImageRef::from_base64("A"), ImageRef::from_base64("B")};
    ChatRequest request = render(tmpl, {}, two);
    CHECK(request.messages[0].text.find("[image 1]") != std::string::npos);
    CHECK(request.messages[0].text.find("[image 2]") != std::string::npos);
}

TEST_CASE("render is deterministic") {
    PromptLibrary lib = PromptLibrary::builtin();
    std::map<std::string, std::string> ctx = {{"task_goal", "g"}, {"agent_history", "[]"}};
    ChatRequest a = render(lib.get("selector_initial"), ctx);
    ChatRequest b = render(lib.get("selector_initial"), ctx);
    CHECK(a.messages[0].text == b.messages[0].text);
    CHECK(a.messages[1].text == b.messages[1].text);
}

TEST_CASE("templates export and reload from a directory") {
    const auto dir = std::filesystem::temp_directory_path() / "themis_prompt_export";
    std::filesystem::remove_all(dir);
    PromptLibrary::export_builtin(dir.string());
    PromptLibrary reloaded = PromptLibrary::from_dir(dir.string());
    PromptLibrary builtin = PromptLibrary::builtin();
    for (const char* name : {"selector_initial", "selector_refine", "verifier", "reviewer_critic",
                             "reviewer_advisor", "judge"}) {
        CHECK(reloaded.get(name).system_text == builtin.get(name).system_text);
        CHECK(reloaded.get(name).user_text == builtin.get(name).user_text);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("directory templates override built-ins by path") {
    const auto dir = std::filesystem::temp_directory_path() / "themis_prompt_override";
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "judge.txt");
        out << "<<<SYSTEM>>>\ncustom judge\n<<<USER>>>\ngoal: {{task_goal}}\n"
               "summary: {{trajectory_summary}}\nrecord: {{deliberation}}\n";
    }
    PromptLibrary lib = PromptLibrary::from_dir(dir.string());
    CHECK(lib.get("judge").system_text == "custom judge");
    CHECK(lib.get("verifier").system_text == PromptLibrary::builtin().get("verifier").system_text);
    std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
