#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "support/golden_transcripts.hpp"
#include "themis/dataset.hpp"
#include "themis/errors.hpp"

using namespace themis;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) {
        path = (std::filesystem::temp_directory_path() / name).string();
        std::remove(path.c_str());
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("dataset") {

TEST_CASE("two valid lines load as two trajectories") {
    TempFile f("ds_two.jsonl");
    {
        std::ofstream out(f.path);
        out << trajectory_to_line(testing::make_demo_trajectory("a", 3)) << '\n';
        out << trajectory_to_line(testing::make_demo_trajectory("b", 4)) << '\n';
    }
    LoadResult r = load_dataset(f.path);
    CHECK(r.trajectories.size() == 2);
    CHECK(r.skipped == 0);
    CHECK(r.trajectories[1].step_count() == 4);
}

TEST_CASE("malformed line is skipped and counted in lenient mode") {
    TempFile f("ds_bad.jsonl");
    {
        std::ofstream out(f.path);
        out << trajectory_to_line(testing::make_demo_trajectory("a", 3)) << '\n';
        out << "{\"task_id\": \"broken\"\n";
    }
    LoadResult r = load_dataset(f.path, /*strict=*/false);
    CHECK(r.trajectories.size() == 1);
    CHECK(r.skipped == 1);
    REQUIRE(r.skip_reasons.size() == 1);
    CHECK(r.skip_reasons[0].find("line 2") != std::string::npos);

    CHECK_THROWS_AS(load_dataset(f.path, /*strict=*/true), DatasetError);
}

TEST_CASE("missing file is an error") {
    CHECK_THROWS_AS(load_dataset("/nonexistent/nowhere.jsonl"), DatasetError);
}

TEST_CASE("schema violations name the field") {
    TempFile f("ds_field.jsonl");
    {
        std::ofstream out(f.path);
        out << R"({"task_id":"x","instruction":"do","platform":"ubuntu","steps":[{"index":1,"action":"a"}]})"
            << '\n';
    }
    LoadResult r = load_dataset(f.path);
    CHECK(r.trajectories.empty());
    CHECK(r.skipped == 1);
    CHECK(r.skip_reasons[0].find("index") != std::string::npos);
}

TEST_CASE("strict mode rejects unresolvable screenshot paths") {
    Trajectory t = testing::make_demo_trajectory("p", 2);
    t.steps[0].screenshot = ImageRef::from_path("/no/such/image.png");
    TempFile f("ds_img.jsonl");
    {
        std::ofstream out(f.path);
        out << trajectory_to_line(t) << '\n';
    }
    CHECK(load_dataset(f.path, /*strict=*/false).trajectories.size() == 1);
    CHECK_THROWS_AS(load_dataset(f.path, /*strict=*/true), DatasetError);
}

TEST_CASE("round trip is structurally identical") {
    auto data = generate_synthetic_dataset(GeneratorSpec{{{Platform::web, 5, 5}}, 2, 9, 42});
    TempFile f("ds_rt.jsonl");
    save_dataset(f.path, data);
    LoadResult r = load_dataset(f.path, /*strict=*/true);
    REQUIRE(r.trajectories.size() == data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(json(data[i]) == json(r.trajectories[i]));
        for (int s = 0; s < r.trajectories[i].step_count(); ++s) {
            CHECK(r.trajectories[i].steps[s].index == s);
        }
    }
}

TEST_CASE("benchmark split matches the published totals") {
    auto data = generate_synthetic_dataset(GeneratorSpec::benchmark_split());
    CHECK(data.size() == 1409);
    std::map<Platform, std::pair<int, int>> counts;
    for (const auto& t : data) {
        REQUIRE(t.label.has_value());
        (*t.label ? counts[t.task.platform].first : counts[t.task.platform].second)++;
    }
    int pos = 0, neg = 0;
    for (const auto& [platform, pn] : counts) {
        pos += pn.first;
        neg += pn.second;
    }
    CHECK(pos == 700);
    CHECK(neg == 709);
    CHECK(counts[Platform::ubuntu] == std::pair{393, 348});
    CHECK(counts[Platform::android] == std::pair{98, 90});
    CHECK(counts[Platform::windows] == std::pair{94, 119});
    CHECK(counts[Platform::macos] == std::pair{16, 61});
    CHECK(counts[Platform::web] == std::pair{99, 91});
}

TEST_CASE("dataset hash is order-insensitive and content-sensitive") {
    auto data = generate_synthetic_dataset(GeneratorSpec{{{Platform::web, 4, 4}}, 2, 6, 7});
    auto shuffled = data;
    std::swap(shuffled.front(), shuffled.back());
    CHECK(dataset_hash(data) == dataset_hash(shuffled));
    shuffled.front().label = !*shuffled.front().label;
    CHECK(dataset_hash(data) != dataset_hash(shuffled));
}

}  // TEST_SUITE
