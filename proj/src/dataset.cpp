#include "themis/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "themis/errors.hpp"

namespace themis {

namespace {

void check_images_resolve(const Trajectory& t, long line) {
    auto check = [&](const ImageRef& r) {
        if (r.kind == ImageRef::Kind::path && !std::filesystem::exists(r.value))
            throw DatasetError("image reference unresolvable: " + r.value, line);
    };
    for (const auto& s : t.steps) {
        if (!s.screenshot.is_missing()) check(s.screenshot);
    }
    if (t.final_screenshot && !t.final_screenshot->is_missing()) check(*t.final_screenshot);
}

}  // namespace

LoadResult load_dataset(const std::string& path, bool strict) {
    std::ifstream in(path);
    if (!in) throw DatasetError("dataset file missing: " + path);

    LoadResult result;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            json j = json::parse(line);
            Trajectory t = trajectory_from_json(j);
            if (strict) check_images_resolve(t, line_no);
            result.trajectories.push_back(std::move(t));
        } catch (const DatasetError&) {
            throw;
        } catch (const std::exception& e) {
            if (strict) throw DatasetError(e.what(), line_no);
            ++result.skipped;
            result.skip_reasons.push_back("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return result;
}

std::string trajectory_to_line(const Trajectory& t) {
    json j = t;
    return j.dump();
}

void save_dataset(const std::string& path, const std::vector<Trajectory>& trajectories) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw DatasetError("cannot open sink for writing: " + path);
    for (const auto& t : trajectories) out << trajectory_to_line(t) << '\n';
}

std::string dataset_hash(const std::vector<Trajectory>& trajectories) {
    // Sum of per-record FNV-1a digests, so the hash is order-insensitive.
    std::uint64_t acc = 0;
    for (const auto& t : trajectories) {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](const std::string& s) {
            for (unsigned char c : s) {
                h ^= c;
                h *= 1099511628211ull;
            }
            h ^= 0xff;
            h *= 1099511628211ull;
        };
        mix(t.task.task_id);
        mix(to_string(t.task.platform));
        mix(t.label ? (*t.label ? "1" : "0") : "-");
        acc += h;
    }
    std::ostringstream os;
    os << std::hex << acc;
    return os.str();
}

GeneratorSpec GeneratorSpec::benchmark_split() {
    GeneratorSpec spec;
    spec.platforms = {{Platform::ubuntu, 393, 348},
                      {Platform::android, 98, 90},
                      {Platform::windows, 94, 119},
                      {Platform::macos, 16, 61},
                      {Platform::web, 99, 91}};
    return spec;
}

namespace {

Trajectory make_synthetic(const std::string& id, Platform platform, bool label, int steps,
                          std::mt19937_64& rng) {
    Trajectory t;
    t.task.task_id = id;
    t.task.instruction = "Synthetic task " + id + ": reach the target state.";
    t.task.platform = platform;
    t.agent_model = "synthetic-agent";
    t.label = label;
    std::uniform_int_distribution<int> act(0, 3);
    static const char* kActions[] = {"click(button)", "type(text)", "swipe(down)", "open(menu)"};
    for (int i = 0; i < steps; ++i) {
        Step s;
        s.index = i;
        s.screenshot = ImageRef::from_base64("frame-" + id + "-" + std::to_string(i));
        s.think = "step " + std::to_string(i) + " reasoning";
        s.action = kActions[act(rng)];
        t.steps.push_back(std::move(s));
    }
    t.final_screenshot = ImageRef::from_base64("frame-" + id + "-final");
    return t;
}

}  // namespace

std::vector<Trajectory> generate_synthetic_dataset(const GeneratorSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<int> len(spec.min_steps, std::max(spec.min_steps, spec.max_steps));
    std::vector<Trajectory> out;
    int serial = 0;
    for (const auto& pc : spec.platforms) {
        for (int i = 0; i < pc.positives + pc.negatives; ++i) {
            bool label = i < pc.positives;
            std::string id = to_string(pc.platform) + "-" + std::to_string(serial++);
            out.push_back(make_synthetic(id, pc.platform, label, len(rng), rng));
        }
    }
    return out;
}

}  // namespace themis
