#include <doctest.h>

#include <sstream>

#include "dyncomm/cli.hpp"
#include "dyncomm/io.hpp"
#include "helpers.hpp"

using namespace dyncomm;
namespace dt = dyncomm::testing;
namespace fs = std::filesystem;

namespace {

int cli(std::initializer_list<std::string> args, std::string* err_text = nullptr) {
    std::vector<std::string> storage{"dyncomm"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : storage) argv.push_back(s.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (err_text) *err_text = err.str();
    return code;
}

fs::path write_config(const dt::TempDir& dir, const std::string& body) {
    const auto path = dir / "config.json";
    write_file_atomic(path, body);
    return path;
}

const char* kConfig = R"({
  "n_nodes": 40, "basal_rate": 0.01, "basal_fanout": 3, "response_fanout": 3,
  "horizon": 2000, "polarization_onset": 1000, "seed": 3, "interval": 100
})";

}  // namespace

TEST_CASE("parse_window and parse_seeds") {
    CHECK(parse_window("1..8000") == StepWindow{1, 8000});
    CHECK(parse_window("5..5") == StepWindow{5, 5});
    CHECK_THROWS_AS(parse_window("8000..1"), ConfigError);
    CHECK_THROWS_AS(parse_window("0..4"), ConfigError);
    CHECK_THROWS_AS(parse_window("1-4"), ConfigError);
    CHECK_THROWS_AS(parse_window("a..b"), ConfigError);

    CHECK(parse_seeds("3", 10) == std::vector<std::uint64_t>{10, 11, 12});
    CHECK(parse_seeds("7,2,9", 10) == std::vector<std::uint64_t>{7, 2, 9});
    CHECK(parse_seeds("5,", 10) == std::vector<std::uint64_t>{5});
    CHECK_THROWS_AS(parse_seeds("0", 1), ConfigError);
    CHECK_THROWS_AS(parse_seeds("1,x", 1), ConfigError);
}

TEST_CASE("simulate writes a reproducible bundle") {
    dt::TempDir dir;
    const auto config = write_config(dir, kConfig);
    REQUIRE(cli({"simulate", "--config", config.string(), "--out", (dir / "a").string()}) == 0);
    REQUIRE(cli({"simulate", "--config", config.string(), "--out", (dir / "b").string()}) == 0);
    for (const char* name : {"events.csv", "responses.csv", "importance_trace.csv", "trigger_pre.csv",
                             "trigger_post.csv", "relative_scores.csv", "ratio_series.csv",
                             "manifest.json"}) {
        INFO(name);
        REQUIRE(fs::exists(dir / "a" / name));
        CHECK(read_file(dir / "a" / name) == read_file(dir / "b" / name));
    }
}

TEST_CASE("simulate error paths") {
    dt::TempDir dir;
    std::string err;
    auto bad = write_config(dir, R"({"n_nodes": 40, "basal_rate": 0.01, "basal_fanout": 40,
        "response_fanout": 3, "horizon": 10, "polarization_onset": 5, "seed": 1})");
    CHECK(cli({"simulate", "--config", bad.string(), "--out", (dir / "o").string()}, &err) == 2);
    CHECK(err.find("basal_fanout must be <= n_nodes - 1") != std::string::npos);

    CHECK(cli({"simulate", "--config", (dir / "nope.json").string(), "--out", (dir / "o").string()}) == 3);

    const auto good = write_config(dir, kConfig);
    write_file_atomic(dir / "plainfile", "x");
    CHECK(cli({"simulate", "--config", good.string(), "--out", (dir / "plainfile" / "sub").string()}) == 3);

    CHECK(cli({"simulate", "--config", good.string()}) == 2);
    CHECK(cli({"bogus"}) == 2);
}

TEST_CASE("metrics recomputes from a stored log") {
    dt::TempDir dir;
    const auto config = write_config(dir, kConfig);
    const auto bundle = dir / "run";
    REQUIRE(cli({"simulate", "--config", config.string(), "--out", bundle.string()}) == 0);

    REQUIRE(cli({"metrics", "--log", bundle.string(), "--window", "1..1000", "--out", (dir / "pre").string()}) == 0);
    CHECK(read_file(dir / "pre" / "trigger_matrix.csv") == read_file(bundle / "trigger_pre.csv"));

    REQUIRE(cli({"metrics", "--log", (bundle / "events.csv").string(), "--window", "1001..2000", "--out",
                 (dir / "post").string()}) == 0);
    CHECK(read_file(dir / "post" / "trigger_matrix.csv") == read_file(bundle / "trigger_post.csv"));

    // Whole-run window across the onset reproduces the experiment's series.
    REQUIRE(cli({"metrics", "--log", bundle.string(), "--window", "1..2000", "--ratio", "top=21..40",
                 "bottom=1..20", "--interval", "100", "--out", (dir / "all").string()}) == 0);
    CHECK(read_file(dir / "all" / "ratio_series.csv") == read_file(bundle / "ratio_series.csv"));

    std::string err;
    CHECK(cli({"metrics", "--log", bundle.string(), "--window", "2000..1", "--out", (dir / "x").string()}, &err) == 2);
    CHECK(err.find("reversed") != std::string::npos);
    CHECK(cli({"metrics", "--log", bundle.string(), "--window", "1..2001", "--out", (dir / "x").string()}) == 2);
    CHECK(cli({"metrics", "--log", bundle.string(), "--window", "1..10", "--ratio", "top=21..41",
               "bottom=1..20", "--out", (dir / "x").string()}) == 2);
    CHECK(cli({"metrics", "--log", bundle.string(), "--window", "1..10", "--ratio", "top=1..20",
               "bottom=1..20", "--out", (dir / "x").string()}) == 2);

    write_file_atomic(bundle / "responses.csv", "step,node,event\n1,1,responded\n");
    CHECK(cli({"metrics", "--log", bundle.string(), "--window", "1..10", "--out", (dir / "x").string()}, &err) == 3);
    CHECK(cli({"metrics", "--log", (dir / "missing").string(), "--window", "1..10", "--out", (dir / "x").string()}) == 3);
}

TEST_CASE("sweep writes per-seed bundles and medians") {
    dt::TempDir dir;
    const auto config = write_config(dir, kConfig);
    const auto out = dir / "sweep";
    REQUIRE(cli({"sweep", "--config", config.string(), "--seeds", "3", "--out", out.string()}) == 0);
    for (const char* seed : {"seed_3", "seed_4", "seed_5"}) {
        INFO(seed);
        REQUIRE(fs::exists(out / seed / "events.csv"));
        const auto log = read_event_log(out / seed);
        CHECK(log.config.seed == std::stoull(std::string(seed).substr(5)));
        auto replay = log.config;
        CHECK(run(replay) == log);
    }
    const auto medians = read_file(out / "ratio_median.csv");
    CHECK(medians.rfind("step,median_ratio\n100,", 0) == 0);
    const auto by_seed = read_file(out / "ratio_by_seed.csv");
    CHECK(by_seed.rfind("step,seed_3,seed_4,seed_5\n", 0) == 0);

    REQUIRE(cli({"sweep", "--config", config.string(), "--seeds", "8,9", "--metrics-only", "--threads",
                 "2", "--out", (dir / "lite").string()}) == 0);
    CHECK(fs::exists(dir / "lite" / "seed_9" / "ratio_series.csv"));
    CHECK_FALSE(fs::exists(dir / "lite" / "seed_9" / "events.csv"));
}
