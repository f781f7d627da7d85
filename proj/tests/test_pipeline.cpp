#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fdaprog/config.hpp"
#include "fdaprog/error.hpp"
#include "fdaprog/pipeline.hpp"
#include "fdaprog/sim.hpp"

using namespace fdaprog;
namespace fs = std::filesystem;

namespace {

struct TempTree {
    fs::path root;
    TempTree() {
        root = fs::temp_directory_path() / ("fdaprog_pipe_" + std::to_string(::getpid()));
        fs::create_directories(root);
    }
    ~TempTree() { fs::remove_all(root); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

config::Config small_config(const fs::path& root) {
    sim::SimConfig sc;
    sc.n_train = 24;
    sc.n_test = 6;
    auto data = sim::generate(sc);
    sim::write_files(data, (root / "data").string());
    config::Config cfg;
    cfg.train_path = (root / "data" / "train.txt").string();
    cfg.test_path = (root / "data" / "test.txt").string();
    cfg.rul_path = (root / "data" / "rul.txt").string();
    cfg.output_dir = (root / "out").string();
    cfg.basis_interior_knots = 9;   // faster at this fleet size
    cfg.lambda_count = 9;
    cfg.prognosis_k = 3;
    cfg.prognosis_fallback_drop_group = true;
    cfg.eval_curve_units = {1, 2};
    cfg.eval_fractions = {0.5, 0.8};
    return cfg;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("config parsing, overrides and validation errors") {
    TempTree tmp;
    auto path = tmp.root / "cfg.txt";
    {
        std::ofstream out(path);
        out << "# comment\n";
        out << "train_path = /tmp/a.txt\n";
        out << "prognosis.k=8\n";
        out << "eval.fractions = 0.3, 0.6\n";
        out << "sensors.mode = explicit\n";
        out << "sensors.list = T24, W32, 7\n";
    }
    auto cfg = config::load_config(path.string());
    CHECK(cfg.train_path == "/tmp/a.txt");
    CHECK(cfg.prognosis_k == 8);
    CHECK(cfg.eval_fractions == std::vector<double>({0.3, 0.6}));
    CHECK(cfg.sensors_list == std::vector<std::string>({"T24", "W32", "7"}));

    config::apply_overrides(cfg, {"prognosis.k=4", "lambda.selector=loocv"});
    CHECK(cfg.prognosis_k == 4);
    CHECK(cfg.lambda_selector == "loocv");

    CHECK_THROWS_AS(cfg.set("bogus.key", "1"), ConfigError);
    CHECK_THROWS_AS(cfg.set("prognosis.k", "abc"), ConfigError);
    config::Config bad;
    bad.prognosis_aggregate = "mode";
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("full run produces every artifact and is byte-identical across runs") {
    TempTree tmp;
    auto cfg = small_config(tmp.root);
    std::ostringstream log;
    int status = pipeline::run_command("all", cfg, log);
    REQUIRE(status == 0);

    for (const char* name :
         {"sensor_screen.txt", "model.txt", "train_groups.csv", "cutoffs.csv", "predictions.csv", "rul_eval.csv",
          "alarm_report.csv", "curve_rmse.csv", "summary.txt"})
        CHECK(fs::exists(tmp.root / "out" / name));
    for (const char* name : {"registered_curves.csv", "smooth_curves.csv", "mean_curves.csv", "eigenfunctions.csv",
                             "score_histogram.csv", "second_derivative_profiles.csv"})
        CHECK(fs::exists(tmp.root / "out" / "plots" / name));
    CHECK(fs::exists(tmp.root / "out" / "trajectories" / "unit_1.csv"));

    std::string summary_first = slurp(tmp.root / "out" / "summary.txt");
    std::string predictions_first = slurp(tmp.root / "out" / "predictions.csv");

    auto cfg2 = cfg;
    cfg2.output_dir = (tmp.root / "out2").string();
    REQUIRE(pipeline::run_command("all", cfg2, log) == 0);
    // summary embeds the config (including output_dir), compare the rest
    std::string summary_second = slurp(tmp.root / "out2" / "summary.txt");
    auto strip_dir = [](std::string s, const std::string& needle) {
        size_t pos;
        while ((pos = s.find(needle)) != std::string::npos) s.erase(pos, needle.size());
        return s;
    };
    CHECK(strip_dir(summary_first, (tmp.root / "out").string()) ==
          strip_dir(summary_second, (tmp.root / "out2").string()));
    CHECK(slurp(tmp.root / "out2" / "predictions.csv") == predictions_first);
    CHECK(slurp(tmp.root / "out2" / "model.txt") == slurp(tmp.root / "out" / "model.txt"));
}

TEST_CASE("score histogram and eigenfunction plot files have the documented shapes") {
    TempTree tmp;
    auto cfg = small_config(tmp.root);
    std::ostringstream log;
    REQUIRE(pipeline::run_command("all", cfg, log) == 0);

    std::istringstream hist(slurp(tmp.root / "out" / "plots" / "score_histogram.csv"));
    std::string line;
    std::getline(hist, line);
    CHECK(line == "unit_id,pc1_score,group");
    int rows = 0;
    while (std::getline(hist, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 24);  // one per training engine

    std::istringstream eig(slurp(tmp.root / "out" / "plots" / "eigenfunctions.csv"));
    std::getline(eig, line);
    CHECK(line == "component,sensor,v,value");
    rows = 0;
    int components = 0;
    while (std::getline(eig, line)) {
        if (line.empty()) continue;
        ++rows;
        components = std::max(components, line[0] - '0');
    }
    CHECK(rows == components * 9 * 200);  // grid x sensors x components
}

TEST_CASE("stage commands stop at their artifact set; errors carry module names") {
    TempTree tmp;
    auto cfg = small_config(tmp.root);
    std::ostringstream log;
    REQUIRE(pipeline::run_command("screen", cfg, log) == 0);
    CHECK(fs::exists(tmp.root / "out" / "sensor_screen.txt"));
    CHECK(!fs::exists(tmp.root / "out" / "model.txt"));

    CHECK_THROWS_AS(pipeline::run_command("bogus", cfg, log), ConfigError);

    auto no_rul = cfg;
    no_rul.rul_path.clear();
    CHECK_THROWS_AS(pipeline::run_command("evaluate", no_rul, log), ConfigError);

    auto missing = cfg;
    missing.train_path = (tmp.root / "nope.txt").string();
    try {
        pipeline::run_command("screen", missing, log);
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.module() == "ingest");
    }
}

TEST_CASE("explicit sensor list bypasses auto screening") {
    TempTree tmp;
    auto cfg = small_config(tmp.root);
    cfg.sensors_mode = "explicit";
    cfg.sensors_list = {"T24", "T30", "W32"};
    std::ostringstream log;
    pipeline::DataBundle data = pipeline::load_data(cfg);
    auto screen = pipeline::run_screen(cfg, data);
    CHECK(screen.selected_ids == std::vector<int>({2, 3, 21}));
    CHECK(screen.selected_names == std::vector<std::string>({"T24", "T30", "W32"}));
}

}  // TEST_SUITE
