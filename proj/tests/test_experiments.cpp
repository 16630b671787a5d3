#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "oscmult/experiments.hpp"

using namespace oscmult;

namespace {

std::string csv_of(const RunReport& rep) {
    std::ostringstream os;
    rep.to_csv(os);
    return os.str();
}

std::string rows_json(const RunReport& rep) {
    std::ostringstream os;
    rep.to_json(os);
    const auto j = nlohmann::json::parse(os.str());
    return j.at("rows").dump();
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        path = std::string("/tmp/oscmult_test_") + std::to_string(std::rand()) + ".txt";
        std::ofstream os(path);
        os << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("config file parsing and overrides") {
    TempFile file("# comment line\n"
                  "seed = 99\n"
                  "trials=7\n"
                  "grid = 64x32\n"
                  "format=json\n");
    ExperimentConfig cfg = ExperimentConfig::from_file(file.path);
    CHECK(cfg.seed == 99);
    CHECK(cfg.trials == 7);
    CHECK(cfg.L1 == 64);
    CHECK(cfg.L2 == 32);
    CHECK(cfg.format == "json");

    ExperimentConfig flags;
    flags.trials = 3;
    flags.format = std::string("csv");
    cfg.apply_overrides(flags);
    CHECK(cfg.trials == 3);
    CHECK(cfg.seed == 99);
    CHECK(cfg.format_or_csv() == "csv");
}

TEST_CASE("config rejects unknown keys and junk") {
    TempFile unknown("wibble=1\n");
    CHECK_THROWS_AS(ExperimentConfig::from_file(unknown.path), ConfigError);
    TempFile junk("seed\n");
    CHECK_THROWS_AS(ExperimentConfig::from_file(junk.path), ConfigError);
    ExperimentConfig cfg;
    CHECK_THROWS_AS(cfg.set_grid("64"), ConfigError);
    cfg.format = std::string("yaml");
    CHECK_THROWS_AS(cfg.format_or_csv(), ConfigError);
}

TEST_CASE("rm-check driver") {
    SUBCASE("zero trials give an empty success report") {
        ExperimentConfig cfg;
        cfg.command = "rm-check";
        cfg.trials = 0;
        const RunReport rep = cmd_rm_check(cfg);
        CHECK(rep.exit_code == 0);
        CHECK(rep.rows.empty());
    }
    SUBCASE("randomized run needs a seed") {
        ExperimentConfig cfg;
        cfg.command = "rm-check";
        cfg.trials = 10;
        CHECK_THROWS_AS(cmd_rm_check(cfg), ConfigError);
    }
    SUBCASE("seeded run holds everywhere") {
        ExperimentConfig cfg;
        cfg.command = "rm-check";
        cfg.trials = 200;
        cfg.seed = 1;
        const RunReport rep = cmd_rm_check(cfg);
        CHECK(rep.exit_code == 0);
        CHECK(rep.rows.empty());
        bool found = false;
        for (const auto& [k, v] : rep.summary)
            if (k == "violations") {
                CHECK(v == "0");
                found = true;
            }
        CHECK(found);
    }
}

TEST_CASE("growth-study driver") {
    ExperimentConfig cfg;
    cfg.command = "growth-study";
    cfg.seed = 11;
    cfg.trials = 4;
    cfg.s_min = 0;
    cfg.s_max = 1;
    cfg.windows = 2;
    const RunReport rep = cmd_growth_study(cfg);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.columns == std::vector<std::string>{"s", "Q1", "Q2", "lambda_count", "loglog1",
                                                  "loglog2", "ratio_max", "ratio_osc"});
    CHECK(rep.rows[0][0] == "0");
    CHECK(rep.rows[1][0] == "1");
    CHECK(rep.rows[1][1] == "6");
    CHECK(rep.rows[1][3] == "3");
    CHECK(std::stod(rep.rows[0][6]) >= 1.0 - 1e-9); // degenerate tiny set reaches ratio 1

    SUBCASE("byte-identical reruns") {
        const RunReport again = cmd_growth_study(cfg);
        CHECK(csv_of(rep) == csv_of(again));
        CHECK(rows_json(rep) == rows_json(again));
    }
    SUBCASE("product mode at s=1") {
        cfg.mode = std::string("product");
        const RunReport prod = cmd_growth_study(cfg);
        CHECK(prod.rows[1][3] == "9");
    }
    SUBCASE("infeasible s is a config error") {
        cfg.s_min = 5;
        cfg.s_max = 5;
        CHECK_THROWS_AS(cmd_growth_study(cfg), ConfigError); // lcm overflow
        cfg.s_min = 3;
        cfg.s_max = 3;
        CHECK_THROWS_AS(cmd_growth_study(cfg), ConfigError); // grid cap
    }
}

TEST_CASE("fejer-check driver is deterministic and accurate") {
    ExperimentConfig cfg;
    cfg.command = "fejer-check";
    cfg.seed = 3;
    cfg.trials = 1;
    cfg.L1 = 64;
    cfg.L2 = 64;
    const RunReport rep = cmd_fejer_check(cfg);
    CHECK(rep.exit_code == 0);
    for (const auto& row : rep.rows) CHECK(std::stod(row[5]) <= 1e-8);
    const RunReport again = cmd_fejer_check(cfg);
    CHECK(csv_of(rep) == csv_of(again));
}

TEST_CASE("osc-check driver") {
    ExperimentConfig cfg;
    cfg.command = "osc-check";
    cfg.seed = 5;
    cfg.trials = 50;
    cfg.size = 128;
    const RunReport rep = cmd_osc_check(cfg);
    CHECK(rep.exit_code == 0);
    REQUIRE(!rep.rows.empty());
    CHECK(rep.rows[0][1] == "counterexample");
    CHECK(rep.rows[0][2] == "0");
    CHECK(std::stod(rep.rows[0][3]) == 128.0);

    SUBCASE("input sequences load") {
        TempFile seq("n1,n2,re,im\n0,0,0,0\n5,5,1,0\n3,2,-1,0\n");
        cfg.input = seq.path;
        const RunReport with_input = cmd_osc_check(cfg);
        bool saw_input = false;
        for (const auto& row : with_input.rows) saw_input = saw_input || row[1] == "input";
        CHECK(saw_input);
    }
}

TEST_CASE("gen-set driver writes the fraction list") {
    ExperimentConfig cfg;
    cfg.command = "gen-set";
    cfg.s_min = 1;
    cfg.out = std::string("/tmp/oscmult_genset_test.txt");
    const RunReport rep = cmd_gen_set(cfg);
    CHECK(rep.exit_code == 0);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.rows[0] == std::vector<std::string>{"1", "1", "2"});
    CHECK(rep.rows[1] == std::vector<std::string>{"1", "1", "3"});
    CHECK(rep.rows[2] == std::vector<std::string>{"1", "2", "3"});

    std::ifstream in(*cfg.out);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == "1/2\n1/3\n2/3\n");
    std::remove(cfg.out->c_str());
}

TEST_CASE("decay-check driver reports stable refinements") {
    ExperimentConfig cfg;
    cfg.command = "decay-check";
    cfg.points = 40000;
    const RunReport rep = cmd_decay_check(cfg);
    CHECK(rep.exit_code == 0);
    REQUIRE(rep.rows.size() == 3);
    double drift = 0.0;
    for (const auto& [k, v] : rep.summary)
        if (k == "refinement_drift") drift = std::stod(v);
    CHECK(drift < 0.01);
}

TEST_CASE("run_command dispatch and report emission") {
    ExperimentConfig cfg;
    cfg.command = "gen-set";
    const RunReport rep = run_command(cfg);
    std::ostringstream csv;
    rep.to_csv(csv);
    CHECK(csv.str().rfind("s,numerator,denominator\n", 0) == 0);

    std::ostringstream js;
    rep.to_json(js);
    const auto j = nlohmann::json::parse(js.str());
    CHECK(j.contains("config"));
    CHECK(j.contains("rows"));
    CHECK(j.contains("summary"));
    CHECK(j.at("config").at("command") == "gen-set");
    CHECK(j.at("summary").contains("wall_clock_ms"));
    CHECK(j.at("summary").at("version") == kVersion);

    cfg.command = "no-such-command";
    CHECK_THROWS_AS(run_command(cfg), ConfigError);
}

TEST_CASE("sequence csv loader validation") {
    std::istringstream bad("nope\n");
    CHECK_THROWS_AS(load_sequence_csv(bad), ConfigError);
    std::istringstream neg("n1,n2,re,im\n-1,0,1,0\n");
    CHECK_THROWS_AS(load_sequence_csv(neg), ConfigError);
    std::istringstream ok("n1,n2,re,im\n2,3,1.5,-0.5\n");
    const Array2 a = load_sequence_csv(ok);
    CHECK(a.max1 == 2);
    CHECK(a.max2 == 3);
    CHECK(a(2, 3) == cplx(1.5, -0.5));
}
