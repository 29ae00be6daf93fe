#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "glimm/config.hpp"
#include "glimm/errors.hpp"
#include "glimm/simulation.hpp"

using namespace glimm;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(system:
  name: burgers_inhom
grid:
  h: 0.02
time:
  t_final: 0.5
)";

const char* kShock = R"(system:
  name: burgers_inhom
initial:
  breaks: [0.0]
  states: [1.2, 0.8]
grid:
  h: 0.02
  lambda_cfl: 2.0
  x_min: -1.0
  x_max: 2.0
time:
  t_final: 0.5
  snapshot_times: [0.25, 0.5]
ball:
  center: [1.0]
  radius: 0.5
)";

ErrorKind kind_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no throw");
    return ErrorKind::ParseError;
}

std::string message_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("glimm_test_" + name);
    fs::remove_all(d);
    return d;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
    s.replace(s.find(from), from.size(), to);
    return s;
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
    const RunConfig c = parse_config(kMinimal);
    CHECK(c.sequence.kind == SequenceKind::VanDerCorput);
    CHECK(c.sequence.seed == 0);
    CHECK(c.diagnostics.C0 == 5.0);
    CHECK(c.diagnostics.C1 == 2.0);
    CHECK(c.diagnostics.C2 == 2.0);
    CHECK(c.output.formats.size() == 3);
    CHECK(c.ball.center.size() == 1);
    CHECK(c.ball.radius > 0.0);
    CHECK(c.grid.lambda_cfl > 0.0);
    const Problem p = make_problem(c);
    CHECK(p.snapshot_times == std::vector<double>{0.5});
    CHECK(p.initial(0.3)(0) == c.ball.center[0]);
}

TEST_CASE("semantic validation") {
    SUBCASE("nonpositive h") {
        const std::string text = replace(kMinimal, "h: 0.02", "h: 0");
        CHECK(kind_of(text) == ErrorKind::ValidationError);
        CHECK(message_of(text).find("grid.h must be positive") != std::string::npos);
    }
    SUBCASE("CFL below the speed sup") {
        const std::string text = replace(kShock, "lambda_cfl: 2.0", "lambda_cfl: 1.0");
        CHECK(kind_of(text) == ErrorKind::ValidationError);
        CHECK(message_of(text).find("CFL") != std::string::npos);
    }
    SUBCASE("snapshot after t_final") {
        CHECK(kind_of(replace(kShock, "[0.25, 0.5]", "[0.25, 0.7]")) == ErrorKind::ValidationError);
    }
    SUBCASE("domain too small for the waves") {
        CHECK(kind_of(replace(kShock, "x_max: 2.0", "x_max: 0.3")) == ErrorKind::ValidationError);
    }
    SUBCASE("state outside the ball") {
        CHECK(kind_of(replace(kShock, "[1.2, 0.8]", "[1.7, 0.8]")) == ErrorKind::ValidationError);
    }
    SUBCASE("state count mismatch") {
        CHECK(kind_of(replace(kShock, "[1.2, 0.8]", "[1.2]")) == ErrorKind::ValidationError);
    }
    SUBCASE("unknown system") {
        CHECK(kind_of(replace(kMinimal, "burgers_inhom", "euler")) == ErrorKind::UnknownSystem);
    }
}

TEST_CASE("parse errors") {
    SUBCASE("unknown key names the key and line") {
        const std::string text = replace(kMinimal, "  h: 0.02\n", "  h: 0.02\n  hh: 3\n");
        CHECK(kind_of(text) == ErrorKind::ParseError);
        const std::string msg = message_of(text);
        CHECK(msg.find("hh") != std::string::npos);
        CHECK(msg.find("line 5") != std::string::npos);
    }
    SUBCASE("missing required section") {
        CHECK(kind_of("grid:\n  h: 0.1\ntime:\n  t_final: 1\n") == ErrorKind::ParseError);
    }
    SUBCASE("malformed YAML") {
        CHECK(kind_of("system: [unclosed\n") == ErrorKind::ParseError);
    }
    SUBCASE("bad sequence kind") {
        CHECK(kind_of(std::string(kMinimal) + "sequence:\n  kind: sobol\n") == ErrorKind::ParseError);
    }
}

TEST_CASE("dump round trip") {
    const RunConfig c = parse_config(kShock);
    const std::string d1 = dump_config(c);
    const RunConfig c2 = parse_config(d1);
    CHECK(dump_config(c2) == d1);
    CHECK(c2.initial.breaks == c.initial.breaks);
    CHECK(c2.grid.lambda_cfl == c.grid.lambda_cfl);
}

TEST_CASE("run_simulation outputs") {
    SUBCASE("constant data give identical columns") {
        RunConfig c = parse_config(kMinimal);
        c.output.directory = scratch("const").string();
        const RunOutcome out = run_simulation(c);
        REQUIRE(out.exit_code == 0);
        std::ifstream csv(fs::path(c.output.directory) / "snapshots.csv");
        std::string line;
        std::getline(csv, line);
        CHECK(line == "t,x,U1");
        std::set<std::string> values;
        while (std::getline(csv, line)) values.insert(line.substr(line.rfind(',') + 1));
        CHECK(values.size() == 1);
    }
    SUBCASE("single shock, reruns are byte-identical, TV agrees with the snapshot") {
        RunConfig c = parse_config(kShock);
        c.output.directory = scratch("shock_a").string();
        REQUIRE(run_simulation(c).exit_code == 0);
        RunConfig c2 = c;
        c2.output.directory = scratch("shock_b").string();
        REQUIRE(run_simulation(c2).exit_code == 0);
        const fs::path a(c.output.directory), b(c2.output.directory);
        CHECK(slurp(a / "snapshots.csv") == slurp(b / "snapshots.csv"));
        CHECK(slurp(a / "diagnostics.jsonl") == slurp(b / "diagnostics.jsonl"));
        CHECK(fs::exists(a / "manifest.yaml"));

        std::ifstream csv(a / "snapshots.csv");
        std::string line;
        std::getline(csv, line);
        std::set<double> values;
        double prev = 0.0, tv = 0.0;
        bool first = true;
        while (std::getline(csv, line)) {
            std::stringstream ss(line);
            std::string t, x, u;
            std::getline(ss, t, ',');
            std::getline(ss, x, ',');
            std::getline(ss, u, ',');
            if (std::stod(t) != 0.5) continue;
            const double v = std::stod(u);
            values.insert(v);
            if (!first) tv += std::abs(v - prev);
            prev = v;
            first = false;
        }
        CHECK(values == std::set<double>{0.8, 1.2});

        std::ifstream jl(a / "diagnostics.jsonl");
        nlohmann::json last;
        while (std::getline(jl, line)) last = nlohmann::json::parse(line);
        CHECK(last["t"].get<double>() == doctest::Approx(0.5));
        CHECK(std::abs(last["TV"].get<double>() - tv) <= 1e-12);
    }
    SUBCASE("numerical failure writes failure.json") {
        RunConfig c = parse_config(kShock);
        c.output.directory = scratch("fail").string();
        c.solver.small_data_threshold = 0.1;
        const RunOutcome out = run_simulation(c);
        CHECK(out.exit_code == 4);
        const auto j = nlohmann::json::parse(slurp(fs::path(c.output.directory) / "failure.json"));
        CHECK(j["error_kind"] == "SmallDataExceeded");
        CHECK(j["strip"].get<long>() == 0);
    }
}

TEST_CASE("oracle selection and studies") {
    RunConfig c = parse_config(replace(kShock, "[1.2, 0.8]", "[0.8, 1.2]"));
    SUBCASE("exact oracle applies, the others do not") {
        CHECK_NOTHROW(select_oracle(c, "exact"));
        CHECK_THROWS_AS(select_oracle(c, "characteristics"), Error);
        CHECK_THROWS_AS(select_oracle(c, "ode"), Error);
        CHECK_THROWS_AS(select_oracle(c, "nonsense"), Error);
    }
    SUBCASE("errors decrease with h") {
        const auto rows = convergence_study(c, {0.01, 0.005, 0.0025}, "exact");
        REQUIRE(rows.size() == 3);
        CHECK_FALSE(rows[0].order.has_value());
        CHECK(*rows[1].error < *rows[0].error);
        CHECK(*rows[2].error < *rows[1].error);
        CHECK(rows[2].order.has_value());
        const std::string csv = study_csv(rows);
        CHECK(csv.rfind("h,error,order\n0.01,", 0) == 0);
    }
    SUBCASE("a single h has an empty order column") {
        const auto rows = convergence_study(c, {0.02}, "exact");
        CHECK(study_csv(rows).find("0.02,") != std::string::npos);
        CHECK(study_csv(rows).back() == '\n');
        CHECK(study_csv(rows).substr(study_csv(rows).size() - 2) == ",\n");
    }
    SUBCASE("fine-grid study") {
        const auto rows = convergence_study(c, {0.04, 0.02}, "fine_grid");
        REQUIRE(rows[0].error);
        REQUIRE(rows[1].error);
        CHECK(*rows[1].error < *rows[0].error);
    }
    SUBCASE("failing rows keep their message") {
        const auto rows = convergence_study(c, {0.02, -1.0}, "exact");
        CHECK_FALSE(rows[1].error.has_value());
        CHECK(rows[1].failure.find("ValidationError") != std::string::npos);
    }
}

TEST_CASE("audit on a ball reaching the resonance") {
    RunConfig c = parse_config(kMinimal);
    c.ball.center = {0.0};
    c.ball.radius = 0.3;
    const AuditReport rep =
        audit_assumptions(make_model(c), make_profile(c), make_ball(c), make_sampling_plan(c));
    CHECK_FALSE(rep.all_pass());
}
