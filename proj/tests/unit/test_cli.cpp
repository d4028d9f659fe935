#include <cstdlib>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "beurlab/config.hpp"
#include "beurlab/errors.hpp"
#include "beurlab/experiment.hpp"
#include "beurlab/report.hpp"

using namespace beurlab;

namespace {

ExperimentReport sample_report() {
    ExperimentReport r;
    r.command = "limit";
    r.config = {{"F", "log(x)"}, {"command", "limit"}};
    r.seed = 7;
    auto& t = r.add_table("rows", {"x", "name", "ok", "n"});
    t.add_row({1.5, std::string("a,\"b\""), true, 3LL});
    t.add_row({kInf, std::string("plain"), false, -1LL});
    r.summary["value"] = 0.1;
    r.verdict = ReportVerdict::pass;
    r.runtime_ms = 12.5;
    return r;
}

}  // namespace

TEST(Config, ParsesCommentsAndWhitespace) {
    const auto cfg = parse_config("# header\ncommand = limit\n\n  F = log(x)   # trailing\nx0=10\nt_grid = 0.5, 1,2\n");
    EXPECT_EQ(cfg.command, "limit");
    EXPECT_EQ(cfg.get_string("F", ""), "log(x)");
    EXPECT_EQ(cfg.get_double("x0", 1.0), 10.0);
    EXPECT_EQ(cfg.get_list("t_grid", {}), (std::vector<double>{0.5, 1.0, 2.0}));
    EXPECT_EQ(cfg.get_grid().x0, 10.0);
    EXPECT_EQ(cfg.get_double("missing", 4.0), 4.0);
    EXPECT_THROW(parse_config("no equals sign here"), ConfigError);
}

TEST(Config, TypedAccessorsRejectJunk) {
    ExperimentConfig cfg;
    cfg.set("a", "1.5x");
    cfg.set("b", "yes");
    cfg.set("n", "2.5");
    cfg.set("tol", "-1");
    cfg.set("seed", "42");
    EXPECT_THROW(cfg.get_double("a", 0.0), ConfigError);
    EXPECT_TRUE(cfg.get_bool("b", false));
    EXPECT_THROW(cfg.get_int("n", 0), ConfigError);
    EXPECT_THROW(cfg.get_tolerance("tol", 1.0), ConfigError);
    EXPECT_EQ(cfg.seed(), 42U);
    EXPECT_EQ(cfg.numeric_params().count("n"), 1U);
    EXPECT_EQ(cfg.numeric_params().count("b"), 0U);
}

TEST(Config, FlowsKernelsAndFunctions) {
    ExperimentConfig cfg;
    cfg.set("phi", "linear_plus_root:0.5");
    cfg.set("psi", "x*(2+0*x)");
    cfg.set("psi_rho", "2");
    cfg.set("K", "box:0,2");
    cfg.set("G", "indicator(0,1)");
    cfg.set("G_support", "0,1");
    cfg.set("bad", "nosuch:1");
    cfg.set("k", "3");
    cfg.set("F", "k*x");
    EXPECT_EQ(cfg.get_flow("phi", "linear:1").rho(), 0.5);
    EXPECT_EQ(cfg.get_flow("psi", "linear:1").rho(), 2.0);
    EXPECT_EQ(cfg.get_flow("absent", "power:0.5").family, "power");
    EXPECT_THROW(cfg.get_flow("bad", "linear:1"), ConfigError);
    EXPECT_EQ(cfg.get_kernel("K", "gaussian").support_hi, 2.0);
    EXPECT_EQ(cfg.get_kernel("G", "gaussian").support_lo, 0.0);
    EXPECT_EQ(cfg.get_function("F", "x")(2.0), 6.0);
    EXPECT_FALSE(cfg.get_optional_function("U").has_value());
}

TEST(Config, MissingFileIsAnIoError) {
    EXPECT_THROW(load_config("/nonexistent/beurlab.conf"), IoError);
}

TEST(Report, CsvQuotingAndNumbers) {
    const std::string csv = emit_csv(sample_report());
    EXPECT_EQ(csv, "x,name,ok,n\n1.5,\"a,\"\"b\"\"\",true,3\ninf,plain,false,-1\n");
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    EmitOptions o;
    o.table = "nope";
    EXPECT_THROW(emit_csv(sample_report(), o), BadParamError);
}

TEST(Report, JsonSchemaAndTiming) {
    const auto j = nlohmann::json::parse(emit_json(sample_report()));
    EXPECT_EQ(j["schema_version"], "1");
    EXPECT_EQ(j["command"], "limit");
    EXPECT_EQ(j["verdict"], "pass");
    EXPECT_EQ(j["seed"], 7);
    EXPECT_EQ(j["tables"][0]["rows"][1][0], "inf");
    EXPECT_EQ(j["timing"]["runtime_ms"], 12.5);
    EmitOptions o;
    o.include_timing = false;
    EXPECT_FALSE(nlohmann::json::parse(emit_json(sample_report(), o)).contains("timing"));
    EXPECT_THROW(parse_report_format("xml"), ConfigError);
}

TEST(Report, RowWidthIsChecked) {
    Table t{"t", {"a", "b"}, {}};
    EXPECT_THROW(t.add_row({1.0}), BadParamError);
}

TEST(Report, ExitCodes) {
    ExperimentReport r;
    r.verdict = ReportVerdict::pass;
    EXPECT_EQ(exit_code(r), 0);
    r.verdict = ReportVerdict::fail;
    EXPECT_EQ(exit_code(r), 1);
    r.verdict = ReportVerdict::aborted;
    EXPECT_EQ(exit_code(r), 3);
    r.verdict = ReportVerdict::undecided;
    EXPECT_EQ(exit_code(r), 4);
}

TEST(Runner, UnknownCommandIsAConfigError) {
    ExperimentConfig cfg;
    cfg.command = "frobnicate";
    EXPECT_THROW(run_experiment(cfg), ConfigError);
    EXPECT_EQ(experiment_commands().size(), 12U);
}

TEST(Runner, LibraryErrorsAbortWithAnErrorTable) {
    // The box kernel fails the transform gate.
    auto cfg = parse_config("command = tauberian\nK = box\n");
    const auto r = run_experiment(cfg);
    EXPECT_EQ(r.verdict, ReportVerdict::aborted);
    EXPECT_EQ(r.error_kind, "WienerCheckFailure");
    ASSERT_NE(r.find_table("error"), nullptr);
    EXPECT_EQ(exit_code(r), 3);
}

TEST(Runner, SameConfigSameBytes) {
    EmitOptions o;
    o.include_timing = false;
    for (const char* text : {"command = popa-check\nsamples = 50\n", "command = limit\n",
                             "command = beck\nmode = lemma3\nsamples = 20\n"}) {
        const auto cfg = parse_config(text);
        const std::string a = emit_json(run_experiment(cfg), o);
        const std::string b = emit_json(run_experiment(cfg), o);
        EXPECT_EQ(a, b) << text;
        EXPECT_EQ(emit_csv(run_experiment(cfg)), emit_csv(run_experiment(cfg)));
    }
}

TEST(Runner, SeedChangesSampledInputs) {
    EmitOptions o;
    o.include_timing = false;
    const auto a = emit_json(run_experiment(parse_config("command = popa-check\nsamples = 20\nseed = 1\n")), o);
    const auto b = emit_json(run_experiment(parse_config("command = popa-check\nsamples = 20\nseed = 2\n")), o);
    EXPECT_NE(a, b);
}
