#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "edgerm/cli.hpp"

using namespace edgerm;

namespace {

const std::string data_dir = EDGERM_DATA_DIR;
const std::string bfly_inst = data_dir + "/butterfly.instance.json";
const std::string bfly_code = data_dir + "/butterfly.code.json";

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int status = cli::dispatch(args, out, err);
    return {status, out.str(), err.str()};
}

std::vector<std::string> csv_row(const std::string& text, std::size_t row) {
    std::stringstream ss(text);
    std::string line;
    for (std::size_t k = 0; k <= row; ++k) std::getline(ss, line);
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    return fields;
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("edgerm_cli_" + name);
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST(ParseRates, BitsAndCardinalities) {
    EXPECT_EQ(cli::parse_rates("1,1", 1), (std::vector<std::uint64_t>{2, 2}));
    EXPECT_EQ(cli::parse_rates("2,0", 1), (std::vector<std::uint64_t>{4, 1}));
    EXPECT_EQ(cli::parse_rates("1", 3), (std::vector<std::uint64_t>{8}));
    EXPECT_EQ(cli::parse_rates("#3,#5", 1), (std::vector<std::uint64_t>{3, 5}));
    for (const char* bad : {"1,,1", "x", "#0", "#", "1.5", "#2a"}) EXPECT_THROW(cli::parse_rates(bad, 1), MalformedError) << bad;
}

TEST(Verify, ExitCodesFollowVerdict) {
    EXPECT_EQ(run({"verify", bfly_inst, bfly_code}).status, cli::exit_true);
    EXPECT_EQ(run({"verify", bfly_inst, bfly_code, "--rates", "1,1"}).status, cli::exit_true);
    EXPECT_EQ(run({"verify", bfly_inst, bfly_code, "--rates", "#2,#2"}).status, cli::exit_true);
    // two bits per source cannot pass through binary edges
    EXPECT_EQ(run({"verify", bfly_inst, bfly_code, "--rates", "2,2"}).status, cli::exit_false);
}

TEST(Verify, ReportContents) {
    auto r = run({"verify", bfly_inst, bfly_code, "--eps", "1/4"});
    ASSERT_EQ(r.status, cli::exit_true);
    auto j = parse_json_text(r.out);
    EXPECT_EQ(j["result"]["verdict"], true);
    EXPECT_EQ(j["result"]["error"], "0/1");
    EXPECT_EQ(j["command"], (std::vector<std::string>{"verify", bfly_inst, bfly_code, "--eps", "1/4"}));
    ASSERT_EQ(j["inputs"].size(), 2u);
    EXPECT_EQ(j["inputs"][0]["fnv1a64"], fnv1a64_hex(read_text_file(bfly_inst)));
    EXPECT_FALSE(j.contains("meta"));
}

TEST(Errors, UsageAndInputProblems) {
    auto missing = run({"verify", data_dir + "/no_such_file.json", bfly_code});
    EXPECT_EQ(missing.status, cli::exit_usage);
    EXPECT_NE(missing.err.find("no_such_file.json"), std::string::npos);
    EXPECT_EQ(run({}).status, cli::exit_usage);
    EXPECT_EQ(run({"frobnicate"}).status, cli::exit_usage);
    EXPECT_EQ(run({"verify", bfly_inst}).status, cli::exit_usage);
    EXPECT_EQ(run({"verify", bfly_inst, bfly_code, "--eps", "one/two"}).status, cli::exit_usage);
    EXPECT_EQ(run({"verify", bfly_inst, bfly_code, "--rates", "1,x"}).status, cli::exit_usage);
    EXPECT_EQ(run({"--format", "xml", "verify", bfly_inst, bfly_code}).status, cli::exit_usage);
    EXPECT_EQ(run({"remove-edge", bfly_inst, bfly_code, "--edge", "nope"}).status, cli::exit_usage);
    EXPECT_EQ(run({"--enum-cap", "3", "verify", bfly_inst, bfly_code}).status, cli::exit_usage);
}

TEST(Errors, InvalidInstanceRejected) {
    auto dir = scratch("invalid");
    std::filesystem::create_directories(dir);
    auto j = parse_json_text(read_text_file(bfly_inst));
    j["edges"][0]["alphabet_size"] = 0;
    auto path = (dir / "bad.instance.json").string();
    write_text_file(path, j.dump());
    EXPECT_EQ(run({"validate", path}).status, cli::exit_false);
    EXPECT_EQ(run({"verify", path, bfly_code}).status, cli::exit_usage);
    EXPECT_EQ(run({"validate", bfly_inst}).status, cli::exit_true);
}

TEST(RemoveEdge, BuiltinThm2Csv) {
    auto r = run({"--format", "csv", "remove-edge", bfly_inst, bfly_code, "--edge", "bottleneck", "--partition",
                  "builtin:thm2", "--eps", "1/4"});
    ASSERT_EQ(r.status, cli::exit_true) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), certificate_csv_header);
    auto header = csv_row(r.out, 0);
    auto row = csv_row(r.out, 1);
    ASSERT_EQ(header.size(), row.size());
    auto col = [&](const std::string& name) {
        return row[std::find(header.begin(), header.end(), name) - header.begin()];
    };
    EXPECT_EQ(col("edge"), "bottleneck");
    EXPECT_EQ(col("epsilon"), "1/4");
    EXPECT_EQ(col("restricted_sizes"), "1;1");
    EXPECT_EQ(col("restricted_error"), "0/1");
    EXPECT_EQ(col("verified"), "true");
}

TEST(RemoveEdge, GroupFileAndEmitDir) {
    auto dir = scratch("emit");
    auto r = run({"remove-edge", bfly_inst, bfly_code, "--edge", "bottleneck", "--groups",
                  data_dir + "/butterfly.groups.json", "--emit-dir", dir.string()});
    ASSERT_EQ(r.status, cli::exit_true) << r.err;
    auto inst = (dir / "restricted.instance.json").string();
    auto code = (dir / "restricted.code.json").string();
    ASSERT_TRUE(std::filesystem::exists(inst));
    // the emitted restriction decodes perfectly on its own
    EXPECT_EQ(run({"verify", inst, code}).status, cli::exit_true);
    EXPECT_EQ(run({"validate", inst}).status, cli::exit_true);
}

TEST(RemoveEdge, Cor3RejectsTwoSourceEdge) {
    auto r = run({"--format", "csv", "remove-edge", bfly_inst, bfly_code, "--edge", "bottleneck", "--partition",
                  "builtin:cor3"});
    EXPECT_EQ(r.status, cli::exit_false);
    // header only
    EXPECT_EQ(r.out, std::string(certificate_csv_header) + "\n");
}

TEST(RemoveEdge, PartitionFile) {
    auto dir = scratch("partition");
    std::filesystem::create_directories(dir);
    auto write = [&](const std::string& name, std::vector<std::uint64_t> labels) {
        auto path = (dir / name).string();
        write_text_file(path, partition_to_json(AuxiliaryPartition{std::move(labels)}).dump());
        return path;
    };
    // singleton classes are boxes on which the edge is constant
    auto singles = write("singles.json", {0, 1, 2, 3});
    auto r = run({"remove-edge", bfly_inst, bfly_code, "--edge", "bottleneck", "--partition", singles});
    EXPECT_EQ(r.status, cli::exit_true) << r.err;
    // XOR classes {00, 11} and {01, 10} are not product sets
    auto diag = write("xor.json", {0, 1, 1, 0});
    EXPECT_EQ(run({"remove-edge", bfly_inst, bfly_code, "--edge", "bottleneck", "--partition", diag}).status,
              cli::exit_false);
}

TEST(CwlCommands, CheckSearchAndRemove) {
    auto groups = data_dir + "/butterfly.groups.json";
    auto check = run({"cwl-check", bfly_inst, bfly_code, "--edge", "bottleneck", "--groups", groups});
    EXPECT_EQ(check.status, cli::exit_true);
    EXPECT_EQ(parse_json_text(check.out)["result"]["cwl"], true);
    auto search = run({"cwl-search", bfly_inst, bfly_code, "--edge", "bottleneck"});
    EXPECT_EQ(search.status, cli::exit_true);
    EXPECT_EQ(parse_json_text(search.out)["result"]["assignments_tried"], 1);
    EXPECT_EQ(run({"cwl-remove", bfly_inst, bfly_code, "--edge", "bottleneck"}).status, cli::exit_true);
    EXPECT_EQ(run({"cwl-search", bfly_inst, bfly_code, "--edge", "bottleneck", "--budget", "0"}).status,
              cli::exit_false);
}

TEST(GroupCommands, KleinCharacterization) {
    auto path = data_dir + "/klein.characterization.json";
    auto rm = run({"group-remove", path, "--edge", "e"});
    EXPECT_EQ(rm.status, cli::exit_true);
    EXPECT_EQ(parse_json_text(rm.out)["result"]["g_prime"], (std::vector<Element>{0}));
    // t2 sees only the diagonal coset, so it cannot be zero error
    auto zero = run({"group-zero-error", path});
    EXPECT_EQ(zero.status, cli::exit_false);
    auto terms = parse_json_text(zero.out)["result"]["terminals"];
    ASSERT_EQ(terms.size(), 2u);
    EXPECT_EQ(terms[0]["zero_error"], true);
    EXPECT_EQ(terms[1]["zero_error"], false);
    EXPECT_EQ(terms[1]["min_error"], "1/2");
}

TEST(CaseStudy, BundledStudies) {
    EXPECT_EQ(run({"case-study", "butterfly"}).status, cli::exit_true);
    EXPECT_EQ(run({"case-study", "butterfly4"}).status, cli::exit_true);
    EXPECT_EQ(run({"case-study", "n2"}).status, cli::exit_true);
    EXPECT_EQ(run({"case-study", "n3-injectivity", "--m", "3", "--s", "2", "--alpha", "2"}).status, cli::exit_true);
    EXPECT_EQ(run({"case-study", "n3-injectivity", "--m", "2", "--s", "2"}).status, cli::exit_usage);
    auto d = run({"case-study", "dougherty"});
    EXPECT_EQ(d.status, cli::exit_true);
    EXPECT_EQ(parse_json_text(d.out)["result"]["solutions"],
              (std::vector<std::vector<Symbol>>{{0, 1, 3, 2}, {0, 2, 1, 3}}));
    EXPECT_EQ(run({"case-study", "dougherty", "--t", "0,1,3,2"}).status, cli::exit_true);
    EXPECT_EQ(run({"case-study", "dougherty", "--t", "0,1,2,3"}).status, cli::exit_false);
    EXPECT_EQ(run({"case-study", "petersen"}).status, cli::exit_usage);
}

TEST(CaseStudy, EmittedFilesMatchBundledData) {
    auto dir = scratch("bundle");
    ASSERT_EQ(run({"case-study", "butterfly", "--emit-dir", dir.string()}).status, cli::exit_true);
    EXPECT_EQ(read_text_file((dir / "butterfly.instance.json").string()), read_text_file(bfly_inst));
    EXPECT_EQ(read_text_file((dir / "butterfly.code.json").string()), read_text_file(bfly_code));
}

TEST(Reports, TextRoundTrip) {
    auto r = run({"remove-edge", bfly_inst, bfly_code, "--edge", "bottleneck", "--eps", "1/4"});
    ASSERT_EQ(r.status, cli::exit_true);
    auto parsed = parse_report(r.out);
    ASSERT_EQ(parsed.certificates.size(), 1u);
    EXPECT_EQ(parsed.certificates[0].epsilon, Rational(1, 4));
    EXPECT_EQ(emit_report(parsed, ReportFormat::text), r.out);
}

TEST(Reports, WorkerCountDoesNotChangeOutput) {
    for (const auto& fmt : {"text", "csv"}) {
        std::vector<std::string> base{"--format", fmt, "remove-edge", bfly_inst, bfly_code, "--edge", "bottleneck"};
        auto a = base, b = base;
        a.insert(a.begin(), {"--workers", "1"});
        b.insert(b.begin(), {"--workers", "4"});
        auto ra = run(a), rb = run(b);
        EXPECT_EQ(ra.status, rb.status);
        EXPECT_EQ(ra.out, rb.out) << fmt;
    }
}

TEST(Reports, MetaOnlyOnRequest) {
    auto r = run({"--meta", "--workers", "2", "verify", bfly_inst, bfly_code});
    auto j = parse_json_text(r.out);
    ASSERT_TRUE(j.contains("meta"));
    EXPECT_EQ(j["meta"]["workers"], 2);
    EXPECT_GE(j["meta"]["wall_seconds"].get<double>(), 0.0);
}

TEST(Reports, OutFile) {
    auto dir = scratch("out");
    std::filesystem::create_directories(dir);
    auto path = (dir / "report.json").string();
    auto r = run({"--out", path, "verify", bfly_inst, bfly_code});
    EXPECT_EQ(r.status, cli::exit_true);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(parse_report(read_text_file(path)).command.front(), "verify");
}

TEST(Binary, ProcessExitCodes) {
    const std::string bin = EDGERM_BINARY;
    auto code = [&](const std::string& tail) {
        int raw = std::system((bin + " " + tail + " > /dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    EXPECT_EQ(code("verify " + bfly_inst + " " + bfly_code + " --rates 1,1"), 0);
    EXPECT_EQ(code("verify " + bfly_inst + " " + bfly_code + " --rates 2,2"), 1);
    EXPECT_EQ(code("verify /nonexistent.json " + bfly_code), 2);
    EXPECT_EQ(code("--help"), 0);
}
