#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <gtest/gtest.h>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(NCIA_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("ncia_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const std::string kConfig = std::string("--config ") + NCIA_DEMO_CONFIG;

} // namespace

TEST(Cli, TrialPrintsOneRecord) {
    const auto dir = scratch("trial");
    const std::string cmd = std::string(NCIA_CLI) + " trial " + kConfig + " --seed 3 > " +
                            (dir / "out.json").string();
    ASSERT_EQ(std::system(cmd.c_str()), 0);
    const auto j = nlohmann::json::parse(slurp(dir / "out.json"));
    EXPECT_EQ(j["seed"].get<int>(), 3);
}

TEST(Cli, RunWritesDeterministicOutputs) {
    const auto a = scratch("run_a");
    const auto b = scratch("run_b");
    ASSERT_EQ(run("run " + kConfig + " --trials 30 --seed 42 --out " + a.string()), 0);
    ASSERT_EQ(run("run " + kConfig + " --trials 30 --seed 42 --threads 3 --out " + b.string()), 0);
    EXPECT_EQ(slurp(a / "trials.jsonl"), slurp(b / "trials.jsonl"));
    EXPECT_EQ(slurp(a / "summary.csv"), slurp(b / "summary.csv"));
    const auto csv = slurp(a / "summary.csv");
    EXPECT_EQ(csv.rfind("axis,mean_gain,median_gain,min_gain,max_gain,ci95\nrun,", 0), 0u);
}

TEST(Cli, SweepWritesOneRowPerValue) {
    const auto d = scratch("sweep");
    ASSERT_EQ(run("sweep " + kConfig + " --axis num_taps --values 1,2,4 --trials 10 --out " + d.string()), 0);
    std::istringstream csv(slurp(d / "summary.csv"));
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(csv, line)) {
        rows.push_back(line.substr(0, line.find(',')));
    }
    EXPECT_EQ(rows, (std::vector<std::string>{"axis", "1", "2", "4"}));
    EXPECT_TRUE(fs::exists(d / "num_taps=2" / "trials.jsonl"));
}

TEST(Cli, ProtocolWritesTrace) {
    const auto d = scratch("protocol");
    ASSERT_EQ(run("protocol " + kConfig + " --miss-prob 0.5 --runs 20 --out " + d.string()), 0);
    std::istringstream in(slurp(d / "trace.jsonl"));
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        const auto j = nlohmann::json::parse(line);
        EXPECT_TRUE(j.contains("run") && j.contains("slot") && j.contains("phase") && j.contains("event"));
        ++n;
    }
    EXPECT_GT(n, 20 * 6);
}

TEST(Cli, ExitCodes) {
    const auto d = scratch("codes");
    const auto bad = d / "bad.ini";
    std::ofstream(bad) << "[system]\nbogus = 1\n";
    EXPECT_EQ(run("run --config " + bad.string() + " --trials 1 --seed 1 --out " + d.string()), 2);
    EXPECT_EQ(run("run " + kConfig + " --trials 1 --seed 1"), 2);
    EXPECT_EQ(run("sweep " + kConfig + " --axis distance --values 1 --trials 1 --out " + d.string()), 2);

    const auto deaf = d / "deaf.ini";
    std::ofstream(deaf) << "[protocol]\nbeacon_snr_db = 0\nslot_cap = 10\n";
    EXPECT_EQ(run("trial --config " + deaf.string() + " --seed 1"), 4);
    EXPECT_EQ(run("protocol --config " + deaf.string() + " --miss-prob 0 --runs 1"), 4);

    // one flat UE with a flat silent interferer leaves no usable stream
    const auto flat = d / "flat.ini";
    std::ofstream(flat) << "[system]\nusers = 1\n[channel]\nnum_taps = 1\nmax_delay = 0\nperfect_csi = true\n";
    EXPECT_EQ(run("trial --config " + flat.string() + " --seed 1"), 3);
}
