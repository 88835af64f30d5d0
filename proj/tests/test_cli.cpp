#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "trex/io.hpp"
#include "trex/simulate.hpp"

namespace {

namespace fs = std::filesystem;
using namespace trex;

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("trex_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = std::string(TREX_CLI) + " " + args + " --log-level error 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_dataset(const fs::path& dir, const Dataset& d) {
    std::ofstream x(dir / "x.csv"), y(dir / "y.csv");
    io::write_csv_matrix(x, d.X(), d.names());
    io::write_csv_matrix(y, d.y());
}

fs::path two_triples_files(const std::string& name, std::uint64_t seed = 1) {
    const fs::path dir = scratch(name);
    write_dataset(dir, gen_grouped_gaussian(DesignSpec::two_triples(), RngStream(seed, 0)).data);
    return dir;
}

std::string xy(const fs::path& dir) { return "--x " + (dir / "x.csv").string() + " --y " + (dir / "y.csv").string(); }

TEST(CliSelect, WritesReparseableOutputs) {
    const auto dir = two_triples_files("select");
    ASSERT_EQ(run("select " + xy(dir) + " --alpha 0.2 --base ien --rho-cut 0.2 --out " + (dir / "out").string()), 0);
    const auto sel = io::read_json(dir / "out" / "selection.json");
    EXPECT_EQ(sel["schema_version"], 1);
    EXPECT_LE(sel["fdp_hat"].get<double>(), 0.2);
    const double v = sel["v_star"];
    const auto occ = io::read_csv_table(dir / "out" / "occurrences.csv");
    ASSERT_EQ(occ.rows.size(), 100u);
    std::set<Index> from_phi, from_json;
    for (const auto& row : occ.rows) {
        double phi = 0.0;
        ASSERT_TRUE(io::detail::parse_number(row[occ.column("phi")], phi));
        if (phi * 20 > v * 20 + 1e-9) from_phi.insert(std::stol(row[occ.column("index")]));
    }
    for (const auto& s : sel["selected"]) from_json.insert(s["index"].get<Index>());
    EXPECT_EQ(from_phi, from_json);
    EXPECT_TRUE(fs::exists(dir / "out" / "timings.json"));

    // The written partition feeds back in and reproduces the selection.
    const auto part = partition_from_json(io::read_json(dir / "out" / "groups.json"));
    EXPECT_EQ(part.p(), 100);
    ASSERT_EQ(run("select " + xy(dir) + " --alpha 0.2 --base ien --groups-file " + (dir / "out" / "groups.json").string() +
                  " --out " + (dir / "again").string()),
              0);
    const auto again = io::read_json(dir / "again" / "selection.json");
    EXPECT_EQ(again["selected"], sel["selected"]);
    EXPECT_EQ(again["v_star"], sel["v_star"]);
}

TEST(CliSelect, AlphaZeroOnNoiseIsEmptyAndSucceeds) {
    const fs::path dir = scratch("noise");
    DesignSpec spec;
    spec.n = 80;
    spec.p = 30;
    write_dataset(dir, gen_grouped_gaussian(spec, RngStream(3, 0)).data);
    ASSERT_EQ(run("select " + xy(dir) + " --alpha 0 --out " + (dir / "out").string()), 0);
    EXPECT_TRUE(io::read_json(dir / "out" / "selection.json")["selected"].empty());
}

TEST(CliSelect, ExitCodes) {
    const auto dir = two_triples_files("codes");
    {
        std::ofstream bad(dir / "short.csv");
        for (int i = 0; i < 149; ++i) bad << i << "\n";
        std::ofstream junk(dir / "junk.csv");
        junk << "a,b\n1,2\n3,zz\n";
    }
    const std::string out = " --out " + (dir / "out").string();
    EXPECT_EQ(run("select --x " + (dir / "x.csv").string() + " --y " + (dir / "short.csv").string() + out), 2);
    EXPECT_EQ(run("select --x " + (dir / "junk.csv").string() + " --y " + (dir / "y.csv").string() + out), 2);
    EXPECT_EQ(run("select --x " + (dir / "missing.csv").string() + " --y " + (dir / "y.csv").string() + out), 2);
    EXPECT_EQ(run("select " + xy(dir) + " --base ien" + out), 3);
    EXPECT_EQ(run("select " + xy(dir) + " --alpha 1.5" + out), 3);
    EXPECT_EQ(run("select " + xy(dir) + " --base magic" + out), 3);
    EXPECT_EQ(run("select " + xy(dir) + " --k 1" + out), 3);
    EXPECT_EQ(run("select " + xy(dir) + " --bogus-flag" + out), 3);
    EXPECT_EQ(run("select " + xy(dir)), 3);
    EXPECT_EQ(run("simulate --design snp --maf-max 0.7 --runs 1 --out " + (dir / "sim").string()), 3);
    EXPECT_EQ(run("simulate --blocks 200 --runs 1 --out " + (dir / "sim").string()), 3);
}

TEST(CliSimulate, SingleRunAndPairedSummary) {
    const fs::path dir = scratch("simulate");
    ASSERT_EQ(run("simulate --design gaussian --p 100 --n 150 --blocks 3,3 --rho 0.75 --actives 6 --beta 1,1,1,-1,-1,-1 "
                  "--snr 3 --runs 1 --alpha 0.2 --seed 4 --out " +
                  (dir / "one").string()),
              0);
    const auto trials = io::read_csv_table(dir / "one" / "trials.csv");
    EXPECT_EQ(trials.rows.size(), 1u);
    ASSERT_EQ(run("simulate --p 60 --n 100 --blocks 2x3 --rho 0.7 --actives 0-5 --runs 3 --alpha 0.1,0.2 "
                  "--base en,ien --rho-cut 0.3 --seed 4 --out " +
                  (dir / "paired").string()),
              0);
    const auto summary = io::read_json(dir / "paired" / "summary.json");
    EXPECT_EQ(summary["arms"].size(), 4u);
    ASSERT_EQ(summary["paired"].size(), 2u);
    EXPECT_EQ(summary["paired"][0]["first"], "en");
    EXPECT_EQ(summary["paired"][0]["second"], "ien");
    EXPECT_EQ(io::read_csv_table(dir / "paired" / "trials.csv").rows.size(), 12u);
    EXPECT_EQ(io::read_csv_table(dir / "paired" / "trial_timings.csv").rows.size(), 12u);
}

TEST(CliBench, ShapeAndSingleRep) {
    const fs::path dir = scratch("bench");
    ASSERT_EQ(run("bench --p-grid 100,150,200 --reps 1 --out " + dir.string()), 0);
    const auto t = io::read_csv_table(dir / "bench.csv");
    ASSERT_EQ(t.rows.size(), 9u);
    EXPECT_EQ(t.header[0], "p");
    EXPECT_EQ(t.rows[0][t.column("selector")], "lasso");
    EXPECT_EQ(t.rows[0][t.column("ratio")], "1");
}

TEST(CliPath, StepsAndSingleVariable) {
    const auto dir = two_triples_files("path");
    ASSERT_EQ(run("path " + xy(dir) + " --base ien --rho-cut 0.2 --steps 1 --out " + (dir / "p1.csv").string()), 0);
    auto t = io::read_csv_table(dir / "p1.csv");
    EXPECT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.header.size(), 4u + 100u);

    const fs::path one = scratch("path_p1");
    Matrix X(20, 1);
    Vector y(20);
    for (Index i = 0; i < 20; ++i) {
        X(i, 0) = static_cast<double>(i % 7);
        y[i] = 0.5 * X(i, 0) + (i % 3 == 0 ? 0.2 : -0.1);
    }
    write_dataset(one, Dataset(X, y));
    ASSERT_EQ(run("path " + xy(one) + " --out " + (one / "p.csv").string()), 0);
    t = io::read_csv_table(one / "p.csv");
    EXPECT_EQ(t.header.size(), 5u);
    ASSERT_GE(t.rows.size(), 1u);
    EXPECT_EQ(t.rows[0][t.column("variable")], "0");
}

TEST(CliDeterminism, ThreadCountDoesNotChangeOutputs) {
    const auto dir = two_triples_files("determinism");
    for (const char* threads : {"1", "3"}) {
        const std::string tag = std::string("t") + threads;
        ASSERT_EQ(run("select " + xy(dir) + " --alpha 0.2 --base en --seed 11 --threads " + threads + " --out " +
                      (dir / tag / "select").string()),
                  0);
        ASSERT_EQ(run("simulate --p 60 --n 100 --blocks 2x3 --rho 0.7 --actives 6 --runs 4 --alpha 0.2 --base lasso,ien "
                      "--rho-cut 0.3 --seed 9 --threads " +
                      std::string(threads) + " --out " + (dir / tag / "sim").string()),
                  0);
        ASSERT_EQ(run("path " + xy(dir) + " --base en --lambda2 0.5 --threads " + std::string(threads) + " --out " +
                      (dir / tag / "path.csv").string()),
                  0);
    }
    for (const char* f : {"select/selection.json", "select/occurrences.csv", "sim/trials.csv", "sim/summary.json", "path.csv"})
        EXPECT_EQ(slurp(dir / "t1" / f), slurp(dir / "t3" / f)) << f;
    EXPECT_FALSE(slurp(dir / "t1" / "select/selection.json").empty());
}

}  // namespace
