#include "cli_runner.hpp"
#include "commands.hpp"

#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace isodelay;
using clirun::Scratch;

namespace {

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("range parsing") {
    const auto r = cli::parse_range("1:2:0.25");
    CHECK(r.values() == std::vector<double>{1.0, 1.25, 1.5, 1.75, 2.0});
    CHECK(cli::parse_range("0:1.5:0.01").values().size() == 151);
    CHECK_THROWS_AS((void)cli::parse_range("1:2"), cli::UsageError);
    CHECK_THROWS_AS((void)cli::parse_range("1:x:0.1"), cli::UsageError);
    CHECK_THROWS_AS((void)cli::parse_range("2:1:0.1"), cli::UsageError);
    CHECK_THROWS_AS((void)cli::parse_range("1:2:0"), cli::UsageError);
    CHECK(cli::parse_window("10:30") == std::pair<double, double>{10.0, 30.0});
    CHECK_THROWS_AS((void)cli::parse_window("30:10"), cli::UsageError);
}

TEST_CASE("bound table over the c_v axis") {
    cli::BoundOptions opts;
    opts.axis = cli::BoundAxis::CV;
    opts.range = {0.0, 1.0, 0.1};
    opts.alphas = {0.8};
    const auto rows = cli::bound_table(opts);
    REQUIRE(!rows.empty());
    CHECK(rows.front().x == 0.0);
    CHECK(rows.front().t_max_days == doctest::Approx(1.8232155679395459).epsilon(1e-12));
    for (double marker : cli::kCvMarkers) {
        CHECK(std::any_of(rows.begin(), rows.end(), [&](const auto& r) { return r.x == marker; }));
    }
    CHECK(std::is_sorted(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.x < b.x; }));
}

TEST_CASE("classify examples through the library") {
    cli::ClassifyOptions opts;
    opts.alpha = 0.8;
    opts.r0 = 3.0;
    auto res = cli::classify(opts);
    CHECK(res.verdict.kind == VerdictKind::StableUpTo);
    CHECK(*res.verdict.t_max == doctest::Approx(1.823).epsilon(1e-3));
    opts.alpha = 0.6;
    CHECK(cli::classify(opts).verdict.kind == VerdictKind::InfeasibleAtZeroDelay);
    opts.r0 = 0.5;
    CHECK(cli::classify(opts).verdict.kind == VerdictKind::UnconditionallyStable);
    opts.mu = 4.0;
    CHECK_THROWS_AS((void)cli::classify(opts), cli::UsageError);
}

TEST_CASE("classify via the executable") {
    const Scratch s("classify");
    auto r = s.run("classify --alpha 0.8 --r0 3 --gamma 0.1");
    CHECK(r.exit_code == 0);
    CHECK(clirun::field(r.out, "verdict") == "StableUpTo");
    CHECK(std::stod(clirun::field(r.out, "t_max")) == doctest::Approx(std::log(1.2) / 0.1).epsilon(1e-9));
    CHECK(std::filesystem::exists(s.file("classify.txt")));
    CHECK(std::filesystem::exists(s.file("classify.txt.meta")));

    r = s.run("classify --alpha 0.6 --r0 3");
    CHECK(clirun::field(r.out, "verdict") == "InfeasibleAtZeroDelay");
    r = s.run("classify --alpha 0.6 --r0 0.5");
    CHECK(clirun::field(r.out, "verdict") == "UnconditionallyStable");

    s.write("dist.csv", "k,count\n1,500\n7,oops\n");
    r = s.run("classify --alpha 0.8 --rho 0.075 --dist dist.csv");
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("line 3") != std::string::npos);
    CHECK(line_count(r.err) == 1);

    s.write("dist.csv", "k,count\n1,500\n7,500\n");
    r = s.run("classify --alpha 0.8 --rho 0.075 --dist dist.csv");
    CHECK(r.exit_code == 0);
    CHECK(clirun::field(r.out, "beta_h") != "");
}

TEST_CASE("usage errors exit nonzero with one line") {
    const Scratch s("usage");
    for (const char* args : {"bound --range 1:2", "bound --range a:b:c", "bound --axis z", "classify --r0 3",
                             "netsim --graph er", "frobnicate"}) {
        CAPTURE(args);
        const auto r = s.run(args);
        CHECK(r.exit_code == 2);
        CHECK(line_count(r.err) == 1);
        CHECK(r.err.rfind("error kind=", 0) == 0);
    }
}

TEST_CASE("bound reruns are byte-identical and carry metadata") {
    const Scratch s("bound");
    REQUIRE(s.run("bound --axis cv --alpha 0.8,0.9 --out a.csv").exit_code == 0);
    REQUIRE(s.run("bound --axis cv --alpha 0.8,0.9 --out b.csv").exit_code == 0);
    const auto a = clirun::slurp(s.file("a.csv"));
    CHECK(a == clirun::slurp(s.file("b.csv")));
    CHECK(a.rfind("x,alpha,T_max_days,verdict\n", 0) == 0);
    CHECK(a.find("\n0.37,") != std::string::npos);
    CHECK(a.find("\n0.67") != std::string::npos);
    const auto meta = clirun::slurp(s.file("a.csv.meta"));
    CHECK(meta.find("subcommand=bound") != std::string::npos);
    CHECK(meta.find("version=") != std::string::npos);
    CHECK(meta.find("help") == std::string::npos);
}

TEST_CASE("dde via the executable") {
    const Scratch s("dde");
    auto r = s.run("dde --system homogeneous --r0 3 --t-end 30 --window 10:30");
    REQUIRE(r.exit_code == 0);
    CHECK(std::stod(clirun::field(r.out, "growth_rate")) == doctest::Approx(0.2).epsilon(0.01));

    s.write("dist.csv", "k,count\n1,500\n3,200\n7,500\n");
    r = s.run("dde --system partitioned --dist dist.csv --rho 0.05 --alpha 0.5 --t-delay 2 --t-end 50 --window 20:50 --lemma1");
    REQUIRE(r.exit_code == 0);
    CHECK(std::stod(clirun::field(r.out, "max_rel_gap")) < 1e-6);
    const auto csv = clirun::slurp(s.file("trajectory.csv"));
    CHECK(csv.rfind("t,I_partitioned,I_reduced\n", 0) == 0);

    r = s.run("dde --system homogeneous --r0 3 --alpha 0.5 --t-delay 1 --dt 0.5");
    CHECK(r.exit_code == 2);
}

TEST_CASE("netsim reruns are byte-identical across thread counts") {
    const Scratch s("netsim");
    const std::string base = "netsim --nodes 2000 --runs 4 --days 15 --base-seed 3 --alpha 0.3 --t-delay 2";
    REQUIRE(s.run(base + " --threads 1 --out one").exit_code == 0);
    REQUIRE(s.run(base + " --threads 3 --out three").exit_code == 0);
    CHECK(clirun::slurp(s.file("one_runs.csv")) == clirun::slurp(s.file("three_runs.csv")));
    CHECK(clirun::slurp(s.file("one_summary.csv")) == clirun::slurp(s.file("three_summary.csv")));
    CHECK(line_count(clirun::slurp(s.file("one_runs.csv"))) == 1 + 4 * 15);
    CHECK(std::filesystem::exists(s.file("one.meta")));
}
