#include "doctest.h"

#include "axt/csv.hpp"
#include "axt/errors.hpp"
#include "axt/experiment.hpp"

#include <filesystem>
#include <set>

using namespace axt;
namespace fs = std::filesystem;

namespace {

DesignConfig two_tap()
{
    DesignConfig d;
    d.taps = 2;
    d.width = 6;
    d.coeffs = {0x3F, 0x21};
    d.n_variants = 9;
    return d;
}

ExperimentConfig small_experiment(const std::string& out)
{
    ExperimentConfig c;
    c.seed = 3;
    c.design.n_variants = 5;
    c.stealth_vectors = 2000;
    c.witness_budget = 200000;
    c.out_dir = out;
    return c;
}

fs::path scratch(const std::string& name)
{
    auto p = fs::temp_directory_path() / ("axt_test_" + name);
    fs::remove_all(p);
    fs::remove_all(p.string() + ".partial");
    return p;
}

}  // namespace

TEST_CASE("csv quoting round trips")
{
    std::vector<CsvRow> rows{{"a", "b,c", "say \"hi\""}, {"", "line\nbreak", "x"}};
    std::string text;
    for (const auto& r : rows) text += csv_line(r) + "\n";
    CHECK(parse_csv(text) == rows);
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK_THROWS_AS(parse_csv("a,\"open\n"), SyntaxError);
    CHECK(fmt_num(0.25) == "0.25");
    CHECK(fmt_num(1e9) == "1e+09");
}

TEST_CASE("library rows round trip")
{
    auto lib = default_library();
    CHECK(parse_library(library_rows(lib)) == lib);
    CHECK_THROWS_AS(parse_library({{"op", "arch", "k", "loa_and_carry"}, {"div", "exact", "0", "0"}}), BadParams);
    CHECK_THROWS_AS(parse_library({{"op", "arch", "k", "loa_and_carry"}, {"add", "loa", "x", "0"}}), BadParams);
    CHECK_THROWS_AS(parse_library({{"op", "arch"}}), BadParams);
}

TEST_CASE("assignment strings round trip")
{
    DesignConfig d;
    d.assign["mul1"] = {ArchKind::Block22, 2, false};
    d.assign["add0"] = {ArchKind::Loa, 4, true};
    const auto text = format_assignment(d);
    CHECK(text == "mul0=exact-k0;mul1=block22-k2;mul2=exact-k0;mul3=exact-k0;add0=loa-k4-ac;add1=exact-k0;add2=exact-k0");
    auto back = parse_assignment(text);
    CHECK(back.at("mul1") == d.assign["mul1"]);
    CHECK(back.at("add0") == d.assign["add0"]);
    CHECK(back.at("mul0") == ArchChoice{});
    CHECK(parse_assignment("").empty());
    CHECK_THROWS_AS(parse_assignment("mul0"), BadParams);
    CHECK_THROWS_AS(parse_assignment("mul0=wallace-k1"), BadParams);
    CHECK_THROWS_AS(parse_assignment("mul0=trunc-kx"), BadParams);
}

TEST_CASE("derived seeds are stable and label dependent")
{
    CHECK(derive_seed(1, "detect") == derive_seed(1, "detect"));
    CHECK(derive_seed(1, "detect") != derive_seed(2, "detect"));
    CHECK(derive_seed(1, "detect") != derive_seed(1, "infect"));
}

TEST_CASE("an all-exact library yields the exact design only")
{
    SpecCache cache({1000, 1, StreamMode::Uniform, 0.0}, 0.01);
    std::vector<LibraryEntry> lib{{OpType::Mul, {}}, {OpType::Add, {}}};
    auto vs = generate_variants(two_tap(), lib, {}, cache);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].e_composed == 0.0);
    CHECK(vs[0].sum_e == 0.0);
    CHECK(vs[0].p_composed == doctest::Approx(3.0));
    CHECK(vs[0].check.pass);
}

TEST_CASE("variants are distinct, front ordered and within budget")
{
    SpecCache cache({1000, 1, StreamMode::Uniform, 0.0}, 0.01);
    std::vector<LibraryEntry> lib{{OpType::Mul, {}},
                                  {OpType::Mul, {ArchKind::Trunc, 1, false}},
                                  {OpType::Mul, {ArchKind::Trunc, 2, false}},
                                  {OpType::Add, {}}};
    BudgetConstraints b;
    b.e_prime = 1.0;
    auto vs = generate_variants(two_tap(), lib, b, cache);
    REQUIRE(!vs.empty());
    CHECK(vs.size() <= 9);

    // Every (sum_e, sum_p) point of the 3 x 3 assignment grid.
    std::vector<std::pair<double, double>> grid;
    std::vector<const ModuleSpec*> mul;
    for (int k : {0, 1, 2})
        mul.push_back(&cache.get({OpType::Mul, k ? ArchKind::Trunc : ArchKind::Exact, 6, k, false}));
    const ModuleSpec& add = cache.get({OpType::Add, ArchKind::Exact, 12, 0, false});
    for (auto* a : mul)
        for (auto* m : mul) grid.push_back({a->e_norm + m->e_norm + add.e_norm, a->p_norm + m->p_norm + add.p_norm});

    std::set<std::string> seen;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const auto& v = vs[i];
        CHECK(seen.insert(format_assignment(v.config)).second);
        if (i > 0) CHECK(vs[i - 1].front <= v.front);
        CHECK(v.check.pass);
        CHECK(v.e_composed <= b.e_prime);
        auto again = check_budget(v.specs, v.e_composed, v.p_composed, b, cache.stream());
        CHECK(again.pass);
        if (v.front == 0)
            for (auto [e, p] : grid) CHECK_FALSE((e <= v.sum_e && p <= v.sum_p && (e < v.sum_e || p < v.sum_p)));
    }
}

TEST_CASE("an unreachable error cap is infeasible")
{
    SpecCache cache({1000, 1, StreamMode::Uniform, 0.0}, 0.01);
    std::vector<LibraryEntry> lib{{OpType::Mul, {ArchKind::Trunc, 4, false}}, {OpType::Add, {}}};
    BudgetConstraints b;
    b.e_prime = 1e-9;
    CHECK_THROWS_AS(generate_variants(two_tap(), lib, b, cache), BudgetInfeasible);
    std::vector<LibraryEntry> no_adder{{OpType::Mul, {}}};
    CHECK_THROWS_AS(generate_variants(two_tap(), no_adder, {}, cache), BadParams);
}

TEST_CASE("experiment artifacts are reproducible")
{
    auto a = scratch("run_a"), b = scratch("run_b");
    auto ra = run_experiment(small_experiment(a.string()));
    run_experiment(small_experiment(b.string()));
    for (const char* f : {"library.csv", "variants.csv", "stealth.csv", "ht_ground_truth.csv", "detect_report.csv",
                          "metrics.csv", "experiment.log", "netlists/timing.csv"}) {
        CAPTURE(f);
        REQUIRE(fs::exists(a / f));
        CHECK(read_text_file((a / f).string()) == read_text_file((b / f).string()));
    }
    for (const auto& v : ra.variants) CHECK(fs::exists(a / "netlists" / (v.id + ".net")));
    CHECK_FALSE(fs::exists(a.string() + ".partial"));

    // The written tables parse back into what the run reported.
    auto truth = parse_ground_truth(read_csv_file((a / "ht_ground_truth.csv").string()));
    CHECK(truth == ra.truth);
    auto report = parse_detect_report(read_csv_file((a / "detect_report.csv").string()));
    auto m = score(report, truth);
    CHECK(m.tp == ra.metrics.tp);
    CHECK(m.fp == ra.metrics.fp);
    CHECK(m.fn == ra.metrics.fn);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("a clean experiment has no false-negative rate")
{
    auto dir = scratch("clean");
    auto c = small_experiment(dir.string());
    c.infected_fraction = 0.0;
    auto r = run_experiment(c);
    CHECK_FALSE(r.metrics.fnr.has_value());
    CHECK(r.metrics.fp == 0);
    auto rows = read_csv_file((dir / "metrics.csv").string());
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][2] == "fnr");
    CHECK(rows[1][2] == "n/a");
    fs::remove_all(dir);
}

TEST_CASE("a failed experiment leaves no output directory")
{
    auto dir = scratch("fail");
    auto c = small_experiment(dir.string());
    c.library = {{OpType::Mul, {ArchKind::Trunc, 4, false}}, {OpType::Add, {}}};
    c.budget.e_prime = 1e-9;
    CHECK_THROWS_AS(run_experiment(c), BudgetInfeasible);
    CHECK_FALSE(fs::exists(dir));
    CHECK_FALSE(fs::exists(dir.string() + ".partial"));
    c.infected_fraction = 1.5;
    CHECK_THROWS_AS(run_experiment(c), BadParams);
}
