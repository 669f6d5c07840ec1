#include "cli.hpp"
#include "support.hpp"

#include <ramsey/cliques.hpp>
#include <ramsey/ledger.hpp>

#include <doctest.h>

#include <sstream>

using namespace ramsey;

namespace
{
    struct Run
    {
        int code = -1;
        std::string out, err;
    };

    auto run(std::vector<std::string> args) -> Run
    {
        std::ostringstream out, err;
        Run r;
        r.code = cli::dispatch(args, out, err);
        r.out = out.str();
        r.err = err.str();
        return r;
    }

    auto data(const std::string & name) -> std::string
    {
        return (testing::source_dir() / "data" / name).string();
    }

    auto recipe(const std::string & name) -> std::string
    {
        return (testing::source_dir() / "recipes" / name).string();
    }

    auto contains(const std::string & text, const std::string & part) -> bool
    {
        return text.find(part) != std::string::npos;
    }
}

TEST_CASE("verify")
{
    auto r = run({"verify", data("pentagon.json"), "--avoid", "3,3"});
    CHECK(r.code == cli::exit_ok);
    CHECK(contains(r.out, "PASS"));

    r = run({"verify", data("pentagon.json"), "--avoid", "3,2"});
    CHECK(r.code == cli::exit_negative);
    CHECK(contains(r.out, "FAIL witness"));

    r = run({"verify", data("pentagon.json"), "--witness", "--oracle"});
    CHECK(r.code == cli::exit_ok);
    CHECK(contains(r.out, "witness 0"));
    CHECK(contains(r.out, "oracle agrees"));

    CHECK(run({"verify", data("pentagon.json"), "--avoid", "3,3,3"}).code == cli::exit_usage);
    CHECK(run({"verify", data("missing.json")}).code == cli::exit_usage);
}

TEST_CASE("usage errors")
{
    auto r = run({"frobnicate"});
    CHECK(r.code == cli::exit_usage);
    CHECK_FALSE(r.err.empty());
    CHECK(run({}).code == cli::exit_usage);
    CHECK(run({"encode", "round", "--order", "5", "--avoid", "3,3"}).code == cli::exit_usage);
    CHECK(run({"encode", "cyclic", "--order", "5"}).code == cli::exit_usage);
    CHECK(run({"construct", "product", data("pentagon.json")}).code == cli::exit_usage);
    CHECK(run({"--help"}).code == cli::exit_ok);
}

TEST_CASE("encode and solve")
{
    testing::ScratchDir dir("cli-sat");
    auto six = (dir / "r33.cnf").string();
    CHECK(run({"encode", "cyclic", "--order", "6", "--avoid", "3,3", "--out", six}).code == cli::exit_ok);
    auto r = run({"solve", six});
    CHECK(r.code == cli::exit_negative);
    CHECK(contains(r.out, "s UNSATISFIABLE"));

    auto five = (dir / "c5.cnf").string(), model = (dir / "c5.model").string(), decoded = (dir / "c5.json").string();
    CHECK(run({"encode", "cyclic", "--order", "5", "--avoid", "3,3", "--out", five}).code == cli::exit_ok);
    CHECK(read_file(five) == read_file(testing::source_dir() / "tests" / "golden" / "cyclic_5_3_3.cnf"));
    CHECK(run({"solve", five, "-o", model}).code == cli::exit_ok);
    CHECK(run({"decode", "--cnf", five, "--model", model, "--out", decoded}).code == cli::exit_ok);
    CHECK(run({"verify", decoded}).code == cli::exit_ok);

    CHECK(run({"solve", six, "--conflicts", "0"}).code == cli::exit_usage);
    CHECK(run({"encode", "cyclic", "--order", "40", "--avoid", "6,6", "--clause-cap", "100"}).code == cli::exit_usage);
}

TEST_CASE("constructions round-trip through files")
{
    testing::ScratchDir dir("cli-construct");
    auto path = [&](const std::string & name) { return (dir / name).string(); };
    CHECK(run({"construct", "edge", "-o", path("e.json")}).code == cli::exit_ok);
    CHECK(run({"construct", "pentagon", "-o", path("p.json")}).code == cli::exit_ok);
    CHECK(run({"construct", "product", "--a", path("p.json"), "--b", path("e.json"), "-o", path("c14.json")}).code == cli::exit_ok);
    CHECK(run({"construct", "song", path("p.json"), path("p.json"), "-o", path("s25.json")}).code == cli::exit_ok);
    CHECK(run({"construct", "paley", "17", "-o", path("p17.json")}).code == cli::exit_ok);
    CHECK(run({"construct", "rainbow", "5", "-o", path("r5.json")}).code == cli::exit_ok);
    CHECK(run({"construct", "double", path("p.json"), "-o", path("t10.json")}).code == cli::exit_ok);
    CHECK(run({"construct", "tile", path("t10.json"), "3", "-o", path("u3.json")}).code == cli::exit_ok);
    CHECK(run({"construct", "template", path("t10.json"), path("p.json"), "-o", path("tc41.json")}).code == cli::exit_ok);

    for (const auto * name : {"e.json", "p.json", "c14.json", "s25.json", "p17.json", "r5.json", "t10.json", "u3.json", "tc41.json"}) {
        CAPTURE(name);
        auto doc = load_colouring(path(name));
        REQUIRE(doc.avoid.has_value());
        CHECK(ramsey_check(doc, *doc.avoid).passes);
        CHECK(serialize_colouring(doc) == read_file(path(name)));
        CHECK(run({"verify", path(name)}).code == cli::exit_ok);
    }
    CHECK(load_colouring(path("c14.json")).order() == 14);
    CHECK(load_colouring(path("s25.json")).avoid == ParameterVector{{5, 5}});
    CHECK(load_colouring(path("p17.json")).avoid == ParameterVector{{4, 4}});

    auto r = run({"construct", "product", path("p.json"), path("p.json"), "-o", path("u.json"), "--no-verify"});
    CHECK(r.code == cli::exit_ok);
    CHECK(contains(load_colouring(path("u.json")).comment, "unverified"));

    auto a = run({"construct", "product", path("p.json"), path("e.json")});
    auto b = run({"construct", "product", path("p.json"), path("e.json")});
    CHECK(a.out == b.out);
}

TEST_CASE("template commands")
{
    testing::ScratchDir dir("cli-template");
    auto path = [&](const std::string & name) { return (dir / name).string(); };
    CHECK(run({"construct", "pentagon", "-o", path("p.json")}).code == cli::exit_ok);
    CHECK(run({"construct", "double", path("p.json"), "-o", path("t10.json")}).code == cli::exit_ok);
    auto r = run({"template-check", path("t10.json"), "--reps", "4", "--rainbow-n", "4"});
    CHECK(r.code == cli::exit_ok);
    CHECK(contains(r.out, "USEFUL"));

    r = run({"search", "template", "--prototype", path("p.json"), "--t", "2", "--avoid", "3,3,3"});
    CHECK(r.code == cli::exit_negative);
    CHECK(contains(r.out, "no template"));

    write_file(path("w8.json"), R"({"kind": "cyclic", "order": 8, "num_colours": 2, "avoid": [3, 4], "colours": [1, 2, 2, 1]})");
    r = run({"search", "template", "--prototype", path("w8.json"), "--t", "3", "--avoid", "3,4,3", "-o", path("w19.json")});
    CHECK(r.code == cli::exit_ok);
    CHECK(run({"template-check", path("w19.json"), "--reps", "8", "--rainbow-n", "6"}).code == cli::exit_ok);
    CHECK(run({"verify", path("w19.json")}).code == cli::exit_ok);

    r = run({"encode", "extension", "--prototype", path("w8.json"), "--t", "3", "--avoid", "3,4,3"});
    CHECK(r.code == cli::exit_ok);
    CHECK(contains(r.out, "c ramsey extension prototype-order 8 width 3"));
}

TEST_CASE("ledger operations")
{
    testing::ScratchDir dir("cli-ledger");
    auto store = (dir / "facts.jsonl").string();
    auto ledger = [&](std::vector<std::string> args) {
        args.insert(args.begin(), {"--store", store, "ledger"});
        return run(args);
    };

    CHECK(ledger({"add", data("pentagon.json")}).code == cli::exit_ok);
    CHECK(ledger({"add", data("pentagon.json")}).code == cli::exit_ok);
    CHECK(load_ledger(store).size() == 1);
    CHECK(ledger({"assert", "3,6,6", "337", "--source", "reported", "--structure", "cyclic"}).code == cli::exit_ok);
    CHECK(ledger({"assert", "3", "--gamma", "3.280", "--source", "external"}).code == cli::exit_ok);
    CHECK(ledger({"assert", "3,3", "6", "--source", "x", "--structure", "round"}).code == cli::exit_usage);
    CHECK(ledger({"derive", "--rules", "r3,r4,r7,r11"}).code == cli::exit_ok);

    auto r = ledger({"best", "R(3,3,3,3)", "--at-least", "42"});
    CHECK(r.code == cli::exit_ok);
    CHECK(contains(r.out, "R(3,3,3,3) >= 42"));
    CHECK(contains(r.out, "explicit"));
    CHECK(ledger({"best", "R(6,3,6)"}).out == ledger({"best", "R(3,6,6)"}).out);
    CHECK(ledger({"best", "R(3,3,3,3)", "--at-least", "50"}).code == cli::exit_negative);
    CHECK(ledger({"best", "R(7,7)"}).code == cli::exit_negative);
    CHECK(contains(ledger({"best", "Gamma(5)"}).out, "10.758400"));

    r = ledger({"table", "--k", "3..3", "--r", "1..4", "--format", "md"});
    CHECK(r.code == cli::exit_ok);
    CHECK(contains(r.out, "| 3 | - | 5 E | - | 41 D |"));
    CHECK(contains(ledger({"table", "--format", "csv"}).out, "ramsey,\"3,6,6\",338,D"));
    CHECK(ledger({"table", "--format", "html"}).code == cli::exit_usage);

    CHECK(ledger({"audit"}).code == cli::exit_ok);
    CHECK(contains(ledger({"list"}).out, "#1 E graph (3,3;5) cyclic"));

    ColouringDocument bad{LengthColouring::linear(6, 2, {1, 2, 2, 1, 1}), ParameterVector{{3, 3}}, std::nullopt, {}};
    save_colouring(dir / "bad.json", bad);
    r = ledger({"add", (dir / "bad.json").string()});
    CHECK(r.code == cli::exit_negative);
    CHECK(contains(r.out, "rejected"));

    // Derived facts and stored references survive a reload.
    auto before = read_file(store);
    CHECK(ledger({"derive", "--rules", "r3,r4,r7,r11"}).out == "0 new fact(s)\n");
    CHECK(read_file(store) == before);
    CHECK(Ledger::parse(before).audit(dir.path()).empty());
}

TEST_CASE("recipes")
{
    testing::ScratchDir dir("cli-recipes");
    auto store = (dir / "facts.jsonl").string();

    auto r = run({"--store", store, "run", recipe("reproduce_r3_bounds.json")});
    CHECK(r.code == cli::exit_ok);
    CHECK(contains(r.out, "R(8,8,8) >= 7174"));
    CHECK(contains(r.out, "R(9,9,9) >= 15041"));
    CHECK(load_ledger(store).size() > 10);

    auto desk = (dir / "desk.jsonl").string();
    r = run({"--store", desk, "run", recipe("desk_scale_compounds.json"), "--workdir", (dir / "work").string()});
    CHECK(r.code == cli::exit_ok);
    CHECK(contains(r.out, "R(3,3,3,3) >= 42"));
    CHECK(std::filesystem::exists(dir / "work" / "c41.json"));

    write_file(dir / "empty.json", R"({"name": "empty", "steps": []})");
    r = run({"--store", (dir / "e.jsonl").string(), "run", (dir / "empty.json").string()});
    CHECK(r.code == cli::exit_ok);

    // A failing step leaves the store untouched.
    auto before = read_file(store);
    write_file(dir / "fails.json",
        R"j({"name": "fails", "steps": [["ledger", "assert", "4,4", "17", "--source", "x"], ["ledger", "best", "R(9,9,9)", "--at-least", "20000"]]})j");
    r = run({"--store", store, "run", (dir / "fails.json").string()});
    CHECK(r.code == cli::exit_negative);
    CHECK(contains(r.out, "step 2 failed"));
    CHECK(read_file(store) == before);
    CHECK_FALSE(std::filesystem::exists(store + ".run"));

    write_file(dir / "unknown.json", R"({"name": "x", "steps": [], "extra": 1})");
    CHECK(run({"--store", store, "run", (dir / "unknown.json").string()}).code == cli::exit_usage);
}
