#include "coco/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Run
{
    int code;
    std::string out, err;
};

Run coco_run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = coco::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

struct TempDir
{
    fs::path path;
    TempDir()
    {
        path = fs::temp_directory_path() / ("coco-cli-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string &name) const { return (path / name).string(); }
};

void write(const std::string &path, const std::string &text)
{
    std::ofstream(path) << text;
}

}  // namespace

TEST_CASE("construct then verify round trips bit for bit")
{
    TempDir dir;
    const auto fano = dir / "fano.cc", t2 = dir / "t2.cc";
    REQUIRE(coco_run({"construct", "fixture", "fano-design", "-o", fano}).code == 0);
    REQUIRE(coco_run({"construct", "trivial", "2", "-o", t2}).code == 0);

    const auto prod = dir / "prod.cc", sum = dir / "sum.cc", part = dir / "part.cc";
    CHECK(coco_run({"construct", "tensor", fano, t2, "-o", prod}).code == 0);
    CHECK(coco_run({"construct", "dsum", fano, t2, "-o", sum}).code == 0);
    CHECK(coco_run({"construct", "restrict", prod, "--fibers", "0,2", "-o", part}).code == 0);

    for (const auto &f : {fano, t2, prod, sum, part}) {
        CAPTURE(f);
        const auto v = coco_run({"verify", f});
        CHECK(v.code == 0);
        CHECK(v.out.rfind("ok: ", 0) == 0);
        const auto again = dir / "again.cc";
        REQUIRE(coco_run({"construct", "restrict", f, "--fibers", "0", "-o", again}).code == 0);
    }

    // a restriction to every fiber reproduces the file
    const auto whole = dir / "whole.cc";
    REQUIRE(coco_run({"construct", "restrict", fano, "--fibers", "0,1", "-o", whole}).code == 0);
    CHECK(slurp(whole) == slurp(fano));
    CHECK(coco_run({"verify", part}).out.find("14 points") != std::string::npos);
}

TEST_CASE("design and two-orbit inputs")
{
    TempDir dir;
    const auto inc = dir / "fano.inc", gens = dir / "z5.perm", out = dir / "o.cc";
    write(inc, "v=7 b=7\n1101000\n0110100\n0011010\n0001101\n1000110\n0100011\n1010001\n");
    CHECK(coco_run({"construct", "design", inc, "-o", out}).code == 0);
    const auto fixture = dir / "fixture.cc";
    REQUIRE(coco_run({"construct", "fixture", "fano-design", "-o", fixture}).code == 0);
    CHECK(coco_run({"verify", out}).out == coco_run({"verify", fixture}).out);

    write(gens, "degree=5\n1 2 3 4 0\n");
    CHECK(coco_run({"construct", "two-orbit", gens, "-o", out}).code == 0);
    CHECK(coco_run({"verify", out}).out == "ok: 5 points, 1 fibers, 5 relations\n");

    write(inc, "v=3 b=3\n111\n111\n111\n");
    CHECK(coco_run({"construct", "design", inc, "-o", out}).code == 3);
}

TEST_CASE("exit codes")
{
    TempDir dir;
    CHECK(coco_run({}).code == 1);
    CHECK(coco_run({"verify", dir / "missing.cc"}).code == 1);
    CHECK(coco_run({"bogus"}).code == 1);
    CHECK(coco_run({"--version"}).out == "coco 1.0.0\n");

    const auto bad = dir / "bad.cc";
    write(bad, "points=3\ncolors=2\n0 1 1\n1 0 1\n");
    CHECK(coco_run({"verify", bad}).code == 3);
    write(bad, "points=4\ncolors=3\n0 1 2 2\n1 0 1 2\n2 1 0 1\n2 2 1 0\n");
    const auto r = coco_run({"verify", bad});
    CHECK(r.code == 3);
    CHECK(r.err.find("IntersectionNumberNotConstant") != std::string::npos);
    write(bad, "points=2\ncolors=2\n0 x\n1 0\n");
    CHECK(coco_run({"info", bad}).code == 3);

    CHECK(coco_run({"filter", "--m", "8", "--r", "3", "--rules", "nope"}).code == 1);
    CHECK(coco_run({"filter", "--m", "8", "--r", "3", "--catalog", dir / "missing.txt"}).code == 1);
    const auto cat = dir / "cat.txt";
    write(cat, "m=8: 1+2\n");
    CHECK(coco_run({"filter", "--m", "8", "--r", "3", "--catalog", cat}).code == 1);
    CHECK(coco_run({"table", "--m-max", "17"}).code == 1);
}

TEST_CASE("check reports all three theorems")
{
    TempDir dir;
    const auto f = dir / "f.cc";
    REQUIRE(coco_run({"construct", "fixture", "as16-122-fission", "-o", f}).code == 0);
    const auto r = coco_run({"check", f, "--theorem", "all"});
    CHECK(r.code == 0);
    CHECK(r.out.find("theorem 1 (balance characterization): holds") != std::string::npos);
    CHECK(r.out.find("theorem 2 (one or two idempotents): not-applicable") != std::string::npos);
    CHECK(r.out.find("theorem 3 (reduced fiber bound): hypotheses-not-met") != std::string::npos);
    const auto one = coco_run({"check", f, "--theorem", "3"});
    CHECK(one.out.find("theorem 1") == std::string::npos);
    CHECK(coco_run({"check", f, "--theorem", "4"}).code == 1);
}

TEST_CASE("json output matches the text output")
{
    TempDir dir;
    const auto f = dir / "f.cc";
    REQUIRE(coco_run({"construct", "fixture", "as16-122-fission", "-o", f}).code == 0);
    const auto text = coco_run({"idempotents", f});
    const auto js = coco_run({"idempotents", f, "--json"});
    REQUIRE(js.code == 0);
    const auto j = nlohmann::json::parse(js.out);
    REQUIRE(j["idempotents"].size() == 4);
    for (const auto &p : j["idempotents"]) {
        std::string supp;
        for (const auto &x : p["support"])
            supp += (supp.empty() ? "" : ",") + std::to_string(x.get<int>());
        const auto line = "P" + std::to_string(p["index"].get<int>()) + ": m=" + std::to_string(p["m"].get<int>()) +
                          " n=" + std::to_string(p["n"].get<int>()) + " supp={" + supp +
                          "} principal=" + (p["principal"].get<bool>() ? "true" : "false");
        CHECK(text.out.find(line) != std::string::npos);
    }
    CHECK(j["center_dimension"] == 4);

    const auto ftext = coco_run({"filter", "--m", "9", "--r", "3"});
    const auto fjs = coco_run({"filter", "--m", "9", "--r", "3", "--json"});
    REQUIRE(ftext.code == 0);
    REQUIRE(fjs.code == 0);
    const auto rows = nlohmann::json::parse(fjs.out);
    CHECK(rows.size() == 12);
    for (const auto &row : rows) {
        std::string head = "(" + std::to_string(row["m"].get<int>()) + "," + std::to_string(row["r"].get<int>()) + ",{";
        for (std::size_t i = 0; i < row["d_x"].size(); ++i)
            head += (i ? "," : "") + std::to_string(row["d_x"][i].get<int>());
        head += "},{";
        for (std::size_t i = 0; i < row["d_xy"].size(); ++i)
            head += (i ? "," : "") + std::to_string(row["d_xy"][i].get<int>());
        head += "}): ";
        head += row["status"] == "survives" ? "survives" : "eliminated by " + row["rule"].get<std::string>();
        CHECK(ftext.out.find(head) != std::string::npos);
    }
}

TEST_CASE("dumped matrices")
{
    TempDir dir;
    const auto f = dir / "f.cc";
    REQUIRE(coco_run({"construct", "fixture", "fano-design", "-o", f}).code == 0);
    REQUIRE(coco_run({"idempotents", f, "--dump-matrices", dir / "dump"}).code == 0);
    CHECK(fs::exists(dir.path / "dump" / "P0.txt"));
    CHECK(fs::exists(dir.path / "dump" / "P1.txt"));
    std::ifstream in(dir.path / "dump" / "P0.txt");
    std::string header, first;
    std::getline(in, header);
    CHECK(header == "rows=14 cols=14");
    std::getline(in, first);
    CHECK(std::count(first.begin(), first.end(), ',') == 14);
}

TEST_CASE("table")
{
    const auto r = coco_run({"table", "--m-max", "8"});
    CHECK(r.code == 0);
    CHECK(r.out.find("(r,m)=(2,7)") != std::string::npos);
    const auto j = nlohmann::json::parse(coco_run({"table", "--m-max", "8", "--json"}).out);
    CHECK(j.is_object());
}
