#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "reslim/experiment.hpp"
#include "reslim/io.hpp"

using namespace reslim;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string message_of(const std::string& text) {
    try {
        run_manifest(Manifest::parse(text, "m.txt"));
    } catch (const ManifestError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("manifest parsing") {
    auto m = Manifest::parse("# comment\nkind = ust\n\nseeds = 1..4, 9\nradii = 0.1, 0.2\n", "f");
    CHECK(m.str("kind") == "ust");
    CHECK(m.integers("seeds") == std::vector<std::int64_t>{1, 2, 3, 4, 9});
    CHECK(m.reals("radii") == std::vector<double>{0.1, 0.2});
    CHECK(m.real("missing", 2.5) == 2.5);
    CHECK(m.entries.at("seeds").second == 4);
    CHECK_THROWS_AS(Manifest::parse("kind ust\n"), ManifestError);
    CHECK_THROWS_AS(Manifest::parse("a = 1\na = 2\n"), ManifestError);
}

TEST_CASE("manifest errors name file and line") {
    CHECK(message_of("kind = ust\nseeds =\n") == "m.txt:2: at least one seed required");
    CHECK(message_of("kind = ust\nseeds = 1\nbogus = 3\n") == "m.txt:3: unknown key 'bogus' for kind 'ust'");
    CHECK(message_of("kind = nope\n").rfind("m.txt:1: unknown kind", 0) == 0);
    CHECK(message_of("kind = gwcrt\nseeds = 1\noffspring = 0.5, 0.5\n").rfind("m.txt:3:", 0) == 0);
    CHECK(message_of("kind = criterion\ncriterion = A99\n").rfind("m.txt:2:", 0) == 0);
    CHECK(message_of("seeds = 1\n").find("missing required key 'kind'") != std::string::npos);
}

TEST_CASE("experiments are reproducible") {
    auto dir = std::filesystem::temp_directory_path() / "reslim_unit_repro";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    auto manifest = dir / "ust.txt";
    std::ofstream(manifest) << "kind = ust\nside = 4\ndims = 2\nseeds = 1..3\noutput = " << (dir / "out").string() << "\n";

    REQUIRE(run_experiment(manifest.string()) == 0);
    auto first = json::parse(slurp(dir / "out" / "results.json"));
    auto csv = slurp(dir / "out" / "data.csv");
    auto lock = slurp(dir / "out" / "manifest.lock");
    REQUIRE(run_experiment(manifest.string()) == 0);
    auto second = json::parse(slurp(dir / "out" / "results.json"));
    CHECK(first.contains("timestamp"));
    first.erase("timestamp");
    second.erase("timestamp");
    CHECK(first.dump() == second.dump());
    CHECK(csv == slurp(dir / "out" / "data.csv"));
    CHECK(lock == slurp(dir / "out" / "manifest.lock"));
    CHECK(lock.find("input.seeds = 1..3") != std::string::npos);
    CHECK(first["rows"].size() == 3);
    CHECK(first["invariants_hold"] == true);
    std::filesystem::remove_all(dir);
}

TEST_CASE("gwcrt with one tree size reports no trend") {
    GwcrtConfig cfg;
    cfg.n = {20};
    cfg.seeds = {1, 2, 3};
    cfg.grid = 256;
    auto rep = flagship_gwcrt(cfg);
    CHECK(rep["trend"].is_null());
    CHECK(rep["per_n"].size() == 1);
    CHECK(rep["rows"].size() == 3);
    CHECK(flagship_gwcrt(cfg).dump() == rep.dump());
}

TEST_CASE("space and network round trips") {
    Rng rng = stream(101, 0);
    RootedMeasuredSpace s(oracle::plane_points(5, rng), 2, {0.1, 0.2, 0.3, 0.2, 0.2});
    auto back = io::space_from_json(json::parse(io::to_json(s).dump()));
    CHECK(back.root == 2);
    CHECK(back.weights == s.weights);
    CHECK(back.space.flat() == s.space.flat());
    auto d = io::space_from_json(json{{"points", 2}, {"distance_matrix", {{0, 1}, {1, 0}}}});
    CHECK(d.root == 0);
    CHECK(d.weights == std::vector<double>{1, 1});
    CHECK_THROWS_AS(io::space_from_json(json{{"points", 2}, {"distance_matrix", {{0, 1}, {2, 0}}}}), Error);

    auto net = random_network(6, 0.3, rng);
    auto nb = io::network_from_json(json::parse(io::to_json(net).dump()));
    CHECK(nb.mu() == net.mu());
    CHECK(nb.resistance_metric().flat() == net.resistance_metric().flat());

    PlaneTree t(std::vector<long>{-1, 0, 0, 2});
    CHECK(io::tree_from_json(io::to_json(t)) == t);

    auto g = io::gaussian_from_json(json{{"n", 2}, {"covariance", {{1.0, 0.5}, {0.5, 1.0}}}});
    CHECK(g(0, 1) == 0.5);
}

TEST_CASE("path round trip") {
    KilledPath p{{{0.0, 1}, {0.5, 0}, {1.25, 2}}, ExtReal(2.0), 3.0};
    std::istringstream in(io::to_jsonl(p));
    auto q = io::path_from_jsonl(in);
    REQUIRE(q.events.size() == 3);
    CHECK(q.events[2].t == 1.25);
    CHECK(q.events[2].state == 2);
    CHECK(q.kill_time == ExtReal(2.0));
    CHECK(q.horizon == 3.0);

    std::istringstream inf("{\"t\": 0, \"state\": 0}\n\n{\"kill\": \"inf\"}\n");
    CHECK(io::path_from_jsonl(inf).kill_time.is_infinite());
    std::istringstream bad("{\"t\": 0}\n");
    CHECK_THROWS_AS(io::path_from_jsonl(bad), Error);
    CHECK(io::to_json(ExtReal::infinity()) == "inf");
}
