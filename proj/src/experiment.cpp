#include "reslim/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "reslim/acceptance.hpp"
#include "reslim/entropy.hpp"
#include "reslim/io.hpp"
#include "reslim/process.hpp"
#include "reslim/trees.hpp"

namespace reslim {

using nlohmann::json;

#ifndef RESLIM_VERSION
#define RESLIM_VERSION "0.1.0"
#endif

std::string version() { return RESLIM_VERSION; }

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double median(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

double w1(std::vector<double> a, std::vector<double> b) {
    // Empirical Wasserstein-1 via the quantile coupling on a common grid.
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t grid = a.size() * b.size();
    double s = 0.0;
    for (std::size_t k = 0; k < grid; ++k) s += std::abs(a[k / b.size()] - b[k / a.size()]);
    return s / double(grid);
}

std::string timestamp() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

}  // namespace

Manifest Manifest::parse(const std::string& text, const std::string& file) {
    Manifest m;
    m.file = file;
    std::stringstream ss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        auto where = file + ":" + std::to_string(lineno) + ": ";
        if (eq == std::string::npos) throw ManifestError(where + "expected key = value");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (key.empty() || !std::all_of(key.begin(), key.end(), [](char c) { return std::islower(c) || c == '_'; }))
            throw ManifestError(where + "invalid key '" + key + "'");
        if (m.entries.count(key)) throw ManifestError(where + "duplicate key '" + key + "'");
        m.entries[key] = {value, lineno};
    }
    return m;
}

Manifest Manifest::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ManifestError(path + ":0: cannot open manifest");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

void Manifest::fail(const std::string& key, const std::string& msg) const {
    auto it = entries.find(key);
    std::size_t line = it == entries.end() ? 0 : it->second.second;
    throw ManifestError(file + ":" + std::to_string(line) + ": " + msg);
}

std::string Manifest::str(const std::string& key) const {
    auto it = entries.find(key);
    if (it == entries.end()) fail(key, "missing required key '" + key + "'");
    return it->second.first;
}

std::string Manifest::str(const std::string& key, const std::string& fallback) const {
    return has(key) ? str(key) : fallback;
}

double Manifest::real(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    auto v = str(key);
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        fail(key, "'" + key + "' must be a number");
    }
}

std::size_t Manifest::count(const std::string& key, std::size_t fallback) const {
    if (!has(key)) return fallback;
    auto v = integers(key);
    if (v.size() != 1 || v[0] < 0) fail(key, "'" + key + "' must be one nonnegative integer");
    return std::size_t(v[0]);
}

std::vector<double> Manifest::reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_list(str(key))) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            fail(key, "'" + item + "' is not a number");
        }
    }
    return out;
}

std::vector<std::int64_t> Manifest::integers(const std::string& key) const {
    std::vector<std::int64_t> out;
    auto parse_int = [&](const std::string& s) -> std::int64_t {
        try {
            std::size_t pos = 0;
            auto v = std::stoll(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            fail(key, "'" + s + "' is not an integer");
        }
    };
    for (const auto& item : split_list(str(key))) {
        auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(parse_int(item));
        } else {
            auto lo = parse_int(trim(item.substr(0, dots))), hi = parse_int(trim(item.substr(dots + 2)));
            if (hi < lo) fail(key, "empty range '" + item + "'");
            for (auto v = lo; v <= hi; ++v) out.push_back(v);
        }
    }
    return out;
}

json flagship_gwcrt(const GwcrtConfig& cfg) {
    if (cfg.seeds.empty()) throw Error("at least one seed required");
    if (cfg.n.empty()) throw Error("at least one tree size required");
    auto off = cfg.offspring.empty() ? geometric_offspring(0.5, 64) : cfg.offspring;
    double second = 0.0;
    for (std::size_t k = 0; k < off.size(); ++k) second += double(k * k) * off[k];
    const double sigma = std::sqrt(second - 1.0);
    if (!(sigma > 0.0)) throw Error("offspring law must have positive variance");
    auto sizes = cfg.n;
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

    json rows = json::array();
    json per_n = json::array();
    std::map<std::size_t, std::vector<double>> root_lt, max_lt;

    std::vector<double> crt_height, crt_mean;
    for (auto seed : cfg.seeds) {
        Rng rng = stream(seed, 2000000);
        auto e = brownian_excursion(cfg.grid + 1, rng);
        double h = 0.0, s = 0.0;
        for (double v : e.values) {
            h = std::max(h, std::sqrt(2.0) * v);
            s += std::sqrt(2.0) * v * e.h;
        }
        crt_height.push_back(h);
        crt_mean.push_back(s);
    }

    for (auto n : sizes) {
        const double bn = sigma * std::sqrt(double(n) / 2.0);
        const double a = bn / double(n), b = 1.0 / double(n);
        std::vector<double> bounds, heights, means;
        std::vector<std::vector<double>> tails(cfg.m.size());
        bool tree_bounds_ok = true;
        for (auto seed : cfg.seeds) {
            Rng rng = stream(seed, n);
            auto t = gw_tree_conditioned(off, n, rng);
            auto tb = ghp_tree_bounds(t, a, b, 2.0 * double(n) / double(cfg.grid));
            tree_bounds_ok = tree_bounds_ok && tb.pass;
            auto depth = t.depths();
            double height = a * double(*std::max_element(depth.begin(), depth.end()));
            double mean = 0.0;
            for (auto d : depth) mean += a * double(d);
            mean /= double(t.size());

            std::vector<NetEdge> edges;
            for (std::size_t v = 0; v < t.size(); ++v)
                if (t.parent()[v] >= 0) edges.push_back({std::size_t(t.parent()[v]), v, 1.0 / a});
            ResistanceNetwork net(t.size(), edges, std::vector<double>(t.size(), b));
            Rng wrng = stream(seed, 1000000 + n);
            auto path = simulate_walk(net, t.root(), cfg.horizon, wrng);
            auto lt = local_times(path, net);
            double lroot = lt(t.root(), cfg.horizon), lmax = 0.0;
            for (std::size_t x = 0; x < t.size(); ++x) lmax = std::max(lmax, lt(x, cfg.horizon));
            auto exit_r = ball_complement_resistance(net, t.root(), cfg.exit_radius);

            auto space = t.graph_metric(a);
            json tail_row = json::array();
            for (std::size_t i = 0; i < cfg.m.size(); ++i) {
                double v = entropy_tail_sum(space, cfg.alpha, cfg.m[i], CoverMode::bounds).value;
                tails[i].push_back(v);
                tail_row.push_back(v);
            }
            bounds.push_back(tb.computed.bound);
            heights.push_back(height);
            means.push_back(mean);
            root_lt[n].push_back(lroot);
            max_lt[n].push_back(lmax);
            rows.push_back({{"n", n},
                            {"seed", seed},
                            {"ghp_bound", tb.computed.bound},
                            {"paper_bound", tb.paper_bound},
                            {"slack", tb.slack},
                            {"height", height},
                            {"mean_root_distance", mean},
                            {"root_local_time", lroot},
                            {"max_local_time", lmax},
                            {"exit_resistance", io::to_json(exit_r)},
                            {"tail_sums", tail_row}});
        }
        json freq = json::array();
        bool tail_monotone = true;
        double prev = 2.0;
        for (std::size_t i = 0; i < cfg.m.size(); ++i) {
            double f = 0.0;
            for (double v : tails[i]) f += v >= cfg.epsilon ? 1.0 : 0.0;
            f /= double(tails[i].size());
            if (f > prev) tail_monotone = false;
            prev = f;
            freq.push_back(f);
        }
        per_n.push_back({{"n", n},
                         {"B_n", bn},
                         {"median_ghp_bound", median(bounds)},
                         {"tree_bounds_all_respected", tree_bounds_ok},
                         {"tail_frequency", freq},
                         {"tail_nonincreasing", tail_monotone},
                         {"w1_height_vs_excursion_tree", w1(heights, crt_height)},
                         {"w1_mean_root_distance_vs_excursion_tree", w1(means, crt_mean)}});
    }
    const auto finest = sizes.back();
    for (auto& row : per_n) {
        auto n = row["n"].get<std::size_t>();
        row["w1_root_local_time_vs_finest"] = w1(root_lt[n], root_lt[finest]);
        row["w1_max_local_time_vs_finest"] = w1(max_lt[n], max_lt[finest]);
    }

    json trend;
    if (sizes.size() >= 2) {
        bool ghp = true, lt_root = true;
        for (std::size_t i = 1; i < per_n.size(); ++i) {
            ghp = ghp && per_n[i]["median_ghp_bound"].get<double>() < per_n[i - 1]["median_ghp_bound"].get<double>();
            lt_root = lt_root && per_n[i]["w1_root_local_time_vs_finest"].get<double>() <=
                                     per_n[i - 1]["w1_root_local_time_vs_finest"].get<double>();
        }
        bool tails = std::all_of(per_n.begin(), per_n.end(), [](const json& r) { return r["tail_nonincreasing"].get<bool>(); });
        trend = {{"median_ghp_strictly_decreasing", ghp},
                 {"tail_statistic_nonincreasing_in_m", tails},
                 {"root_local_time_gap_nonincreasing", lt_root}};
    }
    json config = {{"n", sizes},
                   {"seeds", cfg.seeds},
                   {"offspring", off},
                   {"sigma", sigma},
                   {"horizon", cfg.horizon},
                   {"grid", cfg.grid},
                   {"alpha", cfg.alpha},
                   {"epsilon", cfg.epsilon},
                   {"m", cfg.m},
                   {"exit_radius", cfg.exit_radius},
                   {"scaling", "a_n = B_n / n, b_n = 1 / n, B_n = sigma sqrt(n / 2)"},
                   {"space_reference", "tree coded by the rescaled contour on the grid"},
                   {"distribution_reference", "trees coded by sqrt(2) times Brownian excursions"},
                   {"process_reference", "finest n"}};
    return {{"config", config}, {"per_n", per_n}, {"rows", rows}, {"trend", trend}};
}

json ust_experiment(const UstConfig& cfg) {
    if (cfg.seeds.empty()) throw Error("at least one seed required");
    auto net = torus_network(cfg.side, cfg.dims);
    const std::size_t n = net.size();
    std::set<std::pair<std::size_t, std::size_t>> graph_edges;
    for (const auto& e : net.edges()) graph_edges.insert(std::minmax(e.u, e.v));
    json rows = json::array();
    bool invariants = true;
    std::vector<double> best;
    for (auto seed : cfg.seeds) {
        Rng rng = stream(seed, 0);
        auto t = wilson_ust(net, rng);
        std::size_t edges = 0;
        bool inside = true;
        for (std::size_t v = 0; v < t.size(); ++v)
            if (t.parent()[v] >= 0) {
                ++edges;
                inside = inside && graph_edges.count(std::minmax(v, std::size_t(t.parent()[v])));
            }
        auto d = t.distances_from(t.root());
        bool connected = std::none_of(d.begin(), d.end(),
                                      [](std::size_t x) { return x == std::numeric_limits<std::size_t>::max(); });
        bool ok = t.size() == n && edges + 1 == n && inside && connected;
        invariants = invariants && ok;
        auto prof = tree_volume_profile(t);
        json vol = json::array();
        double c = std::numeric_limits<double>::infinity();
        for (double r : cfg.radii) {
            double v = prof.at(std::floor(std::sqrt(double(n)) * r + 1e-12)) / double(n);
            vol.push_back(v);
            if (v < 1.0) c = std::min(c, v / std::pow(r, 4.0));
        }
        if (std::isfinite(c)) best.push_back(c);
        rows.push_back({{"seed", seed},
                        {"vertices", t.size()},
                        {"edges", edges},
                        {"connected", connected},
                        {"edges_in_graph", inside},
                        {"volume", vol},
                        {"best_constant", std::isfinite(c) ? json(c) : json("inf")}});
    }
    json config = {{"side", cfg.side}, {"dims", cfg.dims}, {"seeds", cfg.seeds}, {"radii", cfg.radii},
                   {"statistic", "min_x m(D(x, sqrt(N) r)) / N against r^4"}};
    return {{"config", config},
            {"rows", rows},
            {"invariants_hold", invariants},
            {"median_best_constant", best.empty() ? json(nullptr) : json(median(best))}};
}

namespace {

void check_keys(const Manifest& m, const std::set<std::string>& allowed) {
    for (const auto& [k, v] : m.entries)
        if (!allowed.count(k)) m.fail(k, "unknown key '" + k + "' for kind '" + m.str("kind") + "'");
}

std::vector<std::uint64_t> seeds_of(const Manifest& m) {
    auto raw = m.integers("seeds");
    if (raw.empty()) m.fail("seeds", "at least one seed required");
    std::vector<std::uint64_t> out;
    for (auto s : raw) {
        if (s < 0) m.fail("seeds", "seeds must be nonnegative");
        out.push_back(std::uint64_t(s));
    }
    return out;
}

std::string csv_number(const json& v) {
    if (v.is_number()) {
        std::ostringstream os;
        os << std::setprecision(17) << v.get<double>();
        return os.str();
    }
    return v.is_string() ? v.get<std::string>() : v.dump();
}

}  // namespace

ExperimentOutcome run_manifest(const Manifest& m) {
    ExperimentOutcome out;
    const auto kind = m.str("kind");
    std::ostringstream csv, lock;
    lock << "version = " << version() << "\nkind = " << kind << "\n";
    if (kind == "gwcrt") {
        check_keys(m, {"kind", "n", "seeds", "offspring", "horizon", "grid", "alpha", "epsilon", "m", "exit_radius",
                       "output"});
        GwcrtConfig cfg;
        cfg.seeds = seeds_of(m);
        if (m.has("n")) {
            cfg.n.clear();
            for (auto v : m.integers("n")) {
                if (v < 1) m.fail("n", "tree sizes must be positive");
                cfg.n.push_back(std::size_t(v));
            }
            if (cfg.n.empty()) m.fail("n", "at least one tree size required");
        }
        if (m.has("offspring") && m.str("offspring") != "geometric") cfg.offspring = m.reals("offspring");
        cfg.horizon = m.real("horizon", cfg.horizon);
        cfg.grid = m.count("grid", cfg.grid);
        cfg.alpha = m.real("alpha", cfg.alpha);
        cfg.epsilon = m.real("epsilon", cfg.epsilon);
        cfg.exit_radius = m.real("exit_radius", cfg.exit_radius);
        if (m.has("m")) {
            cfg.m.clear();
            for (auto v : m.integers("m")) cfg.m.push_back(int(v));
        }
        if (!(cfg.horizon > 0.0)) m.fail("horizon", "horizon must be positive");
        if (cfg.grid < 2) m.fail("grid", "grid must be at least 2");
        if (!(cfg.alpha > 0.0 && cfg.alpha < 0.5)) m.fail("alpha", "alpha must lie in (0, 1/2)");
        if (!cfg.offspring.empty()) {
            double total = 0.0, mean = 0.0;
            for (std::size_t k = 0; k < cfg.offspring.size(); ++k) {
                if (cfg.offspring[k] < 0.0) m.fail("offspring", "offspring probabilities must be nonnegative");
                total += cfg.offspring[k];
                mean += double(k) * cfg.offspring[k];
            }
            if (std::abs(total - 1.0) > 1e-9) m.fail("offspring", "offspring probabilities must sum to 1");
            if (std::abs(mean - 1.0) > 1e-9) m.fail("offspring", "offspring law must have mean 1");
            if (!(cfg.offspring[0] > 0.0)) m.fail("offspring", "offspring law needs p(0) > 0");
        }
        out.results = flagship_gwcrt(cfg);
        csv << "n,seed,ghp_bound,paper_bound,slack,height,mean_root_distance,root_local_time,max_local_time,"
               "exit_resistance";
        for (auto k : cfg.m) csv << ",tail_m" << k;
        csv << "\n";
        for (const auto& r : out.results["rows"]) {
            csv << r["n"] << "," << r["seed"];
            for (auto key : {"ghp_bound", "paper_bound", "slack", "height", "mean_root_distance", "root_local_time",
                             "max_local_time", "exit_resistance"})
                csv << "," << csv_number(r[key]);
            for (const auto& v : r["tail_sums"]) csv << "," << csv_number(v);
            csv << "\n";
        }
        lock << "resolved = " << out.results["config"].dump() << "\n";
        const auto& tr = out.results["trend"];
        bool tree_bounds_ok = std::all_of(out.results["per_n"].begin(), out.results["per_n"].end(),
                                  [](const json& r) { return r["tree_bounds_all_respected"].get<bool>(); });
        json criteria = {{"A5", tree_bounds_ok}};
        if (!tr.is_null())
            criteria["A9"] = tr["median_ghp_strictly_decreasing"].get<bool>() &&
                             tr["tail_statistic_nonincreasing_in_m"].get<bool>();
        out.results["criteria"] = criteria;
        if (!tree_bounds_ok) out.failed_criterion = "A5";
        else if (criteria.contains("A9") && !criteria["A9"].get<bool>()) out.failed_criterion = "A9";
    } else if (kind == "ust") {
        check_keys(m, {"kind", "side", "dims", "seeds", "radii", "output"});
        UstConfig cfg;
        cfg.seeds = seeds_of(m);
        cfg.side = m.count("side", cfg.side);
        cfg.dims = m.count("dims", cfg.dims);
        if (cfg.side < 2) m.fail("side", "side must be at least 2");
        if (cfg.dims < 1) m.fail("dims", "dims must be at least 1");
        if (m.has("radii")) cfg.radii = m.reals("radii");
        out.results = ust_experiment(cfg);
        csv << "seed,vertices,edges,connected,edges_in_graph,best_constant";
        for (double r : cfg.radii) csv << ",v_r" << r;
        csv << "\n";
        for (const auto& r : out.results["rows"]) {
            csv << r["seed"] << "," << r["vertices"] << "," << r["edges"] << "," << r["connected"] << ","
                << r["edges_in_graph"] << "," << csv_number(r["best_constant"]);
            for (const auto& v : r["volume"]) csv << "," << csv_number(v);
            csv << "\n";
        }
        lock << "resolved = " << out.results["config"].dump() << "\n";
        out.results["criteria"] = {{"A10_invariants", out.results["invariants_hold"]}};
        if (!out.results["invariants_hold"].get<bool>()) out.failed_criterion = "A10";
    } else if (kind == "criterion") {
        check_keys(m, {"kind", "criterion", "output"});
        auto id = m.str("criterion");
        auto ids = acceptance::ids();
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) m.fail("criterion", "unknown criterion '" + id + "'");
        auto r = acceptance::run(id);
        out.results = {{"criterion", id}, {"pass", r.pass}, {"summary", r.summary}, {"details", r.details}};
        out.results["criteria"] = {{id, r.pass}};
        csv << "criterion,pass\n" << id << "," << (r.pass ? "true" : "false") << "\n";
        lock << "criterion = " << id << "\n";
        if (!r.pass) out.failed_criterion = id;
    } else {
        m.fail("kind", "unknown kind '" + kind + "' (expected gwcrt, ust or criterion)");
    }
    out.results["kind"] = kind;
    out.results["version"] = version();
    out.csv = csv.str();
    out.lock = lock.str();
    return out;
}

int run_experiment(const std::string& manifest_path, std::string* failed) {
    auto m = Manifest::load(manifest_path);
    const std::string outdir = m.str("output");
    if (outdir.empty()) m.fail("output", "output directory must not be empty");
    auto outcome = run_manifest(m);
    outcome.results["timestamp"] = timestamp();
    std::filesystem::create_directories(outdir);
    std::ofstream(outdir + "/results.json") << outcome.results.dump(2) << "\n";
    std::ofstream(outdir + "/data.csv") << outcome.csv;
    std::ofstream lock(outdir + "/manifest.lock");
    lock << outcome.lock;
    for (const auto& [k, v] : m.entries) lock << "input." << k << " = " << v.first << "\n";
    if (failed) *failed = outcome.failed_criterion;
    return outcome.failed_criterion.empty() ? 0 : 3;
}

}  // namespace reslim
