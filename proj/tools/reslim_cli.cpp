#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "reslim/acceptance.hpp"
#include "reslim/entropy.hpp"
#include "reslim/experiment.hpp"
#include "reslim/gaussian.hpp"
#include "reslim/gh.hpp"
#include "reslim/io.hpp"
#include "reslim/paths.hpp"
#include "reslim/process.hpp"

using namespace reslim;
using nlohmann::json;

namespace {

void print_matrix(std::size_t n, const std::function<double(std::size_t, std::size_t)>& m) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) os << (j ? "," : "") << m(i, j);
        os << "\n";
    }
    std::cout << os.str();
}

std::vector<double> parse_offspring(const std::string& s) {
    if (s == "geometric") return geometric_offspring();
    std::vector<double> p;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) p.push_back(std::stod(item));
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resistance spaces, local times and tree limits"};
    app.require_subcommand(1);

    std::string space_file, space_b, net_file, cov_file, path_a, path_b, mode = "exact", manifest, criterion;
    std::string offspring = "geometric";
    int kmin = 0, level = 1;
    double alpha = 0.25, horizon = 1.0, potential_alpha = -1.0;
    std::size_t start = 0, replicas = 1, seeds = 30, side = 8, dims = 3, grid = 4096;
    std::uint64_t seed = 1;
    std::vector<std::size_t> sizes{50, 200, 800};

    auto* entropy = app.add_subcommand("entropy", "covering-number profile as CSV (k, epsilon, N, term)");
    entropy->add_option("space", space_file, "space JSON")->required();
    entropy->add_option("--kmin", kmin, "first scale index");
    entropy->add_option("--alpha", alpha, "exponent of the tail term");
    entropy->add_option("--mode", mode, "exact or bounds")->check(CLI::IsMember({"exact", "bounds"}));

    auto* ghp = app.add_subcommand("ghp", "GHP upper bound between two spaces");
    ghp->add_option("first", space_file, "space JSON")->required();
    ghp->add_option("second", space_b, "space JSON")->required();

    auto* resistance = app.add_subcommand("resistance", "resistance matrix or potential density as CSV");
    resistance->add_option("--net", net_file, "network JSON")->required();
    resistance->add_option("--potential", potential_alpha, "print u_alpha for this alpha instead of R");

    auto* simulate = app.add_subcommand("simulate", "random walks with local times, JSONL per replica");
    simulate->add_option("--net", net_file, "network JSON")->required();
    simulate->add_option("--start", start, "start vertex");
    simulate->add_option("--horizon", horizon, "time horizon");
    simulate->add_option("--replicas", replicas, "number of replicas");
    simulate->add_option("--seed", seed, "seed");

    auto* skorokhod = app.add_subcommand("skorokhod", "upper bound on the extended Skorokhod distance");
    skorokhod->add_option("first", path_a, "path JSONL")->required();
    skorokhod->add_option("second", path_b, "path JSONL")->required();
    skorokhod->add_option("--space", space_file, "space JSON holding the states")->required();

    auto* gwcrt = app.add_subcommand("gwcrt", "Galton-Watson trees against excursion-coded trees");
    gwcrt->add_option("--n", sizes, "tree sizes")->delimiter(',');
    gwcrt->add_option("--seeds", seeds, "seeds 1..N");
    gwcrt->add_option("--offspring", offspring, "geometric or comma-separated probabilities");
    gwcrt->add_option("--horizon", horizon, "walk horizon");
    gwcrt->add_option("--grid", grid, "grid cells on [0,1]");

    auto* ust = app.add_subcommand("ust", "Wilson trees on the torus");
    ust->add_option("--n", side, "torus side");
    ust->add_option("--dims", dims, "torus dimension");
    ust->add_option("--seeds", seeds, "seeds 1..N");

    auto* gaussian = app.add_subcommand("gaussian", "Gaussian modulus check");
    auto* g_net = gaussian->add_option("--net", net_file, "network JSON (covariance u_1)");
    auto* g_cov = gaussian->add_option("--cov", cov_file, "covariance JSON");
    g_net->excludes(g_cov);
    gaussian->add_option("--alpha", alpha, "alpha in (0,1)");
    gaussian->add_option("--n", level, "scale index");
    gaussian->add_option("--replicas", replicas, "number of replicas");
    gaussian->add_option("--seed", seed, "seed");

    auto* run = app.add_subcommand("run", "acceptance criterion or manifest experiment");
    auto* r_crit = run->add_option("--criterion", criterion, "A1 .. A10");
    auto* r_man = run->add_option("--manifest", manifest, "manifest file");
    r_crit->excludes(r_man);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*entropy) {
            auto s = io::space_from_json(io::read_json_file(space_file));
            auto prof = entropy_profile(s.space, kmin, alpha, mode == "exact" ? CoverMode::exact : CoverMode::bounds);
            std::cout << "k,epsilon,N,term\n";
            for (const auto& r : prof.rows) std::cout << r.k << "," << r.epsilon << "," << r.n << "," << r.term << "\n";
        } else if (*ghp) {
            auto a = io::space_from_json(io::read_json_file(space_file));
            auto b = io::space_from_json(io::read_json_file(space_b));
            auto gmode = a.size() * b.size() <= 36 ? GhMode::exact : GhMode::search;
            auto gh = gh_distance(a.space, b.space, gmode);
            auto bound = ghp_upper_bound(a, b, gh.correspondence);
            json pairs = json::array();
            for (auto [x, y] : gh.correspondence.pairs) pairs.push_back({x, y});
            std::cout << json{{"bound", bound.bound},
                              {"correspondence", pairs},
                              {"delta", bound.delta},
                              {"hausdorff", bound.hausdorff},
                              {"root", bound.root},
                              {"prohorov", bound.prohorov}}
                             .dump(2)
                      << "\n";
        } else if (*resistance) {
            auto net = io::network_from_json(io::read_json_file(net_file));
            if (potential_alpha > 0.0) {
                auto u = potential_density(net, potential_alpha);
                print_matrix(u.n, [&](std::size_t i, std::size_t j) { return u(i, j); });
            } else {
                const auto& r = net.resistance_metric();
                print_matrix(r.size(), [&](std::size_t i, std::size_t j) { return r(i, j); });
            }
        } else if (*simulate) {
            auto net = io::network_from_json(io::read_json_file(net_file));
            for (std::size_t i = 0; i < replicas; ++i) {
                Rng rng = stream(seed, i);
                auto path = simulate_walk(net, start, horizon, rng);
                auto lt = local_times(path, net);
                std::vector<double> l(net.size());
                for (std::size_t x = 0; x < net.size(); ++x) l[x] = lt(x, horizon);
                std::cout << json{{"replica", i},
                                  {"jumps", path.jumps()},
                                  {"final_state", path.at(horizon)},
                                  {"local_times", l}}
                                 .dump()
                          << "\n";
            }
        } else if (*skorokhod) {
            auto s = io::space_from_json(io::read_json_file(space_file));
            auto x = io::read_path_file(path_a), y = io::read_path_file(path_b);
            std::cout << json{{"j1prime_upper_bound", j1prime_distance(x, y, s.space)}}.dump() << "\n";
        } else if (*gwcrt) {
            GwcrtConfig cfg;
            cfg.n = sizes;
            for (std::uint64_t s = 1; s <= seeds; ++s) cfg.seeds.push_back(s);
            cfg.offspring = parse_offspring(offspring);
            cfg.horizon = horizon;
            cfg.grid = grid;
            auto rep = flagship_gwcrt(cfg);
            rep.erase("rows");
            std::cout << rep.dump(2) << "\n";
        } else if (*ust) {
            UstConfig cfg;
            cfg.side = side;
            cfg.dims = dims;
            for (std::uint64_t s = 1; s <= seeds; ++s) cfg.seeds.push_back(s);
            std::cout << ust_experiment(cfg).dump(2) << "\n";
        } else if (*gaussian) {
            GaussianSpec spec;
            if (!net_file.empty()) spec = GaussianSpec::from_network(io::network_from_json(io::read_json_file(net_file)));
            else if (!cov_file.empty()) spec = io::gaussian_from_json(io::read_json_file(cov_file));
            else throw Error("one of --net or --cov is required");
            auto r = gaussian_equicontinuity_check(spec, alpha, level, replicas, seed);
            std::cout << json{{"threshold", r.threshold},
                              {"rhs_bound", r.rhs_bound},
                              {"freq", r.lhs_freq},
                              {"std_error", r.std_error},
                              {"pairs", r.pairs},
                              {"replicas", r.replicas},
                              {"pass", r.pass}}
                             .dump(2)
                      << "\n";
        } else if (*run) {
            if (!criterion.empty()) {
                auto r = acceptance::run(criterion);
                std::cout << r.id << " " << (r.pass ? "PASS" : "FAIL") << " " << r.summary << "\n";
                return r.pass ? 0 : 3;
            }
            if (manifest.empty()) throw Error("one of --criterion or --manifest is required");
            std::string failed;
            int code = run_experiment(manifest, &failed);
            if (code == 3) std::cerr << "criterion " << failed << " failed\n";
            return code;
        }
    } catch (const ManifestError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
