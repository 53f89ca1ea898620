#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "reslim/error.hpp"

namespace reslim {

/// Schema violation in a manifest, reported as "file:line: message".
class ManifestError : public Error {
public:
    using Error::Error;
};

/// A numerical acceptance check failed during an experiment.
class CriterionFailure : public Error {
public:
    CriterionFailure(std::string id, const std::string& what) : Error(what), id_(std::move(id)) {}
    const std::string& id() const { return id_; }

private:
    std::string id_;
};

/// key = value lines, '#' comments, comma-separated lists, a..b integer ranges.
struct Manifest {
    std::string file;
    std::map<std::string, std::pair<std::string, std::size_t>> entries;  // key -> (raw value, line)

    static Manifest parse(const std::string& text, const std::string& file = "<manifest>");
    static Manifest load(const std::string& path);

    bool has(const std::string& key) const { return entries.count(key) != 0; }
    std::string str(const std::string& key) const;
    std::string str(const std::string& key, const std::string& fallback) const;
    double real(const std::string& key, double fallback) const;
    std::size_t count(const std::string& key, std::size_t fallback) const;
    std::vector<double> reals(const std::string& key) const;
    std::vector<std::int64_t> integers(const std::string& key) const;
    [[noreturn]] void fail(const std::string& key, const std::string& msg) const;
};

struct GwcrtConfig {
    std::vector<std::size_t> n{50, 200, 800};
    std::vector<std::uint64_t> seeds;
    std::vector<double> offspring;  // defaults to Geometric(1/2)
    double horizon = 1.0;
    std::size_t grid = 4096;
    double alpha = 0.4;
    double epsilon = 0.1;
    std::vector<int> m{0, 1, 2, 3, 4, 5, 6, 7, 8};
    double exit_radius = 0.5;
};

struct UstConfig {
    std::size_t side = 8;
    std::size_t dims = 3;
    std::vector<std::uint64_t> seeds;
    std::vector<double> radii{0.05, 0.1, 0.2, 0.4, 0.8};
};

/// GW trees rescaled by B_n = sigma sqrt(n/2) against the trees coded by their
/// rescaled contours and against Brownian-excursion trees; walks and local
/// times on the rescaled trees; entropy tail statistic.
nlohmann::json flagship_gwcrt(const GwcrtConfig& cfg);

/// Wilson trees on the torus: spanning-tree invariants and the volume statistic
/// inf_x m(D(x, sqrt(N) r)) / N.
nlohmann::json ust_experiment(const UstConfig& cfg);

struct ExperimentOutcome {
    nlohmann::json results;
    std::string csv;
    std::string lock;
    std::string failed_criterion;  // empty when every asserted check passed
};

/// Runs a parsed manifest (kind = gwcrt | ust | criterion).
ExperimentOutcome run_manifest(const Manifest& m);

/// Writes results.json, data.csv and manifest.lock into the manifest's output
/// directory. Returns the process exit code (0, or 3 on a failed criterion).
int run_experiment(const std::string& manifest_path, std::string* failed = nullptr);

std::string version();

}  // namespace reslim
