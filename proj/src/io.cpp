#include "reslim/io.hpp"

#include <fstream>
#include <sstream>

namespace reslim::io {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(path + ": " + e.what());
    }
}

namespace {

template <class T>
T get(const json& j, const char* key) {
    if (!j.contains(key)) throw Error(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(std::string("field '") + key + "' has the wrong type");
    }
}

}  // namespace

RootedMeasuredSpace space_from_json(const json& j) {
    auto d = get<std::vector<std::vector<double>>>(j, "distance_matrix");
    if (j.contains("points") && j["points"].is_array() && j["points"].size() != d.size())
        throw Error("points and distance_matrix disagree in size");
    std::size_t root = j.contains("root") ? get<std::size_t>(j, "root") : 0;
    std::vector<double> w = j.contains("weights") ? get<std::vector<double>>(j, "weights")
                                                  : std::vector<double>(d.size(), 1.0);
    return RootedMeasuredSpace(FiniteMetricSpace(d), root, std::move(w));
}

json to_json(const RootedMeasuredSpace& s) {
    json j;
    std::vector<std::size_t> pts(s.size());
    std::vector<std::vector<double>> d(s.size(), std::vector<double>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
        pts[i] = i;
        for (std::size_t k = 0; k < s.size(); ++k) d[i][k] = s.space(i, k);
    }
    j["points"] = pts;
    j["distance_matrix"] = d;
    j["root"] = s.root;
    j["weights"] = s.weights;
    return j;
}

ResistanceNetwork network_from_json(const json& j) {
    auto raw = get<std::vector<std::vector<double>>>(j, "edges");
    std::vector<NetEdge> edges;
    std::size_t n = 0;
    for (const auto& e : raw) {
        if (e.size() != 3) throw Error("each edge must be [u, v, conductance]");
        if (e[0] < 0 || e[1] < 0 || e[0] != std::floor(e[0]) || e[1] != std::floor(e[1]))
            throw Error("edge endpoints must be nonnegative integers");
        NetEdge ne{std::size_t(e[0]), std::size_t(e[1]), e[2]};
        n = std::max({n, ne.u + 1, ne.v + 1});
        edges.push_back(ne);
    }
    std::vector<double> mu;
    if (j.contains("mu")) {
        mu = get<std::vector<double>>(j, "mu");
        if (mu.size() < n) throw Error("mu must cover every edge endpoint");
        n = mu.size();
    } else {
        mu.assign(n, 1.0);
    }
    return ResistanceNetwork(n, edges, std::move(mu));
}

json to_json(const ResistanceNetwork& net) {
    json j;
    j["edges"] = json::array();
    for (const auto& e : net.edges()) j["edges"].push_back({e.u, e.v, e.c});
    j["mu"] = net.mu();
    return j;
}

PlaneTree tree_from_json(const json& j) { return PlaneTree(get<std::vector<long>>(j, "parent")); }

json to_json(const PlaneTree& t) { return json{{"parent", t.parent()}}; }

GaussianSpec gaussian_from_json(const json& j) {
    auto c = get<std::vector<std::vector<double>>>(j, "covariance");
    const std::size_t n = c.size();
    std::vector<double> flat;
    for (const auto& row : c) {
        if (row.size() != n) throw Error("covariance must be square");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return GaussianSpec(n, std::move(flat));
}

KilledPath path_from_jsonl(std::istream& in) {
    KilledPath p;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception&) {
            throw Error("line " + std::to_string(lineno) + ": not valid JSON");
        }
        if (j.contains("kill")) {
            p.kill_time = j["kill"].is_string() ? ExtReal::infinity() : ExtReal(j["kill"].get<double>());
        } else if (j.contains("horizon")) {
            p.horizon = j["horizon"].is_string() ? std::numeric_limits<double>::infinity() : j["horizon"].get<double>();
        } else if (j.contains("t") && j.contains("state")) {
            p.events.push_back({j["t"].get<double>(), j["state"].get<std::size_t>()});
        } else {
            throw Error("line " + std::to_string(lineno) + ": expected t/state, kill or horizon");
        }
    }
    if (p.events.empty()) throw Error("path has no events");
    return p;
}

KilledPath read_path_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return path_from_jsonl(in);
}

std::string to_jsonl(const KilledPath& p) {
    std::ostringstream os;
    for (const auto& e : p.events) os << json{{"t", e.t}, {"state", e.state}}.dump() << "\n";
    if (p.kill_time.is_finite()) os << json{{"kill", p.kill_time.value()}}.dump() << "\n";
    if (std::isfinite(p.horizon)) os << json{{"horizon", p.horizon}}.dump() << "\n";
    return os.str();
}

json to_json(const ExtReal& v) { return v.is_finite() ? json(v.value()) : json("inf"); }

}  // namespace reslim::io
