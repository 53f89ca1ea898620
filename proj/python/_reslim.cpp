#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "reslim/acceptance.hpp"
#include "reslim/entropy.hpp"
#include "reslim/experiment.hpp"
#include "reslim/gaussian.hpp"
#include "reslim/gh.hpp"
#include "reslim/io.hpp"
#include "reslim/paths.hpp"
#include "reslim/process.hpp"
#include "reslim/resistance.hpp"
#include "reslim/trees.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace reslim;
using Mat = py::array_t<double, py::array::c_style | py::array::forcecast>;

namespace {

py::array_t<double> square(std::size_t n, const std::vector<double>& flat) {
    py::array_t<double> out({n, n});
    std::copy(flat.begin(), flat.end(), out.mutable_data());
    return out;
}

FiniteMetricSpace to_space(const Mat& d) {
    if (d.ndim() != 2 || d.shape(0) != d.shape(1)) throw Error("distance matrix must be square");
    const std::size_t n = std::size_t(d.shape(0));
    return FiniteMetricSpace::from_flat(n, std::vector<double>(d.data(), d.data() + n * n));
}

py::object ext(const ExtReal& v) { return v.is_infinite() ? py::float_(INFINITY) : py::float_(v.value()); }

py::dict path_dict(const KilledPath& p) {
    py::list events;
    for (const auto& e : p.events) events.append(py::make_tuple(e.t, e.state));
    return py::dict("events"_a = events, "kill_time"_a = ext(p.kill_time), "horizon"_a = p.horizon);
}

KilledPath path_from(const py::dict& d) {
    KilledPath p;
    for (auto item : d["events"].cast<py::list>()) {
        auto t = item.cast<py::tuple>();
        p.events.push_back({t[0].cast<double>(), t[1].cast<std::size_t>()});
    }
    if (d.contains("kill_time")) {
        double k = d["kill_time"].cast<double>();
        p.kill_time = std::isinf(k) ? ExtReal::infinity() : ExtReal(k);
    }
    if (d.contains("horizon")) p.horizon = d["horizon"].cast<double>();
    return p;
}

py::dict bound_dict(const GhpBound& b) {
    return py::dict("bound"_a = b.bound, "delta"_a = b.delta, "hausdorff"_a = b.hausdorff, "root"_a = b.root,
                    "prohorov"_a = b.prohorov, "dis"_a = b.dis);
}

py::object json_to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

}  // namespace

PYBIND11_MODULE(_reslim, m) {
    m.doc() = "Resistance metric spaces, walks with local times, and tree scaling limits";

    auto& base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
    py::register_exception<ManifestError>(m, "ManifestError", base.ptr());

    m.def("version", &version);

    // metric spaces
    m.def("hausdorff_distance", [](const Mat& d, const std::vector<std::size_t>& a,
                                   const std::vector<std::size_t>& b) { return hausdorff_distance(a, b, to_space(d)); });
    m.def("prohorov_distance", [](const std::vector<double>& m1, const std::vector<double>& m2,
                                  const Mat& d) { return prohorov_distance(m1, m2, to_space(d)); });
    m.def("distortion", [](const std::vector<IndexPair>& c, const Mat& x, const Mat& y) {
        return distortion(Correspondence{c}, to_space(x), to_space(y));
    });

    // entropy
    m.def("covering_number", [](const Mat& d, double eps) { return covering_number_auto(to_space(d), eps); },
          "distances"_a, "eps"_a);
    m.def(
        "entropy_tail_sum",
        [](const Mat& d, double alpha, int mk, bool exact) {
            return entropy_tail_sum(to_space(d), alpha, mk, exact ? CoverMode::exact : CoverMode::bounds).value;
        },
        "distances"_a, "alpha"_a, "m"_a, "exact"_a = true);
    m.def("dudley_integral", [](const Mat& d, double q) { return dudley_integral(to_space(d), q); },
          "distances"_a, "q"_a = 1.0);
    m.def(
        "entropy_profile",
        [](const Mat& d, int k_min, double alpha) {
            py::list rows;
            for (const auto& r : entropy_profile(to_space(d), k_min, alpha, CoverMode::exact).rows)
                rows.append(py::dict("k"_a = r.k, "epsilon"_a = r.epsilon, "N"_a = r.n, "term"_a = r.term));
            return rows;
        },
        "distances"_a, "k_min"_a = 0, "alpha"_a = 0.25);

    // Gromov-Hausdorff(-Prohorov)
    m.def(
        "gh_distance",
        [](const Mat& x, const Mat& y, bool exact) {
            auto r = gh_distance(to_space(x), to_space(y), exact ? GhMode::exact : GhMode::search);
            return py::make_tuple(r.value, r.correspondence.pairs);
        },
        "x"_a, "y"_a, "exact"_a = true);
    m.def(
        "ghp_upper_bound",
        [](const Mat& x, const std::vector<double>& wx, std::size_t rx, const Mat& y,
           const std::vector<double>& wy, std::size_t ry, const std::vector<IndexPair>& c) {
            return bound_dict(ghp_upper_bound(RootedMeasuredSpace(to_space(x), rx, wx),
                                              RootedMeasuredSpace(to_space(y), ry, wy), Correspondence{c}));
        },
        "x"_a, "x_weights"_a, "x_root"_a, "y"_a, "y_weights"_a, "y_root"_a, "correspondence"_a);

    // resistance networks
    py::class_<ResistanceNetwork>(m, "Network")
        .def(py::init([](std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges,
                         std::optional<std::vector<double>> mu) {
                 std::vector<NetEdge> es;
                 for (auto [u, v, c] : edges) es.push_back({u, v, c});
                 return ResistanceNetwork(n, es, mu ? *mu : std::vector<double>(n, 1.0));
             }),
             "n"_a, "edges"_a, "mu"_a = py::none())
        .def_static("path", &path_network, "n"_a, "c"_a = 1.0)
        .def_static("complete", &complete_network, "n"_a, "c"_a = 1.0)
        .def_static("torus", &torus_network, "side"_a, "dims"_a)
        .def_static(
            "random_tree",
            [](std::size_t n, std::uint64_t seed) {
                Rng rng = stream(seed, 0);
                return random_tree_network(n, rng);
            },
            "n"_a, "seed"_a)
        .def("__len__", &ResistanceNetwork::size)
        .def_property_readonly("mu", &ResistanceNetwork::mu)
        .def("resistance_matrix",
             [](const ResistanceNetwork& net) { return square(net.size(), net.resistance_metric().flat()); })
        .def("resistance", [](const ResistanceNetwork& net, std::size_t x, std::size_t y) {
            return effective_resistance(net, x, y);
        })
        .def("potential_density",
             [](const ResistanceNetwork& net, double alpha) {
                 auto u = potential_density(net, alpha);
                 return square(u.n, u.u);
             },
             "alpha"_a = 1.0)
        .def("ball_complement_resistance",
             [](const ResistanceNetwork& net, std::size_t rho, double r) {
                 return ext(ball_complement_resistance(net, rho, r));
             })
        .def("hitting_statistics", [](const ResistanceNetwork& net, std::size_t x, std::size_t y) {
            auto h = hitting_statistics(net, x, y);
            return py::dict("laplace"_a = h.laplace, "commute"_a = h.commute);
        });

    // walks and local times
    m.def(
        "simulate_walk",
        [](const ResistanceNetwork& net, std::size_t start, double horizon, std::uint64_t seed, std::uint64_t replica) {
            Rng rng = stream(seed, replica);
            return path_dict(simulate_walk(net, start, horizon, rng));
        },
        "net"_a, "start"_a, "horizon"_a, "seed"_a, "replica"_a = 0);
    m.def(
        "local_times",
        [](const py::dict& path, const ResistanceNetwork& net, double t) {
            auto lt = local_times(path_from(path), net);
            std::vector<double> out(net.size());
            for (std::size_t x = 0; x < net.size(); ++x) out[x] = lt(x, t);
            return out;
        },
        "path"_a, "net"_a, "t"_a);
    m.def(
        "equicontinuity_check",
        [](const ResistanceNetwork& net, double T, double alpha, int n, std::size_t replicas, std::uint64_t seed) {
            auto r = equicontinuity_check(net, T, alpha, n, replicas, seed);
            return py::dict("threshold"_a = r.threshold, "rhs_bound"_a = r.rhs_bound, "freq"_a = r.lhs_freq,
                            "std_error"_a = r.std_error, "pass"_a = r.pass);
        },
        "net"_a, "T"_a, "alpha"_a, "n"_a, "replicas"_a, "seed"_a);
    m.def(
        "j1prime_distance",
        [](const py::dict& x, const py::dict& y, const Mat& d) {
            return j1prime_distance(path_from(x), path_from(y), to_space(d));
        },
        "x"_a, "y"_a, "distances"_a);

    // trees
    py::class_<PlaneTree>(m, "PlaneTree")
        .def(py::init<std::vector<long>>(), "parent"_a)
        .def("__len__", &PlaneTree::size)
        .def_property_readonly("parent", &PlaneTree::parent)
        .def("depths", &PlaneTree::depths)
        .def("contour", [](const PlaneTree& t) { return contour_and_height(t).contour.values; })
        .def("distance_matrix",
             [](const PlaneTree& t, double scale) { return square(t.size(), t.graph_metric(scale).flat()); },
             "scale"_a = 1.0)
        .def("__eq__", &PlaneTree::operator==);
    m.def("tree_from_contour", &tree_from_contour, "contour"_a);
    m.def(
        "gw_tree",
        [](std::size_t n, std::uint64_t seed, std::optional<std::vector<double>> offspring) {
            Rng rng = stream(seed, 0);
            return gw_tree_conditioned(offspring ? *offspring : geometric_offspring(), n, rng);
        },
        "n"_a, "seed"_a, "offspring"_a = py::none());
    m.def(
        "brownian_excursion",
        [](std::size_t grid_points, std::uint64_t seed) {
            Rng rng = stream(seed, 0);
            return brownian_excursion(grid_points, rng).values;
        },
        "grid_points"_a, "seed"_a);
    m.def(
        "code_real_tree",
        [](const std::vector<double>& values, double h, double a, double b) {
            auto t = code_real_tree(ExcursionFunction{h, values}, a, b);
            return py::dict("distances"_a = square(t.space.size(), t.space.space.flat()),
                            "weights"_a = t.space.weights, "class_of"_a = t.class_of);
        },
        "values"_a, "h"_a, "a"_a = 1.0, "b"_a = 1.0);
    m.def(
        "ghp_tree_bounds",
        [](const PlaneTree& t, double a, double b) {
            auto r = ghp_tree_bounds(t, a, b);
            auto d = bound_dict(r.computed);
            d["paper_bound"] = r.paper_bound;
            d["slack"] = r.slack;
            d["pass"] = r.pass;
            return d;
        },
        "tree"_a, "a"_a, "b"_a);
    m.def(
        "wilson_ust",
        [](const ResistanceNetwork& net, std::uint64_t seed) {
            Rng rng = stream(seed, 0);
            return wilson_ust(net, rng);
        },
        "net"_a, "seed"_a);

    // Gaussian fields
    m.def(
        "sample_gaussian",
        [](const std::vector<std::vector<double>>& cov, std::uint64_t seed, std::size_t replica) {
            std::vector<double> flat;
            for (const auto& row : cov) flat.insert(flat.end(), row.begin(), row.end());
            GaussianSpec spec(cov.size(), flat);
            Rng rng = stream(seed, replica);
            return spec.sample(rng);
        },
        "covariance"_a, "seed"_a, "replica"_a = 0);
    m.def(
        "gaussian_equicontinuity_check",
        [](const ResistanceNetwork& net, double alpha, int n, std::size_t replicas, std::uint64_t seed) {
            auto r = gaussian_equicontinuity_check(GaussianSpec::from_network(net), alpha, n, replicas, seed);
            return py::dict("threshold"_a = r.threshold, "rhs_bound"_a = r.rhs_bound, "freq"_a = r.lhs_freq,
                            "pairs"_a = r.pairs, "pass"_a = r.pass);
        },
        "net"_a, "alpha"_a, "n"_a, "replicas"_a, "seed"_a);

    // experiments
    m.def("criteria", &acceptance::ids);
    m.def(
        "run_criterion",
        [](const std::string& id) {
            acceptance::Result r;
            {
                py::gil_scoped_release release;
                r = acceptance::run(id);
            }
            return py::dict("id"_a = r.id, "pass"_a = r.pass, "summary"_a = r.summary,
                            "details"_a = json_to_py(r.details), "seconds"_a = r.seconds);
        },
        "id"_a);
    m.def(
        "run_manifest",
        [](const std::string& text) {
            auto out = run_manifest(Manifest::parse(text));
            return py::dict("results"_a = json_to_py(out.results), "csv"_a = out.csv, "lock"_a = out.lock,
                            "failed_criterion"_a = out.failed_criterion);
        },
        "text"_a);
}
