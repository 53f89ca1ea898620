#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "reslim/gaussian.hpp"
#include "reslim/metric_core.hpp"
#include "reslim/process.hpp"
#include "reslim/resistance.hpp"
#include "reslim/trees.hpp"

namespace reslim::io {

using nlohmann::json;

json read_json_file(const std::string& path);

/// {points, distance_matrix, root, weights}; root defaults to 0, weights to 1.
RootedMeasuredSpace space_from_json(const json& j);
json to_json(const RootedMeasuredSpace& s);

/// {edges: [[u, v, c]], mu: [...]}; mu defaults to 1 per vertex.
ResistanceNetwork network_from_json(const json& j);
json to_json(const ResistanceNetwork& net);

/// {parent: [...]} with -1 at the root.
PlaneTree tree_from_json(const json& j);
json to_json(const PlaneTree& t);

/// {n, covariance: [[...]]}.
GaussianSpec gaussian_from_json(const json& j);

/// One {"t": .., "state": ..} object per line, optionally {"kill": T} and
/// {"horizon": H}. Blank lines are skipped.
KilledPath path_from_jsonl(std::istream& in);
KilledPath read_path_file(const std::string& path);
std::string to_jsonl(const KilledPath& p);

/// JSON number, or the string "inf".
json to_json(const ExtReal& v);

}  // namespace reslim::io
