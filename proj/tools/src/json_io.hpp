#pragma once

// JSON input parsing and report serialization for the command-line tool.

#include <optional>
#include <string>

#include "json.hpp"

#include "mutualcover/bounds.hpp"
#include "mutualcover/broadcast.hpp"
#include "mutualcover/probcore.hpp"
#include "mutualcover/sampler.hpp"

namespace mutualcover::io {

using Json = nlohmann::ordered_json;

// Parses text; syntax errors become Error(kParse).
Json parse_text(const std::string& text);

// A number or a decimal string.
double parse_number(const Json& value, const std::string& where);

// {"u_labels": [...], "v_labels": [...], "matrix": [[...], ...]}; labels
// default to indices.
JointPmf parse_joint(const Json& doc);

// Optional "set": 0/1 matrix over U x V.
std::optional<CoveringSet> parse_set(const Json& doc, const JointPmf& j);

// {"in_labels": [...], "out_labels": [...], "matrix": [[...], ...]}.
CondPmf parse_channel(const Json& doc);

// {"joint": {...}, "y_channel": {...}, "z_channel": {...}, "x_map": [[...]]}
// plus optional m1, m2, n1, n2, theta1, theta2, gamma. x_map entries are
// input indices or input labels.
BroadcastSpec parse_broadcast(const Json& doc);

// Non-finite numbers serialize as null.
Json number(double x);

Json to_json(const BoundReport& r);
Json to_json(const SelectionRule& rule);

}  // namespace mutualcover::io
