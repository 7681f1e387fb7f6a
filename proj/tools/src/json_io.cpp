#include "json_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace mutualcover::io {

namespace {

const Json& field(const Json& doc, const char* key) {
  require(doc.is_object(), ErrorKind::kParse, "expected a JSON object");
  const auto it = doc.find(key);
  require(it != doc.end(), ErrorKind::kParse,
          std::string("missing field \"") + key + "\"");
  return *it;
}

Labels parse_labels(const Json& doc, const char* key, std::size_t n) {
  const auto it = doc.find(key);
  if (it == doc.end()) return index_labels(n);
  require(it->is_array(), ErrorKind::kParse,
          std::string("\"") + key + "\" must be an array");
  Labels out;
  for (const auto& x : *it) {
    require(x.is_string(), ErrorKind::kParse,
            std::string("\"") + key + "\" entries must be strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

Matrix parse_matrix(const Json& doc, const std::string& where) {
  require(doc.is_array() && !doc.empty(), ErrorKind::kParse,
          where + " must be a nonempty array of rows");
  Matrix m;
  for (std::size_t r = 0; r < doc.size(); ++r) {
    const auto& row = doc[r];
    require(row.is_array() && !row.empty(), ErrorKind::kParse,
            where + " rows must be nonempty arrays");
    std::vector<double> values;
    for (std::size_t c = 0; c < row.size(); ++c)
      values.push_back(parse_number(
          row[c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
    require(m.empty() || values.size() == m.front().size(),
            ErrorKind::kShapeMismatch, where + " rows differ in length");
    m.push_back(std::move(values));
  }
  return m;
}

}  // namespace

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::kParse, std::string("malformed JSON: ") + e.what());
  }
}

double parse_number(const Json& value, const std::string& where) {
  if (value.is_number()) return value.get<double>();
  require(value.is_string(), ErrorKind::kParse,
          where + " must be a number or a decimal string");
  const auto s = value.get<std::string>();
  double out = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  require(res.ec == std::errc() && res.ptr == s.data() + s.size(),
          ErrorKind::kParse, where + " is not a decimal number: \"" + s + "\"");
  return out;
}

JointPmf parse_joint(const Json& doc) {
  const auto m = parse_matrix(field(doc, "matrix"), "matrix");
  return build_joint(m, parse_labels(doc, "u_labels", m.size()),
                     parse_labels(doc, "v_labels", m.front().size()));
}

std::optional<CoveringSet> parse_set(const Json& doc, const JointPmf& j) {
  if (!doc.is_object() || !doc.contains("set")) return std::nullopt;
  const auto m = parse_matrix(doc["set"], "set");
  require(m.size() == j.rows() && m.front().size() == j.cols(),
          ErrorKind::kShapeMismatch, "set must match the matrix shape");
  std::vector<std::uint8_t> mask;
  for (const auto& row : m)
    for (double x : row) {
      require(x == 0.0 || x == 1.0, ErrorKind::kParse,
              "set entries must be 0 or 1");
      mask.push_back(x == 1.0);
    }
  return CoveringSet::from_mask(j.rows(), j.cols(), std::move(mask));
}

CondPmf parse_channel(const Json& doc) {
  const auto m = parse_matrix(field(doc, "matrix"), "channel matrix");
  return CondPmf::make(parse_labels(doc, "in_labels", m.size()),
                       parse_labels(doc, "out_labels", m.front().size()), m);
}

BroadcastSpec parse_broadcast(const Json& doc) {
  auto joint = parse_joint(field(doc, "joint"));
  auto y = parse_channel(field(doc, "y_channel"));
  auto z = parse_channel(field(doc, "z_channel"));
  const auto& xm = field(doc, "x_map");
  require(xm.is_array() && xm.size() == joint.rows(), ErrorKind::kShapeMismatch,
          "x_map must have one row per u");
  std::vector<std::size_t> x_map;
  for (const auto& row : xm) {
    require(row.is_array() && row.size() == joint.cols(),
            ErrorKind::kShapeMismatch, "x_map rows must have one entry per v");
    for (const auto& x : row) {
      if (x.is_number_integer() && x.get<long long>() >= 0) {
        x_map.push_back(x.get<std::size_t>());
        continue;
      }
      require(x.is_string(), ErrorKind::kParse,
              "x_map entries must be input indices or labels");
      const auto& labels = y.in_labels();
      const auto it = std::find(labels.begin(), labels.end(), x.get<std::string>());
      require(it != labels.end(), ErrorKind::kParse,
              "unknown channel input \"" + x.get<std::string>() + "\"");
      x_map.push_back(static_cast<std::size_t>(it - labels.begin()));
    }
  }
  BroadcastSpec spec{std::move(joint), std::move(y), std::move(z),
                     std::move(x_map)};
  const auto opt = [&](const char* key, double& target) {
    if (doc.contains(key)) target = parse_number(doc[key], key);
  };
  opt("m1", spec.m1);
  opt("m2", spec.m2);
  opt("n1", spec.n1);
  opt("n2", spec.n2);
  opt("theta1", spec.theta1);
  opt("theta2", spec.theta2);
  opt("gamma", spec.gamma);
  spec.validate();
  return spec;
}

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json to_json(const BoundReport& r) {
  Json params = Json::object();
  for (const auto& [k, v] : r.params) params[k] = number(v);
  return Json{{"name", r.name},
              {"value", number(r.value)},
              {"log_value", number(r.log_value)},
              {"clamped", r.clamped},
              {"params", params},
              {"notes", r.notes}};
}

Json to_json(const SelectionRule& rule) {
  Json rows = Json::object();
  Json flagged = Json::array();
  for (std::size_t r = 0; r < rule.realizations(); ++r) {
    Json row = Json::array();
    for (double x : rule.row(r)) row.push_back(x);
    rows[rule.keys[r]] = row;
    if (rule.flagged[r]) flagged.push_back(rule.keys[r]);
  }
  return Json{{"indices", rule.indices}, {"rows", rows}, {"flagged", flagged}};
}

}  // namespace mutualcover::io
