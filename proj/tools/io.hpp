#pragma once

// JSON instance files and result serialization for the command-line tool.
//
// Instance format (all probabilities validated to 1e-9):
//   {"kind": "joint3",      "dims": [ny, nx, nz], "values": [...],
//    "labels": {"y": [...], "x": [...], "z": [...]}}            // labels optional
//   {"kind": "joint2",      "dims": [rows, cols], "values": [...]}
//   {"kind": "channel",     "dims": [in, out],    "values": [...]}
//   {"kind": "prob_vector", "dims": [n],          "values": [...]}
// Values are row-major; for joint3 the axis order is (y, x, z).
//
// Data files for the estimators are JSON arrays of [x, y] index pairs.

#include <chandef/estimators.hpp>
#include <chandef/prob.hpp>

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace chandef::io {

using json = nlohmann::ordered_json;

// Raised on malformed input; the message names the offending field.
struct InstanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Instance {
  std::variant<Joint3, Matrix, Channel, ProbVector> value;

  bool is_joint3() const { return std::holds_alternative<Joint3>(value); }
  const Joint3& joint3() const;
  const Matrix& joint2() const;
  const Channel& channel() const;
  const ProbVector& prob_vector() const;
};

Instance load_instance(const std::string& path);
DataPairs load_pairs(const std::string& path);

json channel_to_json(const Channel& c);
json prob_to_json(const ProbVector& p);

// Formats a double with ten significant digits; infinities become strings.
json num(double v);

void write_output(const json& doc, const std::string& path);  // "-" = stdout

}  // namespace chandef::io
