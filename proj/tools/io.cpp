#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace chandef::io {

namespace {

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InstanceError("'" + path + "': " + e.what());
  }
  return doc;
}

std::vector<double> read_values(const json& doc, std::size_t expected) {
  if (!doc.contains("values") || !doc["values"].is_array())
    throw InstanceError("field 'values' is missing or not an array");
  const auto& arr = doc["values"];
  if (arr.size() != expected)
    throw InstanceError("field 'values' has " + std::to_string(arr.size()) +
                        " entries, expected " + std::to_string(expected));
  std::vector<double> out;
  out.reserve(expected);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number())
      throw InstanceError("field 'values[" + std::to_string(i) + "]' is not a number");
    double v = arr[i].get<double>();
    if (!(v >= 0.0) || !std::isfinite(v))
      throw InstanceError("field 'values[" + std::to_string(i) +
                          "]' must be a finite nonnegative number");
    out.push_back(v);
  }
  return out;
}

std::vector<std::size_t> read_dims(const json& doc, std::size_t arity) {
  if (!doc.contains("dims") || !doc["dims"].is_array())
    throw InstanceError("field 'dims' is missing or not an array");
  const auto& arr = doc["dims"];
  if (arr.size() != arity)
    throw InstanceError("field 'dims' must list " + std::to_string(arity) +
                        " sizes for this kind");
  std::vector<std::size_t> dims;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number_unsigned() || arr[i].get<std::size_t>() == 0)
      throw InstanceError("field 'dims[" + std::to_string(i) +
                          "]' must be a positive integer");
    dims.push_back(arr[i].get<std::size_t>());
  }
  return dims;
}

std::vector<std::string> read_labels(const json& doc, const char* axis,
                                     std::size_t expected) {
  if (!doc.contains("labels")) return {};
  const auto& labels = doc["labels"];
  if (!labels.is_object()) throw InstanceError("field 'labels' must be an object");
  if (!labels.contains(axis)) return {};
  const auto& arr = labels[axis];
  if (!arr.is_array() || arr.size() != expected)
    throw InstanceError(std::string("field 'labels.") + axis + "' must list " +
                        std::to_string(expected) + " strings");
  std::vector<std::string> out;
  for (const auto& s : arr) {
    if (!s.is_string())
      throw InstanceError(std::string("field 'labels.") + axis +
                          "' entries must be strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

}  // namespace

const Joint3& Instance::joint3() const {
  if (!is_joint3()) throw InstanceError("this command needs a 'joint3' instance");
  return std::get<Joint3>(value);
}

const Matrix& Instance::joint2() const {
  if (!std::holds_alternative<Matrix>(value))
    throw InstanceError("this command needs a 'joint2' instance");
  return std::get<Matrix>(value);
}

const Channel& Instance::channel() const {
  if (!std::holds_alternative<Channel>(value))
    throw InstanceError("this command needs a 'channel' instance");
  return std::get<Channel>(value);
}

const ProbVector& Instance::prob_vector() const {
  if (!std::holds_alternative<ProbVector>(value))
    throw InstanceError("this command needs a 'prob_vector' instance");
  return std::get<ProbVector>(value);
}

Instance load_instance(const std::string& path) {
  json doc = parse_file(path);
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string())
    throw InstanceError("'" + path + "': field 'kind' is missing");
  std::string kind = doc["kind"].get<std::string>();
  try {
    if (kind == "joint3") {
      auto dims = read_dims(doc, 3);
      auto values = read_values(doc, dims[0] * dims[1] * dims[2]);
      return {Joint3(dims[0], dims[1], dims[2], std::move(values),
                     read_labels(doc, "y", dims[0]), read_labels(doc, "x", dims[1]),
                     read_labels(doc, "z", dims[2]))};
    }
    if (kind == "joint2") {
      auto dims = read_dims(doc, 2);
      return {Matrix(dims[0], dims[1], read_values(doc, dims[0] * dims[1]))};
    }
    if (kind == "channel") {
      auto dims = read_dims(doc, 2);
      return {Channel(dims[0], dims[1], read_values(doc, dims[0] * dims[1]),
                      read_labels(doc, "in", dims[0]), read_labels(doc, "out", dims[1]))};
    }
    if (kind == "prob_vector") {
      auto dims = read_dims(doc, 1);
      return {ProbVector(read_values(doc, dims[0]))};
    }
  } catch (const InstanceError&) {
    throw;
  } catch (const std::exception& e) {
    throw InstanceError("'" + path + "': " + e.what());
  }
  throw InstanceError("'" + path + "': unknown kind '" + kind + "'");
}

DataPairs load_pairs(const std::string& path) {
  json doc = parse_file(path);
  if (!doc.is_array()) throw InstanceError("'" + path + "': expected an array of pairs");
  DataPairs out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& e = doc[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() ||
        !e[1].is_number_unsigned())
      throw InstanceError("'" + path + "': entry " + std::to_string(i) +
                          " must be a pair of nonnegative integers");
    out.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
  }
  if (out.empty()) throw InstanceError("'" + path + "': data file has no pairs");
  return out;
}

json num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return json::parse(buf);
}

json channel_to_json(const Channel& c) {
  json rows = json::array();
  for (std::size_t i = 0; i < c.input_size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < c.output_size(); ++j) row.push_back(num(c.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json prob_to_json(const ProbVector& p) {
  json out = json::array();
  for (std::size_t i = 0; i < p.size(); ++i) out.push_back(num(p[i]));
  return out;
}

void write_output(const json& doc, const std::string& path) {
  if (path == "-" || path.empty()) {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw InstanceError("cannot write '" + path + "'");
  out << doc.dump(2) << "\n";
}

}  // namespace chandef::io
