#include "smpleak/protocol_json.hpp"

#include <fstream>
#include <sstream>

#include "smpleak/errors.hpp"

namespace smpleak {

namespace {

Json alphabet_to_json(const Alphabet& a) { return Json(a.labels()); }

Alphabet alphabet_from_json(const Json& j, const char* field) {
  if (!j.is_array() || j.empty()) {
    throw ValidationError(std::string("field '") + field + "' must be a nonempty label array");
  }
  std::vector<std::string> labels;
  labels.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_string()) {
      throw ValidationError(std::string("field '") + field + "' contains a non-string label");
    }
    labels.push_back(v.get<std::string>());
  }
  return Alphabet(std::move(labels));
}

Json dist_to_json(const Dist& d) {
  Json j;
  j["labels"] = d.alphabet().labels();
  j["probs"] = std::vector<double>(d.probs().begin(), d.probs().end());
  return j;
}

Dist dist_from_json(const Json& j, const char* field) {
  if (!j.is_object() || !j.contains("labels") || !j.contains("probs")) {
    throw ValidationError(std::string("field '") + field +
                          "' must be an object with 'labels' and 'probs'");
  }
  Alphabet a = alphabet_from_json(j.at("labels"), field);
  const auto& jp = j.at("probs");
  if (!jp.is_array()) {
    throw ValidationError(std::string("field '") + field + "': 'probs' must be an array");
  }
  std::vector<double> probs;
  probs.reserve(jp.size());
  for (const auto& v : jp) {
    if (!v.is_number()) {
      throw ValidationError(std::string("field '") + field + "': non-numeric probability");
    }
    probs.push_back(v.get<double>());
  }
  try {
    return Dist(std::move(a), std::move(probs));
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("field '") + field + "': " + e.what());
  }
}

std::vector<std::uint32_t> map_from_json(const Json& j, const char* field) {
  if (!j.is_array()) {
    throw ValidationError(std::string("field '") + field + "' must be a flat integer array");
  }
  std::vector<std::uint32_t> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number_unsigned() && !v.is_number_integer()) {
      throw ValidationError(std::string("field '") + field + "' contains a non-integer entry");
    }
    const auto val = v.get<std::int64_t>();
    if (val < 0) throw ValidationError(std::string("field '") + field + "' contains a negative entry");
    out.push_back(static_cast<std::uint32_t>(val));
  }
  return out;
}

std::vector<int> lengths_from_json(const Json& j, const char* field) {
  if (!j.is_array()) {
    throw ValidationError(std::string("field '") + field + "' must be an integer array");
  }
  std::vector<int> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
      throw ValidationError(std::string("field '") + field + "' contains a non-integer entry");
    }
    out.push_back(v.get<int>());
  }
  return out;
}

const Json& require(const Json& j, const char* field) {
  if (!j.contains(field)) {
    throw ValidationError(std::string("missing required field '") + field + "'");
  }
  return j.at(field);
}

}  // namespace

Json protocol_to_json(const SmpProtocol& p) {
  Json j;
  j["schema"] = kProtocolSchemaVersion;
  j["kind"] = "smp";
  j["model"] = model_name(p.model());
  j["x"] = alphabet_to_json(p.x());
  j["y"] = alphabet_to_json(p.y());
  j["z"] = alphabet_to_json(p.z());
  j["ma"] = alphabet_to_json(p.ma());
  j["mb"] = alphabet_to_json(p.mb());
  j["ra"] = dist_to_json(p.ra());
  j["rb"] = dist_to_json(p.rb());
  j["rc"] = dist_to_json(p.rc());
  j["rac"] = dist_to_json(p.rac());
  j["rbc"] = dist_to_json(p.rbc());
  j["alice_map"] = p.parts().alice_map;
  j["bob_map"] = p.parts().bob_map;
  j["referee_map"] = p.parts().referee_map;
  j["len_a"] = std::vector<int>(p.len_a().lengths().begin(), p.len_a().lengths().end());
  j["len_b"] = std::vector<int>(p.len_b().lengths().begin(), p.len_b().lengths().end());
  j["cell_cap"] = p.cell_cap();
  return j;
}

SmpProtocol protocol_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("protocol document must be a JSON object");
  const auto& schema = require(j, "schema");
  if (!schema.is_number_integer() || schema.get<int>() != kProtocolSchemaVersion) {
    throw ValidationError("unsupported protocol schema version");
  }
  if (j.contains("kind") && j.at("kind").get<std::string>() != "smp") {
    throw ValidationError("expected a protocol of kind 'smp'");
  }

  SmpProtocol::Parts parts{
      model_from_name(require(j, "model").get<std::string>()),
      alphabet_from_json(require(j, "x"), "x"),
      alphabet_from_json(require(j, "y"), "y"),
      alphabet_from_json(require(j, "z"), "z"),
      alphabet_from_json(require(j, "ma"), "ma"),
      alphabet_from_json(require(j, "mb"), "mb"),
      dist_from_json(require(j, "ra"), "ra"),
      dist_from_json(require(j, "rb"), "rb"),
      dist_from_json(require(j, "rc"), "rc"),
      dist_from_json(require(j, "rac"), "rac"),
      dist_from_json(require(j, "rbc"), "rbc"),
      map_from_json(require(j, "alice_map"), "alice_map"),
      map_from_json(require(j, "bob_map"), "bob_map"),
      map_from_json(require(j, "referee_map"), "referee_map"),
      LengthFunction::uniform(require(j, "ma").size()),
      LengthFunction::uniform(require(j, "mb").size()),
      kDefaultCellCap};
  if (j.contains("len_a")) parts.len_a = LengthFunction(lengths_from_json(j.at("len_a"), "len_a"));
  if (j.contains("len_b")) parts.len_b = LengthFunction(lengths_from_json(j.at("len_b"), "len_b"));
  if (j.contains("cell_cap")) parts.cell_cap = j.at("cell_cap").get<std::uint64_t>();
  return SmpProtocol(std::move(parts));
}

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

std::string protocol_to_string(const SmpProtocol& p) {
  return dump_canonical(protocol_to_json(p));
}

Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // count the line of the reported byte offset for the diagnostic
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ValidationError(origin + ":" + std::to_string(line) + ": " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

SmpProtocol read_protocol_file(const std::string& path) {
  try {
    return protocol_from_json(read_json_file(path));
  } catch (const ValidationError& e) {
    if (std::string(e.what()).find(path) == 0) throw;
    throw ValidationError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << text;
  if (!out) throw ValidationError("write failed: " + path);
}

void write_protocol_file(const std::string& path, const SmpProtocol& p) {
  write_text_file(path, protocol_to_string(p));
}

}  // namespace smpleak
