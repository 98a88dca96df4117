#ifndef SMPLEAK_PROTOCOL_JSON_HPP
#define SMPLEAK_PROTOCOL_JSON_HPP

#include <string>

#include <json.hpp>

#include "smpleak/protocol.hpp"

namespace smpleak {

using Json = nlohmann::ordered_json;

inline constexpr int kProtocolSchemaVersion = 1;

// Schema (kind "smp"): named alphabets, randomness tables, deterministic maps
// as flat arrays, optional length tables. Round-trips losslessly; the writer
// emits a canonical form so write(read(doc)) is idempotent byte for byte.
Json protocol_to_json(const SmpProtocol& p);
SmpProtocol protocol_from_json(const Json& j);

std::string protocol_to_string(const SmpProtocol& p);

SmpProtocol read_protocol_file(const std::string& path);
void write_protocol_file(const std::string& path, const SmpProtocol& p);

// Parse with line/field diagnostics wrapped into ValidationError.
Json parse_json_text(const std::string& text, const std::string& origin);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Canonical serialization used for every artifact this project writes.
std::string dump_canonical(const Json& j);

}  // namespace smpleak

#endif
