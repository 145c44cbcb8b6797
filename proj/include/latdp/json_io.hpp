#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "latdp/operator.hpp"

namespace latdp {

using nlohmann::json;

// Wire format:
// {"domain": {"dim": n, "norm": {"kind": "lp"|"weighted_lp"|"sup",
//                                "p": number|"inf", "weights": [..]?}},
//  "codomain": {...},
//  "matrix": [[row0...], [row1...], ...]}
json space_to_json(const LatticeSpace& s);
LatticeSpace space_from_json(const json& j);

json operator_to_json(const LatticeOperator& t);
LatticeOperator operator_from_json(const json& j);

LatticeOperator load_operator_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);
json load_json_file(const std::string& path);

// FNV-1a 64 over a byte string, hex-encoded; used for report input digests
std::string digest_hex(const std::string& bytes);

}  // namespace latdp
