// Copyright 2026 The qdisco Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "qdisco/errors.hpp"

namespace qdisco::detail {

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline nlohmann::json parse_json(std::string_view text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

/// Fetches `key` from an object, converting nlohmann type errors into SchemaError.
template <typename T>
T require(const nlohmann::json& obj, const std::string& key, const std::string& where = {}) {
    const std::string path = where.empty() ? key : where + "." + key;
    if (!obj.is_object() || !obj.contains(key)) throw SchemaError(path, "missing required field");
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(path, e.what());
    }
}

}  // namespace qdisco::detail
