#pragma once

#include <string>

#include "smoothdiv/operators.hpp"

namespace smoothdiv {

// Operator JSON format: {"dim": n, "re": [[...]], "im": [[...]]}; "im" may be
// omitted for real matrices. Channels: {"kraus": [matrix, ...]} where each
// entry uses the same re/im layout (rectangular allowed).

Matrix load_operator_json(const std::string& path);
void save_operator_json(const std::string& path, const Matrix& m);
std::string operator_to_json_string(const Matrix& m);
Matrix operator_from_json_string(const std::string& text, const std::string& origin = "<string>");

QuantumChannel load_channel_json(const std::string& path);
void save_channel_json(const std::string& path, const QuantumChannel& n);

} // namespace smoothdiv
