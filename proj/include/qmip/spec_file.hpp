// Copyright 2026 The qmip Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>

#include "qmip/protocol.hpp"

namespace qmip {

// Text protocol files. Sections [protocol], [alphabets], [verifier] and one
// [prover i] per prover (plus [prover i inner] for a stash prover's inner
// strategy). Lines starting with ';' are comments.
//
// Verifier rows:  q sigma g1 .. gk -> weight q' d t1 .. tk
// Table rows:     step received tape -> reply tape
// Unitary rows:   step received tape -> weight reply tape
//
// '*' in a read position matches every live symbol (or step); specific rows
// take precedence over wildcard rows. Tapes are '|'-separated cells with
// trailing blanks dropped; '-' is the empty tape.
ProtocolSpec parse_protocol(std::string_view text);
ProtocolSpec load_protocol(const std::string& path);
std::string serialize_protocol(const ProtocolSpec& p);
void save_protocol(const ProtocolSpec& p, const std::string& path);

// Exact weight tokens: 1, -1, 1/2, 1/sqrt2, -1/sqrt2, n/m, n/sqrtm, decimals,
// and (re,im) for complex values.
Amplitude parse_weight(std::string_view token);
std::string format_weight(Amplitude w);

}  // namespace qmip
