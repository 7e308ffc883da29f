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
#include <vector>

#include "qmip/prover.hpp"
#include "qmip/specs.hpp"

namespace qmip {

struct ProtocolSpec {
  std::string name;
  VerifierSpec verifier;
  std::vector<ProverSpec> provers;
  double a = 1.0;
  double b = 1.0;
  int cutoff = 1;
  bool claims_restrictive = false;
};

// Verifier well-formedness, prover checks, alphabet agreement and the
// restrictive claim when present.
Report check_protocol(const ProtocolSpec& p, const WellFormedOptions& options = {});

// Space that suffices for any prover: 2 T ceil(log2 max |Gamma_i|).
int sufficient_space_bound(const ProtocolSpec& p);

}  // namespace qmip
