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
#include <utility>
#include <vector>

#include "qmip/protocol.hpp"

namespace qmip {

struct ProvenanceEntry {
  std::string emitted;
  std::string source;
};

struct LiftOptions {
  // Wrap deterministic prover tables with history logging. When false, a
  // prover table that is not injective raises NotReversible.
  bool make_reversible = true;
};

struct LiftOutput {
  ProtocolSpec protocol;
  std::vector<ProvenanceEntry> provenance;
  ProtocolSpec source;
};

// Classical two-prover system in fair-coin normal form to a three-prover
// quantum system whose third prover erases the verifier's coin records.
LiftOutput lift_2ip_to_3qip(const ProtocolSpec& p, const LiftOptions& options = {});

// Permutation strategy with the same replies as the deterministic table `f`.
// Step j writes the received symbol additively into cell j-1, so `steps`
// cells hold the complete history.
ProverSpec make_reversible_prover(const ProverSpec& f, int steps);

// Replies # and adds the received symbol into cell j-1 at step j.
ProverSpec make_eraser(const Alphabet& gamma, const Alphabet& delta, int cells);

// Rewrites every communication alphabet to one common alphabet: # followed
// by the new symbols of each cell in order, padded to a power of two with
// filler symbols so that XOR on binary codes stays inside it.
ProtocolSpec unify_alphabets(const ProtocolSpec& p);

// Re-indexes a prover onto a larger communication alphabet by symbol name.
ProverSpec remap_prover_comm(const ProverSpec& prover, const Alphabet& comm);

struct ReduceOptions {
  // Run unify_alphabets first instead of raising AlphabetMismatch.
  bool unify = true;
};

struct ReduceOutput {
  ProtocolSpec protocol;
  Alphabet mask;
  BinaryEncoding encoding;
  // The three-prover input after alphabet unification.
  ProtocolSpec source;
};

// Three-prover restrictive quantum system with an eraser to a two-prover
// system that one-time-pads the third message across the two lower tracks.
ReduceOutput reduce_3qip_to_2qip(const ProtocolSpec& p, const ReduceOptions& options = {});

// Largest deviation between <V(r1), V(r2)> in the (unified) source and
// <V'(r1), V'(r2)> in the reduced verifier, over all pairs of rows that read
// the same tape symbol and a blank third cell.
double reduce_inner_product_deviation(const ReduceOutput& out);

struct Completion {
  VerifierSpec verifier;
  std::vector<RowKey> added;
};

// Fills every argument tuple that has neither a row nor a guard with a column
// orthonormal to all others (Gram-Schmidt over the output basis, identity
// candidate first).
Completion complete_unitary(const VerifierSpec& v);

std::string format_provenance(const std::vector<ProvenanceEntry>& provenance);

}  // namespace qmip
