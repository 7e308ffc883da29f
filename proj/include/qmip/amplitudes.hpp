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

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "qmip/error.hpp"

namespace qmip {

using Amplitude = std::complex<double>;

// Flat integer encoding of one basis configuration. The engine lays it out
// as [state, head, comm_1..comm_k, tape cells...].
using ConfigurationId = std::vector<std::int32_t>;

inline constexpr double kPruneThreshold = 1e-15;

// Sparse superposition over configurations. Ordered so that iteration (and
// therefore floating-point summation order) is reproducible.
class StateVector {
 public:
  using Map = std::map<ConfigurationId, Amplitude>;

  StateVector() = default;
  StateVector(std::initializer_list<std::pair<const ConfigurationId, Amplitude>> init);

  void add(const ConfigurationId& id, Amplitude value);
  Amplitude at(const ConfigurationId& id) const;

  // Drops entries with magnitude below kPruneThreshold.
  void prune();

  double norm_squared() const;
  // Sum of real parts; the total mass of a classical weight vector.
  double total_weight() const;

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const Map& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  Map entries_;
};

Amplitude inner_product(const StateVector& a, const StateVector& b);

// A rule maps one source configuration to its image, invoking `emit` for each
// (target, amplitude) term. It throws Error(kMissingTransition) itself when
// the source has no rule.
using Emit = std::function<void(const ConfigurationId&, Amplitude)>;
using Rule = std::function<void(const ConfigurationId&, const Emit&)>;

StateVector apply_rule(const Rule& rule, const StateVector& s);

using SparseOperator = std::map<ConfigurationId, std::vector<std::pair<ConfigurationId, Amplitude>>>;

StateVector apply_sparse_operator(const SparseOperator& op, const StateVector& s);

struct Measurement {
  double p_acc = 0.0;
  double p_rej = 0.0;
  StateVector residual;
};

using ConfigPredicate = std::function<bool(const ConfigurationId&)>;

// Projective measurement onto accepting / rejecting / non-halting subspaces.
// The residual is not renormalized.
Measurement measure_halting(const StateVector& s, const ConfigPredicate& accepting,
                            const ConfigPredicate& rejecting);

// Same projection for a classical weight vector: probabilities are summed
// weights rather than squared magnitudes.
Measurement measure_halting_classical(const StateVector& s, const ConfigPredicate& accepting,
                                      const ConfigPredicate& rejecting);

std::string format_configuration(const ConfigurationId& id);

}  // namespace qmip
