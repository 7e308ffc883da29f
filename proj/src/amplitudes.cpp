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

#include "qmip/amplitudes.hpp"

#include <sstream>

namespace qmip {

StateVector::StateVector(std::initializer_list<std::pair<const ConfigurationId, Amplitude>> init) {
  for (const auto& [id, value] : init) add(id, value);
  prune();
}

void StateVector::add(const ConfigurationId& id, Amplitude value) {
  auto [it, inserted] = entries_.try_emplace(id, value);
  if (!inserted) it->second += value;
}

Amplitude StateVector::at(const ConfigurationId& id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? Amplitude{} : it->second;
}

void StateVector::prune() {
  std::erase_if(entries_, [](const auto& kv) { return std::abs(kv.second) < kPruneThreshold; });
}

double StateVector::norm_squared() const {
  double total = 0.0;
  for (const auto& [id, value] : entries_) total += std::norm(value);
  return total;
}

double StateVector::total_weight() const {
  double total = 0.0;
  for (const auto& [id, value] : entries_) total += value.real();
  return total;
}

Amplitude inner_product(const StateVector& a, const StateVector& b) {
  Amplitude total{};
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  const bool a_is_small = &small == &a;
  for (const auto& [id, value] : small) {
    auto it = large.entries().find(id);
    if (it == large.entries().end()) continue;
    total += a_is_small ? std::conj(value) * it->second : std::conj(it->second) * value;
  }
  return total;
}

StateVector apply_rule(const Rule& rule, const StateVector& s) {
  StateVector out;
  for (const auto& [id, value] : s) {
    rule(id, [&](const ConfigurationId& target, Amplitude weight) { out.add(target, weight * value); });
  }
  out.prune();
  return out;
}

StateVector apply_sparse_operator(const SparseOperator& op, const StateVector& s) {
  return apply_rule(
      [&](const ConfigurationId& id, const Emit& emit) {
        auto it = op.find(id);
        if (it == op.end()) {
          throw Error(ErrorCode::kMissingTransition, "no rule for configuration " + format_configuration(id));
        }
        for (const auto& [target, weight] : it->second) emit(target, weight);
      },
      s);
}

namespace {

template <typename Mass>
Measurement measure(const StateVector& s, const ConfigPredicate& accepting, const ConfigPredicate& rejecting,
                    Mass mass) {
  Measurement m;
  StateVector residual;
  for (const auto& [id, value] : s) {
    if (accepting(id)) {
      m.p_acc += mass(value);
    } else if (rejecting(id)) {
      m.p_rej += mass(value);
    } else {
      residual.add(id, value);
    }
  }
  m.residual = std::move(residual);
  return m;
}

}  // namespace

Measurement measure_halting(const StateVector& s, const ConfigPredicate& accepting,
                            const ConfigPredicate& rejecting) {
  return measure(s, accepting, rejecting, [](Amplitude v) { return std::norm(v); });
}

Measurement measure_halting_classical(const StateVector& s, const ConfigPredicate& accepting,
                                      const ConfigPredicate& rejecting) {
  return measure(s, accepting, rejecting, [](Amplitude v) { return v.real(); });
}

std::string format_configuration(const ConfigurationId& id) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < id.size(); ++i) os << (i ? "," : "") << id[i];
  os << ')';
  return os.str();
}

}  // namespace qmip
