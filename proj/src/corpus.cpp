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

#include "corpus.hpp"

#include "qmip/spec_file.hpp"
#include "qmip/transforms.hpp"

namespace qmip {

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = [] {
    std::vector<CorpusEntry> out = corpus_sources();
    for (const auto& e : corpus_sources()) {
      if (e.name != "nocomm") continue;
      const LiftOutput lifted = lift_2ip_to_3qip(parse_protocol(e.text));
      const ReduceOutput reduced = reduce_3qip_to_2qip(lifted.protocol);
      out.push_back({e.name + "-lift", "; Generated by lift from " + e.name + ".\n" + serialize_protocol(lifted.protocol)});
      out.push_back({e.name + "-reduce", "; Generated by reduce from " + e.name + "-lift.\n" + serialize_protocol(reduced.protocol)});
    }
    return out;
  }();
  return entries;
}

}  // namespace qmip
