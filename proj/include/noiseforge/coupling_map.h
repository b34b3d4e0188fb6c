// Copyright 2026 The NoiseForge Authors
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

namespace noiseforge {

/// Undirected qubit connectivity. Construction rejects out-of-range,
/// self-loop, and disconnected maps.
class CouplingMap {
   public:
    CouplingMap(std::string name, int qubit_count, std::vector<std::pair<int, int>> edges);

    /// Edges 0-1, 1-2, 1-3, 3-4.
    static CouplingMap t_shape();
    /// Edges 0-1, 0-2, 1-2, 2-3, 2-4.
    static CouplingMap bowtie();
    /// Builtin name ("t-shape", "bowtie") or path to a text config.
    static CouplingMap from_name_or_file(const std::string &name_or_path);

    /// Text config: `name t-shape`, `qubits 5`, `edge 0 1` lines; `#` comments.
    static CouplingMap parse(const std::string &text);
    std::string to_text() const;

    const std::string &name() const { return name_; }
    int qubit_count() const { return qubit_count_; }
    const std::vector<std::pair<int, int>> &edges() const { return edges_; }
    bool connected(int a, int b) const;
    const std::vector<int> &neighbors(int q) const { return adjacency_[q]; }

    /// BFS shortest path from a to b inclusive; neighbours visited lowest index first.
    std::vector<int> shortest_path(int a, int b) const;

    bool operator==(const CouplingMap &other) const;

   private:
    std::string name_;
    int qubit_count_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adjacency_;
};

}  // namespace noiseforge
