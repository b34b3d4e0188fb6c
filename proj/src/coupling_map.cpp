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

#include "noiseforge/coupling_map.h"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace noiseforge {

CouplingMap::CouplingMap(std::string name, int qubit_count, std::vector<std::pair<int, int>> edges)
    : name_(std::move(name)), qubit_count_(qubit_count), adjacency_(qubit_count > 0 ? qubit_count : 0) {
    if (qubit_count < 1) {
        throw std::invalid_argument("coupling map needs at least one qubit");
    }
    for (auto [a, b] : edges) {
        if (a < 0 || b < 0 || a >= qubit_count || b >= qubit_count || a == b) {
            throw std::invalid_argument("coupling map '" + name_ + "' has invalid edge " + std::to_string(a) + "-" +
                                        std::to_string(b));
        }
        auto e = std::minmax(a, b);
        if (std::find(edges_.begin(), edges_.end(), std::pair<int, int>(e.first, e.second)) != edges_.end()) {
            continue;
        }
        edges_.emplace_back(e.first, e.second);
        adjacency_[a].push_back(b);
        adjacency_[b].push_back(a);
    }
    for (auto &adj : adjacency_) {
        std::sort(adj.begin(), adj.end());
    }
    std::vector<char> seen(qubit_count, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        int q = stack.back();
        stack.pop_back();
        for (int r : adjacency_[q]) {
            if (!seen[r]) {
                seen[r] = 1;
                stack.push_back(r);
            }
        }
    }
    if (std::count(seen.begin(), seen.end(), 0) != 0) {
        throw std::invalid_argument("coupling map '" + name_ + "' is disconnected");
    }
}

CouplingMap CouplingMap::t_shape() {
    return CouplingMap("t-shape", 5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}});
}

CouplingMap CouplingMap::bowtie() {
    return CouplingMap("bowtie", 5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}});
}

CouplingMap CouplingMap::from_name_or_file(const std::string &name_or_path) {
    if (name_or_path == "t-shape") {
        return t_shape();
    }
    if (name_or_path == "bowtie") {
        return bowtie();
    }
    std::ifstream in(name_or_path);
    if (!in) {
        throw std::invalid_argument("unknown coupling map '" + name_or_path + "' (not builtin, not a readable file)");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

CouplingMap CouplingMap::parse(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    std::string name = "custom";
    int qubits = -1;
    std::vector<std::pair<int, int>> edges;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key[0] == '#') {
            continue;
        }
        bool ok = true;
        if (key == "name") {
            ok = static_cast<bool>(ls >> name);
        } else if (key == "qubits") {
            ok = static_cast<bool>(ls >> qubits);
        } else if (key == "edge") {
            int a, b;
            ok = static_cast<bool>(ls >> a >> b);
            edges.emplace_back(a, b);
        } else {
            ok = false;
        }
        if (!ok) {
            throw std::invalid_argument("coupling map line " + std::to_string(line_no) + ": cannot parse '" + line +
                                        "'");
        }
    }
    if (qubits < 1) {
        throw std::invalid_argument("coupling map config lacks a 'qubits' line");
    }
    return CouplingMap(name, qubits, std::move(edges));
}

std::string CouplingMap::to_text() const {
    std::ostringstream out;
    out << "name " << name_ << "\nqubits " << qubit_count_ << "\n";
    for (auto [a, b] : edges_) {
        out << "edge " << a << " " << b << "\n";
    }
    return out.str();
}

bool CouplingMap::connected(int a, int b) const {
    if (a < 0 || a >= qubit_count_) {
        return false;
    }
    return std::binary_search(adjacency_[a].begin(), adjacency_[a].end(), b);
}

std::vector<int> CouplingMap::shortest_path(int a, int b) const {
    std::vector<int> prev(qubit_count_, -1);
    std::vector<char> seen(qubit_count_, 0);
    std::queue<int> frontier;
    frontier.push(a);
    seen[a] = 1;
    while (!frontier.empty()) {
        int q = frontier.front();
        frontier.pop();
        if (q == b) {
            break;
        }
        for (int r : adjacency_[q]) {
            if (!seen[r]) {
                seen[r] = 1;
                prev[r] = q;
                frontier.push(r);
            }
        }
    }
    std::vector<int> path;
    for (int q = b; q != -1; q = prev[q]) {
        path.push_back(q);
        if (q == a) {
            break;
        }
    }
    std::reverse(path.begin(), path.end());
    return path;
}

bool CouplingMap::operator==(const CouplingMap &other) const {
    auto sorted = [](std::vector<std::pair<int, int>> e) {
        std::sort(e.begin(), e.end());
        return e;
    };
    return qubit_count_ == other.qubit_count_ && sorted(edges_) == sorted(other.edges_);
}

}  // namespace noiseforge
