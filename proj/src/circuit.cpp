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

#include "noiseforge/circuit.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace noiseforge {

void Circuit::validate() const {
    if (qubit_count < 1) {
        throw std::invalid_argument("circuit needs at least one qubit");
    }
    for (const auto &g : gates) {
        g.validate(qubit_count);
    }
}

int Circuit::depth() const {
    std::vector<int> level(qubit_count, 0);
    int d = 0;
    for (const auto &g : gates) {
        int start = level[g.qubits[0]];
        if (g.arity() == 2) {
            start = std::max(start, level[g.qubits[1]]);
        }
        level[g.qubits[0]] = start + 1;
        if (g.arity() == 2) {
            level[g.qubits[1]] = start + 1;
        }
        d = std::max(d, start + 1);
    }
    return d;
}

std::size_t Circuit::count(GateKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(gates.begin(), gates.end(), [kind](const Gate &g) { return g.kind == kind; }));
}

Circuit concat(const Circuit &c1, const Circuit &c2) {
    if (c1.qubit_count != c2.qubit_count) {
        throw std::invalid_argument("concat: qubit counts differ");
    }
    Circuit out = c1;
    out.gates.insert(out.gates.end(), c2.gates.begin(), c2.gates.end());
    return out;
}

Circuit inverse_circuit(const Circuit &c) {
    Circuit out(c.qubit_count);
    out.metadata = c.metadata;
    out.gates.reserve(c.gates.size());
    for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
        out.gates.push_back(inverse_gate(*it));
    }
    return out;
}

void apply_1q(Eigen::Ref<UnitaryMatrix> state, int n, int q, const Matrix2c &m) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    const Eigen::Index stride = Eigen::Index{1} << (n - 1 - q);
    for (Eigen::Index col = 0; col < state.cols(); ++col) {
        for (Eigen::Index i = 0; i < dim; ++i) {
            if (i & stride) {
                continue;
            }
            complex_t a = state(i, col);
            complex_t b = state(i | stride, col);
            state(i, col) = m(0, 0) * a + m(0, 1) * b;
            state(i | stride, col) = m(1, 0) * a + m(1, 1) * b;
        }
    }
}

void apply_2q(Eigen::Ref<UnitaryMatrix> state, int n, int q_hi, int q_lo, const Matrix4c &m) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    const Eigen::Index sh = Eigen::Index{1} << (n - 1 - q_hi);
    const Eigen::Index sl = Eigen::Index{1} << (n - 1 - q_lo);
    for (Eigen::Index col = 0; col < state.cols(); ++col) {
        for (Eigen::Index i = 0; i < dim; ++i) {
            if ((i & sh) || (i & sl)) {
                continue;
            }
            const Eigen::Index idx[4] = {i, i | sl, i | sh, i | sh | sl};
            complex_t v[4];
            for (int k = 0; k < 4; ++k) {
                v[k] = state(idx[k], col);
            }
            for (int r = 0; r < 4; ++r) {
                complex_t acc = 0;
                for (int k = 0; k < 4; ++k) {
                    acc += m(r, k) * v[k];
                }
                state(idx[r], col) = acc;
            }
        }
    }
}

void apply_gate(Eigen::Ref<UnitaryMatrix> state, int n, const Gate &g) {
    UnitaryMatrix m = gate_unitary(g);
    if (g.arity() == 1) {
        apply_1q(state, n, g.qubits[0], m);
    } else {
        apply_2q(state, n, g.qubits[0], g.qubits[1], m);
    }
}

UnitaryMatrix circuit_unitary(const Circuit &c) {
    if (c.qubit_count > kMaxUnitaryQubits) {
        throw std::length_error("circuit_unitary: " + std::to_string(c.qubit_count) + " qubits exceeds limit of " +
                                std::to_string(kMaxUnitaryQubits));
    }
    c.validate();
    const Eigen::Index dim = Eigen::Index{1} << c.qubit_count;
    UnitaryMatrix u = UnitaryMatrix::Identity(dim, dim);
    for (const auto &g : c.gates) {
        apply_gate(u, c.qubit_count, g);
    }
    return u;
}

UnitaryMatrix permutation_unitary(std::span<const int> perm) {
    const int n = static_cast<int>(perm.size());
    const Eigen::Index dim = Eigen::Index{1} << n;
    UnitaryMatrix p = UnitaryMatrix::Zero(dim, dim);
    for (Eigen::Index in = 0; in < dim; ++in) {
        Eigen::Index out = 0;
        for (int q = 0; q < n; ++q) {
            if (qubit_bit(static_cast<std::uint64_t>(in), q, n)) {
                out |= Eigen::Index{1} << (n - 1 - perm[q]);
            }
        }
        p(out, in) = 1;
    }
    return p;
}

namespace {

std::string format_angle(double a) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", wrap_angle(a));
    return buf;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') {
            ++j;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

[[noreturn]] void parse_fail(int line_no, const std::string &msg) {
    throw std::invalid_argument("circuit text line " + std::to_string(line_no) + ": " + msg);
}

int parse_int(std::string_view tok, int line_no) {
    int v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) {
        parse_fail(line_no, "bad integer '" + std::string(tok) + "'");
    }
    return v;
}

double parse_double(std::string_view tok, int line_no) {
    std::string s(tok);
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        parse_fail(line_no, "bad angle '" + s + "'");
    }
    if (used != s.size()) {
        parse_fail(line_no, "bad angle '" + s + "'");
    }
    return v;
}

int parse_qubit(std::string_view tok, int line_no) {
    if (tok.size() < 2 || tok[0] != 'q') {
        parse_fail(line_no, "expected qubit like q0, got '" + std::string(tok) + "'");
    }
    return parse_int(tok.substr(1), line_no);
}

}  // namespace

std::string to_text(const Circuit &c) {
    std::ostringstream out;
    out << "qubits " << c.qubit_count << "\n";
    for (const auto &[k, v] : c.metadata) {
        out << "# " << k << " " << v << "\n";
    }
    for (const auto &g : c.gates) {
        out << gate_name(g.kind);
        for (int k = 0; k < g.arity(); ++k) {
            out << " q" << g.qubits[k];
        }
        for (int k = 0; k < param_count(g.kind); ++k) {
            out << " " << format_angle(g.params[k]);
        }
        if (g.inserted) {
            out << " !ins";
        }
        out << "\n";
    }
    return out.str();
}

Circuit parse_circuit(std::string_view text) {
    Circuit c;
    bool have_header = false;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;
        auto toks = split_ws(line);
        if (toks.empty()) {
            continue;
        }
        if (toks[0].starts_with("#")) {
            // `# key value` comments carry metadata; anything else is ignored.
            if (toks[0] == "#" && toks.size() == 3) {
                c.metadata[std::string(toks[1])] = std::string(toks[2]);
            }
            continue;
        }
        if (toks[0] == "qubits") {
            if (have_header || toks.size() != 2) {
                parse_fail(line_no, "malformed or repeated qubits header");
            }
            c.qubit_count = parse_int(toks[1], line_no);
            if (c.qubit_count < 1) {
                parse_fail(line_no, "qubit count must be positive");
            }
            have_header = true;
            continue;
        }
        if (!have_header) {
            parse_fail(line_no, "gate before 'qubits' header");
        }
        auto kind = gate_kind_from_name(toks[0]);
        if (!kind) {
            parse_fail(line_no, "unknown gate '" + std::string(toks[0]) + "'");
        }
        Gate g;
        g.kind = *kind;
        bool inserted = false;
        if (toks.back() == "!ins") {
            inserted = true;
            toks.pop_back();
        }
        const int arity = qubit_arity(*kind);
        const int np = param_count(*kind);
        if (static_cast<int>(toks.size()) != 1 + arity + np) {
            parse_fail(line_no, "gate '" + std::string(toks[0]) + "' expects " + std::to_string(arity) +
                                    " qubits and " + std::to_string(np) + " angles");
        }
        g.qubits = {-1, -1};
        for (int k = 0; k < arity; ++k) {
            g.qubits[k] = parse_qubit(toks[1 + k], line_no);
        }
        for (int k = 0; k < np; ++k) {
            g.params[k] = parse_double(toks[1 + arity + k], line_no);
        }
        g.inserted = inserted;
        try {
            g.validate(c.qubit_count);
        } catch (const std::invalid_argument &e) {
            parse_fail(line_no, e.what());
        }
        c.gates.push_back(g);
    }
    if (!have_header) {
        throw std::invalid_argument("circuit text: missing 'qubits' header");
    }
    return c;
}

Circuit read_circuit_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open circuit file " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_circuit(ss.str());
}

void write_circuit_file(const std::string &path, const Circuit &c) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write circuit file " + path);
    }
    out << to_text(c);
}

std::string to_qasm2(const Circuit &c) {
    std::ostringstream out;
    out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    out << "qreg q[" << c.qubit_count << "];\n";
    out << "creg c[" << c.qubit_count << "];\n";
    for (const auto &g : c.gates) {
        switch (g.kind) {
            case GateKind::U1:
                out << "u1(" << format_angle(g.params[0]) << ") q[" << g.qubits[0] << "];\n";
                break;
            case GateKind::U2:
                out << "u2(" << format_angle(g.params[0]) << "," << format_angle(g.params[1]) << ") q["
                    << g.qubits[0] << "];\n";
                break;
            case GateKind::U3:
                out << "u3(" << format_angle(g.params[0]) << "," << format_angle(g.params[1]) << ","
                    << format_angle(g.params[2]) << ") q[" << g.qubits[0] << "];\n";
                break;
            case GateKind::CX:
                out << "cx q[" << g.qubits[0] << "],q[" << g.qubits[1] << "];\n";
                break;
            default:
                throw std::invalid_argument("to_qasm2: gate " + std::string(gate_name(g.kind)) +
                                            " must be lowered to the native basis first");
        }
    }
    out << "measure q -> c;\n";
    return out.str();
}

}  // namespace noiseforge
