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

#include "noiseforge/gap_compiler.h"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "noiseforge/parallel.h"
#include "noiseforge/random_circuits.h"
#include "noiseforge/transpiler.h"

namespace noiseforge {

ScheduledCircuit fill_gaps_random(const ScheduledCircuit &sc, Rng &rng) {
    ScheduledCircuit out = sc;
    for (const Gap &gap : find_gaps(sc)) {
        const auto seq = random_identity_sequence(gap.length, rng, gap.qubit);
        for (int i = 0; i < gap.length; ++i) {
            out.gates.push_back(PlacedGate{seq[i], gap.start + i});
        }
    }
    out.normalize();
    return out;
}

ScheduledCircuit fill_gaps_xyxy(const ScheduledCircuit &sc) {
    ScheduledCircuit out = sc;
    for (const Gap &gap : find_gaps(sc)) {
        if (gap.length % 4 != 0) continue;
        for (int i = 0; i < gap.length; ++i) {
            Gate g = i % 2 == 0 ? Gate::u3(gap.qubit, kPi, 0.0, kPi) : Gate::u3(gap.qubit, kPi, kPi / 2, kPi / 2);
            g.inserted = true;
            out.gates.push_back(PlacedGate{g, gap.start + i});
        }
    }
    out.normalize();
    return out;
}

bool xyxy_eligible(const ScheduledCircuit &sc) {
    const auto gaps = find_gaps(sc);
    if (gaps.empty()) return false;
    for (const Gap &g : gaps) {
        if (g.length % 4 != 0) return false;
    }
    return true;
}

CandidateSet generate_candidates(const ScheduledCircuit &sc, int m, std::uint64_t seed) {
    if (m < 1) {
        throw std::invalid_argument("generate_candidates: need at least one candidate");
    }
    CandidateSet cs{sc, std::vector<ScheduledCircuit>(static_cast<std::size_t>(m)), seed};
    parallel_for(cs.candidates.size(), [&](std::size_t i) {
        Rng rng(mix_seed(seed, i));
        cs.candidates[i] = fill_gaps_random(sc, rng);
    });
    return cs;
}

TournamentResult run_tournament(std::size_t m, const PairComparator &diff) {
    if (m == 0) {
        throw std::invalid_argument("tournament needs at least one candidate");
    }
    TournamentResult result;
    std::vector<std::size_t> alive(m);
    for (std::size_t i = 0; i < m; ++i) alive[i] = i;
    int round = 0;
    while (alive.size() > 1) {
        // An odd field gives the last entrant a bye; repeated halving is the
        // same as padding to the next power of two with byes at the end.
        std::vector<std::size_t> next;
        next.reserve((alive.size() + 1) / 2);
        for (std::size_t k = 0; k + 1 < alive.size(); k += 2) {
            const std::size_t a = alive[k];
            const std::size_t b = alive[k + 1];
            const double d = diff(a, b);
            std::size_t w;
            if (std::abs(d) < kTieTolerance) {
                w = std::min(a, b);
            } else {
                w = d < 0 ? a : b;
            }
            result.matches.push_back(Match{round, a, b, d, w});
            next.push_back(w);
        }
        if (alive.size() % 2 == 1) next.push_back(alive.back());
        alive = std::move(next);
        ++round;
    }
    result.winner = alive.front();
    result.rounds = round;
    return result;
}

TournamentResult tournament_select(const Network &net, const std::vector<CircuitImage> &images) {
    std::vector<double> scores(images.size());
    parallel_for(images.size(), [&](std::size_t i) { scores[i] = net.forward(images[i]); });
    TournamentResult r = run_tournament(images.size(), [&](std::size_t a, std::size_t b) { return scores[a] - scores[b]; });
    r.scores = std::move(scores);
    return r;
}

TournamentResult tournament_select(const Network &net, const CandidateSet &cs) {
    return tournament_select(net, entrant_images(cs, false, net.dims().width));
}

std::string CompileReport::to_json() const {
    nlohmann::ordered_json j;
    j["gap_count"] = gap_count;
    j["sequence_lengths"] = sequence_lengths;
    j["candidates"] = candidates;
    j["include_base"] = include_base;
    j["seed"] = seed;
    j["rounds"] = rounds;
    j["winner_index"] = winner_index;
    j["winner_is_base"] = winner_is_base;
    j["winner_score"] = winner_score;
    j["base_score"] = base_score;
    j["predicted_improvement"] = base_score - winner_score;
    return j.dump(2) + "\n";
}

std::vector<CircuitImage> entrant_images(const CandidateSet &cs, bool include_base, int width) {
    const std::size_t offset = include_base ? 1 : 0;
    std::vector<CircuitImage> images(cs.candidates.size() + offset);
    parallel_for(images.size(), [&](std::size_t i) { images[i] = encode_image(entrant(cs, include_base, i), width); });
    return images;
}

const ScheduledCircuit &entrant(const CandidateSet &cs, bool include_base, std::size_t index) {
    if (include_base) {
        return index == 0 ? cs.base : cs.candidates.at(index - 1);
    }
    return cs.candidates.at(index);
}

CompileResult compile_scheduled(const ScheduledCircuit &sc, const Network &net, const CompileConfig &cfg) {
    const int width = net.dims().width;
    if (cfg.image_width != width) {
        throw std::invalid_argument("compile: image width " + std::to_string(cfg.image_width) +
                                    " does not match network input width " + std::to_string(width));
    }
    CompileResult result;
    result.base = sc;
    const CircuitImage base_img = encode_image(sc, width);

    const auto gaps = find_gaps(sc);
    result.report.gap_count = static_cast<int>(gaps.size());
    for (const Gap &g : gaps) result.report.sequence_lengths.push_back(g.length);
    result.report.candidates = cfg.candidates;
    result.report.include_base = cfg.include_base;
    result.report.seed = cfg.seed;
    result.report.base_score = net.forward(base_img);

    const CandidateSet cs = generate_candidates(sc, cfg.candidates, cfg.seed);
    const TournamentResult t = tournament_select(net, entrant_images(cs, cfg.include_base, width));
    result.winner = entrant(cs, cfg.include_base, t.winner);
    result.report.winner_index = t.winner;
    result.report.winner_is_base = cfg.include_base && t.winner == 0;
    result.report.winner_score = t.scores[t.winner];
    result.report.rounds = t.rounds;
    return result;
}

CompileResult compile(const Circuit &base, const Network &net, const CouplingMap &map, const CompileConfig &cfg) {
    TranspileResult tr = transpile(base, map);
    CompileResult result = compile_scheduled(tr.scheduled, net, cfg);
    result.final_permutation = tr.final_permutation;
    return result;
}

}  // namespace noiseforge
