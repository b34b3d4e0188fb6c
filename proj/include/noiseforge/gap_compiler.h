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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "noiseforge/coupling_map.h"
#include "noiseforge/network.h"
#include "noiseforge/rng.h"
#include "noiseforge/schedule.h"

namespace noiseforge {

/// Fills every gap with random_identity_sequence(gap length), one U3 per idle
/// step, flagged inserted. Non-inserted placements are untouched.
ScheduledCircuit fill_gaps_random(const ScheduledCircuit &sc, Rng &rng);

/// Fills every gap whose length is a multiple of 4 with repeated X, Y, X, Y
/// pulses written as U3(pi, 0, pi) and U3(pi, pi/2, pi/2). Other gaps stay empty.
ScheduledCircuit fill_gaps_xyxy(const ScheduledCircuit &sc);

/// True when the circuit has at least one gap and every gap length is a multiple of 4.
bool xyxy_eligible(const ScheduledCircuit &sc);

struct CandidateSet {
    ScheduledCircuit base;
    std::vector<ScheduledCircuit> candidates;
    std::uint64_t seed = 0;
};

/// m random fills; candidate i uses Rng(mix_seed(seed, i)). The base itself is
/// not a member. Throws std::invalid_argument for m < 1.
CandidateSet generate_candidates(const ScheduledCircuit &sc, int m, std::uint64_t seed);

struct Match {
    int round = 0;
    std::size_t a = 0;
    std::size_t b = 0;
    /// noise(a) - noise(b) as judged by the comparator.
    double diff = 0;
    std::size_t winner = 0;
};

struct TournamentResult {
    std::size_t winner = 0;
    /// Per-candidate scores when ranked with a network, empty otherwise.
    std::vector<double> scores;
    std::vector<Match> matches;
    int rounds = 0;
};

/// diff(a, b) < 0 means a is less noisy.
using PairComparator = std::function<double(std::size_t, std::size_t)>;

inline constexpr double kTieTolerance = 1e-12;

/// Single elimination over candidates 0..m-1 in index order, padded with byes
/// to the next power of two. A match goes to a when diff(a, b) < 0, to b when
/// diff(a, b) > 0, and to the lower index when |diff| < kTieTolerance.
TournamentResult run_tournament(std::size_t m, const PairComparator &diff);

/// Scores every candidate with the network (in parallel), then runs the bracket
/// on score differences.
TournamentResult tournament_select(const Network &net, const std::vector<CircuitImage> &images);
TournamentResult tournament_select(const Network &net, const CandidateSet &cs);

struct CompileConfig {
    int candidates = 1000;
    std::uint64_t seed = 0;
    int image_width = kDefaultImageWidth;
    /// Enter the unfilled base as bracket entrant 0 so the compiler can decline to fill.
    bool include_base = true;
};

struct CompileReport {
    int gap_count = 0;
    std::vector<int> sequence_lengths;
    int candidates = 0;
    bool include_base = true;
    /// Bracket entrant that won; with include_base, 0 is the base and k is candidate k - 1.
    std::size_t winner_index = 0;
    bool winner_is_base = false;
    double winner_score = 0;
    double base_score = 0;
    int rounds = 0;
    std::uint64_t seed = 0;

    std::string to_json() const;
};

struct CompileResult {
    ScheduledCircuit base;
    ScheduledCircuit winner;
    std::vector<int> final_permutation;
    CompileReport report;
};

/// Bracket entrants: the base (when cfg.include_base) followed by the candidates.
std::vector<CircuitImage> entrant_images(const CandidateSet &cs, bool include_base, int width);
const ScheduledCircuit &entrant(const CandidateSet &cs, bool include_base, std::size_t index);

/// Candidate generation and tournament on an already scheduled circuit.
/// Throws EncodingOverflow if the schedule does not fit the image width.
CompileResult compile_scheduled(const ScheduledCircuit &sc, const Network &net, const CompileConfig &cfg);

/// decompose -> route -> merge -> schedule -> candidates -> tournament.
CompileResult compile(const Circuit &base, const Network &net, const CouplingMap &map, const CompileConfig &cfg);

}  // namespace noiseforge
