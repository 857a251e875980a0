// Copyright 2026 The dglab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DGLAB_FIXTURES_HPP_
#define DGLAB_FIXTURES_HPP_

#include <string>
#include <vector>

#include "dglab/cycle_analysis.hpp"
#include "dglab/game_model.hpp"

namespace dglab::fixtures {

// Four-state chain with N = 3 whose hierarchy has six cycles.
LeadingTermChain six_cycle_chain();
// Five-state chain with N = 4: two transient states, one recurrent and one
// absorbing relevant cycle.
LeadingTermChain five_state_chain();
// Three-state chain whose order-0 part is a 2-periodic swap.
LeadingTermChain periodic_chain();
// Leading terms of Kohlberg's game under optimal play, states
// (1*, k, l, -1*).
LeadingTermChain kohlberg_chain();
// Every state keeps itself with probability 1.
LeadingTermChain self_loop_chain(std::size_t n);

// Kohlberg's game, states (1*, k, l, -1*), actions {T,B} x {L,R}.
GameSpec kohlberg_game();
// Gillette's Big Match, states (k, 0*, 1*), actions {T,B} x {L,R}.
GameSpec big_match_game();
// Absorbing states only, payoffs as given, a single action per player.
GameSpec absorbing_game(const std::vector<double>& payoffs);

// Names accepted by `dglab example`.
std::vector<std::string> names();
// JSON text of the named fixture; throws ValidationError for unknown names.
std::string fixture_json(const std::string& name);

}  // namespace dglab::fixtures

#endif  // DGLAB_FIXTURES_HPP_
