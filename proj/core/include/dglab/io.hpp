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

#ifndef DGLAB_IO_HPP_
#define DGLAB_IO_HPP_

#include <string>
#include <vector>

#include "dglab/cp_verify.hpp"
#include "dglab/cycle_analysis.hpp"
#include "dglab/game_model.hpp"

namespace dglab {

// Parse errors and schema violations raise ValidationError.
GameSpec game_from_json(const std::string& text);
std::string game_to_json(const GameSpec& spec);

// Terms name states by index or by name.
LeadingTermChain chain_from_json(const std::string& text);
std::string chain_to_json(const LeadingTermChain& chain);

std::string solution_to_json(const GameSpec& spec,
                             const std::vector<DiscountedSolution>& sols);
std::string solution_to_csv(const GameSpec& spec,
                            const std::vector<DiscountedSolution>& sols);

// Columns cycle, exit_height, exit_rate, exit_distribution, mixing_height,
// mixing_distribution, class. One row per node, in node order.
std::string cycle_table_csv(const LeadingTermChain& chain,
                            const LimitDecomposition& d);
std::string limit_to_json(const LeadingTermChain& chain,
                          const LimitDecomposition& d,
                          const std::vector<double>& t_grid);

std::string payoff_curve_csv(const std::vector<PayoffCurveRow>& rows);

std::string reports_to_json(const std::vector<CpReport>& reports);

const char* version();

// Shortest decimal form that reads back to the same double.
std::string format_double(double x);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace dglab

#endif  // DGLAB_IO_HPP_
