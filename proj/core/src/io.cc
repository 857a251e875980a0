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

#include "dglab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "dglab/errors.hpp"
#include "json.hpp"

namespace dglab {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError({std::string("malformed JSON: ") + e.what()});
  }
}

std::vector<std::string> string_list(const json& j, const char* key,
                                     std::vector<std::string>* errs) {
  std::vector<std::string> out;
  if (!j.contains(key) || !j[key].is_array()) {
    errs->push_back(std::string("'") + key + "' must be an array of strings");
    return out;
  }
  for (const json& e : j[key]) {
    if (!e.is_string()) {
      errs->push_back(std::string("'") + key + "' must be an array of strings");
      return {};
    }
    out.push_back(e.get<std::string>());
  }
  return out;
}

// Walks a nested array of the given shape and hands each number to `put`.
template <typename Put>
void read_tensor(const json& j, const std::vector<std::size_t>& shape,
                 std::size_t level, const std::string& where,
                 std::vector<std::string>* errs, Put&& put,
                 std::vector<std::size_t>& index) {
  if (level == shape.size()) {
    if (!j.is_number()) {
      errs->push_back(where + " is not a number");
      return;
    }
    put(index, j.get<double>());
    return;
  }
  if (!j.is_array() || j.size() != shape[level]) {
    errs->push_back(where + " must be an array of length " +
                    std::to_string(shape[level]));
    return;
  }
  for (std::size_t i = 0; i < shape[level]; ++i) {
    index[level] = i;
    read_tensor(j[i], shape, level + 1, where + "[" + std::to_string(i) + "]",
                errs, put, index);
  }
}

json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

json vec(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

json mat(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec(m.row(i).transpose()));
  return a;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string tuple(const Vector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += format_double(v(i));
  }
  return s + ")";
}

std::string cycle_label(const LeadingTermChain& chain, const CycleNode& n) {
  std::string s = "{";
  for (std::size_t i = 0; i < n.members.size(); ++i) {
    if (i) s += ",";
    s += chain.states[n.members[i]];
  }
  return s + "}";
}

const char* kHeader = "# dglab " DGLAB_VERSION_STRING;

}  // namespace

const char* version() { return DGLAB_VERSION_STRING; }

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

GameSpec game_from_json(const std::string& text) {
  json j = parse(text);
  std::vector<std::string> errs;
  if (!j.is_object()) throw ValidationError({"game file must be a JSON object"});
  auto states = string_list(j, "states", &errs);
  auto a1 = string_list(j, "actions1", &errs);
  auto a2 = string_list(j, "actions2", &errs);
  if (!errs.empty()) throw ValidationError(errs);
  GameSpec spec(states, a1, a2);
  const std::size_t K = states.size(), m = a1.size(), n = a2.size();
  std::vector<std::size_t> idx(4, 0);
  if (!j.contains("payoff")) {
    errs.push_back("'payoff' missing");
  } else {
    read_tensor(j["payoff"], {K, m, n}, 0, "payoff", &errs,
                [&](const std::vector<std::size_t>& i, double x) {
                  spec.g(i[0], i[1], i[2]) = x;
                },
                idx);
  }
  if (!j.contains("transition")) {
    errs.push_back("'transition' missing");
  } else {
    read_tensor(j["transition"], {K, m, n, K}, 0, "transition", &errs,
                [&](const std::vector<std::size_t>& i, double x) {
                  spec.q(i[0], i[1], i[2], i[3]) = x;
                },
                idx);
  }
  if (!errs.empty()) throw ValidationError(errs);
  auto v = validate_game(spec);
  if (!v.empty()) throw ValidationError(v);
  return spec;
}

std::string game_to_json(const GameSpec& spec) {
  const std::size_t K = spec.num_states(), m = spec.num_actions1(),
                    n = spec.num_actions2();
  ordered_json j;
  j["states"] = spec.states;
  j["actions1"] = spec.actions1;
  j["actions2"] = spec.actions2;
  ordered_json g = ordered_json::array(), q = ordered_json::array();
  for (std::size_t k = 0; k < K; ++k) {
    ordered_json gk = ordered_json::array(), qk = ordered_json::array();
    for (std::size_t i = 0; i < m; ++i) {
      ordered_json gi = ordered_json::array(), qi = ordered_json::array();
      for (std::size_t jj = 0; jj < n; ++jj) {
        gi.push_back(spec.g(k, i, jj));
        ordered_json row = ordered_json::array();
        for (std::size_t to = 0; to < K; ++to) row.push_back(spec.q(k, i, jj, to));
        qi.push_back(row);
      }
      gk.push_back(gi);
      qk.push_back(qi);
    }
    g.push_back(gk);
    q.push_back(qk);
  }
  j["payoff"] = g;
  j["transition"] = q;
  return j.dump(2) + "\n";
}

LeadingTermChain chain_from_json(const std::string& text) {
  json j = parse(text);
  std::vector<std::string> errs;
  if (!j.is_object()) throw ValidationError({"chain file must be a JSON object"});
  LeadingTermChain c;
  c.states = string_list(j, "states", &errs);
  if (!j.contains("denominator") || !j["denominator"].is_number_integer()) {
    errs.push_back("'denominator' must be an integer");
  } else {
    c.denominator = j["denominator"].get<std::int64_t>();
    if (c.denominator <= 0) errs.push_back("'denominator' must be positive");
  }
  if (!j.contains("terms") || !j["terms"].is_array()) {
    errs.push_back("'terms' must be an array");
  }
  if (!errs.empty()) throw ValidationError(errs);

  auto state_ref = [&](const json& e, const std::string& where) -> std::size_t {
    if (e.is_number_unsigned()) {
      auto k = e.get<std::size_t>();
      if (k < c.states.size()) return k;
    } else if (e.is_string()) {
      for (std::size_t k = 0; k < c.states.size(); ++k) {
        if (c.states[k] == e.get<std::string>()) return k;
      }
    }
    errs.push_back(where + " refers to an unknown state");
    return 0;
  };
  std::size_t i = 0;
  for (const json& t : j["terms"]) {
    std::string where = "terms[" + std::to_string(i++) + "]";
    if (!t.is_object() || !t.contains("from") || !t.contains("to") ||
        !t.contains("coeff") || !t.contains("exp_num")) {
      errs.push_back(where + " needs from, to, coeff, exp_num");
      continue;
    }
    ChainTerm term;
    term.from = state_ref(t["from"], where + ".from");
    term.to = state_ref(t["to"], where + ".to");
    if (!t["coeff"].is_number()) {
      errs.push_back(where + ".coeff is not a number");
      continue;
    }
    term.coeff = t["coeff"].get<double>();
    if (!t["exp_num"].is_number_integer()) {
      errs.push_back(where + ".exp_num must be an integer");
      continue;
    }
    if (c.denominator > 0) {
      term.exponent = Rational(t["exp_num"].get<std::int64_t>(), c.denominator);
    }
    c.terms.push_back(term);
  }
  if (!errs.empty()) throw ValidationError(errs);
  auto v = validate_chain(c);
  if (!v.empty()) throw ValidationError(v);
  return c;
}

std::string chain_to_json(const LeadingTermChain& chain) {
  ordered_json j;
  j["states"] = chain.states;
  j["denominator"] = chain.denominator;
  ordered_json terms = ordered_json::array();
  for (const ChainTerm& t : chain.terms) {
    ordered_json e;
    e["from"] = t.from;
    e["to"] = t.to;
    e["coeff"] = t.coeff;
    e["exp_num"] = t.exponent.numerator_over(chain.denominator);
    terms.push_back(e);
  }
  j["terms"] = terms;
  return j.dump(2) + "\n";
}

std::string solution_to_json(const GameSpec& spec,
                             const std::vector<DiscountedSolution>& sols) {
  json out = json::array();
  for (const DiscountedSolution& s : sols) {
    json e;
    e["lambda"] = s.lambda;
    e["residual"] = number(s.residual);
    e["iterations"] = s.iterations;
    json v, x1, x2;
    for (std::size_t k = 0; k < spec.num_states(); ++k) {
      v[spec.states[k]] = number(s.values(static_cast<Eigen::Index>(k)));
      json a, b;
      for (std::size_t i = 0; i < spec.num_actions1(); ++i) {
        a[spec.actions1[i]] = number(s.profile.x1[k](static_cast<Eigen::Index>(i)));
      }
      for (std::size_t i = 0; i < spec.num_actions2(); ++i) {
        b[spec.actions2[i]] = number(s.profile.x2[k](static_cast<Eigen::Index>(i)));
      }
      x1[spec.states[k]] = a;
      x2[spec.states[k]] = b;
    }
    e["values"] = v;
    e["x1"] = x1;
    e["x2"] = x2;
    out.push_back(e);
  }
  return out.dump(2) + "\n";
}

std::string solution_to_csv(const GameSpec& spec,
                            const std::vector<DiscountedSolution>& sols) {
  std::ostringstream os;
  os << kHeader << "\n";
  os << "lambda";
  for (const auto& s : spec.states) os << "," << csv_field("v[" + s + "]");
  for (const auto& s : spec.states) {
    for (const auto& a : spec.actions1) os << "," << csv_field("x1[" + s + "][" + a + "]");
    for (const auto& a : spec.actions2) os << "," << csv_field("x2[" + s + "][" + a + "]");
  }
  os << ",residual,iterations\n";
  for (const DiscountedSolution& sol : sols) {
    os << format_double(sol.lambda);
    for (Eigen::Index k = 0; k < sol.values.size(); ++k) os << "," << format_double(sol.values(k));
    for (std::size_t k = 0; k < spec.num_states(); ++k) {
      for (Eigen::Index i = 0; i < sol.profile.x1[k].size(); ++i) {
        os << "," << format_double(sol.profile.x1[k](i));
      }
      for (Eigen::Index i = 0; i < sol.profile.x2[k].size(); ++i) {
        os << "," << format_double(sol.profile.x2[k](i));
      }
    }
    os << "," << format_double(sol.residual) << "," << sol.iterations << "\n";
  }
  return os.str();
}

std::string cycle_table_csv(const LeadingTermChain& chain,
                            const LimitDecomposition& d) {
  const CycleForest& f = d.tree;
  std::set<std::size_t> aggregates;
  for (std::size_t s : d.transient) {
    std::size_t top = s;
    for (std::size_t id : f.path_to_root(s)) {
      if (f.nodes[id].exit_height < d.threshold) top = id;
    }
    aggregates.insert(top);
  }
  std::ostringstream os;
  os << kHeader << " N=" << chain.denominator << "\n";
  os << "cycle,exit_height,exit_rate,exit_distribution,mixing_height,"
        "mixing_distribution,class\n";
  for (std::size_t id = 0; id < f.nodes.size(); ++id) {
    const CycleNode& n = f.nodes[id];
    std::string cls;
    for (std::size_t l = 0; l < d.relevant.size(); ++l) {
      if (d.relevant[l] == id) cls = to_string(d.classes[l]);
    }
    if (aggregates.count(id)) cls = "TR";
    os << csv_field(cycle_label(chain, n)) << "," << n.exit_height.str() << ","
       << (std::isnan(n.exit_rate) ? "" : format_double(n.exit_rate)) << ","
       << (n.exit_distribution ? csv_field(tuple(*n.exit_distribution)) : "") << ","
       << (n.mixing_height ? n.mixing_height->str() : "") << ","
       << (n.mixing_distribution ? csv_field(tuple(*n.mixing_distribution)) : "")
       << "," << cls << "\n";
  }
  return os.str();
}

std::string limit_to_json(const LeadingTermChain& chain,
                          const LimitDecomposition& d,
                          const std::vector<double>& t_grid) {
  json j;
  j["states"] = chain.states;
  j["denominator"] = chain.denominator;
  j["threshold"] = d.threshold.str();
  json cycles = json::array();
  for (std::size_t l = 0; l < d.relevant.size(); ++l) {
    const CycleNode& n = d.tree.nodes[d.relevant[l]];
    json c;
    c["cycle"] = cycle_label(chain, n);
    c["class"] = to_string(d.classes[l]);
    c["exit_height"] = n.exit_height.str();
    c["exit_rate"] = number(n.exit_rate);
    cycles.push_back(c);
  }
  j["relevant"] = cycles;
  json tr = json::array();
  for (std::size_t s : d.transient) tr.push_back(chain.states[s]);
  j["transient"] = tr;
  j["entrance_law"] = mat(d.entrance_law);
  j["generator"] = mat(d.generator);
  j["mixing_matrix"] = mat(d.mixing_matrix);
  j["limit_occupation"] = mat(limit_occupation(d));
  json pos = json::array();
  for (double t : t_grid) {
    if (t >= 1.0) continue;
    json p;
    p["t"] = t;
    p["matrix"] = mat(position_matrix(d, t).matrix);
    pos.push_back(p);
  }
  j["position"] = pos;
  return j.dump(2) + "\n";
}

std::string payoff_curve_csv(const std::vector<PayoffCurveRow>& rows) {
  std::ostringstream os;
  os << kHeader << "\n";
  os << "t,gamma,t_times_vstar,abs_gap\n";
  for (const PayoffCurveRow& r : rows) {
    os << format_double(r.t) << "," << format_double(r.gamma) << ","
       << format_double(r.t_times_vstar) << "," << format_double(r.abs_gap) << "\n";
  }
  return os.str();
}

std::string reports_to_json(const std::vector<CpReport>& reports) {
  json out = json::array();
  for (const CpReport& r : reports) {
    json e;
    e["check"] = r.check;
    json res = json::object();
    for (const auto& [k, v] : r.residuals) res[k] = number(v);
    e["residuals"] = res;
    e["tolerance"] = number(r.tolerance);
    e["pass"] = r.pass;
    json in = json::object();
    for (const auto& [k, v] : r.inputs) {
      json a = json::array();
      for (double x : v) a.push_back(number(x));
      in[k] = a;
    }
    e["inputs"] = in;
    if (!r.note.empty()) e["note"] = r.note;
    out.push_back(e);
  }
  return out.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError({"cannot read '" + path + "'"});
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError({"cannot write '" + path + "'"});
  out << content;
}

}  // namespace dglab
