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

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "dglab/cycle_analysis.hpp"
#include "dglab/errors.hpp"

namespace dglab {

bool CycleNode::contains(std::size_t state) const {
  return std::binary_search(members.begin(), members.end(), state);
}

std::vector<std::size_t> CycleForest::path_to_root(std::size_t state) const {
  std::vector<std::size_t> path{state};
  while (nodes[path.back()].parent) path.push_back(*nodes[path.back()].parent);
  return path;
}

namespace {

class TreeBuilder {
 public:
  explicit TreeBuilder(const LeadingTermChain& chain)
      : chain_(chain), K_(chain.num_states()) {
    exits_.resize(K_);
    for (std::size_t k = 0; k < K_; ++k) exits_[k] = chain.exits(k);
    forest_.num_states = K_;
    owner_.resize(K_);
    for (std::size_t k = 0; k < K_; ++k) {
      CycleNode n;
      n.members = {k};
      n.graded = {GradedOccupation{k, 1.0, Rational(0)}};
      set_exit(&n);
      forest_.nodes.push_back(std::move(n));
      owner_[k] = k;
      top_.push_back(k);
    }
  }

  CycleForest build() {
    std::optional<Rational> last;
    for (;;) {
      std::optional<Rational> h;
      for (std::size_t x : top_) {
        const Rational& e = forest_.nodes[x].exit_height;
        if (e.is_infinite() || (last && !(e > *last))) continue;
        if (!h || e < *h) h = e;
      }
      if (!h) break;
      merge_level(*h);
      last = h;
    }
    forest_.roots = top_;
    return std::move(forest_);
  }

 private:
  // Exit height, rate, distribution and sojourn from the graded occupation.
  void set_exit(CycleNode* n) const {
    std::optional<Rational> best;
    double rate = 0.0;
    Vector p = Vector::Zero(static_cast<Eigen::Index>(K_));
    for (const GradedOccupation& g : n->graded) {
      for (const ChainTerm& t : exits_[g.state]) {
        if (n->contains(t.to)) continue;
        Rational eff = g.depth + t.exponent;
        if (!best || eff < *best) {
          best = eff;
          rate = 0.0;
          p.setZero();
        }
        if (eff == *best) {
          rate += g.mass * t.coeff;
          p(static_cast<Eigen::Index>(t.to)) += g.mass * t.coeff;
        }
      }
    }
    if (!best) {
      n->exit_height = Rational::infinity();
      n->exit_rate = std::numeric_limits<double>::quiet_NaN();
      n->exit_distribution.reset();
      n->sojourn = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    n->exit_height = *best;
    n->exit_distribution = p / rate;
    n->sojourn = 1.0 / rate;
    if (n->singleton() && *best == Rational(0)) {
      // Geometric holding time: P(stay >= a) = q0^a, so r = -ln q0.
      double q0 = chain_.self_loop(n->members[0]);
      n->exit_rate = q0 > 0.0 ? -std::log(q0) : std::numeric_limits<double>::infinity();
    } else {
      n->exit_rate = rate;
    }
  }

  void merge_level(const Rational& h) {
    // Jump graph among current top-level cycles; only cycles with E <= h
    // have outgoing edges.
    std::map<std::size_t, std::size_t> pos;  // node -> index in top_
    for (std::size_t i = 0; i < top_.size(); ++i) pos[top_[i]] = i;
    const std::size_t T = top_.size();
    std::vector<std::vector<std::size_t>> succ(T);
    std::vector<bool> active(T, false);
    for (std::size_t i = 0; i < T; ++i) {
      const CycleNode& n = forest_.nodes[top_[i]];
      if (n.exit_height.is_infinite() || n.exit_height > h) continue;
      active[i] = true;
      for (Eigen::Index k = 0; k < n.exit_distribution->size(); ++k) {
        if ((*n.exit_distribution)(k) > 0.0) {
          succ[i].push_back(pos[owner_[static_cast<std::size_t>(k)]]);
        }
      }
      std::sort(succ[i].begin(), succ[i].end());
      succ[i].erase(std::unique(succ[i].begin(), succ[i].end()), succ[i].end());
    }
    std::vector<std::vector<std::size_t>> classes = closed_classes(succ, active);
    std::vector<std::vector<std::size_t>> groups;
    for (auto& cls : classes) {
      std::vector<std::size_t> nodes;
      for (std::size_t i : cls) nodes.push_back(top_[i]);
      std::sort(nodes.begin(), nodes.end(), [&](std::size_t a, std::size_t b) {
        return forest_.nodes[a].members.front() < forest_.nodes[b].members.front();
      });
      groups.push_back(std::move(nodes));
    }
    std::sort(groups.begin(), groups.end(), [&](const auto& a, const auto& b) {
      return forest_.nodes[a.front()].members.front() <
             forest_.nodes[b.front()].members.front();
    });
    for (const auto& g : groups) merge(g, h);
  }

  // Closed strongly connected components of size >= 2 made of active
  // vertices (Tarjan).
  static std::vector<std::vector<std::size_t>> closed_classes(
      const std::vector<std::vector<std::size_t>>& succ,
      const std::vector<bool>& active) {
    const std::size_t n = succ.size();
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> comps;
    int counter = 0;
    std::function<void(std::size_t)> visit = [&](std::size_t v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack[v] = true;
      for (std::size_t w : succ[v]) {
        if (index[w] < 0) {
          visit(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> c;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = static_cast<int>(comps.size());
          c.push_back(w);
        } while (w != v);
        comps.push_back(std::move(c));
      }
    };
    for (std::size_t v = 0; v < n; ++v) {
      if (index[v] < 0) visit(v);
    }
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      const auto& members = comps[c];
      if (members.size() < 2) continue;
      bool closed = true;
      for (std::size_t v : members) {
        if (!active[v]) closed = false;
        for (std::size_t w : succ[v]) {
          if (comp[w] != static_cast<int>(c)) closed = false;
        }
      }
      if (closed) out.push_back(members);
    }
    return out;
  }

  void merge(const std::vector<std::size_t>& group, const Rational& h) {
    const std::size_t n = group.size();
    std::map<std::size_t, std::size_t> slot;
    for (std::size_t a = 0; a < n; ++a) slot[group[a]] = a;
    Matrix jump = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a) {
      const Vector& p = *forest_.nodes[group[a]].exit_distribution;
      for (Eigen::Index k = 0; k < p.size(); ++k) {
        if (p(k) > 0.0) jump(a, slot.at(owner_[static_cast<std::size_t>(k)])) += p(k);
      }
    }
    Vector pi = stationary_distribution(jump);

    // Time share of each sub-cycle: visits x sojourn per visit. Sub-cycles
    // exiting below h are visited just as often but stay lambda^{h-E} less.
    double z = 0.0;
    std::vector<double> w(n);
    for (std::size_t a = 0; a < n; ++a) {
      const CycleNode& x = forest_.nodes[group[a]];
      w[a] = pi(static_cast<Eigen::Index>(a)) * x.sojourn;
      if (x.exit_height == h) z += w[a];
    }
    if (!(z > 0.0)) throw NumericError("build_cycle_tree: empty mixing support");

    CycleNode c;
    for (std::size_t a = 0; a < n; ++a) {
      const CycleNode& x = forest_.nodes[group[a]];
      Rational shift = h - x.exit_height;
      for (const GradedOccupation& g : x.graded) {
        c.graded.push_back(GradedOccupation{g.state, w[a] * g.mass / z, g.depth + shift});
        c.members.push_back(g.state);
      }
      c.children.push_back(group[a]);
    }
    std::sort(c.members.begin(), c.members.end());
    std::sort(c.graded.begin(), c.graded.end(),
              [](const auto& a, const auto& b) { return a.state < b.state; });
    Vector mu = Vector::Zero(static_cast<Eigen::Index>(K_));
    for (const GradedOccupation& g : c.graded) {
      if (g.depth == Rational(0)) mu(static_cast<Eigen::Index>(g.state)) = g.mass;
    }
    c.mixing_height = h;
    c.mixing_distribution = mu / mu.sum();
    c.period = h == Rational(0) ? period_of(c.members) : 1;
    set_exit(&c);
    if (!(c.exit_height > h)) {
      std::ostringstream os;
      os << "build_cycle_tree: malformed chain, merged cycle exits at "
         << c.exit_height.str() << " <= mixing height " << h.str();
      throw NumericError(os.str());
    }

    const std::size_t id = forest_.nodes.size();
    for (std::size_t child : c.children) forest_.nodes[child].parent = id;
    for (std::size_t s : c.members) owner_[s] = id;
    forest_.nodes.push_back(std::move(c));
    std::vector<std::size_t> next;
    for (std::size_t x : top_) {
      if (!slot.count(x)) next.push_back(x);
    }
    next.push_back(id);
    top_ = std::move(next);
  }

  // gcd of cycle lengths of the order-0 transition graph inside `members`.
  int period_of(const std::vector<std::size_t>& members) const {
    std::map<std::size_t, int> level;
    std::vector<std::size_t> queue{members.front()};
    level[members.front()] = 0;
    auto inside = [&](std::size_t s) {
      return std::binary_search(members.begin(), members.end(), s);
    };
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      std::size_t u = queue[qi];
      for (const ChainTerm& t : exits_[u]) {
        if (!(t.exponent == Rational(0)) || !inside(t.to) || level.count(t.to)) continue;
        level[t.to] = level[u] + 1;
        queue.push_back(t.to);
      }
    }
    int g = 0;
    for (std::size_t u : members) {
      if (chain_.self_loop(u) > 0.0) return 1;
      for (const ChainTerm& t : exits_[u]) {
        if (!(t.exponent == Rational(0)) || !inside(t.to)) continue;
        g = std::gcd(g, std::abs(level[u] + 1 - level[t.to]));
      }
    }
    return g == 0 ? 1 : g;
  }

  const LeadingTermChain& chain_;
  std::size_t K_;
  std::vector<std::vector<ChainTerm>> exits_;
  CycleForest forest_;
  std::vector<std::size_t> owner_;
  std::vector<std::size_t> top_;
};

}  // namespace

CycleForest build_cycle_tree(const LeadingTermChain& chain) {
  require_valid_chain(chain);
  return TreeBuilder(chain).build();
}

}  // namespace dglab
