#include "rmsolve/efg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace rmsolve {

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw std::invalid_argument("malformed game tree: " + what);
}

int player_index(Player p) { return p == Player::X ? 0 : 1; }

}  // namespace

GameTree::GameTree(std::vector<TreeNode> nodes, std::vector<std::string> x_labels,
                   std::vector<std::string> y_labels) {
  const int n = static_cast<int>(nodes.size());
  if (n == 0) malformed("no nodes");

  std::vector<int> parents(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const TreeNode& nd = nodes[static_cast<std::size_t>(i)];
    switch (nd.kind) {
      case NodeKind::Terminal:
        if (!nd.children.empty()) malformed("terminal node " + std::to_string(i) + " has children");
        if (!std::isfinite(nd.payoff)) malformed("non-finite payoff at node " + std::to_string(i));
        break;
      case NodeKind::Chance: {
        if (nd.children.empty()) malformed("chance node " + std::to_string(i) + " has no children");
        if (nd.probs.size() != nd.children.size()) {
          malformed("chance node " + std::to_string(i) + " needs one probability per child");
        }
        double total = 0.0;
        for (double p : nd.probs) {
          if (!std::isfinite(p) || p < 0.0) malformed("bad probability at node " + std::to_string(i));
          total += p;
        }
        if (std::abs(total - 1.0) > 1e-9) {
          malformed("chance probabilities at node " + std::to_string(i) + " do not sum to 1");
        }
        break;
      }
      case NodeKind::Decision: {
        if (nd.children.empty()) malformed("decision node " + std::to_string(i) + " has no actions");
        const auto& labels = nd.owner == Player::X ? x_labels : y_labels;
        if (nd.infoset < 0 || nd.infoset >= static_cast<int>(labels.size())) {
          malformed("decision node " + std::to_string(i) + " has an unknown infoset");
        }
        break;
      }
    }
    for (int c : nd.children) {
      if (c <= 0 || c >= n) malformed("node " + std::to_string(i) + " has an invalid child");
      if (parents[static_cast<std::size_t>(c)] != -1) {
        malformed("node " + std::to_string(c) + " has more than one parent");
      }
      parents[static_cast<std::size_t>(c)] = i;
    }
  }

  // Preorder relabelling; also catches unreachable nodes.
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    const auto& ch = nodes[static_cast<std::size_t>(v)].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  if (static_cast<int>(order.size()) != n) malformed("some nodes are unreachable from the root");
  std::vector<int> new_index(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) new_index[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = k;
  nodes_.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    TreeNode nd = std::move(nodes[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])]);
    for (int& c : nd.children) c = new_index[static_cast<std::size_t>(c)];
    nodes_[static_cast<std::size_t>(k)] = std::move(nd);
  }

  for (Player p : {Player::X, Player::Y}) {
    const auto& labels = p == Player::X ? x_labels : y_labels;
    auto& sets = p == Player::X ? x_sets_ : y_sets_;
    sets.resize(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      sets[i].owner = p;
      sets[i].label = labels[i];
    }
  }

  // Walk down carrying each player's last own (infoset, action).
  struct Frame {
    int node;
    int last[2][2];
  };
  std::vector<bool> seen_x(x_sets_.size(), false), seen_y(y_sets_.size(), false);
  std::vector<Frame> frames{{0, {{-1, -1}, {-1, -1}}}};
  while (!frames.empty()) {
    Frame f = frames.back();
    frames.pop_back();
    const TreeNode& nd = nodes_[static_cast<std::size_t>(f.node)];
    if (nd.kind == NodeKind::Decision) {
      const int pi = player_index(nd.owner);
      auto& sets = nd.owner == Player::X ? x_sets_ : y_sets_;
      auto& seen = nd.owner == Player::X ? seen_x : seen_y;
      Infoset& I = sets[static_cast<std::size_t>(nd.infoset)];
      if (!seen[static_cast<std::size_t>(nd.infoset)]) {
        seen[static_cast<std::size_t>(nd.infoset)] = true;
        I.actions = nd.children.size();
        I.parent = f.last[pi][0];
        I.parent_action = f.last[pi][1];
        I.depth = I.parent < 0 ? 0 : sets[static_cast<std::size_t>(I.parent)].depth + 1;
      } else {
        if (I.actions != nd.children.size()) {
          malformed("infoset " + I.label + " has nodes with different action counts");
        }
        if (I.parent != f.last[pi][0] || I.parent_action != f.last[pi][1]) {
          malformed("infoset " + I.label + " violates perfect recall");
        }
      }
      I.nodes.push_back(f.node);
      for (std::size_t a = 0; a < nd.children.size(); ++a) {
        Frame g = f;
        g.node = nd.children[a];
        g.last[pi][0] = nd.infoset;
        g.last[pi][1] = static_cast<int>(a);
        frames.push_back(g);
      }
    } else {
      for (int c : nd.children) {
        Frame g = f;
        g.node = c;
        frames.push_back(g);
      }
    }
  }
  for (std::size_t i = 0; i < x_sets_.size(); ++i) {
    if (!seen_x[i]) malformed("infoset " + x_sets_[i].label + " has no nodes");
  }
  for (std::size_t i = 0; i < y_sets_.size(); ++i) {
    if (!seen_y[i]) malformed("infoset " + y_sets_[i].label + " has no nodes");
  }
  for (Player p : {Player::X, Player::Y}) {
    auto& sets = p == Player::X ? x_sets_ : y_sets_;
    for (auto& I : sets) std::sort(I.nodes.begin(), I.nodes.end());
    auto& order_out = p == Player::X ? x_order_ : y_order_;
    order_out.resize(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) order_out[i] = static_cast<int>(i);
    std::stable_sort(order_out.begin(), order_out.end(), [&](int a, int b) {
      return sets[static_cast<std::size_t>(a)].depth > sets[static_cast<std::size_t>(b)].depth;
    });
  }
}

std::size_t GameTree::sequence_count(Player p) const {
  std::size_t total = 1;
  for (const auto& I : infosets(p)) total += I.actions;
  return total;
}

BehavioralStrategy GameTree::uniform_strategy(Player p) const {
  BehavioralStrategy s;
  for (const auto& I : infosets(p)) s.push_back(rmsolve::uniform_strategy(I.actions));
  return s;
}

BehavioralProfile GameTree::uniform_profile() const {
  return {uniform_strategy(Player::X), uniform_strategy(Player::Y)};
}

bool GameTree::valid_strategy(Player p, const BehavioralStrategy& s, double tol) const {
  const auto& sets = infosets(p);
  if (s.size() != sets.size()) return false;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (s[i].size() != sets[i].actions || !is_simplex(s[i], tol)) return false;
  }
  return true;
}

namespace {

/// Small helper for the builders: nodes are appended in preorder.
class TreeBuilder {
 public:
  int terminal(double payoff) {
    TreeNode n;
    n.kind = NodeKind::Terminal;
    n.payoff = payoff;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }
  int chance() {
    TreeNode n;
    n.kind = NodeKind::Chance;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }
  int decision(Player p, const std::string& label) {
    auto& ids = p == Player::X ? x_ids_ : y_ids_;
    auto& labels = p == Player::X ? x_labels_ : y_labels_;
    auto it = ids.find(label);
    if (it == ids.end()) {
      it = ids.emplace(label, static_cast<int>(labels.size())).first;
      labels.push_back(label);
    }
    TreeNode n;
    n.kind = NodeKind::Decision;
    n.owner = p;
    n.infoset = it->second;
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }
  void link(int parent, int child, double prob = 0.0) {
    auto& p = nodes_[static_cast<std::size_t>(parent)];
    p.children.push_back(child);
    if (p.kind == NodeKind::Chance) p.probs.push_back(prob);
  }
  GameTree build() { return GameTree(std::move(nodes_), x_labels_, y_labels_); }

 private:
  std::vector<TreeNode> nodes_;
  std::map<std::string, int> x_ids_, y_ids_;
  std::vector<std::string> x_labels_, y_labels_;
};

}  // namespace

GameTree build_kuhn_poker() {
  static const char* kCard[] = {"J", "Q", "K"};
  TreeBuilder b;
  const int root = b.chance();
  for (int cx = 0; cx < 3; ++cx) {
    for (int cy = 0; cy < 3; ++cy) {
      if (cx == cy) continue;
      const double win = cx > cy ? 1.0 : -1.0;
      const std::string xc = kCard[cx];
      const std::string yc = kCard[cy];

      const int open = b.decision(Player::X, "X:" + xc);
      b.link(root, open, 1.0 / 6.0);

      // X checks.
      const int after_check = b.decision(Player::Y, "Y:" + yc + "/c");
      b.link(open, after_check);
      b.link(after_check, b.terminal(win));
      const int facing = b.decision(Player::X, "X:" + xc + "/cb");
      b.link(after_check, facing);
      b.link(facing, b.terminal(-1.0));
      b.link(facing, b.terminal(2.0 * win));

      // X bets.
      const int after_bet = b.decision(Player::Y, "Y:" + yc + "/b");
      b.link(open, after_bet);
      b.link(after_bet, b.terminal(1.0));
      b.link(after_bet, b.terminal(2.0 * win));
    }
  }
  return b.build();
}

namespace {

/// Adds the subtree starting with X's bid in `round` and returns its root.
int goofspiel_round(TreeBuilder& b, int round, unsigned x_hand, unsigned y_hand,
                    const std::string& x_seen, const std::string& y_seen, double diff) {
  const double prize = static_cast<double>(round + 1);
  const int xnode = b.decision(Player::X, "X:" + x_seen);
  for (int xb = 1; xb <= 3; ++xb) {
    if (!(x_hand & (1u << xb))) continue;
    const int ynode = b.decision(Player::Y, "Y:" + y_seen);
    b.link(xnode, ynode);
    for (int yb = 1; yb <= 3; ++yb) {
      if (!(y_hand & (1u << yb))) continue;
      const char xr = xb > yb ? 'W' : (xb < yb ? 'L' : 'D');
      const char yr = xb > yb ? 'L' : (xb < yb ? 'W' : 'D');
      const double next = diff + (xb > yb ? prize : (xb < yb ? -prize : 0.0));
      if (round == 2) {
        b.link(ynode, b.terminal(next));
      } else {
        b.link(ynode, goofspiel_round(b, round + 1, x_hand & ~(1u << xb), y_hand & ~(1u << yb),
                                      x_seen + std::to_string(xb) + xr,
                                      y_seen + std::to_string(yb) + yr, next));
      }
    }
  }
  return xnode;
}

}  // namespace

GameTree build_goofspiel3() {
  TreeBuilder b;
  goofspiel_round(b, 0, 0b1110u, 0b1110u, "", "", 0.0);
  return b.build();
}

double expected_value(const GameTree& tree, const BehavioralProfile& profile) {
  const auto& nodes = tree.nodes();
  std::vector<double> reach(nodes.size(), 0.0);
  reach[0] = 1.0;
  double value = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TreeNode& nd = nodes[i];
    if (nd.kind == NodeKind::Terminal) {
      value += reach[i] * nd.payoff;
      continue;
    }
    for (std::size_t a = 0; a < nd.children.size(); ++a) {
      double w;
      if (nd.kind == NodeKind::Chance) {
        w = nd.probs[a];
      } else {
        w = profile.of(nd.owner)[static_cast<std::size_t>(nd.infoset)][a];
      }
      reach[static_cast<std::size_t>(nd.children[a])] = reach[i] * w;
    }
  }
  return value;
}

namespace {

/// Reach of chance and the opponent of `player` (the player's own actions
/// count as 1).
std::vector<double> external_reach(const GameTree& tree, Player player,
                                   const BehavioralStrategy& opponent) {
  const auto& nodes = tree.nodes();
  std::vector<double> reach(nodes.size(), 0.0);
  reach[0] = 1.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TreeNode& nd = nodes[i];
    for (std::size_t a = 0; a < nd.children.size(); ++a) {
      double w = 1.0;
      if (nd.kind == NodeKind::Chance) {
        w = nd.probs[a];
      } else if (nd.owner != player) {
        w = opponent[static_cast<std::size_t>(nd.infoset)][a];
      }
      reach[static_cast<std::size_t>(nd.children[a])] = reach[i] * w;
    }
  }
  return reach;
}

void check_strategy(const GameTree& tree, Player p, const BehavioralStrategy& s) {
  if (!tree.valid_strategy(p, s, 1e-6)) {
    throw std::invalid_argument("behavioral strategy does not match the tree");
  }
}

}  // namespace

TreeBestResponse efg_best_response(const GameTree& tree, Player player,
                                   const BehavioralStrategy& opponent) {
  const Player opp = player == Player::X ? Player::Y : Player::X;
  check_strategy(tree, opp, opponent);
  const auto& nodes = tree.nodes();
  const auto& sets = tree.infosets(player);
  const std::vector<double> reach = external_reach(tree, player, opponent);
  const double sign = player == Player::X ? 1.0 : -1.0;

  std::vector<int> choice(sets.size(), -1);
  std::vector<double> memo(nodes.size(), 0.0);
  std::vector<char> done(nodes.size(), 0);
  // Values below an infoset only involve deeper own infosets, which are
  // decided before it, so memoized values never go stale.
  std::function<double(int)> value = [&](int v) -> double {
    const auto vi = static_cast<std::size_t>(v);
    if (done[vi]) return memo[vi];
    const TreeNode& nd = nodes[vi];
    double out = 0.0;
    switch (nd.kind) {
      case NodeKind::Terminal: out = nd.payoff; break;
      case NodeKind::Chance:
        for (std::size_t a = 0; a < nd.children.size(); ++a) out += nd.probs[a] * value(nd.children[a]);
        break;
      case NodeKind::Decision:
        if (nd.owner == player) {
          const int c = choice[static_cast<std::size_t>(nd.infoset)];
          if (c < 0) throw std::logic_error("best response: infoset visited before it was decided");
          out = value(nd.children[static_cast<std::size_t>(c)]);
        } else {
          const auto& s = opponent[static_cast<std::size_t>(nd.infoset)];
          for (std::size_t a = 0; a < nd.children.size(); ++a) out += s[a] * value(nd.children[a]);
        }
        break;
    }
    memo[vi] = out;
    done[vi] = 1;
    return out;
  };

  TreeBestResponse br;
  br.strategy.resize(sets.size());
  for (int I : tree.bottom_up(player)) {
    const Infoset& info = sets[static_cast<std::size_t>(I)];
    std::vector<double> q(info.actions, 0.0);
    for (int h : info.nodes) {
      const TreeNode& nd = nodes[static_cast<std::size_t>(h)];
      const double w = reach[static_cast<std::size_t>(h)];
      for (std::size_t a = 0; a < info.actions; ++a) q[a] += w * sign * value(nd.children[a]);
    }
    std::size_t best = 0;
    for (std::size_t a = 1; a < q.size(); ++a) {
      if (q[a] > q[best] + 1e-12) best = a;
    }
    choice[static_cast<std::size_t>(I)] = static_cast<int>(best);
    br.strategy[static_cast<std::size_t>(I)].assign(info.actions, 0.0);
    br.strategy[static_cast<std::size_t>(I)][best] = 1.0;
  }
  br.value = value(0);
  return br;
}

double efg_nash_gap(const GameTree& tree, const BehavioralProfile& profile) {
  return efg_best_response(tree, Player::X, profile.y).value -
         efg_best_response(tree, Player::Y, profile.x).value;
}

double counterfactual_utilities(const GameTree& tree, const BehavioralProfile& profile,
                                Player player, std::vector<Vector>& out) {
  const Player opp = player == Player::X ? Player::Y : Player::X;
  const auto& nodes = tree.nodes();
  const auto& sets = tree.infosets(player);
  const std::vector<double> reach = external_reach(tree, player, profile.of(opp));

  std::vector<double> value(nodes.size(), 0.0);
  for (std::size_t i = nodes.size(); i-- > 0;) {
    const TreeNode& nd = nodes[i];
    if (nd.kind == NodeKind::Terminal) {
      value[i] = nd.payoff;
      continue;
    }
    double v = 0.0;
    for (std::size_t a = 0; a < nd.children.size(); ++a) {
      const double w = nd.kind == NodeKind::Chance
                           ? nd.probs[a]
                           : profile.of(nd.owner)[static_cast<std::size_t>(nd.infoset)][a];
      v += w * value[static_cast<std::size_t>(nd.children[a])];
    }
    value[i] = v;
  }

  const double sign = player == Player::X ? 1.0 : -1.0;
  out.resize(sets.size());
  for (std::size_t I = 0; I < sets.size(); ++I) {
    out[I].assign(sets[I].actions, 0.0);
    for (int h : sets[I].nodes) {
      const TreeNode& nd = nodes[static_cast<std::size_t>(h)];
      const double w = reach[static_cast<std::size_t>(h)] * sign;
      for (std::size_t a = 0; a < nd.children.size(); ++a) {
        out[I][a] += w * value[static_cast<std::size_t>(nd.children[a])];
      }
    }
  }
  return value[0];
}

std::vector<double> own_reach(const GameTree& tree, Player player, const BehavioralStrategy& s) {
  const auto& sets = tree.infosets(player);
  const auto& order = tree.bottom_up(player);
  std::vector<double> reach(sets.size(), 1.0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Infoset& I = sets[static_cast<std::size_t>(*it)];
    if (I.parent >= 0) {
      reach[static_cast<std::size_t>(*it)] =
          reach[static_cast<std::size_t>(I.parent)] *
          s[static_cast<std::size_t>(I.parent)][static_cast<std::size_t>(I.parent_action)];
    }
  }
  return reach;
}

RealizationSum::RealizationSum(const GameTree& tree, Player player)
    : tree_(&tree), player_(player) {
  for (const auto& I : tree.infosets(player)) sums_.emplace_back(I.actions, 0.0);
}

void RealizationSum::add(const BehavioralStrategy& s, double weight) {
  const std::vector<double> reach = own_reach(*tree_, player_, s);
  for (std::size_t I = 0; I < sums_.size(); ++I) {
    const double w = weight * reach[I];
    for (std::size_t a = 0; a < sums_[I].size(); ++a) sums_[I][a] += w * s[I][a];
  }
}

namespace {

BehavioralStrategy normalize_sums(const std::vector<Vector>& sums) {
  BehavioralStrategy out(sums.size());
  for (std::size_t I = 0; I < sums.size(); ++I) {
    double total = 0.0;
    for (double e : sums[I]) total += e;
    if (total > 0.0) {
      out[I].resize(sums[I].size());
      for (std::size_t a = 0; a < sums[I].size(); ++a) out[I][a] = std::max(sums[I][a], 0.0) / total;
    } else {
      out[I] = uniform_strategy(sums[I].size());
    }
  }
  return out;
}

}  // namespace

BehavioralStrategy RealizationSum::average() const { return normalize_sums(sums_); }

BehavioralStrategy RealizationSum::average_since(const RealizationSum& earlier) const {
  std::vector<Vector> diff = sums_;
  for (std::size_t I = 0; I < diff.size(); ++I) {
    for (std::size_t a = 0; a < diff[I].size(); ++a) diff[I][a] -= earlier.sums_[I][a];
  }
  return normalize_sums(diff);
}

BehavioralStrategy average_profile(const GameTree& tree, Player player,
                                   const std::vector<double>& weights,
                                   const std::vector<BehavioralStrategy>& strategies) {
  if (weights.size() != strategies.size() || strategies.empty()) {
    throw std::invalid_argument("average_profile: need one weight per strategy");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("average_profile: weights must be nonnegative");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("average_profile: weights sum to zero");
  RealizationSum sum(tree, player);
  for (std::size_t k = 0; k < strategies.size(); ++k) {
    check_strategy(tree, player, strategies[k]);
    sum.add(strategies[k], weights[k]);
  }
  return sum.average();
}

}  // namespace rmsolve
