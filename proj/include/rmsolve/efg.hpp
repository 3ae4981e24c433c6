#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rmsolve/core.hpp"
#include "rmsolve/driver.hpp"

namespace rmsolve {

enum class NodeKind { Decision, Chance, Terminal };

struct TreeNode {
  NodeKind kind = NodeKind::Terminal;
  Player owner = Player::X;  // decision nodes
  int infoset = -1;          // index into the owner's infoset list
  std::vector<int> children;
  std::vector<double> probs;  // chance nodes, one per child
  double payoff = 0.0;        // terminal nodes, to X
};

struct Infoset {
  Player owner = Player::X;
  std::string label;
  std::size_t actions = 0;
  /// Last own (infoset, action) on the path to this infoset; -1 for the
  /// empty sequence.
  int parent = -1;
  int parent_action = -1;
  /// Number of own infosets strictly above this one.
  int depth = 0;
  std::vector<int> nodes;
};

/// Strategy of one player: a local distribution per information set.
using BehavioralStrategy = std::vector<SimplexVector>;

struct BehavioralProfile {
  BehavioralStrategy x;
  BehavioralStrategy y;
  const BehavioralStrategy& of(Player p) const { return p == Player::X ? x : y; }
  BehavioralStrategy& of(Player p) { return p == Player::X ? x : y; }
};

/// Zero-sum extensive-form game with perfect recall. Node 0 is the root and
/// nodes are stored in preorder.
class GameTree {
 public:
  /// Builds from nodes whose `infoset` fields index `labels` of the owner.
  /// Validates structure, chance probabilities and perfect recall; throws
  /// std::invalid_argument on a malformed tree.
  GameTree(std::vector<TreeNode> nodes, std::vector<std::string> x_labels,
           std::vector<std::string> y_labels);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  const std::vector<Infoset>& infosets(Player p) const { return p == Player::X ? x_sets_ : y_sets_; }
  /// Infosets of `p` sorted by decreasing depth.
  const std::vector<int>& bottom_up(Player p) const { return p == Player::X ? x_order_ : y_order_; }
  /// Number of sequences of `p`, including the empty one.
  std::size_t sequence_count(Player p) const;

  BehavioralStrategy uniform_strategy(Player p) const;
  BehavioralProfile uniform_profile() const;
  bool valid_strategy(Player p, const BehavioralStrategy& s, double tol = 1e-9) const;

 private:
  std::vector<TreeNode> nodes_;
  std::vector<Infoset> x_sets_;
  std::vector<Infoset> y_sets_;
  std::vector<int> x_order_;
  std::vector<int> y_order_;
};

/// Three-card Kuhn poker, ante 1, bet 1. Actions are (check, bet) at an
/// opening decision and (fold, call) when facing a bet.
GameTree build_kuhn_poker();

/// Three-card Goofspiel with the prizes revealed in the fixed order 1, 2, 3.
/// Bids are simultaneous and each player only learns whether it won, lost or
/// tied a round. Payoff is the point difference.
GameTree build_goofspiel3();

/// Expected payoff to X.
double expected_value(const GameTree& tree, const BehavioralProfile& profile);

/// Best-response value of `player` against the opponent strategy in
/// `profile` (max of X's payoff for X, min for Y), by backward induction over
/// the player's infosets from the deepest up.
struct TreeBestResponse {
  double value = 0.0;
  BehavioralStrategy strategy;  // pure
};
TreeBestResponse efg_best_response(const GameTree& tree, Player player,
                                   const BehavioralStrategy& opponent);

/// BR_X(y) - BR_Y(x).
double efg_nash_gap(const GameTree& tree, const BehavioralProfile& profile);

/// Counterfactual utility vectors of `player` (payoff to that player,
/// weighted by chance and opponent reach) at every infoset of the player.
/// Returns the expected payoff to X of the profile.
double counterfactual_utilities(const GameTree& tree, const BehavioralProfile& profile,
                                Player player, std::vector<Vector>& out);

/// Probability that `player`'s own actions lead to each of its infosets.
std::vector<double> own_reach(const GameTree& tree, Player player, const BehavioralStrategy& s);

/// Per infoset, sum_k w_k * own_reach_k(I) * s_k(I) normalized (uniform where
/// the total is zero). This is the behavioral form of the weighted average of
/// the sequence-form strategies.
BehavioralStrategy average_profile(const GameTree& tree, Player player,
                                   const std::vector<double>& weights,
                                   const std::vector<BehavioralStrategy>& strategies);

/// Running sequence-form accumulator behind average_profile.
class RealizationSum {
 public:
  RealizationSum(const GameTree& tree, Player player);
  void add(const BehavioralStrategy& s, double weight = 1.0);
  BehavioralStrategy average() const;
  /// Average of the strategies added since `earlier` was copied.
  BehavioralStrategy average_since(const RealizationSum& earlier) const;

 private:
  const GameTree* tree_;
  Player player_;
  std::vector<Vector> sums_;
};

/// Text node list, one node per line:
///   <id> decision <X|Y> <infoset> <child> ...
///   <id> chance <child>:<prob> ...
///   <id> terminal <payoff>
/// The first node listed is the root. Blank lines and lines starting with
/// '#' are ignored.
void write_tree(std::ostream& os, const GameTree& tree);
GameTree read_tree(std::istream& is);

/// CFR self-play: one local learner per infoset fed counterfactual
/// utilities, in the setups of the matrix driver. One traversal computes the
/// utilities of one player. Gap columns hold Nash gaps of behavioral
/// profiles; rnorm columns hold the root mean square of the per-infoset
/// regret norms.
Trace run_cfr(const GameTree& tree, const RunConfig& cfg);

/// Reach-weighted uniform and last-half average profiles of a CFR run.
struct CfrAverages {
  BehavioralProfile uniform;
  BehavioralProfile last_half;
};
Trace run_cfr(const GameTree& tree, const RunConfig& cfg, CfrAverages* averages);

}  // namespace rmsolve
