#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rmsolve/efg.hpp"

namespace rmsolve {

namespace {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw std::invalid_argument("tree line " + std::to_string(line) + ": " + what);
}

double parse_real(const std::string& s, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    parse_error(line, "bad number '" + s + "'");
  }
  if (used != s.size()) parse_error(line, "bad number '" + s + "'");
  return v;
}

}  // namespace

void write_tree(std::ostream& os, const GameTree& tree) {
  const auto& nodes = tree.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TreeNode& nd = nodes[i];
    os << i;
    switch (nd.kind) {
      case NodeKind::Terminal:
        os << " terminal " << format_real(nd.payoff);
        break;
      case NodeKind::Chance:
        os << " chance";
        for (std::size_t a = 0; a < nd.children.size(); ++a) {
          os << ' ' << nd.children[a] << ':' << format_real(nd.probs[a]);
        }
        break;
      case NodeKind::Decision:
        os << " decision " << (nd.owner == Player::X ? 'X' : 'Y') << ' '
           << tree.infosets(nd.owner)[static_cast<std::size_t>(nd.infoset)].label;
        for (int c : nd.children) os << ' ' << c;
        break;
    }
    os << '\n';
  }
}

GameTree read_tree(std::istream& is) {
  struct Raw {
    std::size_t line;
    TreeNode node;
    std::vector<std::string> child_ids;
  };
  std::vector<Raw> raw;
  std::map<std::string, int> index_of;
  std::map<std::string, int> x_ids, y_ids;
  std::vector<std::string> x_labels, y_labels;

  std::string text;
  std::size_t line_no = 0;
  while (std::getline(is, text)) {
    ++line_no;
    std::istringstream ls(text);
    std::string id;
    if (!(ls >> id) || id[0] == '#') continue;
    std::string kind;
    if (!(ls >> kind)) parse_error(line_no, "missing node kind");
    if (!index_of.emplace(id, static_cast<int>(raw.size())).second) {
      parse_error(line_no, "duplicate node id " + id);
    }
    Raw r{line_no, {}, {}};
    std::string tok;
    if (kind == "terminal") {
      r.node.kind = NodeKind::Terminal;
      if (!(ls >> tok)) parse_error(line_no, "missing payoff");
      r.node.payoff = parse_real(tok, line_no);
      if (ls >> tok) parse_error(line_no, "unexpected token '" + tok + "'");
    } else if (kind == "chance") {
      r.node.kind = NodeKind::Chance;
      while (ls >> tok) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos) parse_error(line_no, "chance entry needs child:prob");
        r.child_ids.push_back(tok.substr(0, colon));
        r.node.probs.push_back(parse_real(tok.substr(colon + 1), line_no));
      }
    } else if (kind == "decision") {
      r.node.kind = NodeKind::Decision;
      std::string owner, label;
      if (!(ls >> owner >> label)) parse_error(line_no, "decision needs owner and infoset");
      if (owner != "X" && owner != "Y") parse_error(line_no, "owner must be X or Y");
      r.node.owner = owner == "X" ? Player::X : Player::Y;
      auto& ids = owner == "X" ? x_ids : y_ids;
      auto& labels = owner == "X" ? x_labels : y_labels;
      auto it = ids.find(label);
      if (it == ids.end()) {
        it = ids.emplace(label, static_cast<int>(labels.size())).first;
        labels.push_back(label);
      }
      r.node.infoset = it->second;
      while (ls >> tok) r.child_ids.push_back(tok);
    } else {
      parse_error(line_no, "unknown node kind '" + kind + "'");
    }
    raw.push_back(std::move(r));
  }
  if (raw.empty()) throw std::invalid_argument("tree: no nodes");

  std::vector<TreeNode> nodes;
  nodes.reserve(raw.size());
  for (auto& r : raw) {
    for (const auto& c : r.child_ids) {
      const auto it = index_of.find(c);
      if (it == index_of.end()) parse_error(r.line, "unknown child id " + c);
      r.node.children.push_back(it->second);
    }
    nodes.push_back(std::move(r.node));
  }
  return GameTree(std::move(nodes), std::move(x_labels), std::move(y_labels));
}

}  // namespace rmsolve
