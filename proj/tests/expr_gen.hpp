#pragma once

// Deterministic random expression-tree generator shared by the unit and
// acceptance suites (round-trip property of the expression grammar).

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "quarterwave/expr.hpp"

namespace exprgen {

using quarterwave::Expr;
using quarterwave::kBuiltins;

inline const std::vector<std::string>& variables() {
  static const std::vector<std::string> vars{"x", "y", "z"};
  return vars;
}

inline Expr::NodePtr random_node(std::mt19937& rng, int depth) {
  auto node = std::make_shared<Expr::Node>();
  std::uniform_int_distribution<int> kind_dist(0, depth <= 0 ? 1 : 4);
  switch (kind_dist(rng)) {
    case 0: {  // non-negative number literal (negation is its own node)
      node->kind = Expr::Kind::Number;
      std::uniform_int_distribution<int> pick(0, 2);
      switch (pick(rng)) {
        case 0:
          node->number = std::uniform_int_distribution<int>(0, 9)(rng);
          break;
        case 1:
          node->number = std::uniform_real_distribution<double>(0.0, 10.0)(rng);
          break;
        default:
          node->number =
              std::uniform_real_distribution<double>(0.0, 1.0)(rng) * 1e-6;
          break;
      }
      break;
    }
    case 1: {
      node->kind = Expr::Kind::Variable;
      const auto& vars = variables();
      std::uniform_int_distribution<int> pick(0,
                                              static_cast<int>(vars.size()) - 1);
      node->var_index = pick(rng);
      node->name = vars[static_cast<std::size_t>(node->var_index)];
      break;
    }
    case 2: {
      node->kind = Expr::Kind::Negate;
      node->children.push_back(random_node(rng, depth - 1));
      break;
    }
    case 3: {
      node->kind = Expr::Kind::Binary;
      constexpr Expr::BinaryOp ops[] = {
          Expr::BinaryOp::Add, Expr::BinaryOp::Sub, Expr::BinaryOp::Mul,
          Expr::BinaryOp::Div, Expr::BinaryOp::Pow};
      node->op = ops[std::uniform_int_distribution<int>(0, 4)(rng)];
      node->children.push_back(random_node(rng, depth - 1));
      node->children.push_back(random_node(rng, depth - 1));
      break;
    }
    default: {
      node->kind = Expr::Kind::Call;
      const auto& info =
          kBuiltins[static_cast<std::size_t>(std::uniform_int_distribution<int>(
              0, static_cast<int>(kBuiltins.size()) - 1)(rng))];
      node->builtin = info.id;
      for (int i = 0; i < info.arity; ++i)
        node->children.push_back(random_node(rng, depth - 1));
      break;
    }
  }
  return node;
}

inline Expr random_expr(std::mt19937& rng) {
  std::uniform_int_distribution<int> depth_dist(1, 5);
  return Expr(random_node(rng, depth_dist(rng)), variables());
}

}  // namespace exprgen
