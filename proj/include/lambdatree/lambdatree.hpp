#pragma once

#include "lambdatree/lex_value.hpp"
#include "lambdatree/word.hpp"
#include "lambdatree/tree_point.hpp"
#include "lambdatree/tree_space.hpp"
#include "lambdatree/finite_edge_tree.hpp"
#include "lambdatree/lambda_line.hpp"
#include "lambdatree/cayley_tree.hpp"
#include "lambdatree/group_action.hpp"
#include "lambdatree/gluing.hpp"
#include "lambdatree/graph_of_actions.hpp"
#include "lambdatree/kill.hpp"
#include "lambdatree/isometry.hpp"
#include "lambdatree/amalgam.hpp"
#include "lambdatree/constructions.hpp"
#include "lambdatree/freeness.hpp"
#include "lambdatree/valuation.hpp"
#include "lambdatree/scene.hpp"
