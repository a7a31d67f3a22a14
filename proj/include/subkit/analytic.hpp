#pragma once
// Signed generation trees and the analyticity check.

#include <string>
#include <vector>

#include "subkit/term.hpp"

namespace subkit {

enum NodeClass : unsigned { kDelta = 1, kSLR = 2, kSRA = 4, kSRR = 8 };
constexpr unsigned kSkeleton = kDelta | kSLR;
constexpr unsigned kPIA = kSRA | kSRR;

// Classes admitted by a connective under a sign; 0 for variables and constants,
// and for the two signed negations the table leaves out (-neg, +sim).
unsigned node_classes(Op op, bool positive);
std::string class_names(unsigned classes); // e.g. "SLR|SRA"

struct SignedNode {
  Op op;
  std::string name; // Var only
  bool positive;
  unsigned classes;
  bool unclassified; // connective with an empty class set
  std::vector<SignedNode> children;
};

// With `expand`, -neg a is read as -(a -> bot) and +sim a as +(a >- top) before classification.
SignedNode signed_tree(const Term& t, bool positive, bool expand = true);

struct Branch {
  bool from_lhs;                  // branch of +lhs (true) or -rhs (false)
  std::string leaf;               // variable name, "bot" or "top"
  std::vector<std::string> path;  // signed connectives from the root down to the leaf's parent
  std::vector<unsigned> classes;  // classes of each path node
  int split = -1;                 // nodes [0, split) are Skeleton, [split, n) are PIA; -1 if bad
  bool good() const { return split >= 0; }
};

struct AnalyticVerdict {
  bool analytic = false;        // verdict after expanding unclassified negations
  bool native_analytic = false; // verdict treating unclassified nodes as bad
  std::vector<Branch> branches; // expanded trees, leaves left to right, +lhs first
  std::vector<Branch> native_branches;
  std::vector<Branch> offending() const; // bad branches of the expanded trees
};

AnalyticVerdict is_analytic(const Inequality& q);

std::string print_branch(const Branch& b);

} // namespace subkit
