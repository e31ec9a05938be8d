#pragma once

#include <memory>

#include "isynth/bdd.hpp"
#include "isynth/ltlf.hpp"

namespace isynth {

/// Everything a session interns: atom names, formula nodes and BDD nodes.
/// Single-owner; movable between threads but never shared concurrently.
struct Context {
  Vocabulary vocab;
  ltlf::FormulaFactory formulas;
  std::shared_ptr<bdd::Manager> bdd = std::make_shared<bdd::Manager>();
};

}  // namespace isynth
