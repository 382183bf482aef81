#pragma once

#include "sos/syntax.hpp"

// The rule transformation pipeline: ntyxt elimination, grounding of free
// variables over a finite universe, reduction to decent xynft rules, source
// uniformization, and the negative closure that reduces supported provability
// to standard provability.

namespace sos {

struct StageRecord {
  std::string stage;
  std::string input_digest;
  std::string output_digest;
  int rules_in = 0;
  int rules_out = 0;
  std::string note;
};

struct PipelineTrace {
  std::vector<StageRecord> stages;
  bool universe_relative = false;  // grounding happened; results are sound
                                   // only within the universe closure
  bool fuel_exhausted = false;
};

struct TransformOptions {
  int fuel = 8;                      // derivation depth bound for xynft reduction
  std::size_t max_pick_product = 10000;  // per (symbol, action) premise choices
  bool check_preconditions = true;   // disable only to reproduce unsound closures
};

// Replaces every ntyxt rule by one ntyft instance per function symbol.
Tss remove_ntyxt(const Tss& tss);

// Instantiates free variables over the given universe of closed terms.
Tss ground_free_vars(const Tss& tss, const std::vector<Term>& universe);

// Decent xynft rules derivable from a standard decent ntyft TSS by composing
// through non-variable premise left-hand sides, up to the fuel bound.
Tss to_decent_xynft(const Tss& tss, int fuel = 8, bool* fuel_exhausted = nullptr);

// Renames rules so all sources with the same head share one variable vector.
Tss uniformize(const Tss& tss);

// The negative closure: for every symbol and action, add the denials of all
// premise picks over the rules for that pair. Requires a standard decent
// uniform xynft TSS unless checking is disabled.
Tss rplus(const Tss& tss, const TransformOptions& opts = {});

struct PipelineResult {
  Tss tss;
  PipelineTrace trace;
};

// remove_ntyxt, ground_free_vars (when needed), to_decent_xynft, uniformize,
// rplus. Requires a standard TSS in ready simulation format.
PipelineResult plus_pipeline(const Tss& tss,
                             const std::vector<Term>* universe = nullptr,
                             const TransformOptions& opts = {});

}  // namespace sos
