#pragma once

#include <cstdint>
#include <string>

#include "mill/engine.hpp"
#include "mill/kb.hpp"

namespace mill {

/// 64-bit FNV-1a over the canonical KB text.
std::uint64_t kb_hash(const KnowledgeBase& kb);

/// Text form of a conjecture side; parametric sides render as `f(*)`.
std::string side_str(const Conjecture& c, Side side);

/// Human-readable report. With `trace` the sub-proofs, premises,
/// corroborations and rejected candidates are listed too.
std::string render_text(const SolutionSet& s, bool trace = true);

/// Machine-readable JSON document with a fixed key order:
/// bindings, conjectures, trace (only when `trace`), config, kb_digest.
std::string render_structured(const SolutionSet& s, const KnowledgeBase& kb, const EngineConfig& cfg,
                              bool trace = true);

}  // namespace mill
