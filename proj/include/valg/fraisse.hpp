#pragma once

#include <json.hpp>

#include <deque>
#include <set>

#include "valg/amalgam.hpp"
#include "valg/value.hpp"

namespace valg {

// Finite-scale stand-in for the dense value set: the dyadic grid of step
// 2^-grid_log2, intersected with (0,1] under cap one.
struct ChainConfig {
  int grid_log2 = 2;
  Cap cap = Cap::one;
  std::uint64_t exponent = 2;
  std::uint64_t max_order = 4;
  std::uint64_t rounds = 1;
  std::uint64_t order_budget = 1u << 16;
  // Maximum number of new tasks enqueued per (entry, subgroup class) in each
  // generation sweep, in canonical order; 0 means unlimited. The limit object
  // is infinite, so a finite truncation has to bound the task fan-out.
  std::uint64_t task_cap = 0;
};

ChainConfig chain_config_from_json(const nlohmann::json& j);
nlohmann::json chain_config_to_json(const ChainConfig& config);

// All grid-valued groups of order <= max_order in the class, one per
// isometric-isomorphism class, sorted by (order, factors, canonical table).
struct Catalog {
  ChainConfig config;
  std::vector<ValuedGroup> entries;
};

Catalog enumerate_catalog(const ChainConfig& config, std::uint64_t table_budget = 1u << 22);

// A task: extend the isometric phi : K -> G_current to all of H. phi is
// stored as images aligned with the subgroup element list, in the
// coordinates of the stage the queue currently points at.
struct ChainTask {
  std::size_t entry;     // catalog index of H
  std::size_t subgroup;  // index into the subgroup-class list of H
  std::vector<Elem> phi;
};

struct LedgerEntry {
  std::size_t entry;
  std::size_t subgroup;
  std::vector<Elem> phi;  // final-stage coordinates
  std::vector<Elem> psi;  // full extension table H -> final stage
  std::size_t satisfied_stage;
  bool via_amalgamation;
};

struct Chain {
  Catalog catalog;
  std::vector<ValuedGroup> stages;
  std::vector<GroupHom> links;  // stages[i] -> stages[i+1], isometric
  std::vector<LedgerEntry> ledger;
  bool drained = true;
  std::vector<ChainTask> unsatisfied;  // nonempty only on budget exhaustion

  const ValuedGroup& final_stage() const { return stages.back(); }
};

// Builds the chain: rounds+1 task-generation sweeps (against stages 0, then
// the current stage after each drain); every queued task is satisfied either
// by an extension already present or by one amalgamation. Tasks with K = H
// are vacuous (the extension is phi itself) and are not queued.
Chain build_chain(const Catalog& catalog, Exec exec = Exec::parallel);

// Ledger soundness: every recorded (H, K, phi, psi) re-verified in the final
// stage: psi is an isometric homomorphism extending phi.
struct LedgerCheck {
  std::uint64_t entries = 0, sound = 0;
};
LedgerCheck verify_ledger(const Chain& chain);

// Exhaustive finite extension-property verification of g against the catalog:
// for every entry H, every proper subgroup class K and every isometric
// phi: K -> g, search for an isometric extension H -> g; for K = H, search
// for an isometric embedding of H.
struct VerifyReport {
  std::uint64_t tasks = 0;
  std::uint64_t satisfied = 0;
  std::vector<ChainTask> unsatisfied;  // truncated to 64 witnesses
  std::uint64_t embedding_tasks = 0;
  std::uint64_t embedded = 0;
  std::vector<std::size_t> not_embedded;  // catalog indices
  bool complete = true;                   // false when the budget cut the scan
};
VerifyReport verify_extension_property(const ValuedGroup& g, const Catalog& catalog,
                                       std::uint64_t hom_budget = 1u << 22,
                                       Exec exec = Exec::parallel);

// The K = H reading alone: one isometric-embedding search per catalog entry.
// Cheap even when g is large.
struct EmbeddingReport {
  std::uint64_t tasks = 0;
  std::uint64_t embedded = 0;
  std::vector<std::size_t> not_embedded;
};
EmbeddingReport verify_embeddings(const ValuedGroup& g, const Catalog& catalog,
                                  Exec exec = Exec::parallel);

nlohmann::json catalog_to_json(const Catalog& catalog);
Catalog catalog_from_json(const nlohmann::json& j);
nlohmann::json chain_to_json(const Chain& chain);
std::string chain_to_dot(const Chain& chain);

}  // namespace valg
