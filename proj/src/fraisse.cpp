#include "valg/fraisse.hpp"

#include <algorithm>
#include <map>

#include "valg/json_io.hpp"

namespace valg {

namespace {

using Json = nlohmann::json;

std::vector<std::uint64_t> prime_powers_up_to(std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = 2; q <= bound; ++q) {
    std::uint64_t p = 0;
    for (std::uint64_t d = 2; d * d <= q; ++d)
      if (q % d == 0) {
        p = d;
        break;
      }
    if (p == 0) p = q;
    std::uint64_t r = q;
    while (r % p == 0) r /= p;
    if (r == 1) out.push_back(q);
  }
  return out;
}

void enumerate_shapes(const std::vector<std::uint64_t>& pool, std::uint64_t max_order,
                      std::size_t start, std::vector<std::uint64_t>& current,
                      std::vector<std::vector<std::uint64_t>>& out) {
  out.push_back(current);
  for (std::size_t i = start; i < pool.size(); ++i) {
    std::uint64_t product = pool[i];
    bool fits = true;
    for (std::uint64_t f : current) {
      if (product > max_order / f) {
        fits = false;
        break;
      }
      product *= f;
    }
    if (!fits || product > max_order) continue;
    current.push_back(pool[i]);
    enumerate_shapes(pool, max_order, i, current, out);
    current.pop_back();
  }
}

}  // namespace

ChainConfig chain_config_from_json(const Json& j) {
  ChainConfig config;
  config.grid_log2 = j.at("grid_denominator_log2").get<int>();
  std::string cap = j.at("cap").get<std::string>();
  if (cap != "1" && cap != "inf") fail("schema", "cap: expected \"1\" or \"inf\"");
  config.cap = cap == "1" ? Cap::one : Cap::infinite;
  config.exponent = j.at("N").get<std::uint64_t>();
  config.max_order = j.at("max_order").get<std::uint64_t>();
  config.rounds = j.at("rounds").get<std::uint64_t>();
  if (j.contains("order_budget")) config.order_budget = j.at("order_budget").get<std::uint64_t>();
  if (j.contains("task_cap")) config.task_cap = j.at("task_cap").get<std::uint64_t>();
  return config;
}

Json chain_config_to_json(const ChainConfig& config) {
  return Json{{"grid_denominator_log2", config.grid_log2},
              {"cap", cap_to_string(config.cap)},
              {"N", config.exponent},
              {"max_order", config.max_order},
              {"rounds", config.rounds},
              {"order_budget", config.order_budget},
              {"task_cap", config.task_cap}};
}

Catalog enumerate_catalog(const ChainConfig& config, std::uint64_t table_budget) {
  if (config.cap != Cap::one)
    fail("precondition", "catalog enumeration needs the capped grid (cap 1)");
  if (config.exponent == 1) fail("precondition", "exponent class must be 0 or >= 2");

  std::vector<std::uint64_t> pool;
  for (std::uint64_t q : prime_powers_up_to(config.max_order))
    if (config.exponent == 0 || config.exponent % q == 0) pool.push_back(q);

  std::vector<std::vector<std::uint64_t>> shapes;
  std::vector<std::uint64_t> current;
  enumerate_shapes(pool, config.max_order, 0, current, shapes);

  const std::uint64_t levels = 1ull << config.grid_log2;  // grid values in (0, 1]
  const Rat step = grid_step(config.grid_log2);

  Catalog catalog;
  catalog.config = config;
  for (const auto& shape : shapes) {
    FiniteAbelianGroup g(shape);
    // Free slots: one value per {x, -x} class of nonzero elements.
    std::vector<Elem> slots;
    for (Elem x = 1; x < g.order(); ++x)
      if (g.neg(x) >= x) slots.push_back(x);

    double estimate = 1;
    for (std::size_t i = 0; i < slots.size(); ++i) estimate *= static_cast<double>(levels);
    if (estimate > static_cast<double>(table_budget))
      fail("budget", "catalog table enumeration exceeds the budget");

    std::set<std::vector<Rat>> seen;
    std::vector<Rat> table(g.order(), Rat(0));
    std::vector<std::uint64_t> pick(slots.size(), 1);
    bool done = slots.empty();
    if (done) {
      // Only the trivial table.
      if (validate_value_table(g, table, config.cap, config.exponent, true).empty())
        catalog.entries.push_back(ValuedGroup{g, table, config.cap, config.exponent});
      continue;
    }
    while (true) {
      for (std::size_t i = 0; i < slots.size(); ++i) {
        table[slots[i]] = step * Rat(pick[i]);
        table[g.neg(slots[i])] = table[slots[i]];
      }
      if (validate_value_table(g, table, config.cap, config.exponent, true).empty()) {
        ValuedGroup candidate{g, table, config.cap, config.exponent};
        std::vector<Rat> canon = canonical_value_table(candidate);
        if (seen.insert(canon).second)
          catalog.entries.push_back(ValuedGroup{g, canon, config.cap, config.exponent});
      }
      std::size_t i = 0;
      while (i < pick.size() && pick[i] == levels) {
        pick[i] = 1;
        ++i;
      }
      if (i == pick.size()) break;
      ++pick[i];
    }
  }

  std::sort(catalog.entries.begin(), catalog.entries.end(),
            [](const ValuedGroup& a, const ValuedGroup& b) {
              if (a.group.order() != b.group.order()) return a.group.order() < b.group.order();
              if (a.group.factors() != b.group.factors()) return a.group.factors() < b.group.factors();
              return std::lexicographical_compare(a.value.begin(), a.value.end(), b.value.begin(),
                                                  b.value.end());
            });
  return catalog;
}

namespace {

struct KClass {
  Subgroup k;
  AbstractSubgroup abstracted;
  ValuedGroup abstract_valued;
  std::vector<std::vector<std::size_t>> stabilizer_perms;  // index perms of k.elements
  bool full = false;
};

struct EntryInfo {
  std::vector<KClass> classes;
};

EntryInfo build_entry_info(const ValuedGroup& h) {
  EntryInfo info;
  // Value-preserving automorphisms.
  std::vector<std::vector<Elem>> auts;
  for (const auto& table : automorphism_tables(h.group)) {
    bool isometric = true;
    for (Elem x = 0; x < h.group.order() && isometric; ++x)
      isometric = h.value[table[x]] == h.value[x];
    if (isometric) auts.push_back(table);
  }

  // Subgroup classes under those automorphisms; canonical representative is
  // the least element set.
  std::vector<Subgroup> subs = all_subgroups(h.group);
  std::set<std::vector<Elem>> assigned;
  for (const Subgroup& s : subs) {
    if (assigned.count(s.elements)) continue;
    std::vector<Elem> canon = s.elements;
    std::vector<std::vector<Elem>> orbit;
    for (const auto& aut : auts) {
      std::vector<Elem> image(s.elements.size());
      for (std::size_t i = 0; i < s.elements.size(); ++i) image[i] = aut[s.elements[i]];
      std::sort(image.begin(), image.end());
      orbit.push_back(image);
      if (image < canon) canon = image;
    }
    for (const auto& member : orbit) assigned.insert(member);
    assigned.insert(s.elements);

    KClass kc;
    kc.k = subgroup_from_elements(h.group, canon);
    kc.full = kc.k.elements.size() == h.group.order();
    kc.abstracted = abstract_subgroup(kc.k);
    std::vector<Rat> pulled(kc.abstracted.group.order());
    for (Elem b = 0; b < kc.abstracted.group.order(); ++b)
      pulled[b] = h.value[kc.abstracted.from_abstract[b]];
    kc.abstract_valued = ValuedGroup{kc.abstracted.group, std::move(pulled), h.cap, h.exponent};
    for (const auto& aut : auts) {
      bool stabilizes = true;
      std::vector<std::size_t> perm(kc.k.elements.size());
      for (std::size_t i = 0; i < kc.k.elements.size() && stabilizes; ++i) {
        Elem image = aut[kc.k.elements[i]];
        auto it = std::lower_bound(kc.k.elements.begin(), kc.k.elements.end(), image);
        if (it == kc.k.elements.end() || *it != image)
          stabilizes = false;
        else
          perm[i] = it - kc.k.elements.begin();
      }
      if (stabilizes) kc.stabilizer_perms.push_back(std::move(perm));
    }
    info.classes.push_back(std::move(kc));
  }
  std::sort(info.classes.begin(), info.classes.end(), [](const KClass& a, const KClass& b) {
    if (a.k.elements.size() != b.k.elements.size())
      return a.k.elements.size() < b.k.elements.size();
    return a.k.elements < b.k.elements;
  });
  return info;
}

std::vector<Elem> canonical_phi(const KClass& kc, const std::vector<Elem>& phi) {
  std::vector<Elem> best = phi;
  std::vector<Elem> candidate(phi.size());
  for (const auto& perm : kc.stabilizer_perms) {
    for (std::size_t i = 0; i < phi.size(); ++i) candidate[i] = phi[perm[i]];
    if (candidate < best) best = candidate;
  }
  return best;
}

// All isometric homomorphisms K -> g as image lists aligned with k.elements,
// in lexicographic order of abstract basis-image tuples.
void for_each_isometric_map(const KClass& kc, const ValuedGroup& g, const TargetIndex& index,
                            const std::function<void(const std::vector<Elem>&)>& fn) {
  const FiniteAbelianGroup& ab = kc.abstracted.group;
  const std::size_t rank = ab.num_factors();
  std::vector<std::vector<Elem>> candidates(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    const Rat& want = kc.abstract_valued.value[ab.basis(i)];
    auto it = index.by_value.find(want);
    if (it == index.by_value.end()) return;
    for (Elem y : it->second)
      if (ab.factors()[i] % index.order_of[y] == 0) candidates[i].push_back(y);
  }

  std::vector<Elem> images(rank);
  std::vector<Elem> table;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == rank) {
      GroupHom hom = hom_from_basis_images(ab, g.group, images);
      for (Elem b = 0; b < ab.order(); ++b)
        if (g.value[hom.table[b]] != kc.abstract_valued.value[b]) return;
      std::vector<Elem> phi(kc.k.elements.size());
      for (std::size_t t = 0; t < kc.k.elements.size(); ++t)
        phi[t] = hom.table[kc.abstracted.to_abstract[t]];
      fn(phi);
      return;
    }
    for (Elem y : candidates[i]) {
      images[i] = y;
      rec(i + 1);
    }
  };
  rec(0);
}

GroupHom abstract_to_parent_hom(const KClass& kc, const FiniteAbelianGroup& parent) {
  return GroupHom{kc.abstracted.group, parent, kc.abstracted.from_abstract};
}

GroupHom phi_as_abstract_hom(const KClass& kc, const FiniteAbelianGroup& target,
                             const std::vector<Elem>& phi) {
  std::vector<Elem> table(kc.abstracted.group.order());
  for (Elem b = 0; b < kc.abstracted.group.order(); ++b) {
    Elem parent_elem = kc.abstracted.from_abstract[b];
    auto it = std::lower_bound(kc.k.elements.begin(), kc.k.elements.end(), parent_elem);
    table[b] = phi[it - kc.k.elements.begin()];
  }
  return GroupHom{kc.abstracted.group, target, std::move(table)};
}

}  // namespace

Chain build_chain(const Catalog& catalog, Exec exec) {
  Chain chain;
  chain.catalog = catalog;
  const Cap cap = catalog.config.cap;
  const std::uint64_t exponent = catalog.config.exponent;
  chain.stages.push_back(ValuedGroup{FiniteAbelianGroup{}, {Rat(0)}, cap, exponent});

  std::vector<EntryInfo> infos;
  infos.reserve(catalog.entries.size());
  for (const ValuedGroup& h : catalog.entries) infos.push_back(build_entry_info(h));

  // Scheduled phi tables (queued or already satisfied), canonical form,
  // current-stage coordinates.
  std::vector<std::vector<std::set<std::vector<Elem>>>> scheduled(catalog.entries.size());
  for (std::size_t e = 0; e < catalog.entries.size(); ++e)
    scheduled[e].resize(infos[e].classes.size());

  std::deque<ChainTask> queue;
  TargetIndex index = build_target_index(chain.stages.back());

  auto remap_all = [&](const GroupHom& link) {
    for (ChainTask& task : queue) {
      for (Elem& x : task.phi) x = link.table[x];
      task.phi = canonical_phi(infos[task.entry].classes[task.subgroup], task.phi);
    }
    for (std::size_t e = 0; e < scheduled.size(); ++e)
      for (std::size_t c = 0; c < scheduled[e].size(); ++c) {
        std::set<std::vector<Elem>> next;
        for (std::vector<Elem> phi : scheduled[e][c]) {
          for (Elem& x : phi) x = link.table[x];
          next.insert(canonical_phi(infos[e].classes[c], phi));
        }
        scheduled[e][c] = std::move(next);
      }
    for (LedgerEntry& entry : chain.ledger) {
      for (Elem& x : entry.phi) x = link.table[x];
      for (Elem& x : entry.psi) x = link.table[x];
    }
  };

  bool budget_hit = false;
  for (std::uint64_t round = 0; round <= catalog.config.rounds && !budget_hit; ++round) {
    // Generate tasks against the current stage, in canonical order, at most
    // task_cap new ones per (entry, class).
    for (std::size_t e = 0; e < catalog.entries.size(); ++e)
      for (std::size_t c = 0; c < infos[e].classes.size(); ++c) {
        const KClass& kc = infos[e].classes[c];
        if (kc.full) continue;  // the extension of phi : H -> G is phi itself
        std::uint64_t enqueued = 0;
        for_each_isometric_map(kc, chain.stages.back(), index, [&](const std::vector<Elem>& phi) {
          if (catalog.config.task_cap != 0 && enqueued >= catalog.config.task_cap) return;
          std::vector<Elem> canon = canonical_phi(kc, phi);
          if (scheduled[e][c].insert(canon).second) {
            queue.push_back(ChainTask{e, c, canon});
            ++enqueued;
          }
        });
      }

    // Drain.
    while (!queue.empty()) {
      ChainTask task = std::move(queue.front());
      queue.pop_front();
      const ValuedGroup& h = catalog.entries[task.entry];
      const KClass& kc = infos[task.entry].classes[task.subgroup];

      std::optional<GroupHom> psi =
          isometric_extension(h, kc.k, task.phi, chain.stages.back(), exec, &index);
      bool via_amalgamation = false;
      if (!psi) {
        std::uint64_t predicted =
            chain.stages.back().group.order() / kc.k.elements.size() * h.group.order();
        if (predicted > catalog.config.order_budget) {
          chain.drained = false;
          chain.unsatisfied.push_back(task);
          for (ChainTask& rest : queue) chain.unsatisfied.push_back(std::move(rest));
          queue.clear();
          budget_hit = true;
          break;
        }
        GroupHom phi1 = phi_as_abstract_hom(kc, chain.stages.back().group, task.phi);
        GroupHom phi2 = abstract_to_parent_hom(kc, h.group);
        AmalgamResult glued = amalgamate(kc.abstract_valued, chain.stages.back(), h, phi1, phi2,
                                         exec, /*deep_checks=*/false);
        remap_all(glued.psi1);
        for (Elem& x : task.phi) x = glued.psi1.table[x];
        chain.links.push_back(glued.psi1);
        chain.stages.push_back(glued.result);
        index = build_target_index(chain.stages.back());
        psi = glued.psi2;
        via_amalgamation = true;
      }
      chain.ledger.push_back(LedgerEntry{task.entry, task.subgroup, task.phi, psi->table,
                                         chain.stages.size() - 1, via_amalgamation});
    }
  }
  return chain;
}

LedgerCheck verify_ledger(const Chain& chain) {
  LedgerCheck check;
  const ValuedGroup& last = chain.final_stage();
  std::vector<EntryInfo> infos;
  for (const ValuedGroup& h : chain.catalog.entries) infos.push_back(build_entry_info(h));
  for (const LedgerEntry& entry : chain.ledger) {
    ++check.entries;
    const ValuedGroup& h = chain.catalog.entries[entry.entry];
    const KClass& kc = infos[entry.entry].classes[entry.subgroup];
    GroupHom psi{h.group, last.group, entry.psi};
    bool ok = hom_is_additive(psi) && hom_is_isometric(psi, h.value, last.value);
    for (std::size_t i = 0; i < kc.k.elements.size() && ok; ++i)
      ok = psi.table[kc.k.elements[i]] == entry.phi[i];
    if (ok) ++check.sound;
  }
  return check;
}

VerifyReport verify_extension_property(const ValuedGroup& g, const Catalog& catalog,
                                       std::uint64_t hom_budget, Exec exec) {
  VerifyReport report;
  TargetIndex index = build_target_index(g);
  std::uint64_t enumerated = 0;

  for (std::size_t e = 0; e < catalog.entries.size(); ++e) {
    const ValuedGroup& h = catalog.entries[e];
    EntryInfo info = build_entry_info(h);

    // Embedding task (K = H reading: does H embed isometrically at all?).
    ++report.embedding_tasks;
    Subgroup trivial = trivial_subgroup(h.group);
    std::vector<Elem> zero_phi{g.group.zero()};
    if (isometric_extension(h, trivial, zero_phi, g, exec, &index)) {
      ++report.embedded;
    } else {
      report.not_embedded.push_back(e);
    }

    for (std::size_t c = 0; c < info.classes.size(); ++c) {
      const KClass& kc = info.classes[c];
      if (kc.full) continue;
      std::set<std::vector<Elem>> seen;
      for_each_isometric_map(kc, g, index, [&](const std::vector<Elem>& phi) {
        if (enumerated >= hom_budget) {
          report.complete = false;
          return;
        }
        ++enumerated;
        std::vector<Elem> canon = canonical_phi(kc, phi);
        if (!seen.insert(canon).second) return;
        ++report.tasks;
        if (isometric_extension(h, kc.k, canon, g, exec, &index)) {
          ++report.satisfied;
        } else if (report.unsatisfied.size() < 64) {
          report.unsatisfied.push_back(ChainTask{e, c, canon});
        }
      });
    }
  }
  return report;
}

EmbeddingReport verify_embeddings(const ValuedGroup& g, const Catalog& catalog, Exec exec) {
  EmbeddingReport report;
  TargetIndex index = build_target_index(g);
  for (std::size_t e = 0; e < catalog.entries.size(); ++e) {
    const ValuedGroup& h = catalog.entries[e];
    ++report.tasks;
    Subgroup trivial = trivial_subgroup(h.group);
    std::vector<Elem> zero_phi{g.group.zero()};
    if (isometric_extension(h, trivial, zero_phi, g, exec, &index))
      ++report.embedded;
    else
      report.not_embedded.push_back(e);
  }
  return report;
}

Json catalog_to_json(const Catalog& catalog) {
  Json entries = Json::array();
  for (const ValuedGroup& h : catalog.entries) entries.push_back(valued_group_to_json(h));
  return Json{{"config", chain_config_to_json(catalog.config)}, {"entries", entries}};
}

Catalog catalog_from_json(const Json& j) {
  Catalog catalog;
  catalog.config = chain_config_from_json(j.at("config"));
  for (const Json& e : j.at("entries")) catalog.entries.push_back(valued_group_from_json(e));
  return catalog;
}

Json chain_to_json(const Chain& chain) {
  Json stages = Json::array();
  for (const ValuedGroup& stage : chain.stages) stages.push_back(valued_group_to_json(stage));
  Json links = Json::array();
  for (const GroupHom& link : chain.links) links.push_back(hom_to_json(link));
  Json ledger = Json::array();
  for (const LedgerEntry& entry : chain.ledger) {
    Json phi = Json::array();
    for (Elem x : entry.phi) phi.push_back(chain.final_stage().group.coords(x));
    Json psi = Json::array();
    for (Elem x : entry.psi) psi.push_back(chain.final_stage().group.coords(x));
    ledger.push_back(Json{{"entry", entry.entry},
                          {"subgroup", entry.subgroup},
                          {"phi", phi},
                          {"psi", psi},
                          {"stage", entry.satisfied_stage},
                          {"via_amalgamation", entry.via_amalgamation}});
  }
  Json unsatisfied = Json::array();
  for (const ChainTask& task : chain.unsatisfied)
    unsatisfied.push_back(Json{{"entry", task.entry}, {"subgroup", task.subgroup}});
  return Json{{"catalog", catalog_to_json(chain.catalog)},
              {"stages", stages},
              {"links", links},
              {"ledger", ledger},
              {"drained", chain.drained},
              {"unsatisfied", unsatisfied}};
}

std::string chain_to_dot(const Chain& chain) {
  std::string dot = "digraph chain {\n  rankdir=LR;\n";
  for (std::size_t i = 0; i < chain.stages.size(); ++i)
    dot += "  s" + std::to_string(i) + " [label=\"G" + std::to_string(i) + " (order " +
           std::to_string(chain.stages[i].group.order()) + ")\"];\n";
  for (std::size_t i = 0; i + 1 < chain.stages.size(); ++i)
    dot += "  s" + std::to_string(i) + " -> s" + std::to_string(i + 1) + ";\n";
  std::map<std::size_t, std::uint64_t> per_stage;
  for (const LedgerEntry& entry : chain.ledger) ++per_stage[entry.satisfied_stage];
  for (const auto& [stage, count] : per_stage)
    dot += "  t" + std::to_string(stage) + " [shape=box,label=\"" + std::to_string(count) +
           " tasks\"];\n  t" + std::to_string(stage) + " -> s" + std::to_string(stage) +
           " [style=dashed];\n";
  dot += "}\n";
  return dot;
}

}  // namespace valg
