#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "valg/amalgam.hpp"
#include "valg/fraisse.hpp"
#include "valg/free_group.hpp"
#include "valg/json_io.hpp"
#include "valg/katetov.hpp"
#include "valg/stepfn.hpp"
#include "valg/suites.hpp"

namespace {

using valg::Json;

struct CommonOpts {
  std::string config;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = valg::kDefaultSuiteSeed;
};

Json load_config(const std::string& path) {
  if (path.empty()) valg::fail("usage", "--config <path> is required for this command");
  std::ifstream in(path);
  if (!in) valg::fail("usage", "cannot open config file '" + path + "'");
  return Json::parse(in);
}

void emit(const CommonOpts& opts, const Json& artifact, const std::string& summary) {
  if (!opts.out.empty()) {
    std::ofstream out(opts.out, std::ios::binary);
    out << artifact.dump(2) << "\n";
  } else {
    std::cout << artifact.dump(2) << "\n";
  }
  std::cout << summary << "\n";
}

valg::Subgroup subgroup_from_config(const valg::FiniteAbelianGroup& g, const Json& j) {
  std::vector<valg::Elem> elems;
  for (const Json& e : j) elems.push_back(valg::element_from_json(g, e));
  return valg::subgroup_from_elements(g, std::move(elems));
}

valg::PL pl_from_json(const Json& j) {
  valg::PL pl;
  pl.points.clear();
  for (const Json& p : j.at("points"))
    pl.points.emplace_back(valg::rat_from_string(p.at(0).get<std::string>()),
                           valg::rat_from_string(p.at(1).get<std::string>()));
  pl.tail_slope = valg::rat_from_string(j.at("tail_slope").get<std::string>());
  return pl;
}

Json pl_to_json(const valg::PL& pl) {
  Json points = Json::array();
  for (const auto& [x, y] : pl.points)
    points.push_back(Json::array({valg::rat_to_string(x), valg::rat_to_string(y)}));
  return Json{{"points", points}, {"tail_slope", valg::rat_to_string(pl.tail_slope)}};
}

Json violations_to_json(const std::vector<valg::AxiomViolation>& violations,
                        const valg::FiniteAbelianGroup& g) {
  Json out = Json::array();
  for (const auto& v : violations) {
    Json witness = Json::array();
    for (valg::Elem x : v.witness) witness.push_back(valg::element_to_json(g, x));
    out.push_back(Json{{"axiom", v.axiom}, {"witness", witness}, {"detail", v.detail}});
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Exact computation with finite valued Abelian groups"};
  app.require_subcommand(1);
  app.fallthrough();
  CommonOpts opts;
  app.add_option("--config", opts.config, "JSON input descriptor");
  app.add_option("--seed", opts.seed, "seed for randomized suites");
  app.add_option("--out", opts.out, "artifact output path (default: stdout)");
  app.add_option("--format", opts.format, "artifact format: json|dot")
      ->check(CLI::IsMember({"json", "dot"}));

  // group
  auto* group_cmd = app.add_subcommand("group", "finite Abelian group operations");
  group_cmd->require_subcommand(1);
  auto* group_validate = group_cmd->add_subcommand("validate", "check a group descriptor");
  auto* group_quotient = group_cmd->add_subcommand("quotient", "canonical quotient by a subgroup");
  auto* group_homs = group_cmd->add_subcommand("homs", "enumerate homomorphisms");

  // value
  auto* value_cmd = app.add_subcommand("value", "value table operations");
  value_cmd->require_subcommand(1);
  auto* value_validate = value_cmd->add_subcommand("validate", "check the value axioms");
  auto* value_complete = value_cmd->add_subcommand("complete", "largest semivalue below a cost");
  auto* value_cap = value_cmd->add_subcommand("cap", "pointwise cap");
  auto* value_iso = value_cmd->add_subcommand("iso", "isometric isomorphism search");

  // katetov
  auto* kat_cmd = app.add_subcommand("katetov", "Katetov maps and one-generator extensions");
  kat_cmd->require_subcommand(1);
  auto* kat_check = kat_cmd->add_subcommand("check", "exponent-N admissibility");
  auto* kat_extend = kat_cmd->add_subcommand("extend", "adjoin a realizing generator");
  auto* kat_realize = kat_cmd->add_subcommand("realize", "find a realizer inside the group");
  auto* kat_midpoint = kat_cmd->add_subcommand("midpoint", "adjoin an exact midpoint");

  // valext
  auto* valext_cmd = app.add_subcommand("valext", "value extension constructions");
  valext_cmd->require_subcommand(1);
  auto* valext_grid = valext_cmd->add_subcommand("grid", "grid-valued extension");
  auto* valext_modulus = valext_cmd->add_subcommand("modulus", "modulus-dominated extension");

  // amalgamate
  auto* am_cmd = app.add_subcommand("amalgamate", "amalgamation constructions");
  am_cmd->require_subcommand(1);
  auto* am_a1 = am_cmd->add_subcommand("a1", "exact amalgamation over a common subgroup");
  auto* am_a2 = am_cmd->add_subcommand("a2", "almost-isometric correction");
  auto* am_a3 = am_cmd->add_subcommand("a3", "two overlapping identifications");

  // free
  auto* free_cmd = app.add_subcommand("free", "free valued groups over metric spaces");
  free_cmd->require_subcommand(1);
  auto* free_build = free_cmd->add_subcommand("build", "materialize Z_N[X]");
  auto* free_pd = free_cmd->add_subcommand("pd", "value of an element");
  auto* free_matching = free_cmd->add_subcommand("matching", "N=2 matching closed form");
  auto* free_induce = free_cmd->add_subcommand("induce", "point-map induced homomorphism");

  // wordmetric
  auto* word_cmd = app.add_subcommand("wordmetric", "word metric from a generating set");
  std::uint64_t zn = 0;
  word_cmd->add_option("--N", zn, "build the diagonal example on Z_N^N instead of a config");

  // chain
  auto* chain_cmd = app.add_subcommand("chain", "finite approximation chains");
  chain_cmd->require_subcommand(1);
  auto* chain_build = chain_cmd->add_subcommand("build", "catalog + amalgamation chain");
  auto* chain_verify = chain_cmd->add_subcommand("verify", "ledger and extension-property check");
  auto* chain_export = chain_cmd->add_subcommand("export", "re-emit a chain artifact (json|dot)");

  // pv
  auto* pv_cmd = app.add_subcommand("pv", "step functions over a valued group");
  pv_cmd->require_subcommand(1);
  auto* pv_norm = pv_cmd->add_subcommand("norm", "integral norm and decomposition");
  auto* pv_check = pv_cmd->add_subcommand("check", "kappa-norm sample check");

  // suite
  auto* suite_cmd = app.add_subcommand("suite", "named verification suites");
  std::string suite_name;
  std::string golden;
  suite_cmd->add_option("name", suite_name, "suite name, or 'all'")->required();
  suite_cmd->add_option("--golden", golden, "golden file for the chain suite");

  // Every subcommand accepts the shared flags after its name.
  auto all = [](CLI::App*) { return true; };
  for (CLI::App* sub : app.get_subcommands(all)) {
    sub->fallthrough();
    for (CLI::App* nested : sub->get_subcommands(all)) nested->fallthrough();
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;  // usage error
  }

  if (group_validate->parsed()) {
    Json j = load_config(opts.config);
    valg::FiniteAbelianGroup g = valg::group_from_json(j);
    emit(opts, Json{{"factors", g.factors()}, {"order", g.order()}, {"exponent", g.exponent()}},
         "group ok: order " + std::to_string(g.order()));
  } else if (group_quotient->parsed()) {
    Json j = load_config(opts.config);
    valg::FiniteAbelianGroup g = valg::group_from_json(j.at("group"));
    valg::Subgroup k = subgroup_from_config(g, j.at("subgroup"));
    valg::QuotientResult q = valg::quotient(g, k);
    emit(opts,
         Json{{"quotient", valg::group_to_json(q.quotient)},
              {"projection", valg::hom_to_json(q.projection)}},
         "quotient order " + std::to_string(q.quotient.order()));
  } else if (group_homs->parsed()) {
    Json j = load_config(opts.config);
    valg::FiniteAbelianGroup source = valg::group_from_json(j.at("source"));
    valg::FiniteAbelianGroup target = valg::group_from_json(j.at("target"));
    auto homs = valg::enumerate_homs(source, target);
    Json list = Json::array();
    for (const auto& hom : homs) list.push_back(valg::hom_to_json(hom));
    emit(opts, Json{{"count", homs.size()}, {"homs", list}},
         std::to_string(homs.size()) + " homomorphisms");
  } else if (value_validate->parsed()) {
    Json j = load_config(opts.config);
    valg::FiniteAbelianGroup g = valg::group_from_json(j);
    std::string cap = j.at("cap").get<std::string>();
    std::vector<valg::Rat> table(g.order());
    for (const auto& [key, entry] : j.at("value").items())
      table[valg::element_from_key(g, key)] = valg::rat_from_string(entry.get<std::string>());
    auto violations = valg::validate_value_table(
        g, table, cap == "1" ? valg::Cap::one : valg::Cap::infinite,
        j.at("exponent").get<std::uint64_t>(), true);
    emit(opts, Json{{"ok", violations.empty()}, {"violations", violations_to_json(violations, g)}},
         violations.empty() ? "value ok" : "value violates the axioms");
    return violations.empty() ? 0 : 1;
  } else if (value_complete->parsed()) {
    Json j = load_config(opts.config);
    valg::CostFunction cost = valg::cost_from_json(j);
    valg::CompletionResult r = valg::complete_cost(cost);
    Json unreachable = Json::array();
    for (valg::Elem x : r.unreachable) unreachable.push_back(valg::element_to_json(cost.group, x));
    Json table = Json::object();
    for (valg::Elem x = 0; x < cost.group.order(); ++x)
      table[valg::element_key(cost.group, x)] =
          r.value[x] ? valg::rat_to_string(*r.value[x]) : "inf";
    emit(opts, Json{{"value", table}, {"unreachable", unreachable}},
         r.unreachable.empty() ? "completion total"
                               : std::to_string(r.unreachable.size()) + " unreachable elements");
  } else if (value_cap->parsed()) {
    Json j = load_config(opts.config);
    valg::ValuedGroup v = valg::valued_group_from_json(j.at("value"));
    valg::ValuedGroup capped = valg::cap_value_at(v, valg::rat_from_string(j.at("bound").get<std::string>()));
    emit(opts, valg::valued_group_to_json(capped), "capped");
  } else if (value_iso->parsed()) {
    Json j = load_config(opts.config);
    valg::ValuedGroup a = valg::valued_group_from_json(j.at("a"));
    valg::ValuedGroup b = valg::valued_group_from_json(j.at("b"));
    auto iso = valg::isometric_isomorphic(a, b);
    emit(opts,
         iso ? Json{{"isomorphic", true}, {"witness", valg::hom_to_json(*iso)}}
             : Json{{"isomorphic", false}},
         iso ? "isometrically isomorphic" : "not isometrically isomorphic");
  } else if (kat_check->parsed()) {
    Json j = load_config(opts.config);
    valg::ValuedGroup g = valg::valued_group_from_json(j.at("group"));
    valg::KatetovMap f = valg::katetov_from_json(g.group, j.at("katetov"));
    std::uint64_t n = j.at("N").get<std::uint64_t>();
    auto w = valg::admissibility_violation(g, f, n);
    Json out{{"admissible", !w.has_value()}};
    if (w) {
      Json tuple = Json::array();
      for (valg::Elem x : w->tuple) tuple.push_back(valg::element_to_json(g.group, x));
      out["witness"] = Json{{"tuple", tuple},
                            {"lhs", valg::rat_to_string(w->lhs)},
                            {"rhs", valg::rat_to_string(w->rhs)},
                            {"subgroup_form", w->subgroup_form}};
    }
    emit(opts, out, w ? "inadmissible for exponent " + std::to_string(n) : "admissible");
  } else if (kat_extend->parsed() || kat_midpoint->parsed()) {
    Json j = load_config(opts.config);
    valg::ValuedGroup g = valg::valued_group_from_json(j.at("group"));
    valg::OneGenExtension ext =
        kat_extend->parsed()
            ? valg::extend_onegen(g, valg::katetov_from_json(g.group, j.at("katetov")),
                                  j.at("N").get<std::uint64_t>(), g.cap)
            : valg::midpoint_extend(g, valg::element_from_json(g.group, j.at("x")),
                                    valg::element_from_json(g.group, j.at("y")));
    emit(opts,
         Json{{"result", valg::valued_group_to_json(ext.result)},
              {"embedding", valg::hom_to_json(ext.embedding)},
              {"witness", valg::element_to_json(ext.result.group, ext.witness)},
              {"adjoined_order", ext.adjoined_order},
              {"M", valg::rat_to_string(ext.bound_m)},
              {"c", valg::rat_to_string(ext.min_f)}},
         "extension of order " + std::to_string(ext.result.group.order()));
  } else if (kat_realize->parsed()) {
    Json j = load_config(opts.config);
    valg::ValuedGroup g = valg::valued_group_from_json(j.at("group"));
    valg::KatetovMap f = valg::katetov_from_json(g.group, j.at("katetov"));
    auto b = valg::find_realizer(g, f);
    emit(opts,
         b ? Json{{"realized", true}, {"witness", valg::element_to_json(g.group, *b)}}
           : Json{{"realized", false}},
         b ? "realized" : "no realizer inside the group");
  } else if (valext_grid->parsed()) {
    Json j = load_config(opts.config);
    valg::ValuedGroup d = valg::valued_group_from_json(j.at("group"));
    valg::Subgroup d0 = subgroup_from_config(d.group, j.at("subgroup"));
    valg::ValuedGroup out = valg::extend_value_grid(
        d, d0, j.at("grid_log2").get<int>(), valg::rat_from_string(j.at("eps").get<std::string>()),
        d.cap);
    emit(opts, valg::valued_group_to_json(out), "grid extension ok");
  } else if (valext_modulus->parsed()) {
    Json j = load_config(opts.config);
    valg::ValuedGroup d = valg::valued_group_from_json(j.at("group"));
    valg::Subgroup d0 = subgroup_from_config(d.group, j.at("subgroup"));
    std::vector<valg::Rat> lambda0(d0.elements.size());
    for (const auto& [key, entry] : j.at("lambda0").items()) {
      valg::Elem x = valg::element_from_key(d.group, key);
      auto it = std::lower_bound(d0.elements.begin(), d0.elements.end(), x);
      if (it == d0.elements.end() || *it != x) valg::fail("schema", "lambda0 key outside subgroup");
      lambda0[it - d0.elements.begin()] = valg::rat_from_string(entry.get<std::string>());
    }
    valg::Modulus omega = valg::make_modulus(pl_from_json(j.at("omega")));
    std::optional<valg::OrtTriple> ort;
    if (j.contains("rho") && j.contains("tau"))
      ort = valg::OrtTriple{omega, valg::make_modulus(pl_from_json(j.at("rho"))),
                            valg::make_modulus(pl_from_json(j.at("tau")))};
    auto ext = valg::extend_semivalue_modulus(d, d0, lambda0, omega, ort);
    emit(opts, valg::semivalue_to_json(ext.result),
         ext.result.is_value() ? "extension is a value" : "extension is a semivalue");
  } else if (am_a1->parsed()) {
    Json j = load_config(opts.config);
    valg::ValuedGroup d0 = valg::valued_group_from_json(j.at("d0"));
    valg::ValuedGroup d1 = valg::valued_group_from_json(j.at("d1"));
    valg::ValuedGroup d2 = valg::valued_group_from_json(j.at("d2"));
    valg::AmalgamResult res = valg::amalgamate(d0, d1, d2, valg::hom_from_json(j.at("phi1")),
                                               valg::hom_from_json(j.at("phi2")));
    emit(opts,
         Json{{"result", valg::valued_group_to_json(res.result)},
              {"psi1", valg::hom_to_json(res.psi1)},
              {"psi2", valg::hom_to_json(res.psi2)}},
         "amalgam of order " + std::to_string(res.result.group.order()));
  } else if (am_a2->parsed()) {
    Json j = load_config(opts.config);
    valg::ValuedGroup d1 = valg::valued_group_from_json(j.at("d1"));
    valg::Subgroup d0 = subgroup_from_config(d1.group, j.at("d0"));
    valg::ValuedGroup d2 = valg::valued_group_from_json(j.at("d2"));
    std::vector<valg::Elem> u;
    for (const Json& e : j.at("u")) u.push_back(valg::element_from_json(d2.group, e));
    valg::AmalgamResult res =
        valg::amalgamate_approx(d1, d0, d2, u, valg::hom_from_json(j.at("v")),
                                valg::rat_from_string(j.at("eps").get<std::string>()));
    emit(opts,
         Json{{"result", valg::valued_group_to_json(res.result)},
              {"psi1", valg::hom_to_json(res.psi1)},
              {"psi2", valg::hom_to_json(res.psi2)},
              {"sup_distance", valg::rat_to_string(res.sup_distance)}},
         "achieved sup distance " + valg::rat_to_string(res.sup_distance));
  } else if (am_a3->parsed()) {
    Json j = load_config(opts.config);
    valg::ValuedGroup d1 = valg::valued_group_from_json(j.at("d1"));
    valg::Subgroup e1 = subgroup_from_config(d1.group, j.at("e1"));
    valg::Subgroup e2 = subgroup_from_config(d1.group, j.at("e2"));
    valg::ValuedGroup d2 = valg::valued_group_from_json(j.at("d2"));
    std::vector<valg::Elem> phi1, phi2;
    for (const Json& e : j.at("phi1")) phi1.push_back(valg::element_from_json(d2.group, e));
    for (const Json& e : j.at("phi2")) phi2.push_back(valg::element_from_json(d2.group, e));
    valg::AmalgamResult res = valg::amalgamate_mixed(
        d1, e1, e2, d2, phi1, phi2, valg::rat_from_string(j.at("eps").get<std::string>()));
    emit(opts,
         Json{{"result", valg::valued_group_to_json(res.result)},
              {"sup_distance", valg::rat_to_string(res.sup_distance)}},
         "achieved sup distance " + valg::rat_to_string(res.sup_distance));
  } else if (free_build->parsed() || free_pd->parsed() || free_matching->parsed() ||
             free_induce->parsed()) {
    Json j = load_config(opts.config);
    valg::FiniteMetricSpace x = valg::metric_from_json(j.at("space"));
    std::uint64_t n = j.at("N").get<std::uint64_t>();
    std::string cap = j.contains("cap") ? j.at("cap").get<std::string>() : "inf";
    valg::FreeValuedGroup fvg =
        valg::free_group(x, n, cap == "1" ? valg::Cap::one : valg::Cap::infinite);
    if (free_build->parsed()) {
      emit(opts, valg::valued_group_to_json(fvg.as_valued_group()),
           "free group of order " + std::to_string(fvg.carrier.order()));
    } else if (free_pd->parsed()) {
      valg::Elem f = valg::element_from_json(fvg.carrier, j.at("element"));
      emit(opts, Json{{"value", valg::rat_to_string(fvg.value[f])}},
           "p_d = " + valg::rat_to_string(fvg.value[f]));
    } else if (free_matching->parsed()) {
      valg::Elem f = valg::element_from_json(fvg.carrier, j.at("element"));
      valg::Rat m = valg::pd_matching(fvg, f);
      emit(opts, Json{{"value", valg::rat_to_string(m)}}, "matching = " + valg::rat_to_string(m));
    } else {
      valg::ValuedGroup target = valg::valued_group_from_json(j.at("target"));
      std::vector<valg::Elem> u;
      for (const Json& e : j.at("u")) u.push_back(valg::element_from_json(target.group, e));
      valg::InducedHom ind = valg::induced_hom(u, fvg, target);
      emit(opts,
           Json{{"hom", valg::hom_to_json(ind.hom)},
                {"lipschitz", valg::rat_to_string(ind.lipschitz_constant)},
                {"transfer_verified", ind.transfer_verified}},
           "Lipschitz constant " + valg::rat_to_string(ind.lipschitz_constant));
    }
  } else if (word_cmd->parsed()) {
    if (zn != 0) {
      valg::FiniteAbelianGroup g(std::vector<std::uint64_t>(zn, zn));
      std::set<valg::Elem> gens;
      for (std::size_t a = 0; a < zn; ++a) {
        gens.insert(g.basis(a));
        gens.insert(g.neg(g.basis(a)));
        for (std::size_t b = 0; b < zn; ++b)
          if (a != b) gens.insert(g.sub(g.basis(a), g.basis(b)));
      }
      valg::GeneratingSet f{g, {gens.begin(), gens.end()}, std::nullopt};
      valg::ValuedGroup metric = valg::word_metric(f);
      valg::Elem diag = g.zero();
      for (std::size_t a = 0; a < zn; ++a) diag = g.add(diag, g.basis(a));
      emit(opts,
           Json{{"order", g.order()},
                {"pair_norm", valg::rat_to_string(metric.p(g.sub(g.basis(0), g.basis(1))))},
                {"diagonal_norm", valg::rat_to_string(metric.p(diag))}},
           "||e_1 - e_2|| = " + valg::rat_to_string(metric.p(g.sub(g.basis(0), g.basis(1)))) +
               ", ||sum e_j|| = " + valg::rat_to_string(metric.p(diag)));
    } else {
      Json j = load_config(opts.config);
      valg::FiniteAbelianGroup g = valg::group_from_json(j.at("group"));
      valg::GeneratingSet f{g, {}, std::nullopt};
      for (const Json& e : j.at("gens")) f.gens.push_back(valg::element_from_json(g, e));
      if (j.contains("weights")) {
        std::vector<valg::Rat> weights;
        for (const Json& w : j.at("weights")) weights.push_back(valg::rat_from_string(w.get<std::string>()));
        f.weights = std::move(weights);
      }
      valg::Rat alpha =
          j.contains("alpha") ? valg::rat_from_string(j.at("alpha").get<std::string>()) : valg::Rat(1);
      valg::ValuedGroup metric = valg::word_metric(f, alpha);
      emit(opts, valg::valued_group_to_json(metric), "word metric computed");
    }
  } else if (chain_build->parsed()) {
    Json j = load_config(opts.config);
    valg::ChainConfig config = valg::chain_config_from_json(j);
    valg::Catalog catalog = valg::enumerate_catalog(config);
    valg::Chain chain = valg::build_chain(catalog);
    emit(opts, valg::chain_to_json(chain),
         "catalog " + std::to_string(catalog.entries.size()) + " entries; final order " +
             std::to_string(chain.final_stage().group.order()) + "; ledger " +
             std::to_string(chain.ledger.size()) + (chain.drained ? "; drained" : "; BUDGET HIT"));
    return chain.drained ? 0 : 1;
  } else if (chain_verify->parsed()) {
    Json j = load_config(opts.config);
    valg::Catalog catalog = valg::catalog_from_json(j.at("catalog"));
    valg::ValuedGroup last = valg::valued_group_from_json(j.at("stages").back());
    valg::VerifyReport report = valg::verify_extension_property(last, catalog);
    emit(opts,
         Json{{"tasks", report.tasks},
              {"satisfied", report.satisfied},
              {"embedding_tasks", report.embedding_tasks},
              {"embedded", report.embedded},
              {"complete", report.complete}},
         std::to_string(report.satisfied) + "/" + std::to_string(report.tasks) +
             " extension tasks, " + std::to_string(report.embedded) + "/" +
             std::to_string(report.embedding_tasks) + " embeddings");
    return report.satisfied == report.tasks && report.embedded == report.embedding_tasks ? 0 : 1;
  } else if (chain_export->parsed()) {
    Json j = load_config(opts.config);
    if (opts.format == "dot") {
      valg::Catalog catalog = valg::catalog_from_json(j.at("catalog"));
      valg::Chain chain;  // minimal reconstruction for the diagram
      chain.catalog = std::move(catalog);
      for (const Json& s : j.at("stages"))
        chain.stages.push_back(valg::valued_group_from_json(s));
      for (const Json& entry : j.at("ledger"))
        chain.ledger.push_back(valg::LedgerEntry{entry.at("entry").get<std::size_t>(),
                                                 entry.at("subgroup").get<std::size_t>(),
                                                 {},
                                                 {},
                                                 entry.at("stage").get<std::size_t>(),
                                                 entry.at("via_amalgamation").get<bool>()});
      std::string dot = valg::chain_to_dot(chain);
      if (!opts.out.empty())
        std::ofstream(opts.out, std::ios::binary) << dot;
      else
        std::cout << dot;
      std::cout << "dot diagram with " << chain.stages.size() << " stages\n";
    } else {
      emit(opts, j, "chain re-emitted");
    }
  } else if (pv_norm->parsed()) {
    Json j = load_config(opts.config);
    auto [u, host] = valg::stepfn_from_json(j.at("stepfn"));
    valg::Rat norm = valg::step_norm(u, host);
    Json decomposition = Json::array();
    for (const auto& [t, h] : valg::step_decomposition(u))
      decomposition.push_back(
          Json::array({valg::rat_to_string(t), valg::element_to_json(u.host, h)}));
    emit(opts, Json{{"norm", valg::rat_to_string(norm)}, {"decomposition", decomposition}},
         "||u||_q = " + valg::rat_to_string(norm));
  } else if (pv_check->parsed()) {
    Json j = load_config(opts.config);
    valg::ValuedGroup host = valg::valued_group_from_json(j.at("host"));
    std::vector<valg::StepFunction> samples;
    for (const Json& s : j.at("samples")) {
      valg::StepFunction u{host.group, {}, {}};
      for (const Json& piece : s) {
        u.ends.push_back(valg::rat_from_string(piece.at(0).get<std::string>()));
        u.vals.push_back(valg::element_from_json(host.group, piece.at(1)));
      }
      u.canonicalize();
      samples.push_back(std::move(u));
    }
    std::vector<valg::Rat> ts;
    for (const Json& t : j.at("ts")) ts.push_back(valg::rat_from_string(t.get<std::string>()));
    valg::NormingFunction kappa =
        j.at("kappa").is_string()
            ? (j.at("kappa").get<std::string>() == "nabla"
                   ? valg::make_norming(valg::norming_nabla(), valg::Rat(1))
                   : valg::make_norming(valg::pl_identity(), valg::Rat(1)))
            : valg::make_norming(pl_from_json(j.at("kappa")),
                                 valg::rat_from_string(
                                     j.at("kappa").at("lipschitz").get<std::string>()));
    valg::KappaNormReport report = valg::check_kappa_norm(samples, ts, kappa, host);
    Json violations = Json::array();
    for (const auto& v : report.violations)
      violations.push_back(Json{{"sample", v.sample},
                                {"t", valg::rat_to_string(v.t)},
                                {"lhs", valg::rat_to_string(v.lhs)},
                                {"rhs", valg::rat_to_string(v.rhs)}});
    emit(opts, Json{{"violations", violations}, {"homogeneous", report.homogeneous}},
         report.violations.empty() ? "kappa bound holds on all samples"
                                   : std::to_string(report.violations.size()) + " violations");
    return report.violations.empty() ? 0 : 1;
  } else if (suite_cmd->parsed()) {
    std::cout << "seed: " << opts.seed << "\n";
    std::vector<valg::CriterionResult> results;
    if (suite_name == "all")
      results = valg::run_all_suites(opts.seed, golden);
    else
      results.push_back(valg::run_suite(suite_name, opts.seed, golden));
    bool all_pass = true;
    for (const auto& r : results) {
      std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  (" << r.seconds << "s)  "
                << r.detail << "\n";
      all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const valg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == "usage" || e.code() == "schema" ? 2 : 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
