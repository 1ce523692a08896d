#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mwb/json_io.hpp"
#include "mwb/parse.hpp"

namespace {

using namespace mwb;

int verdict_exit(const Verdict& v) {
  switch (v.kind) {
    case Verdict::Kind::Entailed: return 0;
    case Verdict::Kind::RefutedFinite:
    case Verdict::Kind::RefutedByRecipe: return 1;
    case Verdict::Kind::Unknown: return 2;
  }
  return 2;
}

unsigned default_bound() {
  if (const char* env = std::getenv("MWB_BOUND")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 0 && v <= 16) return static_cast<unsigned>(v);
  }
  return 3;
}

void emit(const Json& j, bool json_mode, const std::string& text) {
  if (json_mode)
    std::cout << versioned(j).dump(2) << '\n';
  else
    std::cout << text;
}

std::string render_proof(const Proof& pf, const std::string& label) {
  std::ostringstream os;
  os << "proof of: " << to_text(pf.goal) << "   (" << label << ")\n";
  if (pf.premises.empty()) {
    os << "  premises: none (the goal is valid)\n";
  } else {
    os << "  premises:\n";
    for (std::size_t i = 0; i < pf.premises.size(); ++i)
      os << "    " << (i + 1) << ". " << to_text(pf.premises[i].formula) << "   ["
         << pf.premises[i].membership << "]\n";
  }
  os << "  core: " << to_text(pf.core) << "\n";
  return os.str();
}

std::string render_verdict(const Verdict& v) {
  std::ostringstream os;
  os << "verdict: " << verdict_kind_name(v.kind) << "\n";
  if (v.proof) os << render_proof(*v.proof, "entailment");
  if (v.countermodel) {
    os << "  countermodel:\n";
    for (const auto& [f, val] : v.countermodel->table())
      os << "    " << to_text(f) << " = " << (val ? "true" : "false") << "\n";
    os << "    default = " << (v.countermodel->table_default() ? "true" : "false") << "\n";
  }
  if (v.recipe_evidence) {
    const auto& ev = *v.recipe_evidence;
    os << "  recipe: " << ev.witness << "\n";
    os << "  theory check: "
       << (ev.theory_report.exact ? "exact (structural, schema-level)" : "sampled only")
       << ", instances checked: " << ev.theory_report.instances_checked << "\n";
    if (!ev.theory_report.exact)
      os << "  note: full theory satisfaction is established on a sample, not machine-proved\n";
  }
  if (v.bound_report)
    os << "  bound: rounds=" << v.bound_report->rounds << " pool=" << v.bound_report->pool_size
       << " candidates=" << v.bound_report->candidates << " " << v.bound_report->note << "\n";
  return os.str();
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

struct ReproduceResult {
  bool ok = false;
  Json json;
  std::string text;
};

ReproduceResult reproduce_knower(const SearchLimits& limits) {
  ReproduceResult r;
  KnowerReport rep = knower_paradox("p", limits);
  r.ok = rep.all_checked;
  r.json = to_json(rep);
  std::ostringstream os;
  os << "theory: " << describe(rep.theory) << "\n"
     << render_proof(rep.not_p, "engine") << render_proof(rep.k_not_p, "simulated necessitation")
     << render_proof(rep.p, "diagonal") << render_proof(rep.contradiction, "contradiction")
     << "all proofs accepted by the kernel: " << (rep.all_checked ? "yes" : "NO") << "\n";
  r.text = os.str();
  return r;
}

ReproduceResult reproduce_weakened(const SearchLimits& limits) {
  ReproduceResult r;
  Certificate cert = Certificate::union_of({Certificate::axiom_v(), Certificate::axiom_k()});
  ConsistencyDemo demo = knower_consistency(cert, AtomSet::none(), "p", limits);
  const bool refuted_exact =
      demo.core_not_p.kind == Verdict::Kind::RefutedByRecipe &&
      demo.core_not_p.recipe_evidence->theory_report.exact;
  const bool sample_ok =
      demo.sample.outcome == SatisfactionReport::Outcome::HoldsOnSample &&
      demo.sample.instances_checked >= 500 && demo.sample.unknown_count == 0;
  const Ternary diag_val = demo.witness.eval(diagonal_axiom("p"));
  const Ternary k_not_p =
      demo.witness.eval(Formula::know(Formula::negation(Formula::atom("p"))));
  r.ok = refuted_exact && sample_ok && diag_val == Ternary::True && k_not_p == Ternary::False;
  r.json = to_json(demo);
  std::ostringstream os;
  os << "core: " << describe(demo.core) << "\nfull: " << describe(demo.full)
     << "\nwitness: " << demo.witness.describe() << "\n"
     << "core does not entail ~p: " << render_verdict(demo.core_not_p)
     << "witness satisfies the diagonal axiom: " << (diag_val == Ternary::True ? "yes" : "NO")
     << "\nwitness falsifies K~p: " << (k_not_p == Ternary::False ? "yes" : "NO") << "\n"
     << "sample: " << demo.sample.instances_checked << " instances, "
     << demo.sample.unknown_count << " unknown, outcome "
     << (demo.sample.outcome == SatisfactionReport::Outcome::HoldsOnSample ? "holds-on-sample"
                                                                           : "NOT holds")
     << "\n";
  r.text = os.str();
  return r;
}

ReproduceResult reproduce_falsify(const Theory& base, GenericityMode mode,
                                  const std::string& expect_violated,
                                  const SearchLimits& limits) {
  ReproduceResult r;
  FalsifyStrategy strategy;
  strategy.limits = limits;
  FalsifyOutcome out = falsify(base, mode, strategy);
  r.json = to_json(out);
  std::ostringstream os;
  if (!out.falsification) {
    os << "no falsification found: " << out.note << "\n";
    r.text = os.str();
    return r;
  }
  const Falsification& f = *out.falsification;
  const bool verified = verify_falsification(f, limits);
  r.ok = verified && to_text(f.violated) == expect_violated;
  os << "base: " << describe(f.base) << "\nextension: " << describe(f.extension)
     << "\natoms: " << to_text(f.s) << "\nviolated: " << to_text(f.violated)
     << (to_text(f.violated) == expect_violated ? "" : "  (UNEXPECTED)")
     << "\nre-verified exactly: " << (verified ? "yes" : "NO") << "\nK-resolutions:\n";
  for (const KResolution& kr : f.trace) {
    os << "  " << to_text(kr.k_formula) << ": " << verdict_kind_name(kr.verdict.kind);
    if (kr.verdict.recipe_evidence) os << " via " << kr.verdict.recipe_evidence->witness;
    os << "\n";
  }
  r.text = os.str();
  return r;
}

ReproduceResult reproduce_superset(Schema which, const SearchLimits& limits) {
  ReproduceResult r;
  SupersetDemo demo = no_superset_demo(which, limits);
  const bool violated_found =
      demo.would_be_witness.outcome == SatisfactionReport::Outcome::Violated;
  r.ok = violated_found && !demo.inconsistency_proofs.empty();
  r.json = to_json(demo);
  std::ostringstream os;
  os << "schema: " << schema_name(demo.schema) << "\ntheory: " << describe(demo.theory) << "\n";
  for (const Proof& pf : demo.inconsistency_proofs) os << render_proof(pf, "inconsistency side");
  os << "would-be derived-model witness: "
     << (violated_found ? "violates " + to_text(*demo.violated) : "NOT violated (unexpected)")
     << "\n"
     << demo.note << "\n";
  r.text = os.str();
  return r;
}

ReproduceResult reproduce_necessitation(const SearchLimits& limits) {
  ReproduceResult r;
  NecessitationDemo demo = necessitation_demo(limits);
  r.ok = demo.lifted_checked && !demo.blocked_error.empty();
  r.json = to_json(demo);
  std::ostringstream os;
  os << "closed theory: " << describe(demo.closed_theory) << "\n"
     << render_proof(demo.base_proof, "base") << render_proof(demo.lifted, "lifted")
     << "lifted proof accepted: " << (demo.lifted_checked ? "yes" : "NO") << "\n"
     << "blocked theory: " << describe(demo.blocked_theory) << "\n"
     << render_proof(demo.blocked_goal_proof, "goal over the weakened theory")
     << "lift blocked: " << demo.blocked_error << "\n";
  r.text = os.str();
  return r;
}

ReproduceResult reproduce_one(const std::string& id, const SearchLimits& limits) {
  if (id == "knower") return reproduce_knower(limits);
  if (id == "weakened") return reproduce_weakened(limits);
  if (id == "kk-not-generic")
    return reproduce_falsify(Theory::of_schemas({Schema::V, Schema::Kdist, Schema::KK}),
                             GenericityMode::Generic, "Kp -> KKp", limits);
  if (id == "vkk")
    return reproduce_falsify(Theory::of_schemas({Schema::V, Schema::KK}),
                             GenericityMode::ClosedGeneric, "Kq -> KKq", limits);
  if (id == "kkk")
    return reproduce_falsify(Theory::of_schemas({Schema::Kdist, Schema::KK}),
                             GenericityMode::ClosedGeneric, "K(p | ~p) -> KK(p | ~p)", limits);
  if (id == "t-superset") return reproduce_superset(Schema::T, limits);
  if (id == "five-superset") return reproduce_superset(Schema::Five, limits);
  if (id == "necessitation") return reproduce_necessitation(limits);
  throw CLI::ValidationError("reproduce", "unknown theorem id '" + id + "'");
}

const char* kReproduceIds[] = {"knower",       "weakened",      "kk-not-generic", "vkk",
                               "kkk",          "t-superset",    "five-superset",  "necessitation"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modal workbench: parsing, entailment, models and genericity for an epistemic "
               "propositional logic"};
  app.require_subcommand(1);

  std::string formula_text, theory_file, model_file, recipe_name, proof_file, mode_name_arg,
      reproduce_id, true_atoms;
  unsigned bound = default_bound();
  std::uint64_t seed = 0xC0FFEEULL;
  unsigned budget = 48;
  bool json_mode = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--json", json_mode, "emit JSON on stdout");
    sub->add_option("--bound", bound, "saturation rounds / prefix depth")
        ->check(CLI::Range(0, 16));
  };

  CLI::App* cmd_parse = app.add_subcommand("parse", "parse a formula and dump its tree");
  cmd_parse->add_option("formula", formula_text)->required();
  add_common(cmd_parse);

  CLI::App* cmd_eval = app.add_subcommand("eval", "evaluate a formula in a model");
  cmd_eval->add_option("formula", formula_text)->required();
  cmd_eval->add_option("--model", model_file, "finite model file");
  cmd_eval->add_option("--recipe", recipe_name, "recipe model (n2, n1, n1k:A, bad:A, allknowing...)");
  cmd_eval->add_option("--theory", theory_file, "derived model over this theory file");
  cmd_eval->add_option("--true-atoms", true_atoms, "derived model: comma list or 'all'");
  add_common(cmd_eval);

  CLI::App* cmd_entails = app.add_subcommand("entails", "decide theory |= goal");
  cmd_entails->add_option("goal", formula_text)->required();
  cmd_entails->add_option("--theory", theory_file)->required();
  add_common(cmd_entails);

  CLI::App* cmd_consistent = app.add_subcommand("consistent", "check theory consistency");
  cmd_consistent->add_option("--theory", theory_file)->required();
  add_common(cmd_consistent);

  CLI::App* cmd_check = app.add_subcommand("prove-check", "check a proof object");
  cmd_check->add_option("--theory", theory_file)->required();
  cmd_check->add_option("--proof", proof_file, "proof JSON file")->required();
  add_common(cmd_check);

  CLI::App* cmd_generic = app.add_subcommand("generic", "genericity certificates and falsification");
  cmd_generic->require_subcommand(1);
  CLI::App* cmd_certify = cmd_generic->add_subcommand("certify", "derive a genericity certificate");
  cmd_certify->add_option("--theory", theory_file)->required();
  cmd_certify->add_option("--mode", mode_name_arg, "generic|closed-generic")->required();
  add_common(cmd_certify);
  CLI::App* cmd_falsify = cmd_generic->add_subcommand("falsify", "search for a falsification");
  cmd_falsify->add_option("--theory", theory_file)->required();
  cmd_falsify->add_option("--mode", mode_name_arg, "generic|closed-generic")->required();
  cmd_falsify->add_option("--seed", seed, "randomized-extension seed");
  cmd_falsify->add_option("--budget", budget, "randomized-extension budget");
  add_common(cmd_falsify);

  CLI::App* cmd_reproduce = app.add_subcommand("reproduce", "run a built-in case study");
  cmd_reproduce->add_option("id", reproduce_id, "knower, weakened, kk-not-generic, vkk, kkk, "
                                                "t-superset, five-superset, necessitation, all")
      ->required();
  cmd_reproduce->add_option("--seed", seed, "seed for randomized searches");
  add_common(cmd_reproduce);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  SearchLimits limits;
  limits.rounds = bound;

  try {
    if (*cmd_parse) {
      Formula f = parse(formula_text);
      Json j;
      j["ast"] = ast_json(f);
      j["printed"] = to_text(f);
      emit(j, json_mode, ast_json(f).dump(2) + "\n" + to_text(f) + "\n");
      return 0;
    }

    if (*cmd_eval) {
      Formula f = parse(formula_text);
      Model m = Model::finite_table({}, false);
      if (!model_file.empty()) {
        m = load_model_file(model_file);
      } else if (!recipe_name.empty()) {
        m = Model::from_recipe(parse_recipe(recipe_name));
      } else if (!theory_file.empty()) {
        AtomSet s;
        if (true_atoms == "all") {
          s = AtomSet::all();
        } else if (!true_atoms.empty()) {
          std::set<std::string> names;
          std::string cur;
          for (char c : true_atoms + ",") {
            if (c == ',') {
              if (!cur.empty()) names.insert(cur);
              cur.clear();
            } else {
              cur += c;
            }
          }
          s = AtomSet::of(std::move(names));
        }
        m = derived_model(load_theory_file(theory_file), s, limits);
      } else {
        throw CLI::ValidationError("eval", "one of --model, --recipe, --theory is required");
      }
      const Ternary v = m.eval(f);
      Json j;
      j["model"] = to_json(m);
      j["formula"] = to_text(f);
      j["value"] = v == Ternary::True ? "true" : (v == Ternary::False ? "false" : "unknown");
      emit(j, json_mode,
           std::string(v == Ternary::True ? "true" : (v == Ternary::False ? "false" : "unknown")) +
               "\n");
      return v == Ternary::True ? 0 : (v == Ternary::False ? 1 : 2);
    }

    if (*cmd_entails) {
      const Theory t = load_theory_file(theory_file);
      const Formula goal = parse(formula_text);
      const Verdict v = entails(t, goal, limits);
      Json j = to_json(v);
      j["goal"] = to_text(goal);
      emit(j, json_mode, render_verdict(v));
      return verdict_exit(v);
    }

    if (*cmd_consistent) {
      const Theory t = load_theory_file(theory_file);
      const ConsistencyResult r = is_consistent(t, limits);
      emit(to_json(r), json_mode, [&] {
        std::ostringstream os;
        os << "consistency: "
           << (r.kind == ConsistencyResult::Kind::Consistent
                   ? "consistent"
                   : (r.kind == ConsistencyResult::Kind::Inconsistent ? "inconsistent"
                                                                      : "unknown"))
           << "\n";
        if (r.witness) os << "  witness: " << r.witness->describe() << "\n";
        if (r.witness_report)
          os << "  evidence: " << (r.witness_report->exact ? "exact" : "sampled (not a proof)")
             << ", instances checked: " << r.witness_report->instances_checked << "\n";
        if (r.proof) os << render_proof(*r.proof, "inconsistency");
        return os.str();
      }());
      return r.kind == ConsistencyResult::Kind::Consistent
                 ? 0
                 : (r.kind == ConsistencyResult::Kind::Inconsistent ? 1 : 2);
    }

    if (*cmd_check) {
      const Theory t = load_theory_file(theory_file);
      std::ifstream in(proof_file);
      if (!in) throw std::runtime_error("cannot open proof file: " + proof_file);
      Json pj = Json::parse(in);
      const Proof pf = proof_from_json(pj);
      const bool ok = check_proof(t, pf, limits);
      Json j;
      j["accepted"] = ok;
      j["proof"] = to_json(pf);
      emit(j, json_mode, std::string(ok ? "accepted" : "rejected") + "\n");
      return ok ? 0 : 1;
    }

    if (*cmd_certify) {
      const Theory t = load_theory_file(theory_file);
      const GenericityMode mode =
          mode_name_arg == "generic" ? GenericityMode::Generic : GenericityMode::ClosedGeneric;
      if (mode_name_arg != "generic" && mode_name_arg != "closed-generic")
        throw CLI::ValidationError("certify", "--mode must be generic or closed-generic");
      const CertifyResult r = certify(t, mode);
      Json j;
      j["derivable"] = r.certificate.has_value();
      if (r.certificate) j["certificate"] = to_json(*r.certificate);
      else j["reason"] = r.reason;
      emit(j, json_mode,
           r.certificate ? "certificate: " + r.certificate->describe() + "\n"
                         : "not-derivable: " + r.reason + "\n");
      return r.certificate ? 0 : 1;
    }

    if (*cmd_falsify) {
      const Theory t = load_theory_file(theory_file);
      if (mode_name_arg != "generic" && mode_name_arg != "closed-generic")
        throw CLI::ValidationError("falsify", "--mode must be generic or closed-generic");
      const GenericityMode mode =
          mode_name_arg == "generic" ? GenericityMode::Generic : GenericityMode::ClosedGeneric;
      FalsifyStrategy strategy;
      strategy.bound = bound;
      if (const char* cfg = std::getenv("MWB_FALSIFY_CONFIG")) {
        std::ifstream in(cfg);
        if (!in) throw std::runtime_error(std::string("cannot open config file: ") + cfg);
        const Json j = Json::parse(in);
        strategy.random_budget = j.value("random_budget", strategy.random_budget);
        strategy.seed = j.value("seed", strategy.seed);
        strategy.bound = j.value("bound", strategy.bound);
        strategy.gen.max_depth = j.value("axiom_depth", strategy.gen.max_depth);
        strategy.gen.max_k_depth = j.value("k_depth", strategy.gen.max_k_depth);
        if (j.contains("atoms"))
          strategy.gen.atoms = j.at("atoms").get<std::vector<std::string>>();
      }
      strategy.limits = limits;
      if (cmd_falsify->count("--seed")) strategy.seed = seed;
      if (cmd_falsify->count("--budget")) strategy.random_budget = budget;
      if (cmd_falsify->count("--bound")) strategy.bound = bound;
      const FalsifyOutcome out = falsify(t, mode, strategy);
      emit(to_json(out), json_mode, [&] {
        std::ostringstream os;
        if (out.falsification) {
          os << "falsified: " << to_text(out.falsification->violated) << "\n  extension: "
             << describe(out.falsification->extension) << "\n  atoms: "
             << to_text(out.falsification->s) << "\n";
        } else {
          os << "not-found-at-budget: " << out.note << "\n";
        }
        return os.str();
      }());
      return out.falsification ? 0 : 2;
    }

    if (*cmd_reproduce) {
      Timer timer;
      bool ok = true;
      Json all = Json::object();
      std::ostringstream text;
      if (reproduce_id == "all") {
        for (const char* id : kReproduceIds) {
          Timer one;
          ReproduceResult r = reproduce_one(id, limits);
          ok = ok && r.ok;
          all[id] = std::move(r.json);
          text << "=== " << id << " ===\n" << r.text;
          std::cerr << id << ": " << (r.ok ? "ok" : "FAILED") << " (" << one.ms() << " ms)\n";
        }
      } else {
        ReproduceResult r = reproduce_one(reproduce_id, limits);
        ok = r.ok;
        all = std::move(r.json);
        text << r.text;
      }
      std::cerr << "elapsed: " << timer.ms() << " ms\n";
      emit(all, json_mode, text.str());
      return ok ? 0 : 1;
    }
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
