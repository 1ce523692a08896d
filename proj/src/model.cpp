#include "mwb/model.hpp"

#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "mwb/parse.hpp"

namespace mwb {

std::string Recipe::name() const {
  switch (kind) {
    case Kind::N2Transparent: return "n2";
    case Kind::N1OverN2: return "n1";
    case Kind::N1OverN2WithKnP: return "n1k:" + atom;
    case Kind::BadFormula: return "bad:" + atom;
    case Kind::AllKnowing: {
      std::string listed;
      for (const auto& a : atoms.names()) {
        if (!listed.empty()) listed += ',';
        listed += a;
      }
      if (atoms.cofinite()) return listed.empty() ? "allknowing:all" : "allknowing:all-except:" + listed;
      return listed.empty() ? "allknowing" : "allknowing:" + listed;
    }
  }
  return "?";
}

Recipe parse_recipe(std::string_view text) {
  if (text == "n2") return Recipe::n2();
  if (text == "n1") return Recipe::n1();
  auto rest_after = [&](std::string_view prefix) -> std::optional<std::string_view> {
    if (text.size() > prefix.size() && text.substr(0, prefix.size()) == prefix)
      return text.substr(prefix.size());
    return std::nullopt;
  };
  if (auto r = rest_after("n1k:")) return Recipe::n1_kn_override(std::string(*r));
  if (auto r = rest_after("bad:")) return Recipe::bad_formula(std::string(*r));
  auto split_names = [](std::string_view list) {
    std::set<std::string> names;
    std::string cur;
    for (char c : list) {
      if (c == ',') {
        if (!cur.empty()) names.insert(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) names.insert(cur);
    return names;
  };
  if (text == "allknowing") return Recipe::all_knowing(AtomSet::none());
  if (text == "allknowing:all") return Recipe::all_knowing(AtomSet::all());
  if (auto r = rest_after("allknowing:all-except:"))
    return Recipe::all_knowing(AtomSet::complement_of(split_names(*r)));
  if (auto r = rest_after("allknowing:")) return Recipe::all_knowing(AtomSet::of(split_names(*r)));
  throw std::invalid_argument(
      "unknown recipe '" + std::string(text) +
      "' (expected n2, n1, n1k:ATOM, bad:ATOM, allknowing[:a,b|:all|:all-except:a,b])");
}

bool is_bad_formula(const Formula& f, const std::string& atom) {
  const Formula* cur = &f;
  while (cur->kind() == Formula::Kind::Implies) cur = &cur->rhs();
  if (cur->kind() != Formula::Kind::Or) return false;
  const Formula& l = cur->lhs();
  const Formula& r = cur->rhs();
  return l.is_atom() && l.atom_name() == atom && r.kind() == Formula::Kind::Not &&
         r.child().is_atom() && r.child().atom_name() == atom;
}

namespace {

// Two-valued recipe evaluation with a depth/cycle guard. `evaluator` is 0 for
// the recipe itself and 1 for the transparent sub-evaluator (N2) used by the
// layered recipes.
struct RecipeEvalCtx {
  const EvalLimits& limits;
  unsigned depth = 0;
  std::set<std::pair<int, Formula>, bool (*)(const std::pair<int, Formula>&,
                                             const std::pair<int, Formula>&)>
      active{+[](const std::pair<int, Formula>& a, const std::pair<int, Formula>& b) {
        if (a.first != b.first) return a.first < b.first;
        return Formula::compare(a.second, b.second) < 0;
      }};
};

bool eval_recipe_rec(const Recipe& r, int evaluator, const Formula& f, RecipeEvalCtx& ctx);

bool eval_know_body(const Recipe& r, int evaluator, const Formula& body, RecipeEvalCtx& ctx) {
  if (++ctx.depth > ctx.limits.max_depth)
    throw EvalError("recipe evaluation exceeded the recursion-depth limit");
  auto key = std::make_pair(evaluator, body);
  if (!ctx.active.insert(key).second)
    throw EvalError("recipe evaluation cycle detected on " + to_text(body));
  const bool v = eval_recipe_rec(r, evaluator, body, ctx);
  ctx.active.erase(key);
  --ctx.depth;
  return v;
}

bool eval_recipe_rec(const Recipe& r, int evaluator, const Formula& f, RecipeEvalCtx& ctx) {
  return eval_classical(f, [&](const Formula& basic) -> bool {
    const bool transparent = evaluator == 1;
    if (basic.is_atom()) {
      if (transparent || r.kind == Recipe::Kind::N2Transparent) return false;
      if (r.kind == Recipe::Kind::AllKnowing) return r.atoms.contains(basic.atom_name());
      return true;  // N1OverN2, N1OverN2WithKnP, BadFormula: all atoms true
    }
    const Formula& body = basic.child();
    if (transparent) return eval_know_body(r, 1, body, ctx);
    switch (r.kind) {
      case Recipe::Kind::N2Transparent:
        return eval_know_body(r, 1, body, ctx);
      case Recipe::Kind::N1OverN2:
        return eval_know_body(r, 1, body, ctx);
      case Recipe::Kind::N1OverN2WithKnP:
        return is_kn_of_atom(body, r.atom) || eval_know_body(r, 1, body, ctx);
      case Recipe::Kind::BadFormula:
        return !is_bad_formula(body, r.atom);
      case Recipe::Kind::AllKnowing:
        return true;
    }
    return false;
  });
}

bool eval_recipe(const Recipe& r, const Formula& f, const EvalLimits& limits) {
  RecipeEvalCtx ctx{limits};
  const int evaluator = r.kind == Recipe::Kind::N2Transparent ? 1 : 0;
  return eval_recipe_rec(r, evaluator, f, ctx);
}

Ternary t_not(Ternary a) {
  if (a == Ternary::Unknown) return Ternary::Unknown;
  return a == Ternary::True ? Ternary::False : Ternary::True;
}

Ternary t_and(Ternary a, Ternary b) {
  if (a == Ternary::False || b == Ternary::False) return Ternary::False;
  if (a == Ternary::True && b == Ternary::True) return Ternary::True;
  return Ternary::Unknown;
}

Ternary t_or(Ternary a, Ternary b) {
  if (a == Ternary::True || b == Ternary::True) return Ternary::True;
  if (a == Ternary::False && b == Ternary::False) return Ternary::False;
  return Ternary::Unknown;
}

}  // namespace

struct Model::Impl {
  Kind kind;
  // finite table
  Assignment table;
  bool table_default = false;
  // recipe
  struct Recipe recipe;
  // derived
  Theory theory;
  AtomSet s;
  std::function<Ternary(const Formula&)> k_oracle;
  mutable std::map<Formula, Ternary, FormulaLess> memo;
  mutable std::mutex memo_mu;
};

Model Model::finite_table(Assignment assignments, bool default_value) {
  for (const auto& [f, v] : assignments) {
    (void)v;
    if (!f.is_basic())
      throw std::invalid_argument("finite model assigns a non-basic formula: " + to_text(f));
  }
  Model m;
  m.impl_ = std::make_shared<Impl>();
  m.impl_->kind = Kind::FiniteTable;
  m.impl_->table = std::move(assignments);
  m.impl_->table_default = default_value;
  return m;
}

Model Model::from_recipe(struct Recipe r) {
  Model m;
  m.impl_ = std::make_shared<Impl>();
  m.impl_->kind = Kind::Recipe;
  m.impl_->recipe = std::move(r);
  return m;
}

Model Model::derived(Theory t, AtomSet s, std::function<Ternary(const Formula&)> k_oracle) {
  Model m;
  m.impl_ = std::make_shared<Impl>();
  m.impl_->kind = Kind::Derived;
  m.impl_->theory = std::move(t);
  m.impl_->s = std::move(s);
  m.impl_->k_oracle = std::move(k_oracle);
  return m;
}

Model::Kind Model::kind() const { return impl_->kind; }

const Recipe& Model::recipe() const {
  if (impl_->kind != Kind::Recipe) throw std::logic_error("not a recipe model");
  return impl_->recipe;
}

const Theory& Model::derived_theory() const {
  if (impl_->kind != Kind::Derived) throw std::logic_error("not a derived model");
  return impl_->theory;
}

const AtomSet& Model::derived_atoms() const {
  if (impl_->kind != Kind::Derived) throw std::logic_error("not a derived model");
  return impl_->s;
}

const Assignment& Model::table() const {
  if (impl_->kind != Kind::FiniteTable) throw std::logic_error("not a finite-table model");
  return impl_->table;
}

bool Model::table_default() const {
  if (impl_->kind != Kind::FiniteTable) throw std::logic_error("not a finite-table model");
  return impl_->table_default;
}

// Lazy over unknowns: a decided child that determines the connective's value
// short-circuits the other side.
Ternary Model::eval_derived(const Model::Impl& impl, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      return to_ternary(impl.s.contains(f.atom_name()));
    case Formula::Kind::Know: {
      {
        std::lock_guard lock(impl.memo_mu);
        auto it = impl.memo.find(f);
        if (it != impl.memo.end()) return it->second;
      }
      const Ternary v = impl.k_oracle(f.child());
      std::lock_guard lock(impl.memo_mu);
      impl.memo.emplace(f, v);  // determinism makes concurrent writes agree
      return v;
    }
    case Formula::Kind::Not:
      return t_not(eval_derived(impl, f.child()));
    case Formula::Kind::And: {
      const Ternary l = eval_derived(impl, f.lhs());
      if (l == Ternary::False) return Ternary::False;
      return t_and(l, eval_derived(impl, f.rhs()));
    }
    case Formula::Kind::Or: {
      const Ternary l = eval_derived(impl, f.lhs());
      if (l == Ternary::True) return Ternary::True;
      return t_or(l, eval_derived(impl, f.rhs()));
    }
    case Formula::Kind::Implies: {
      const Ternary l = eval_derived(impl, f.lhs());
      if (l == Ternary::False) return Ternary::True;
      return t_or(t_not(l), eval_derived(impl, f.rhs()));
    }
  }
  return Ternary::Unknown;
}

Ternary Model::eval(const Formula& f, const EvalLimits& limits) const {
  switch (impl_->kind) {
    case Kind::FiniteTable:
      return to_ternary(eval_under(f, impl_->table, impl_->table_default));
    case Kind::Recipe:
      return to_ternary(eval_recipe(impl_->recipe, f, limits));
    case Kind::Derived:
      return eval_derived(*impl_, f);
  }
  return Ternary::Unknown;
}

std::string Model::describe() const {
  switch (impl_->kind) {
    case Kind::FiniteTable: {
      std::string out = "finite-table(" + std::to_string(impl_->table.size()) + " entries, default " +
                        (impl_->table_default ? "true" : "false") + ")";
      return out;
    }
    case Kind::Recipe:
      return "recipe " + impl_->recipe.name();
    case Kind::Derived:
      return "derived(" + mwb::describe(impl_->theory) + ", " + to_text(impl_->s) + ")";
  }
  return "?";
}

SatisfactionReport satisfies_theory(const Model& m, const Theory& t,
                                    std::span<const Formula> candidates, unsigned bound,
                                    const EvalLimits& limits) {
  SatisfactionReport rep;
  if (m.kind() == Model::Kind::Recipe)
    rep.exact = recipe_satisfies_structurally(m.recipe(), t) == Ternary::True;
  const std::vector<Formula> instances = enumerate_instances(t, candidates, bound);
  for (const Formula& inst : instances) {
    Ternary v = m.eval(inst, limits);
    // a classically valid member is true in every model
    if (v == Ternary::Unknown && is_valid(inst)) v = Ternary::True;
    ++rep.instances_checked;
    if (v == Ternary::False) {
      rep.outcome = SatisfactionReport::Outcome::Violated;
      rep.witness = inst;
      rep.exact = false;
      return rep;
    }
    if (v == Ternary::Unknown) {
      if (rep.unknown_count == 0) rep.witness = inst;
      ++rep.unknown_count;
    }
  }
  rep.outcome = rep.unknown_count > 0 ? SatisfactionReport::Outcome::Unknown
                                      : SatisfactionReport::Outcome::HoldsOnSample;
  return rep;
}

namespace {

// Schema satisfaction that holds for every instance, by the shape of the
// recipe's K-assignment. Unknown means per-instance checking is required.
Ternary schema_table(Recipe::Kind k, Schema s) {
  switch (k) {
    case Recipe::Kind::N2Transparent:
      return Ternary::True;  // every schema collapses to a classical tautology
    case Recipe::Kind::N1OverN2:
      return s == Schema::T ? Ternary::Unknown : Ternary::True;
    case Recipe::Kind::N1OverN2WithKnP:
      return (s == Schema::T || s == Schema::Kdist) ? Ternary::Unknown : Ternary::True;
    case Recipe::Kind::BadFormula:
      return (s == Schema::T || s == Schema::V) ? Ternary::Unknown : Ternary::True;
    case Recipe::Kind::AllKnowing:
      return s == Schema::T ? Ternary::Unknown : Ternary::True;
  }
  return Ternary::Unknown;
}

// All K^n prefixes of x, n >= 0, under the recipe.
Ternary closed_axiom_value(const Recipe& r, const Formula& x, const EvalLimits& limits) {
  switch (r.kind) {
    case Recipe::Kind::N2Transparent:
      return to_ternary(eval_recipe(r, x, limits));
    case Recipe::Kind::N1OverN2:
      return to_ternary(eval_recipe(r, x, limits) && eval_recipe(Recipe::n2(), x, limits));
    case Recipe::Kind::N1OverN2WithKnP:
      if (is_kn_of_atom(x, r.atom)) return Ternary::True;
      return to_ternary(eval_recipe(r, x, limits) && eval_recipe(Recipe::n2(), x, limits));
    case Recipe::Kind::BadFormula:
      return to_ternary(eval_recipe(r, x, limits) && !is_bad_formula(x, r.atom));
    case Recipe::Kind::AllKnowing:
      return to_ternary(eval_recipe(r, x, limits));
  }
  return Ternary::Unknown;
}

Ternary t_all(Ternary acc, Ternary v) {
  if (acc == Ternary::False || v == Ternary::False) return Ternary::False;
  if (acc == Ternary::Unknown || v == Ternary::Unknown) return Ternary::Unknown;
  return Ternary::True;
}

}  // namespace

Ternary recipe_satisfies_structurally(const Recipe& r, const Theory& t) {
  const EvalLimits limits;
  if (t.is_all_formulas()) return Ternary::False;  // contains p & ~p
  if (t.is_deductive_closure()) {
    // A model of the base satisfies every consequence of the base.
    return recipe_satisfies_structurally(r, t.deductive_base());
  }
  Ternary acc = Ternary::True;
  for (const Formula& ax : t.open_part().axioms)
    acc = t_all(acc, to_ternary(eval_recipe(r, ax, limits)));
  for (Schema s : t.open_part().schemas) acc = t_all(acc, schema_table(r.kind, s));
  for (const Formula& ax : t.closed_part().axioms) acc = t_all(acc, closed_axiom_value(r, ax, limits));
  for (Schema s : t.closed_part().schemas) acc = t_all(acc, schema_table(r.kind, s));
  return acc;
}

Model parse_model(std::string_view text) {
  Assignment table;
  bool default_value = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("model line " + std::to_string(line_no) + ": " + msg);
  };
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string line(text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos));
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    const std::size_t eq = line.find('=');
    std::string lhs = eq == std::string::npos ? line : line.substr(0, eq);
    while (!lhs.empty() && (lhs.back() == ' ' || lhs.back() == '\t' || lhs.back() == '\r')) lhs.pop_back();
    while (!lhs.empty() && (lhs.front() == ' ' || lhs.front() == '\t')) lhs.erase(lhs.begin());
    if (lhs.empty() && eq == std::string::npos) continue;
    if (eq == std::string::npos) fail("expected 'formula = true|false'");
    std::string rhs = line.substr(eq + 1);
    std::erase_if(rhs, [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
    bool value = false;
    if (rhs == "true") value = true;
    else if (rhs == "false") value = false;
    else fail("value must be 'true' or 'false'");
    if (lhs == "default") {
      default_value = value;
      continue;
    }
    Formula f = parse(lhs);
    if (!f.is_basic()) fail("left-hand side must be a basic formula");
    table[f] = value;
  }
  return Model::finite_table(std::move(table), default_value);
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::string to_text(const Model& m) {
  if (m.kind() != Model::Kind::FiniteTable)
    throw std::invalid_argument("only finite-table models have a file serialization");
  std::string out;
  for (const auto& [f, v] : m.table()) {
    out += to_text(f);
    out += " = ";
    out += v ? "true" : "false";
    out += '\n';
  }
  out += "default = ";
  out += m.table_default() ? "true" : "false";
  out += '\n';
  return out;
}

}  // namespace mwb
