#include "mwb/theory.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "mwb/parse.hpp"
#include "mwb/valuation.hpp"

namespace mwb {

const char* schema_name(Schema s) {
  switch (s) {
    case Schema::V: return "V";
    case Schema::Kdist: return "K";
    case Schema::T: return "T";
    case Schema::KK: return "KK";
    case Schema::Five: return "5";
  }
  return "?";
}

std::optional<Schema> schema_from_name(std::string_view name) {
  if (name == "V") return Schema::V;
  if (name == "K") return Schema::Kdist;
  if (name == "T") return Schema::T;
  if (name == "KK") return Schema::KK;
  if (name == "5") return Schema::Five;
  return std::nullopt;
}

Formula kdist_instance(const Formula& a, const Formula& b) {
  return Formula::implication(Formula::know(Formula::implication(a, b)),
                              Formula::implication(Formula::know(a), Formula::know(b)));
}

Formula t_instance(const Formula& a) { return Formula::implication(Formula::know(a), a); }

Formula kk_instance(const Formula& a) {
  return Formula::implication(Formula::know(a), Formula::know(Formula::know(a)));
}

Formula five_instance(const Formula& a) {
  const Formula ka = Formula::know(a);
  return Formula::implication(Formula::negation(ka), Formula::know(Formula::negation(ka)));
}

bool matches_schema(Schema s, const Formula& f) {
  using K = Formula::Kind;
  switch (s) {
    case Schema::V:
      return f.is_know() && is_valid(f.child());
    case Schema::Kdist: {
      if (f.kind() != K::Implies) return false;
      const Formula& l = f.lhs();
      const Formula& r = f.rhs();
      if (!l.is_know() || l.child().kind() != K::Implies) return false;
      if (r.kind() != K::Implies || !r.lhs().is_know() || !r.rhs().is_know()) return false;
      return l.child().lhs() == r.lhs().child() && l.child().rhs() == r.rhs().child();
    }
    case Schema::T:
      return f.kind() == K::Implies && f.lhs().is_know() && f.lhs().child() == f.rhs();
    case Schema::KK:
      return f.kind() == K::Implies && f.lhs().is_know() && f.rhs().is_know() &&
             f.rhs().child().is_know() && f.lhs().child() == f.rhs().child().child();
    case Schema::Five: {
      if (f.kind() != K::Implies) return false;
      const Formula& l = f.lhs();
      const Formula& r = f.rhs();
      if (l.kind() != K::Not || !l.child().is_know()) return false;
      if (!r.is_know() || r.child().kind() != K::Not || !r.child().child().is_know()) return false;
      return l.child() == r.child().child();
    }
  }
  return false;
}

void Theory::Part::add_axiom(Formula f) {
  auto it = std::lower_bound(axioms.begin(), axioms.end(), f, FormulaLess{});
  if (it != axioms.end() && *it == f) return;
  axioms.insert(it, std::move(f));
}

Theory Theory::of_axioms(std::vector<Formula> axioms) {
  Theory t;
  for (auto& f : axioms) t.open_.add_axiom(std::move(f));
  return t;
}

Theory Theory::of_schemas(std::set<Schema> schemas) {
  Theory t;
  t.open_.schemas = std::move(schemas);
  return t;
}

Theory Theory::all_formulas() {
  Theory t;
  t.all_ = true;
  return t;
}

Theory Theory::deductive_closure(Theory base) {
  if (base.is_deductive_closure())
    throw std::invalid_argument("nested deductive-closure wrappers are not supported");
  Theory t;
  t.base_ = std::make_shared<Theory>(std::move(base));
  return t;
}

static void require_plain(const Theory& t, const char* op) {
  if (t.is_deductive_closure())
    throw std::invalid_argument(std::string(op) + " is not defined for deductive-closure wrappers");
}

Theory& Theory::add_axiom(Formula f) {
  require_plain(*this, "add_axiom");
  open_.add_axiom(std::move(f));
  return *this;
}

Theory& Theory::add_schema(Schema s) {
  require_plain(*this, "add_schema");
  open_.schemas.insert(s);
  return *this;
}

Theory& Theory::add_closed_axiom(Formula f) {
  require_plain(*this, "add_closed_axiom");
  closed_.add_axiom(std::move(f));
  return *this;
}

Theory& Theory::add_closed_schema(Schema s) {
  require_plain(*this, "add_closed_schema");
  closed_.schemas.insert(s);
  return *this;
}

const Theory& Theory::deductive_base() const {
  if (!base_) throw std::logic_error("not a deductive-closure wrapper");
  return *base_;
}

bool Theory::is_closed() const {
  if (all_) return true;
  if (base_) return false;
  return open_.empty();
}

bool Theory::is_finite() const {
  return !all_ && !base_ && open_.schemas.empty() && closed_.empty();
}

bool Theory::has_schema(Schema s) const {
  if (all_) return true;
  if (base_) return base_->has_schema(s);
  return open_.schemas.count(s) > 0 || closed_.schemas.count(s) > 0;
}

std::vector<Formula> Theory::explicit_axioms() const {
  if (base_) return base_->explicit_axioms();
  std::vector<Formula> out = open_.axioms;
  out.insert(out.end(), closed_.axioms.begin(), closed_.axioms.end());
  std::sort(out.begin(), out.end(), FormulaLess{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::set<std::string> Theory::atoms() const {
  std::set<std::string> out;
  for (const Formula& f : explicit_axioms()) {
    auto a = collect_atoms(f);
    out.insert(a.begin(), a.end());
  }
  return out;
}

bool operator==(const Theory& a, const Theory& b) {
  if (a.all_ != b.all_) return false;
  if ((a.base_ == nullptr) != (b.base_ == nullptr)) return false;
  if (a.base_ && !(*a.base_ == *b.base_)) return false;
  return a.open_ == b.open_ && a.closed_ == b.closed_;
}

namespace {

bool part_member(const Theory::Part& part, const Formula& f, const char* part_label,
                 std::string* why) {
  if (std::binary_search(part.axioms.begin(), part.axioms.end(), f, FormulaLess{})) {
    if (why) *why = std::string(part_label) + "axiom";
    return true;
  }
  for (Schema s : part.schemas) {
    if (matches_schema(s, f)) {
      if (why) *why = std::string(part_label) + "instance of schema " + schema_name(s);
      return true;
    }
  }
  return false;
}

}  // namespace

Ternary contains_syntactic(const Theory& t, const Formula& f, std::string* why) {
  if (t.is_all_formulas()) {
    if (why) *why = "member of the all-formulas theory";
    return Ternary::True;
  }
  if (t.is_deductive_closure()) {
    // Base members are consequences of the base; anything else needs the engine.
    if (contains_syntactic(t.deductive_base(), f, why) == Ternary::True) {
      if (why) *why = "deductive closure: base " + *why;
      return Ternary::True;
    }
    return Ternary::Unknown;
  }
  if (part_member(t.open_part(), f, "", why)) return Ternary::True;
  const unsigned depth = know_prefix_depth(f);
  for (unsigned k = 0; k <= depth; ++k) {
    std::string inner_why;
    if (part_member(t.closed_part(), strip_know(f, k), "", why ? &inner_why : nullptr)) {
      if (why) {
        *why = k == 0 ? "closed-part " + inner_why
                      : "K^" + std::to_string(k) + " prefix of closed-part " + inner_why;
      }
      return Ternary::True;
    }
  }
  return Ternary::False;
}

Theory close(Theory t) {
  require_plain(t, "close");
  if (t.all_) return t;
  for (Formula& f : t.open_.axioms) t.closed_.add_axiom(std::move(f));
  t.closed_.schemas.insert(t.open_.schemas.begin(), t.open_.schemas.end());
  t.open_ = Theory::Part{};
  return t;
}

Theory union_theories(const Theory& a, const Theory& b) {
  if (a.is_deductive_closure() || b.is_deductive_closure())
    throw std::invalid_argument("union with a deductive-closure wrapper is rejected");
  if (a.is_all_formulas() || b.is_all_formulas()) return Theory::all_formulas();
  Theory out = a;
  for (const Formula& f : b.open_.axioms) out.open_.add_axiom(f);
  out.open_.schemas.insert(b.open_.schemas.begin(), b.open_.schemas.end());
  for (const Formula& f : b.closed_.axioms) out.closed_.add_axiom(f);
  out.closed_.schemas.insert(b.closed_.schemas.begin(), b.closed_.schemas.end());
  return out;
}

namespace {

using FormulaHashSet = std::unordered_set<Formula, FormulaHash>;

void instantiate_part(const Theory::Part& part, std::span<const Formula> candidates,
                      FormulaHashSet& out) {
  for (const Formula& f : part.axioms) out.insert(f);
  for (Schema s : part.schemas) {
    switch (s) {
      case Schema::V:
        for (const Formula& c : candidates)
          if (is_valid(c)) out.insert(Formula::know(c));
        break;
      case Schema::Kdist:
        for (const Formula& a : candidates)
          for (const Formula& b : candidates) out.insert(kdist_instance(a, b));
        break;
      case Schema::T:
        for (const Formula& a : candidates) out.insert(t_instance(a));
        break;
      case Schema::KK:
        for (const Formula& a : candidates) out.insert(kk_instance(a));
        break;
      case Schema::Five:
        for (const Formula& a : candidates) out.insert(five_instance(a));
        break;
    }
  }
}

}  // namespace

std::vector<Formula> enumerate_instances(const Theory& t, std::span<const Formula> candidates,
                                         unsigned prefix_bound) {
  if (t.is_all_formulas()) {
    FormulaSet out(candidates.begin(), candidates.end());
    return {out.begin(), out.end()};
  }
  if (t.is_deductive_closure())
    return enumerate_instances(t.deductive_base(), candidates, prefix_bound);

  FormulaHashSet out;
  instantiate_part(t.open_part(), candidates, out);
  FormulaHashSet closed_base;
  instantiate_part(t.closed_part(), candidates, closed_base);
  for (const Formula& m : closed_base)
    for (unsigned k = 0; k <= prefix_bound; ++k) out.insert(kn(k, m));
  std::vector<Formula> result(out.begin(), out.end());
  std::sort(result.begin(), result.end(), FormulaLess{});
  return result;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

Theory parse_theory(std::string_view text) {
  Theory t;
  bool close_all = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::size_t sp = line.find_first_of(" \t");
      std::string_view word = line.substr(0, sp);
      std::string_view rest = sp == std::string_view::npos ? std::string_view{} : trim(line.substr(sp));
      if (word == "#") continue;  // comment line
      if (word == "#closed") {
        close_all = true;
        continue;
      }
      if (word == "#schema" || word == "#schema-kn") {
        auto s = schema_from_name(rest);
        if (!s)
          throw std::invalid_argument("theory line " + std::to_string(line_no) +
                                      ": unknown schema '" + std::string(rest) + "'");
        if (word == "#schema") t.add_schema(*s);
        else t.add_closed_schema(*s);
        continue;
      }
      if (word == "#axiom-kn") {
        t.add_closed_axiom(parse(rest));
        continue;
      }
      throw std::invalid_argument("theory line " + std::to_string(line_no) + ": unknown directive '" +
                                  std::string(word) + "'");
    }
    t.add_axiom(parse(line));
  }
  return close_all ? close(std::move(t)) : t;
}

Theory load_theory_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open theory file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_theory(buf.str());
}

std::string to_text(const Theory& t) {
  if (t.is_all_formulas() || t.is_deductive_closure())
    throw std::invalid_argument("this theory form has no file serialization");
  std::string out;
  for (Schema s : t.open_part().schemas) {
    out += "#schema ";
    out += schema_name(s);
    out += '\n';
  }
  for (const Formula& f : t.open_part().axioms) {
    out += to_text(f);
    out += '\n';
  }
  for (Schema s : t.closed_part().schemas) {
    out += "#schema-kn ";
    out += schema_name(s);
    out += '\n';
  }
  for (const Formula& f : t.closed_part().axioms) {
    out += "#axiom-kn ";
    out += to_text(f);
    out += '\n';
  }
  return out;
}

namespace {

std::string describe_part(const Theory::Part& p) {
  std::string out;
  bool first = true;
  auto sep = [&] {
    if (!first) out += " u ";
    first = false;
  };
  for (Schema s : p.schemas) {
    sep();
    out += schema_name(s);
  }
  if (!p.axioms.empty()) {
    sep();
    out += '{';
    for (std::size_t i = 0; i < p.axioms.size(); ++i) {
      if (i) out += ", ";
      out += to_text(p.axioms[i]);
    }
    out += '}';
  }
  if (out.empty()) out = "{}";
  return out;
}

}  // namespace

std::string describe(const Theory& t) {
  if (t.is_all_formulas()) return "all-formulas";
  if (t.is_deductive_closure()) return "consequences(" + describe(t.deductive_base()) + ")";
  std::string out;
  if (!t.closed_part().empty()) out += "close(" + describe_part(t.closed_part()) + ")";
  if (!t.open_part().empty()) {
    if (!out.empty()) out += " u ";
    out += describe_part(t.open_part());
  }
  if (out.empty()) out = "{}";
  return out;
}

}  // namespace mwb
