#include "mwb/formula.hpp"

#include <cassert>
#include <functional>

namespace mwb {

struct Formula::Node {
  Kind kind;
  std::string name;  // Atom only
  Formula a, b;      // child / lhs, rhs
  std::size_t hash = 0;
  std::uint32_t size = 1;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

}  // namespace

Formula Formula::atom(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->name = std::move(name);
  n->hash = mix(static_cast<std::size_t>(Kind::Atom), std::hash<std::string>{}(n->name));
  n->size = 1;
  return Formula(std::move(n));
}

Formula Formula::negation(Formula f) {
  assert(f.valid());
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->a = std::move(f);
  n->size = static_cast<std::uint32_t>(n->a.node_count() + 1);
  n->hash = mix(static_cast<std::size_t>(Kind::Not), n->a.hash());
  return Formula(std::move(n));
}

Formula Formula::know(Formula f) {
  assert(f.valid());
  auto n = std::make_shared<Node>();
  n->kind = Kind::Know;
  n->a = std::move(f);
  n->size = static_cast<std::uint32_t>(n->a.node_count() + 1);
  n->hash = mix(static_cast<std::size_t>(Kind::Know), n->a.hash());
  return Formula(std::move(n));
}

static Formula::Kind binary_kind_check(Formula::Kind k) {
  assert(k == Formula::Kind::And || k == Formula::Kind::Or || k == Formula::Kind::Implies);
  return k;
}

Formula Formula::conjunction(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->kind = binary_kind_check(Kind::And);
  n->a = std::move(l);
  n->b = std::move(r);
  n->size = static_cast<std::uint32_t>(n->a.node_count() + n->b.node_count() + 1);
  n->hash = mix(mix(static_cast<std::size_t>(Kind::And), n->a.hash()), n->b.hash());
  return Formula(std::move(n));
}

Formula Formula::disjunction(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->kind = binary_kind_check(Kind::Or);
  n->a = std::move(l);
  n->b = std::move(r);
  n->size = static_cast<std::uint32_t>(n->a.node_count() + n->b.node_count() + 1);
  n->hash = mix(mix(static_cast<std::size_t>(Kind::Or), n->a.hash()), n->b.hash());
  return Formula(std::move(n));
}

Formula Formula::implication(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->kind = binary_kind_check(Kind::Implies);
  n->a = std::move(l);
  n->b = std::move(r);
  n->size = static_cast<std::uint32_t>(n->a.node_count() + n->b.node_count() + 1);
  n->hash = mix(mix(static_cast<std::size_t>(Kind::Implies), n->a.hash()), n->b.hash());
  return Formula(std::move(n));
}

Formula::Kind Formula::kind() const {
  assert(node_);
  return node_->kind;
}

const std::string& Formula::atom_name() const {
  assert(node_ && node_->kind == Kind::Atom);
  return node_->name;
}

const Formula& Formula::lhs() const {
  assert(node_ && (node_->kind == Kind::And || node_->kind == Kind::Or || node_->kind == Kind::Implies));
  return node_->a;
}

const Formula& Formula::rhs() const {
  assert(node_ && (node_->kind == Kind::And || node_->kind == Kind::Or || node_->kind == Kind::Implies));
  return node_->b;
}

const Formula& Formula::child() const {
  assert(node_ && (node_->kind == Kind::Not || node_->kind == Kind::Know));
  return node_->a;
}

std::size_t Formula::node_count() const {
  assert(node_);
  return node_->size;
}

std::size_t Formula::hash() const {
  assert(node_);
  return node_->hash;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.hash() != b.hash() || a.node_->size != b.node_->size || a.node_->kind != b.node_->kind) return false;
  switch (a.node_->kind) {
    case Formula::Kind::Atom:
      return a.node_->name == b.node_->name;
    case Formula::Kind::Not:
    case Formula::Kind::Know:
      return a.node_->a == b.node_->a;
    default:
      return a.node_->a == b.node_->a && a.node_->b == b.node_->b;
  }
}

int Formula::compare(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return 0;
  assert(a.node_ && b.node_);
  if (a.node_->size != b.node_->size) return a.node_->size < b.node_->size ? -1 : 1;
  if (a.node_->kind != b.node_->kind)
    return static_cast<int>(a.node_->kind) < static_cast<int>(b.node_->kind) ? -1 : 1;
  switch (a.node_->kind) {
    case Kind::Atom: {
      int c = a.node_->name.compare(b.node_->name);
      return c < 0 ? -1 : (c == 0 ? 0 : 1);
    }
    case Kind::Not:
    case Kind::Know:
      return compare(a.node_->a, b.node_->a);
    default: {
      int c = compare(a.node_->a, b.node_->a);
      if (c != 0) return c;
      return compare(a.node_->b, b.node_->b);
    }
  }
}

namespace {

// Precedence: Implies 1 < Or 2 < And 3 < unary 4.
int precedence_of(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Implies: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    default: return 4;
  }
}

void print_rec(const Formula& f, int min_prec, std::string& out) {
  const int prec = precedence_of(f.kind());
  const bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (f.kind()) {
    case Formula::Kind::Atom:
      out += f.atom_name();
      break;
    case Formula::Kind::Not:
      out += '~';
      print_rec(f.child(), 4, out);
      break;
    case Formula::Kind::Know:
      out += 'K';
      if (f.child().is_basic() || f.child().kind() == Formula::Kind::Not) {
        print_rec(f.child(), 4, out);
      } else {
        out += '(';
        print_rec(f.child(), 0, out);
        out += ')';
      }
      break;
    case Formula::Kind::And:
      print_rec(f.lhs(), 3, out);
      out += " & ";
      print_rec(f.rhs(), 4, out);
      break;
    case Formula::Kind::Or:
      print_rec(f.lhs(), 2, out);
      out += " | ";
      print_rec(f.rhs(), 3, out);
      break;
    case Formula::Kind::Implies:
      print_rec(f.lhs(), 2, out);
      out += " -> ";
      print_rec(f.rhs(), 1, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string to_text(const Formula& f) {
  std::string out;
  print_rec(f, 0, out);
  return out;
}

Formula kn(unsigned n, Formula f) {
  for (unsigned i = 0; i < n; ++i) f = Formula::know(std::move(f));
  return f;
}

unsigned know_prefix_depth(const Formula& f) {
  unsigned n = 0;
  const Formula* cur = &f;
  while (cur->is_know()) {
    ++n;
    cur = &cur->child();
  }
  return n;
}

Formula strip_know(Formula f, unsigned n) {
  for (unsigned i = 0; i < n; ++i) {
    assert(f.is_know());
    f = f.child();
  }
  return f;
}

bool is_kn_of_atom(const Formula& f, const std::string& name) {
  const Formula* cur = &f;
  while (cur->is_know()) cur = &cur->child();
  return cur->is_atom() && cur->atom_name() == name;
}

void collect_basic_subformulas(const Formula& f, FormulaSet& out) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Know:
      out.insert(f);
      return;
    case Formula::Kind::Not:
      collect_basic_subformulas(f.child(), out);
      return;
    default:
      collect_basic_subformulas(f.lhs(), out);
      collect_basic_subformulas(f.rhs(), out);
      return;
  }
}

FormulaSet basic_subformulas(const Formula& f) {
  FormulaSet out;
  collect_basic_subformulas(f, out);
  return out;
}

namespace {

void collect_atoms_rec(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      out.insert(f.atom_name());
      return;
    case Formula::Kind::Not:
    case Formula::Kind::Know:
      collect_atoms_rec(f.child(), out);
      return;
    default:
      collect_atoms_rec(f.lhs(), out);
      collect_atoms_rec(f.rhs(), out);
      return;
  }
}

}  // namespace

std::set<std::string> collect_atoms(const Formula& f) {
  std::set<std::string> out;
  collect_atoms_rec(f, out);
  return out;
}

AtomSet AtomSet::of(std::set<std::string> names) {
  AtomSet s;
  s.cofinite_ = false;
  s.names_ = std::move(names);
  return s;
}

AtomSet AtomSet::complement_of(std::set<std::string> names) {
  AtomSet s;
  s.cofinite_ = true;
  s.names_ = std::move(names);
  return s;
}

bool AtomSet::contains(const std::string& name) const {
  const bool listed = names_.count(name) > 0;
  return cofinite_ ? !listed : listed;
}

std::string to_text(const AtomSet& s) {
  std::string out = s.cofinite() ? "all-except{" : "{";
  bool first = true;
  for (const auto& n : s.names()) {
    if (!first) out += ", ";
    first = false;
    out += n;
  }
  out += '}';
  return out;
}

}  // namespace mwb
