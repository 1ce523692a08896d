#include "mwb/valuation.hpp"

#include <cassert>
#include <unordered_map>

namespace mwb {

bool eval_classical(const Formula& f, const std::function<bool(const Formula&)>& basic) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Know:
      return basic(f);
    case Formula::Kind::Not:
      return !eval_classical(f.child(), basic);
    case Formula::Kind::And:
      return eval_classical(f.lhs(), basic) && eval_classical(f.rhs(), basic);
    case Formula::Kind::Or:
      return eval_classical(f.lhs(), basic) || eval_classical(f.rhs(), basic);
    case Formula::Kind::Implies:
      return !eval_classical(f.lhs(), basic) || eval_classical(f.rhs(), basic);
  }
  return false;
}

bool eval_under(const Formula& f, const Assignment& a, bool default_value) {
  return eval_classical(f, [&](const Formula& b) {
    auto it = a.find(b);
    return it == a.end() ? default_value : it->second;
  });
}

std::vector<Formula> collect_basics(std::span<const Formula> formulas) {
  FormulaSet set;
  for (const Formula& f : formulas) collect_basic_subformulas(f, set);
  return {set.begin(), set.end()};
}

namespace {

// Literal encoding: variable v -> literals 2v (positive) and 2v+1 (negative).
inline int lit_of(int var, bool positive) { return 2 * var + (positive ? 0 : 1); }
inline int lit_var(int lit) { return lit >> 1; }
inline bool lit_positive(int lit) { return (lit & 1) == 0; }
inline int lit_negate(int lit) { return lit ^ 1; }

struct Cnf {
  int nvars = 0;
  std::vector<std::vector<int>> clauses;
};

// Equisatisfiable clausal encoding. Basic formulas get the low variable
// indices in sorted order so extracted models are deterministic.
class Encoder {
public:
  explicit Encoder(const std::vector<Formula>& basics) {
    for (const Formula& b : basics) {
      var_of_.emplace(b, cnf_.nvars);
      ++cnf_.nvars;
    }
    n_basics_ = cnf_.nvars;
  }

  void add_constraint(const Formula& f) { cnf_.clauses.push_back({encode(f)}); }

  Cnf take() { return std::move(cnf_); }
  int basic_count() const { return n_basics_; }

private:
  int fresh_var() { return cnf_.nvars++; }

  int encode(const Formula& f) {
    if (f.kind() == Formula::Kind::Not) return lit_negate(encode(f.child()));
    auto it = var_of_.find(f);
    if (it != var_of_.end()) return lit_of(it->second, true);
    assert(!f.is_basic());  // every basic was registered up front

    const int a = encode(f.lhs());
    const int b = encode(f.rhs());
    const int x = fresh_var();
    const int xl = lit_of(x, true);
    switch (f.kind()) {
      case Formula::Kind::And:
        cnf_.clauses.push_back({lit_negate(xl), a});
        cnf_.clauses.push_back({lit_negate(xl), b});
        cnf_.clauses.push_back({xl, lit_negate(a), lit_negate(b)});
        break;
      case Formula::Kind::Or:
        cnf_.clauses.push_back({xl, lit_negate(a)});
        cnf_.clauses.push_back({xl, lit_negate(b)});
        cnf_.clauses.push_back({lit_negate(xl), a, b});
        break;
      case Formula::Kind::Implies:
        cnf_.clauses.push_back({lit_negate(xl), lit_negate(a), b});
        cnf_.clauses.push_back({xl, a});
        cnf_.clauses.push_back({xl, lit_negate(b)});
        break;
      default:
        assert(false);
    }
    var_of_.emplace(f, x);
    return xl;
  }

  Cnf cnf_;
  int n_basics_ = 0;
  std::unordered_map<Formula, int, FormulaHash> var_of_;
};

// Iterative DPLL with unit propagation. Branching picks the lowest
// unassigned variable, false first, so results are deterministic.
class Solver {
public:
  explicit Solver(Cnf cnf) : cnf_(std::move(cnf)) {
    val_.assign(cnf_.nvars, -1);
    occurs_.assign(2 * cnf_.nvars, {});
    n_unassigned_.assign(cnf_.clauses.size(), 0);
    n_true_.assign(cnf_.clauses.size(), 0);
    for (std::size_t ci = 0; ci < cnf_.clauses.size(); ++ci) {
      n_unassigned_[ci] = static_cast<int>(cnf_.clauses[ci].size());
      for (int lit : cnf_.clauses[ci]) occurs_[lit].push_back(static_cast<int>(ci));
    }
  }

  bool solve() {
    // seed propagation with unit clauses
    for (std::size_t ci = 0; ci < cnf_.clauses.size(); ++ci) {
      if (cnf_.clauses[ci].empty()) return false;
      if (cnf_.clauses[ci].size() == 1 && !enqueue_clause_unit(static_cast<int>(ci))) return false;
    }
    if (!propagate()) return false;

    while (true) {
      const int v = pick_var();
      if (v < 0) return true;
      decisions_.push_back({v, static_cast<int>(trail_.size()), false});
      bool ok = assign(v, false) && propagate();
      while (!ok) {
        // unwind to the most recent decision still holding an untried phase
        while (!decisions_.empty() && decisions_.back().tried_true) {
          undo_to(decisions_.back().trail_mark);
          decisions_.pop_back();
        }
        if (decisions_.empty()) return false;
        Decision& d = decisions_.back();
        undo_to(d.trail_mark);
        d.tried_true = true;
        ok = assign(d.var, true) && propagate();
      }
    }
  }

  const std::vector<int8_t>& values() const { return val_; }

private:
  struct Decision {
    int var;
    int trail_mark;
    bool tried_true;
  };

  int pick_var() const {
    for (int v = 0; v < cnf_.nvars; ++v)
      if (val_[v] < 0) return v;
    return -1;
  }

  bool enqueue_clause_unit(int ci) {
    // find the single unassigned literal and enqueue it
    for (int lit : cnf_.clauses[ci]) {
      const int v = lit_var(lit);
      if (val_[v] < 0) {
        queue_.push_back(lit);
        return true;
      }
      if (static_cast<bool>(val_[v]) == lit_positive(lit)) return true;  // already satisfied
    }
    return false;  // all false
  }

  bool assign(int var, bool value) {
    assert(val_[var] < 0);
    val_[var] = value ? 1 : 0;
    trail_.push_back(var);
    // counter updates must run to completion so undo_to stays consistent
    bool conflict = false;
    const int sat_lit = lit_of(var, value);
    const int fail_lit = lit_negate(sat_lit);
    for (int ci : occurs_[sat_lit]) {
      --n_unassigned_[ci];
      ++n_true_[ci];
    }
    for (int ci : occurs_[fail_lit]) {
      --n_unassigned_[ci];
      if (!conflict && n_true_[ci] == 0) {
        if (n_unassigned_[ci] == 0) conflict = true;
        else if (n_unassigned_[ci] == 1 && !enqueue_clause_unit(ci)) conflict = true;
      }
    }
    return !conflict;
  }

  bool propagate() {
    while (!queue_.empty()) {
      const int lit = queue_.back();
      queue_.pop_back();
      const int v = lit_var(lit);
      if (val_[v] >= 0) {
        if (static_cast<bool>(val_[v]) != lit_positive(lit)) return false;
        continue;
      }
      if (!assign(v, lit_positive(lit))) return false;
    }
    return true;
  }

  void undo_to(int mark) {
    queue_.clear();
    while (static_cast<int>(trail_.size()) > mark) {
      const int var = trail_.back();
      trail_.pop_back();
      const bool value = val_[var] == 1;
      const int sat_lit = lit_of(var, value);
      for (int ci : occurs_[sat_lit]) {
        ++n_unassigned_[ci];
        --n_true_[ci];
      }
      for (int ci : occurs_[lit_negate(sat_lit)]) ++n_unassigned_[ci];
      val_[var] = -1;
    }
  }

  Cnf cnf_;
  std::vector<int8_t> val_;
  std::vector<std::vector<int>> occurs_;
  std::vector<int> n_unassigned_;
  std::vector<int> n_true_;
  std::vector<int> trail_;
  std::vector<int> queue_;
  std::vector<Decision> decisions_;
};

}  // namespace

std::optional<Assignment> satisfying_assignment(const std::vector<Formula>& constraints) {
  const std::vector<Formula> basics = collect_basics(constraints);
  Encoder enc(basics);
  for (const Formula& f : constraints) enc.add_constraint(f);
  Solver solver(enc.take());
  if (!solver.solve()) return std::nullopt;
  Assignment a;
  const auto& vals = solver.values();
  for (std::size_t i = 0; i < basics.size(); ++i) {
    a.emplace(basics[i], vals[i] == 1);  // untouched variables default to false
  }
  return a;
}

bool is_valid(const Formula& f) {
  return !satisfying_assignment({Formula::negation(f)}).has_value();
}

}  // namespace mwb
