#include "dya/engine.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "search.hpp"

namespace dya {

using AK = AssertionKind;
using detail::Leaf;
using detail::Searcher;

namespace {

std::string fresh_name(std::size_t& counter, const std::set<std::string>& taken) {
  for (;;) {
    std::string w = "w" + std::to_string(counter++);
    if (!taken.count(w)) return w;
  }
}

struct Pending {
  Fact fact;
  int depth = 0;
};

// Facts of one branch while it is being expanded.
struct State {
  std::vector<Fact> facts;
  AssertionSet seen;
  std::deque<Pending> work, exq, orq;
};

}  // namespace

struct Context::Tree {
  enum Kind { LeafK, ExEK, OrEK } kind = LeafK;
  std::unique_ptr<Leaf> leaf;  // the branch itself, or the trunk before an or-split
  Fact fact;
  std::string var;
  std::unique_ptr<Tree> a, b;
};

namespace {

struct Builder {
  const TermSet& X;
  const DyKnowledge& dy;
  Mode mode;
  const SearchBudget& budget;
  std::set<std::string>& taken;
  std::set<std::string>& witnesses;
  std::size_t& counter;
  std::size_t leaves = 0;
  bool overflow = false;

  void process(State& s) {
    while (!s.work.empty()) {
      Pending p = std::move(s.work.front());
      s.work.pop_front();
      const Assertion& a = p.fact.a;
      if (!s.seen.insert(a).second) continue;
      switch (a.kind()) {
        case AK::And:
          for (int i = 0; i < 2; ++i)
            s.work.push_back({Fact{a.subs()[i], make_proof(Rule::AndE, a.subs()[i], {p.fact.proof}, {}, {}, i)},
                              p.depth});
          break;
        case AK::Says:
          s.facts.push_back(p.fact);
          s.work.push_back({Fact{a.body(), make_proof(Rule::Strip, a.body(), {p.fact.proof})}, p.depth});
          break;
        case AK::Exists:
          s.facts.push_back(p.fact);
          if (mode == Mode::Full) s.exq.push_back(p);
          break;
        case AK::Or:
          s.facts.push_back(p.fact);
          if (mode == Mode::Full) s.orq.push_back(p);
          break;
        default:
          s.facts.push_back(p.fact);
      }
    }
  }

  std::unique_ptr<Context::Tree> leaf(const State& s) {
    auto t = std::make_unique<Context::Tree>();
    t->leaf = std::make_unique<Leaf>(detail::make_leaf(s.facts, X, dy, budget.merge_cap));
    return t;
  }

  std::unique_ptr<Context::Tree> expand(State s) {
    process(s);
    if (!s.exq.empty()) {
      Pending ex = std::move(s.exq.front());
      s.exq.pop_front();
      const std::string w = fresh_name(counter, taken);
      taken.insert(w);
      witnesses.insert(w);
      Assertion inst = instantiate(ex.fact.a, Term::var(w));
      auto t = std::make_unique<Context::Tree>();
      t->kind = Context::Tree::ExEK;
      t->fact = ex.fact;
      t->var = w;
      s.work.push_back({Fact{inst, make_proof(Rule::Ax, inst)}, ex.depth + 1});
      t->a = expand(std::move(s));
      return t;
    }
    if (!s.orq.empty()) {
      if (leaves + 2 > budget.branch_cap) {
        overflow = true;
        ++leaves;
        return leaf(s);
      }
      Pending d = std::move(s.orq.front());
      s.orq.pop_front();
      auto t = leaf(s);
      t->kind = Context::Tree::OrEK;
      t->fact = d.fact;
      State left = s;
      left.work.push_back({Fact{d.fact.a.left(), make_proof(Rule::Ax, d.fact.a.left())}, d.depth});
      s.work.push_back({Fact{d.fact.a.right(), make_proof(Rule::Ax, d.fact.a.right())}, d.depth});
      t->a = expand(std::move(left));
      t->b = expand(std::move(s));
      return t;
    }
    ++leaves;
    return leaf(s);
  }
};

struct Outcome {
  ProofRef proof;
  bool exhausted = false;
};

Outcome solve_leaf(const Leaf& leaf, const DyKnowledge& dy, const Assertion& goal, const TermSet& gterms,
                   const SearchBudget& budget) {
  const EGraph* g = &leaf.graph;
  std::optional<EGraph> local;
  if (std::any_of(gterms.begin(), gterms.end(), [&](const Term& t) { return !leaf.graph.lookup(t); })) {
    local.emplace(leaf.graph);
    for (const Term& t : gterms) local->add(t);
    local->close();
    g = &*local;
  }
  if (g->exhausted()) return {nullptr, true};
  Searcher s(leaf, *g, dy, budget.step_cap);
  if (!s.decide(goal)) return {nullptr, s.exhausted()};
  return {s.build(goal), false};
}

Outcome prove_tree(const Context::Tree& t, const DyKnowledge& dy, const Assertion& goal, const TermSet& gterms,
                   const SearchBudget& budget) {
  switch (t.kind) {
    case Context::Tree::LeafK:
      return solve_leaf(*t.leaf, dy, goal, gterms, budget);
    case Context::Tree::ExEK: {
      Outcome o = prove_tree(*t.a, dy, goal, gterms, budget);
      if (o.proof) o.proof = make_proof(Rule::ExE, goal, {t.fact.proof, o.proof}, {}, Term::var(t.var));
      return o;
    }
    case Context::Tree::OrEK: {
      Outcome trunk = solve_leaf(*t.leaf, dy, goal, gterms, budget);
      if (trunk.proof) return trunk;
      Outcome l = prove_tree(*t.a, dy, goal, gterms, budget);
      if (!l.proof) return l;
      Outcome r = prove_tree(*t.b, dy, goal, gterms, budget);
      if (!r.proof) return r;
      return {make_proof(Rule::OrE, goal, {t.fact.proof, l.proof, r.proof}), false};
    }
  }
  return {};
}

bool tree_bottom(const Context::Tree& t) {
  switch (t.kind) {
    case Context::Tree::LeafK:
      return t.leaf->graph.bottom();
    case Context::Tree::ExEK:
      return tree_bottom(*t.a);
    case Context::Tree::OrEK:
      return t.leaf->graph.bottom() || (tree_bottom(*t.a) && tree_bottom(*t.b));
  }
  return false;
}

}  // namespace

Context::Context(TermSet X, AssertionSet phi, Mode mode, SearchBudget budget, std::set<std::string> reserved)
    : X_(std::move(X)), phi_(std::move(phi)), mode_(mode), budget_(budget), reserved_(std::move(reserved)) {
  dy_ = std::make_shared<const DyKnowledge>(X_);
  std::set<std::string> taken = reserved_;
  for (const Term& x : X_) collect_vars(x, taken);
  for (const Assertion& a : phi_) collect_all_vars(a, taken);
  std::size_t counter = 0;
  Builder b{X_, *dy_, mode_, budget_, taken, witness_names_, counter};
  State s;
  for (const Assertion& a : phi_) s.work.push_back({Fact{a, make_proof(Rule::Ax, a)}, 0});
  tree_ = b.expand(std::move(s));
  overflow_ = b.overflow;
  leaves_ = b.leaves;
}

Context::~Context() = default;

std::size_t Context::branches() const { return leaves_; }
bool Context::bottom_everywhere() const { return tree_bottom(*tree_); }

Verdict Context::prove(const Assertion& goal) const {
  std::set<std::string> gv;
  collect_all_vars(goal, gv);
  if (std::any_of(gv.begin(), gv.end(), [&](const std::string& v) { return witness_names_.count(v) > 0; })) {
    std::set<std::string> r = reserved_;
    r.insert(gv.begin(), gv.end());
    return Context(X_, phi_, mode_, budget_, std::move(r)).prove(goal);
  }
  Verdict v;
  v.branches = leaves_;
  v.witnesses = witness_names_.size();
  v.witness_depth = budget_.witness_depth;
  if (overflow_) {
    v.exhausted = true;
    v.note = "branch cap exceeded";
    return v;
  }
  TermSet gterms;
  collect_closed_subterms(goal, gterms);
  Outcome o = prove_tree(*tree_, *dy_, goal, gterms, budget_);
  v.derivable = o.proof != nullptr;
  v.proof = o.proof;
  if (!v.derivable && o.exhausted) {
    v.exhausted = true;
    v.note = "search budget exhausted";
  }
  return v;
}

Verdict derive(const TermSet& X, const AssertionSet& phi, const Assertion& goal, Mode mode,
               const SearchBudget& budget) {
  return Context(X, phi, mode, budget).prove(goal);
}

Verdict derive(const Sequent& s, const SearchBudget& budget) { return derive(s.X, s.Phi, s.goal, Mode::Full, budget); }

Verdict derive_safe(const Sequent& s, const SearchBudget& budget) {
  return derive(s.X, s.Phi, s.goal, Mode::Safe, budget);
}

// ---------------------------------------------------------------- inspection helpers

WitnessClosure witness_close(const AssertionSet& phi, const std::set<std::string>& reserved) {
  WitnessClosure out;
  std::set<std::string> taken = reserved;
  for (const Assertion& a : phi) collect_all_vars(a, taken);
  std::size_t counter = 0;
  std::deque<Assertion> work(phi.begin(), phi.end());
  while (!work.empty()) {
    Assertion a = std::move(work.front());
    work.pop_front();
    if (!out.pi.insert(a).second) continue;
    switch (a.kind()) {
      case AK::And:
        work.push_back(a.left());
        work.push_back(a.right());
        break;
      case AK::Says:
        work.push_back(a.body());
        break;
      case AK::Exists: {
        std::string w = fresh_name(counter, taken);
        taken.insert(w);
        out.ledger.emplace_back(a, w);
        work.push_back(instantiate(a, Term::var(w)));
        break;
      }
      default:
        break;
    }
  }
  return out;
}

std::vector<AssertionSet> case_split(const AssertionSet& pi, std::size_t cap) {
  std::vector<AssertionSet> out;
  std::function<void(AssertionSet, std::deque<Assertion>, std::deque<Assertion>)> go =
      [&](AssertionSet branch, std::deque<Assertion> work, std::deque<Assertion> ors) {
        while (!work.empty()) {
          Assertion a = std::move(work.front());
          work.pop_front();
          if (a.is(AK::Or)) {
            ors.push_back(a);
            continue;
          }
          if (!branch.insert(a).second) continue;
          if (a.is(AK::And)) {
            work.push_back(a.left());
            work.push_back(a.right());
          } else if (a.is(AK::Says)) {
            work.push_back(a.body());
          }
        }
        if (ors.empty()) {
          out.push_back(std::move(branch));
          if (out.size() > cap) throw BranchOverflow(out.size());
          return;
        }
        Assertion d = ors.front();
        ors.pop_front();
        go(branch, {d.left()}, ors);
        go(std::move(branch), {d.right()}, std::move(ors));
      };
  go({}, std::deque<Assertion>(pi.begin(), pi.end()), {});
  return out;
}

Classes congruence_close(const TermSet& X, const AssertionSet& branch, const TermSet& extra,
                         std::size_t merge_cap) {
  auto dy = std::make_shared<const DyKnowledge>(X);
  Classes c{dy, EGraph(dy.get(), merge_cap)};
  for (const Term& x : X) c.graph.add(x);
  for (const Assertion& a : branch) {
    TermSet ts;
    collect_closed_subterms(a, ts);
    for (const Term& t : ts) c.graph.add(t);
  }
  for (const Term& t : extra) c.graph.add(t);
  for (const Assertion& a : branch)
    if (a.is(AK::Eq)) c.graph.assert_eq(a.lhs(), a.rhs(), make_proof(Rule::Ax, a));
  c.graph.close();
  return c;
}

bool check_bottom(const Classes& c) { return c.graph.bottom(); }

std::vector<std::vector<Term>> Classes::list() const {
  std::vector<std::vector<Term>> out;
  for (int r : graph.roots()) {
    std::vector<Term> cls;
    for (int n : graph.members(r)) cls.push_back(graph.term(n));
    std::sort(cls.begin(), cls.end());
    out.push_back(std::move(cls));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Classes::same(const Term& a, const Term& b) const {
  if (a == b) return true;
  auto x = graph.canon(a), y = graph.canon(b);
  return x && y && graph.find(*x) == graph.find(*y);
}

}  // namespace dya
