#include "search.hpp"

#include <climits>
#include <stdexcept>

namespace dya::detail {

using AK = AssertionKind;

namespace {

bool has_var_prefix(const Term& t, char c) {
  if (t.is_ground()) return false;
  if (t.is_var()) return t.name()[0] == c;
  for (const Term& a : t.args())
    if (has_var_prefix(a, c)) return true;
  return false;
}

bool rigid(const Term& t) { return has_var_prefix(t, '%'); }
bool has_meta(const Term& t) { return has_var_prefix(t, '?'); }
bool is_meta(const Term& t) { return t.is_var() && t.name()[0] == '?'; }

bool same_head(const Term& a, const Term& b) {
  if (a.kind() != b.kind() || a.args().size() != b.args().size()) return false;
  return !a.is_app() || a.name() == b.name();
}

// compound with congruence: pairs, ciphertexts and non-key constructors
bool cong_head(const Term& a, const Term& b) { return !a.is_atom() && same_head(a, b); }

Term rebuild(const Term& t, std::vector<Term> args) {
  switch (t.kind()) {
    case TermKind::Pair:
      return Term::pair(std::move(args[0]), std::move(args[1]));
    case TermKind::Enc:
      return Term::enc(std::move(args[0]), std::move(args[1]));
    case TermKind::App:
      return Term::app(t.name(), std::move(args));
    default:
      return t;
  }
}

Assertion rebuild(const Assertion& a, std::vector<Term> ts, std::vector<Assertion> subs) {
  switch (a.kind()) {
    case AK::Eq:
      return Assertion::eq(ts[0], ts[1]);
    case AK::Pred:
      return Assertion::pred(a.name(), std::move(ts));
    case AK::And:
      return Assertion::conj(subs[0], subs[1]);
    case AK::Or:
      return Assertion::disj(subs[0], subs[1]);
    case AK::Exists:
      return Assertion::exists(a.name(), subs[0], a.hint());
    case AK::Says:
      return Assertion::says(ts[0], subs[0]);
    case AK::SentT:
      return Assertion::sent_term(ts[0], ts[1]);
    case AK::SentA:
      return Assertion::sent_assertion(ts[0], subs[0]);
  }
  return a;
}

Assertion eq_of(const Term& s, const Term& t) { return Assertion::eq(s, t); }

ProofRef sym(const ProofRef& p) {
  if (!p) return p;
  const Assertion& c = p->conclusion;
  return make_proof(Rule::Sym, eq_of(c.rhs(), c.lhs()), {p});
}

ProofRef trans(const ProofRef& p, const ProofRef& q) {
  if (!p) return q;
  if (!q) return p;
  return make_proof(Rule::Trans, eq_of(p->conclusion.lhs(), q->conclusion.rhs()), {p, q});
}

}  // namespace

Leaf make_leaf(std::vector<Fact> facts, const TermSet& X, const DyKnowledge& dy, std::size_t merge_cap) {
  Leaf L{std::move(facts), {}, {}, {}, {}, {}, {}, EGraph(&dy, merge_cap)};
  for (const Term& x : X) L.graph.add(x);
  for (std::size_t i = 0; i < L.facts.size(); ++i) {
    const Fact& f = L.facts[i];
    const int id = static_cast<int>(i);
    TermSet closed;
    collect_closed_subterms(f.a, closed);
    for (const Term& t : closed) L.graph.add(t);
    switch (f.a.kind()) {
      case AK::Eq:
        L.graph.assert_eq(f.a.lhs(), f.a.rhs(), f.proof);
        break;
      case AK::Pred:
        L.preds[f.a.name()].push_back(id);
        break;
      case AK::Says:
        L.says.push_back(id);
        break;
      case AK::SentT:
        L.sent_t.push_back(id);
        break;
      case AK::SentA:
        L.sent_a.push_back(id);
        break;
      case AK::Exists:
        L.exists.push_back(id);
        break;
      case AK::Or:
        L.ors.push_back(id);
        break;
      case AK::And:
        break;
    }
  }
  L.graph.close();
  return L;
}

Searcher::Searcher(const Leaf& leaf, const EGraph& graph, const DyKnowledge& dy, std::size_t step_cap)
    : leaf_(leaf), g_(graph), dy_(dy), cap_(step_cap) {}

bool Searcher::tick() {
  if (exhausted_) return false;
  if (++steps_ > cap_) {
    exhausted_ = true;
    return false;
  }
  return true;
}

void Searcher::reset() {
  meta_val_.clear();
  meta_set_.clear();
  deferred_.clear();
  capture_ = -1;
  captured_ = Term();
}

int Searcher::new_meta() {
  meta_val_.emplace_back();
  meta_set_.push_back(false);
  return static_cast<int>(meta_val_.size()) - 1;
}

void Searcher::drop_meta() {
  meta_val_.pop_back();
  meta_set_.pop_back();
}

Term Searcher::meta_term(int id) { return Term::var("?" + std::to_string(id)); }
int Searcher::meta_id(const Term& t) { return std::stoi(t.name().substr(1)); }

Term Searcher::resolve(const Term& t) const {
  if (!has_meta(t)) return t;
  if (t.is_var()) {
    const int id = meta_id(t);
    return meta_set_[id] ? resolve(meta_val_[id]) : t;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(resolve(a));
  return rebuild(t, std::move(args));
}

// ---------------------------------------------------------------- phase one

bool Searcher::decide(const Assertion& a) {
  reset();
  return goal(a, [this] { return finish(0); });
}

std::optional<Term> Searcher::find_witness(const Assertion& ex) {
  reset();
  const int m = new_meta();
  capture_ = m;
  const bool ok = goal(instantiate(ex, meta_term(m)), [this] { return finish(0); });
  capture_ = -1;
  if (!ok) return std::nullopt;
  return captured_;
}

bool Searcher::goal(const Assertion& a, const K& k) {
  if (!tick()) return false;
  if (g_.bottom()) return k();
  switch (a.kind()) {
    case AK::Eq:
      return eq(a.lhs(), a.rhs(), k);
    case AK::Pred:
    case AK::SentT:
    case AK::SentA:
      return ax(a, k);
    case AK::And: {
      const Assertion& r = a.right();
      return goal(a.left(), [&] { return goal(r, k); });
    }
    case AK::Or:
      return goal(a.left(), k) || goal(a.right(), k) || ax(a, k);
    case AK::Exists: {
      if (ax(a, k)) return true;
      if (exhausted_) return false;
      const int m = new_meta();
      const bool r = goal(instantiate(a, meta_term(m)), k);
      drop_meta();
      return r;
    }
    case AK::Says:
      return ax(a, k) || says_intro(a, k);
  }
  return false;
}

const std::vector<int>* Searcher::facts_for(const Assertion& g) const {
  switch (g.kind()) {
    case AK::Pred: {
      auto it = leaf_.preds.find(g.name());
      return it == leaf_.preds.end() ? nullptr : &it->second;
    }
    case AK::Says:
      return &leaf_.says;
    case AK::SentT:
      return &leaf_.sent_t;
    case AK::SentA:
      return &leaf_.sent_a;
    case AK::Exists:
      return &leaf_.exists;
    case AK::Or:
      return &leaf_.ors;
    default:
      return nullptr;
  }
}

bool Searcher::ax(const Assertion& g, const K& k) {
  const auto* list = facts_for(g);
  if (!list) return false;
  for (int i : *list) {
    if (match(leaf_.facts[i].a, g, k)) return true;
    if (exhausted_) return false;
  }
  return false;
}

bool Searcher::match(const Assertion& h, const Assertion& g, const K& k) {
  if (!tick()) return false;
  if (h.kind() != g.kind()) return false;
  switch (h.kind()) {
    case AK::Pred:
      if (h.name() != g.name() || h.terms().size() != g.terms().size()) return false;
      return match_list(h.terms(), g.terms(), 0, k);
    case AK::Eq:
      return match_list(h.terms(), g.terms(), 0, k);
    case AK::SentT:
      return match_agent(h.agent(), g.agent(), [&] { return match_terms(h.sent(), g.sent(), k); });
    case AK::SentA:
    case AK::Says:
      return match_agent(h.agent(), g.agent(), [&] { return match(h.body(), g.body(), k); });
    case AK::And:
    case AK::Or:
      return match(h.left(), g.left(), [&] { return match(h.right(), g.right(), k); });
    case AK::Exists:
      if (h.name() != g.name()) return false;
      return match(h.body(), g.body(), k);
  }
  return false;
}

bool Searcher::match_agent(const Term& h, const Term& g, const K& k) {
  const Term gr = resolve(g);
  if (is_meta(gr)) return bind(gr, h, k);
  return gr == h && k();
}

bool Searcher::match_list(const std::vector<Term>& h, const std::vector<Term>& g, std::size_t i, const K& k) {
  if (i == h.size()) return k();
  return match_terms(h[i], g[i], [&] { return match_list(h, g, i + 1, k); });
}

bool Searcher::match_terms(const Term& h, const Term& g, const K& k) {
  if (!tick()) return false;
  const Term gr = resolve(g);
  if (h == gr) return k();
  if (!is_meta(gr) && cong_head(h, gr)) {
    if (match_list(h.args(), gr.args(), 0, k)) return true;
    if (exhausted_) return false;
  }
  if (rigid(h) || rigid(gr)) return false;
  return eq(h, gr, k);
}

bool Searcher::eq(const Term& s, const Term& t, const K& k) {
  if (!tick()) return false;
  const Term a = resolve(s), b = resolve(t);
  if (rigid(a) || rigid(b)) return a == b && k();
  const bool ca = !has_meta(a), cb = !has_meta(b);
  if (ca && cb) return closed_eq(a, b) && k();
  if (is_meta(a) && is_meta(b)) {
    if (a == b) return defer(a, k);
    return bind(a, b, [&] { return defer(b, k); });
  }
  if (is_meta(a)) return eq_meta(a, b, k);
  if (is_meta(b)) return eq_meta(b, a, k);
  if (ca) return eq_closed_open(a, b, k);
  if (cb) return eq_closed_open(b, a, k);
  return cong_head(a, b) && eq_args(a, b, 0, k);
}

bool Searcher::eq_args(const Term& s, const Term& t, std::size_t i, const K& k) {
  if (i == s.args().size()) return k();
  return eq(s.args()[i], t.args()[i], [&] { return eq_args(s, t, i + 1, k); });
}

bool Searcher::eq_meta(const Term& m, const Term& t, const K& k) {
  if (!has_meta(t)) {
    std::vector<Term> cands{t};
    if (auto c = g_.canon(t))
      for (int n : g_.members(*c))
        if (!(g_.term(n) == t)) cands.push_back(g_.term(n));
    for (const Term& c : cands) {
      if (!witness_ok(c) || !closed_eq(c, t)) continue;
      if (bind(m, c, k)) return true;
      if (exhausted_) return false;
    }
    return false;
  }
  if (occurs(m, t)) return false;
  if (bind(m, t, [&] { return eq(t, t, k); })) return true;
  if (exhausted_) return false;
  // m may also be any known term equal to an instance of t
  for (int n = 0; n < static_cast<int>(g_.size()); ++n) {
    const Term& c = g_.term(n);
    if (!same_head(c, t) || c.is_atom() || !g_.active_node(n) || !witness_ok(c)) continue;
    if (bind(m, c, [&] { return eq_closed_open(c, t, k); })) return true;
    if (exhausted_) return false;
  }
  return false;
}

bool Searcher::eq_closed_open(const Term& s, const Term& t, const K& k) {
  if (cong_head(s, t)) {
    if (eq_args(s, t, 0, k)) return true;
    if (exhausted_) return false;
  }
  auto c = g_.canon(s);
  if (!c) return false;
  for (int n : g_.members(*c)) {
    const Term& u = g_.term(n);
    if (u == s || !cong_head(u, t)) continue;
    if (eq_args(u, t, 0, k)) return true;
    if (exhausted_) return false;
  }
  return false;
}

bool Searcher::says_intro(const Assertion& g, const K& k) {
  const Term A = resolve(g.agent());
  const Assertion& body = g.body();
  if (!is_meta(A)) {
    if (has_meta(A) || rigid(A)) return false;
    return dy_.derivable(Term::sk(A)) && goal(body, k);
  }
  for (const Term& ag : agents()) {
    if (!dy_.derivable(Term::sk(ag))) continue;
    if (bind(A, ag, [&] { return goal(body, k); })) return true;
    if (exhausted_) return false;
  }
  return false;
}

const std::vector<Term>& Searcher::agents() {
  if (!agents_) {
    agents_.emplace();
    for (int n = 0; n < static_cast<int>(g_.size()); ++n) {
      const Term& t = g_.term(n);
      if (t.is_basic() && t.sort() == Sort::Agent) agents_->push_back(t);
    }
  }
  return *agents_;
}

bool Searcher::bind(const Term& meta, const Term& value, const K& k) {
  if (rigid(value)) return false;
  const Term v = resolve(value);
  if (v == meta) return k();
  if (occurs(meta, v) || !witness_ok(v)) return false;
  const int id = meta_id(meta);
  meta_val_[id] = v;
  meta_set_[id] = true;
  const bool r = k();
  meta_set_[id] = false;
  meta_val_[id] = Term();
  return r;
}

bool Searcher::defer(const Term& meta, const K& k) {
  deferred_.push_back(meta_id(meta));
  const bool r = k();
  deferred_.pop_back();
  return r;
}

bool Searcher::witness_ok(const Term& t) const {
  if (rigid(t)) return false;
  if (!has_meta(t)) return dy_.derivable(t);
  if (is_meta(t)) return true;
  for (const Term& a : t.args())
    if (!witness_ok(a)) return false;
  return true;
}

const std::optional<Term>& Searcher::candidate() {
  if (!have_candidate_) {
    have_candidate_ = true;
    for (int n = 0; n < static_cast<int>(g_.size()); ++n) {
      const Term& t = g_.term(n);
      if (g_.active_node(n) && !rigid(t) && dy_.derivable(t)) {
        candidate_ = t;
        break;
      }
    }
  }
  return candidate_;
}

bool Searcher::finish(std::size_t i) {
  if (i == meta_set_.size()) {
    for (int id : deferred_) {
      const Term t = resolve(meta_term(id));
      if (has_meta(t) || !closed_eq(t, t)) return false;
    }
    for (std::size_t j = 0; j < meta_set_.size(); ++j)
      if (!dy_.derivable(resolve(meta_term(static_cast<int>(j))))) return false;
    if (capture_ >= 0) captured_ = resolve(meta_term(capture_));
    return true;
  }
  if (meta_set_[i]) return finish(i + 1);
  const auto& c = candidate();
  if (!c) return false;
  return bind(meta_term(static_cast<int>(i)), *c, [&] { return finish(i + 1); });
}

// Closed equality. Mirrored exactly by eq_proof.
bool Searcher::closed_eq(const Term& s, const Term& t) {
  auto key = std::make_pair(s, t);
  if (auto it = eq_memo_.find(key); it != eq_memo_.end()) return it->second.holds;
  if (eq_open_.count(key)) {
    eq_leaned_ = true;
    return false;
  }
  eq_open_.insert(key);
  const bool outer = eq_leaned_;
  eq_leaned_ = false;
  const bool r = closed_eq_impl(s, t);
  eq_open_.erase(key);
  const bool leaned = eq_leaned_;
  if (r || !leaned) eq_memo_.emplace(std::move(key), EqEntry{r, eq_clock_++});
  eq_leaned_ = outer || (leaned && !r);
  return r;
}

bool Searcher::eq_before(const Term& s, const Term& t, std::size_t limit) {
  if (!closed_eq(s, t)) return false;
  return eq_memo_.at(std::make_pair(s, t)).stamp < limit;
}

bool Searcher::closed_eq_impl(const Term& s, const Term& t) {
  const auto cs = g_.canon(s);
  if (s == t) {
    if (cs) return g_.active_node(*cs);
    if (s.is_atom()) return s.is_var() || dy_.derivable(s);
    for (const Term& a : s.args())
      if (!closed_eq(a, a)) return false;
    return true;
  }
  const auto ct = g_.canon(t);
  if (cs && ct && g_.find(*cs) == g_.find(*ct)) return true;
  auto kids_eq = [&](const Term& a, const Term& b) {
    for (std::size_t i = 0; i < a.args().size(); ++i)
      if (!closed_eq(a.args()[i], b.args()[i])) return false;
    return true;
  };
  if (cong_head(s, t) && kids_eq(s, t)) return true;
  if (cs)
    for (int n : g_.members(*cs)) {
      const Term& u = g_.term(n);
      if (!(u == s) && cong_head(u, t) && kids_eq(u, t)) return true;
    }
  if (ct)
    for (int n : g_.members(*ct)) {
      const Term& v = g_.term(n);
      if (!(v == t) && cong_head(s, v) && kids_eq(s, v)) return true;
    }
  return false;
}

// ---------------------------------------------------------------- phase two

DyProof Searcher::dy_proof(const Term& t) const {
  auto p = dy_.prove(t);
  if (!p) throw std::logic_error("search: no Dolev-Yao proof for " + to_string(t));
  return std::move(*p);
}

ProofRef Searcher::chain(std::vector<ProofRef> steps) const {
  ProofRef out;
  for (auto& p : steps) out = trans(out, p);
  return out;
}

ProofRef Searcher::cong(const Term& s, const Term& t, std::vector<ProofRef> kids) {
  const Rule r = s.is_pair() ? Rule::PairCong : s.is_enc() ? Rule::EncCong : Rule::AppCong;
  return make_proof(r, eq_of(s, t), std::move(kids));
}

ProofRef Searcher::refl_atom(const Term& t) { return make_proof(Rule::Refl, eq_of(t, t), {}, {dy_proof(t)}); }

ProofRef Searcher::refl_term(const Term& t) {
  if (auto c = g_.canon(t)) {
    if (g_.term(*c) == t) return refl_node(*c);
    ProofRef p = to_node(t, *c);
    return trans(p, sym(p));
  }
  if (t.is_atom()) return refl_atom(t);
  std::vector<ProofRef> kids;
  for (const Term& a : t.args()) kids.push_back(refl_term(a));
  return cong(t, t, std::move(kids));
}

ProofRef Searcher::to_node(const Term& s, int n) {
  const Term& u = g_.term(n);
  if (s == u) return nullptr;
  std::vector<ProofRef> kids;
  for (std::size_t i = 0; i < s.args().size(); ++i) kids.push_back(eq_proof(s.args()[i], u.args()[i]));
  return cong(s, u, std::move(kids));
}

ProofRef Searcher::eq_proof(const Term& s, const Term& t) {
  if (!closed_eq(s, t)) throw std::logic_error("search: unprovable equality " + to_string(s) + " = " + to_string(t));
  if (s == t) return refl_term(s);
  const std::size_t limit = eq_memo_.at(std::make_pair(s, t)).stamp;
  const auto cs = g_.canon(s), ct = g_.canon(t);
  if (cs && ct && g_.find(*cs) == g_.find(*ct))
    return chain({to_node(s, *cs), explain(*cs, *ct), sym(to_node(t, *ct))});
  auto kids_eq = [&](const Term& a, const Term& b) {
    for (std::size_t i = 0; i < a.args().size(); ++i)
      if (!eq_before(a.args()[i], b.args()[i], limit)) return false;
    return true;
  };
  auto kid_proofs = [&](const Term& a, const Term& b) {
    std::vector<ProofRef> out;
    for (std::size_t i = 0; i < a.args().size(); ++i) out.push_back(eq_proof(a.args()[i], b.args()[i]));
    return out;
  };
  if (cong_head(s, t) && kids_eq(s, t)) return cong(s, t, kid_proofs(s, t));
  if (cs)
    for (int n : g_.members(*cs)) {
      const Term& u = g_.term(n);
      if (!(u == s) && cong_head(u, t) && kids_eq(u, t))
        return chain({to_node(s, *cs), explain(*cs, n), cong(u, t, kid_proofs(u, t))});
    }
  if (ct)
    for (int n : g_.members(*ct)) {
      const Term& v = g_.term(n);
      if (!(v == t) && cong_head(s, v) && kids_eq(s, v))
        return chain({cong(s, v, kid_proofs(s, v)), explain(n, *ct), sym(to_node(t, *ct))});
    }
  throw std::logic_error("search: equality decided but not rebuilt");
}

ProofRef Searcher::explain(int a, int b) {
  if (a == b) return nullptr;
  ProofRef out;
  for (auto [e, fwd] : g_.path(a, b)) {
    ProofRef p = edge_proof(*e);
    out = trans(out, fwd ? p : sym(p));
  }
  return out;
}

ProofRef Searcher::edge_proof(const EGraph::Edge& e) {
  if (auto it = edge_memo_.find(&e); it != edge_memo_.end()) return it->second;
  ProofRef p;
  const Term& l = g_.term(e.lhs);
  const Term& r = g_.term(e.rhs);
  switch (e.kind) {
    case EGraph::Edge::Hyp:
      p = e.hyp;
      break;
    case EGraph::Edge::Cong: {
      std::vector<ProofRef> kids;
      for (std::size_t i = 0; i < g_.kids(e.p1).size(); ++i) {
        const int x = g_.kids(e.p1)[i], y = g_.kids(e.p2)[i];
        kids.push_back(x == y ? refl_node(x) : explain(x, y));
      }
      p = cong(l, r, std::move(kids));
      break;
    }
    case EGraph::Edge::Proj: {
      ProofRef parent = explain(e.p1, e.p2);
      const Term& t1 = g_.term(e.p1);
      if (t1.is_pair()) {
        p = make_proof(Rule::PairProj, eq_of(l, r), {parent}, {}, {}, e.index);
      } else {
        const Term& t2 = g_.term(e.p2);
        p = make_proof(Rule::EncProj, eq_of(l, r), {parent},
                       {dy_proof(*inverse(t1.key())), dy_proof(*inverse(t2.key()))}, {}, e.index);
      }
      break;
    }
    case EGraph::Edge::None:
      throw std::logic_error("search: empty proof-forest edge");
  }
  edge_memo_.emplace(&e, p);
  return p;
}

ProofRef Searcher::refl_node(int n) {
  if (auto it = refl_memo_.find(n); it != refl_memo_.end()) return it->second;
  const auto& why = g_.activation(n);
  const Term& t = g_.term(n);
  ProofRef p;
  switch (why.kind) {
    case EGraph::Activation::Atom:
      p = refl_atom(t);
      break;
    case EGraph::Activation::Cong: {
      std::vector<ProofRef> kids;
      for (int c : g_.kids(n)) kids.push_back(refl_node(c));
      p = cong(t, t, std::move(kids));
      break;
    }
    case EGraph::Activation::Down: {
      ProofRef parent = refl_node(why.other);
      const Term& pt = g_.term(why.other);
      if (pt.is_pair()) {
        p = make_proof(Rule::PairProj, eq_of(t, t), {parent}, {}, {}, why.index);
      } else {
        DyProof inv = dy_proof(*inverse(pt.key()));
        p = make_proof(Rule::EncProj, eq_of(t, t), {parent}, {inv, inv}, {}, why.index);
      }
      break;
    }
    case EGraph::Activation::Member: {
      ProofRef e = explain(n, why.other);
      p = trans(e, sym(e));
      break;
    }
    case EGraph::Activation::None:
      throw std::logic_error("search: reflexivity of inactive term " + to_string(t));
  }
  refl_memo_.emplace(n, p);
  return p;
}

bool Searcher::walk_term(const Term& h, const Term& g, int limit, int& count, Term& out,
                         std::vector<std::pair<Term, Term>>* rw) {
  if (h == g) {
    out = h;
    return true;
  }
  if (cong_head(h, g)) {
    const int c0 = count;
    const std::size_t r0 = rw ? rw->size() : 0;
    std::vector<Term> kids;
    bool ok = true;
    for (std::size_t i = 0; i < h.args().size() && ok; ++i) {
      Term o;
      ok = walk_term(h.args()[i], g.args()[i], limit, count, o, rw);
      kids.push_back(o);
    }
    if (ok) {
      out = rebuild(h, std::move(kids));
      return true;
    }
    count = c0;
    if (rw) rw->resize(r0);
  }
  if (rigid(h) || rigid(g) || !closed_eq(h, g)) return false;
  out = count < limit ? g : h;
  ++count;
  if (rw) rw->emplace_back(h, g);
  return true;
}

bool Searcher::walk_assertion(const Assertion& h, const Assertion& g, int limit, int& count, Assertion& out,
                              std::vector<std::pair<Term, Term>>* rw) {
  if (h.kind() != g.kind() || h.terms().size() != g.terms().size() || h.subs().size() != g.subs().size())
    return false;
  if ((h.is(AK::Pred) || h.is(AK::Exists)) && h.name() != g.name()) return false;
  const bool agent = h.is(AK::Says) || h.is(AK::SentT) || h.is(AK::SentA);
  std::vector<Term> ts;
  for (std::size_t i = 0; i < h.terms().size(); ++i) {
    if (agent && i == 0) {
      if (!(h.agent() == g.agent())) return false;
      ts.push_back(h.agent());
      continue;
    }
    Term o;
    if (!walk_term(h.terms()[i], g.terms()[i], limit, count, o, rw)) return false;
    ts.push_back(o);
  }
  std::vector<Assertion> subs;
  for (std::size_t i = 0; i < h.subs().size(); ++i) {
    Assertion o;
    if (!walk_assertion(h.subs()[i], g.subs()[i], limit, count, o, rw)) return false;
    subs.push_back(o);
  }
  out = rebuild(h, std::move(ts), std::move(subs));
  return true;
}

std::optional<ProofRef> Searcher::try_ax_proof(const Assertion& g) {
  const auto* list = facts_for(g);
  if (!list) return std::nullopt;
  for (int i : *list) {
    const Fact& f = leaf_.facts[i];
    int count = 0;
    Assertion out;
    std::vector<std::pair<Term, Term>> rw;
    if (!walk_assertion(f.a, g, INT_MAX, count, out, &rw)) continue;
    ProofRef cur = f.proof;
    for (std::size_t j = 0; j < rw.size(); ++j) {
      int c = 0;
      Assertion next;
      walk_assertion(f.a, g, static_cast<int>(j) + 1, c, next, nullptr);
      cur = make_proof(Rule::Subst, next, {cur, eq_proof(rw[j].first, rw[j].second)});
    }
    if (!(cur->conclusion == g)) throw std::logic_error("search: rewrite chain missed its target");
    return cur;
  }
  return std::nullopt;
}

ProofRef Searcher::ax_proof(const Assertion& g) {
  if (auto p = try_ax_proof(g)) return *p;
  throw std::logic_error("search: no hypothesis matches " + to_string(g));
}

ProofRef Searcher::build(const Assertion& g) {
  if (g_.bottom()) {
    auto [a, b] = g_.bottom_pair();
    return make_proof(Rule::Bot, g, {explain(a, b)});
  }
  switch (g.kind()) {
    case AK::Eq:
      return eq_proof(g.lhs(), g.rhs());
    case AK::Pred:
    case AK::SentT:
    case AK::SentA:
      return ax_proof(g);
    case AK::And:
      return make_proof(Rule::AndI, g, {build(g.left()), build(g.right())});
    case AK::Or:
      for (int i = 0; i < 2; ++i)
        if (decide(g.subs()[i])) return make_proof(Rule::OrI, g, {build(g.subs()[i])}, {}, {}, i);
      return ax_proof(g);
    case AK::Exists: {
      if (auto p = try_ax_proof(g)) return *p;
      auto w = find_witness(g);
      if (!w) throw std::logic_error("search: lost the witness for " + to_string(g));
      return make_proof(Rule::ExI, g, {build(instantiate(g, *w))}, {}, *w);
    }
    case AK::Says: {
      if (auto p = try_ax_proof(g)) return *p;
      return make_proof(Rule::Says, g, {build(g.body())}, {dy_proof(Term::sk(g.agent()))});
    }
  }
  throw std::logic_error("search: unknown assertion kind");
}

}  // namespace dya::detail
