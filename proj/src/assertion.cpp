#include "dya/assertion.hpp"

#include <stdexcept>

namespace dya {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::string binder_name(int height) { return "%" + std::to_string(height); }

}  // namespace

Assertion Assertion::make(Node n) {
  std::size_t h = std::hash<std::string>{}(n.name) * 7 + static_cast<std::size_t>(n.kind);
  for (const Term& t : n.terms) h = mix(h, t.hash());
  for (const Assertion& s : n.subs) h = mix(h, s.hash());
  n.hash = h;
  n.height = 0;
  for (const Assertion& s : n.subs) n.height = std::max(n.height, s.height());
  if (n.kind == AssertionKind::Exists) n.height += 1;
  auto shared = std::make_shared<const Node>(std::move(n));
  Assertion a(shared);
  std::set<std::string> fv;
  collect_free_vars(a, fv);
  const_cast<Node&>(*shared).closed = fv.empty();
  return a;
}

Assertion Assertion::eq(Term lhs, Term rhs) {
  return make(Node{AssertionKind::Eq, {}, {}, {std::move(lhs), std::move(rhs)}, {}});
}

Assertion Assertion::pred(std::string name, std::vector<Term> args) {
  return make(Node{AssertionKind::Pred, std::move(name), {}, std::move(args), {}});
}

Assertion Assertion::conj(Assertion l, Assertion r) {
  return make(Node{AssertionKind::And, {}, {}, {}, {std::move(l), std::move(r)}});
}

Assertion Assertion::disj(Assertion l, Assertion r) {
  return make(Node{AssertionKind::Or, {}, {}, {}, {std::move(l), std::move(r)}});
}

Assertion Assertion::exists(const std::string& var, Assertion body) {
  return exists(var, std::move(body), var);
}

Assertion Assertion::exists(const std::string& var, Assertion body, std::string hint) {
  const int h = body.height() + 1;
  const std::string bound = binder_name(h);
  Assertion renamed = var == bound ? body : substitute_var(body, var, Term::var(bound));
  if (is_bound_name(hint)) hint.clear();
  return make(Node{AssertionKind::Exists, bound, std::move(hint), {}, {std::move(renamed)}});
}

Assertion Assertion::says(Term agent, Assertion body) {
  return make(Node{AssertionKind::Says, {}, {}, {std::move(agent)}, {std::move(body)}});
}

Assertion Assertion::sent_term(Term agent, Term t) {
  return make(Node{AssertionKind::SentT, {}, {}, {std::move(agent), std::move(t)}, {}});
}

Assertion Assertion::sent_assertion(Term agent, Assertion a) {
  return make(Node{AssertionKind::SentA, {}, {}, {std::move(agent)}, {std::move(a)}});
}

bool operator==(const Assertion& a, const Assertion& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.name() != b.name()) return false;
  return a.terms() == b.terms() && a.subs() == b.subs();
}

std::strong_ordering operator<=>(const Assertion& a, const Assertion& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (!a.node_) return std::strong_ordering::less;
  if (!b.node_) return std::strong_ordering::greater;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (auto c = a.name().compare(b.name()); c != 0)
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  if (auto c = a.terms().size() <=> b.terms().size(); c != 0) return c;
  for (std::size_t i = 0; i < a.terms().size(); ++i)
    if (auto c = a.terms()[i] <=> b.terms()[i]; c != 0) return c;
  if (auto c = a.subs().size() <=> b.subs().size(); c != 0) return c;
  for (std::size_t i = 0; i < a.subs().size(); ++i)
    if (auto c = a.subs()[i] <=> b.subs()[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

namespace {

void free_vars_rec(const Assertion& a, std::set<std::string>& bound, std::set<std::string>& out) {
  for (const Term& t : a.terms()) {
    std::set<std::string> vs;
    collect_vars(t, vs);
    for (const auto& v : vs)
      if (!bound.count(v)) out.insert(v);
  }
  if (a.is(AssertionKind::Exists)) {
    const bool fresh = bound.insert(a.name()).second;
    free_vars_rec(a.body(), bound, out);
    if (fresh) bound.erase(a.name());
    return;
  }
  for (const Assertion& s : a.subs()) free_vars_rec(s, bound, out);
}

Assertion rebuild(const Assertion& a, std::vector<Term> terms, std::vector<Assertion> subs) {
  switch (a.kind()) {
    case AssertionKind::Eq: return Assertion::eq(terms[0], terms[1]);
    case AssertionKind::Pred: return Assertion::pred(a.name(), std::move(terms));
    case AssertionKind::And: return Assertion::conj(subs[0], subs[1]);
    case AssertionKind::Or: return Assertion::disj(subs[0], subs[1]);
    case AssertionKind::Exists: return Assertion::exists(a.name(), subs[0], a.hint());
    case AssertionKind::Says: return Assertion::says(terms[0], subs[0]);
    case AssertionKind::SentT: return Assertion::sent_term(terms[0], terms[1]);
    case AssertionKind::SentA: return Assertion::sent_assertion(terms[0], subs[0]);
  }
  return a;
}

Assertion subst_rec(const Assertion& a, const TermMap& sigma) {
  if (sigma.empty()) return a;
  if (a.is(AssertionKind::Exists)) {
    TermMap inner;
    for (const auto& [k, v] : sigma) {
      if (k == a.name()) continue;
      std::set<std::string> vs;
      collect_vars(v, vs);
      if (vs.count(a.name())) throw std::logic_error("substitution would capture " + a.name());
      inner.emplace(k, v);
    }
    Assertion body = subst_rec(a.body(), inner);
    if (body == a.body()) return a;
    return Assertion::exists(a.name(), body, a.hint());
  }
  std::vector<Term> terms;
  terms.reserve(a.terms().size());
  bool changed = false;
  auto image = [&](const std::string& v) -> std::optional<Term> {
    auto it = sigma.find(v);
    if (it == sigma.end()) return std::nullopt;
    return it->second;
  };
  for (const Term& t : a.terms()) {
    terms.push_back(substitute(t, image));
    changed = changed || !(terms.back() == t);
  }
  std::vector<Assertion> subs;
  subs.reserve(a.subs().size());
  for (const Assertion& s : a.subs()) {
    subs.push_back(subst_rec(s, sigma));
    changed = changed || !(subs.back() == s);
  }
  if (!changed) return a;
  return rebuild(a, std::move(terms), std::move(subs));
}

}  // namespace

void collect_free_vars(const Assertion& a, std::set<std::string>& out) {
  std::set<std::string> bound;
  free_vars_rec(a, bound, out);
}

std::set<std::string> free_vars(const Assertion& a) {
  std::set<std::string> out;
  collect_free_vars(a, out);
  return out;
}

void collect_all_vars(const Assertion& a, std::set<std::string>& out) {
  for (const Term& t : a.terms()) collect_vars(t, out);
  if (a.is(AssertionKind::Exists)) out.insert(a.name());
  for (const Assertion& s : a.subs()) collect_all_vars(s, out);
}

Assertion substitute(const Assertion& a, const TermMap& sigma) {
  if (sigma.empty() || a.is_ground()) return a;
  return subst_rec(a, sigma);
}

Assertion substitute_var(const Assertion& a, const std::string& var, const Term& t) {
  return subst_rec(a, TermMap{{var, t}});
}

Assertion instantiate(const Assertion& e, const Term& t) {
  if (!e.is(AssertionKind::Exists)) throw std::logic_error("instantiate: not an existential");
  return subst_rec(e.body(), TermMap{{e.name(), t}});
}

Assertion map_terms(const Assertion& a, const std::function<Term(const Term&)>& f) {
  std::vector<Term> terms;
  bool changed = false;
  for (const Term& t : a.terms()) {
    terms.push_back(f(t));
    changed = changed || !(terms.back() == t);
  }
  std::vector<Assertion> subs;
  for (const Assertion& s : a.subs()) {
    subs.push_back(map_terms(s, f));
    changed = changed || !(subs.back() == s);
  }
  if (!changed) return a;
  if (a.is(AssertionKind::Exists)) {
    // f must not touch the bound variable; the body still refers to a.name()
    return Assertion::exists(a.name(), subs[0], a.hint());
  }
  return rebuild(a, std::move(terms), std::move(subs));
}

namespace {
void visit_rec(const Assertion& a, std::set<std::string>& bound,
               const std::function<void(const Term&, const std::set<std::string>&)>& f) {
  for (const Term& t : a.terms()) f(t, bound);
  if (a.is(AssertionKind::Exists)) {
    const bool fresh = bound.insert(a.name()).second;
    visit_rec(a.body(), bound, f);
    if (fresh) bound.erase(a.name());
    return;
  }
  for (const Assertion& s : a.subs()) visit_rec(s, bound, f);
}

bool mentions_any(const Term& t, const std::set<std::string>& names) {
  if (names.empty() || t.is_ground()) return false;
  std::set<std::string> vs;
  collect_vars(t, vs);
  for (const auto& v : vs)
    if (names.count(v)) return true;
  return false;
}

void closed_subterms(const Term& t, const std::set<std::string>& bound, TermSet& out) {
  if (!mentions_any(t, bound)) {
    collect_subterms(t, out);
    return;
  }
  for (const Term& c : t.args()) closed_subterms(c, bound, out);
}
}  // namespace

void visit_terms(const Assertion& a,
                 const std::function<void(const Term&, const std::set<std::string>&)>& f) {
  std::set<std::string> bound;
  visit_rec(a, bound, f);
}

void collect_closed_subterms(const Assertion& a, TermSet& out) {
  visit_terms(a, [&](const Term& t, const std::set<std::string>& bound) {
    closed_subterms(t, bound, out);
  });
}

TermSet reveals(const Assertion& a) {
  TermSet out;
  std::set<std::string> bound;
  std::function<void(const Assertion&)> go = [&](const Assertion& x) {
    switch (x.kind()) {
      case AssertionKind::Eq:
      case AssertionKind::Pred:
        for (const Term& t : x.terms())
          if (!mentions_any(t, bound)) out.insert(t);
        return;
      case AssertionKind::SentT:
        if (!mentions_any(x.sent(), bound)) out.insert(x.sent());
        return;
      case AssertionKind::Exists: {
        const bool fresh = bound.insert(x.name()).second;
        go(x.body());
        if (fresh) bound.erase(x.name());
        return;
      }
      default:
        for (const Assertion& s : x.subs()) go(s);
    }
  };
  go(a);
  return out;
}

bool contains_kind(const Assertion& a, AssertionKind k) {
  if (a.is(k)) return true;
  for (const Assertion& s : a.subs())
    if (contains_kind(s, k)) return true;
  return false;
}

namespace {

struct Printer {
  std::set<std::string> taken;  // free variables plus binder names in scope
  std::map<std::string, std::string> rename;

  std::string term(const Term& t) {
    if (rename.empty()) return to_string(t);
    return to_string(substitute(t, [&](const std::string& v) -> std::optional<Term> {
      auto it = rename.find(v);
      if (it == rename.end()) return std::nullopt;
      return Term::var(it->second);
    }));
  }

  std::string agent(const Term& t) { return term(t); }

  static bool binary(const Assertion& a) {
    return a.is(AssertionKind::And) || a.is(AssertionKind::Or);
  }

  // returns (text, open_right)
  std::pair<std::string, bool> go(const Assertion& a) {
    switch (a.kind()) {
      case AssertionKind::Eq: return {term(a.lhs()) + " = " + term(a.rhs()), false};
      case AssertionKind::Pred: {
        std::string s = a.name() + "(";
        for (std::size_t i = 0; i < a.terms().size(); ++i) {
          if (i) s += ", ";
          s += term(a.terms()[i]);
        }
        return {s + ")", false};
      }
      case AssertionKind::SentT: return {agent(a.agent()) + " sent " + term(a.sent()), false};
      case AssertionKind::SentA: {
        auto [b, _] = go(a.body());
        return {agent(a.agent()) + " sent <" + b + ">", false};
      }
      case AssertionKind::Says: {
        auto [b, open] = go(a.body());
        if (binary(a.body())) return {agent(a.agent()) + " says [" + b + "]", false};
        return {agent(a.agent()) + " says " + b, open};
      }
      case AssertionKind::Exists: {
        std::vector<std::string> names;
        Assertion cur = a;
        std::vector<std::string> saved;
        while (cur.is(AssertionKind::Exists)) {
          std::string base = cur.hint().empty() ? "x" : cur.hint();
          std::string n = base;
          for (int i = 1; taken.count(n); ++i) n = base + std::to_string(i);
          taken.insert(n);
          rename[cur.name()] = n;
          names.push_back(n);
          saved.push_back(cur.name());
          cur = cur.body();
        }
        auto [b, _] = go(cur);
        for (std::size_t i = 0; i < names.size(); ++i) {
          taken.erase(names[i]);
          rename.erase(saved[i]);
        }
        std::string s = "ex ";
        for (std::size_t i = 0; i < names.size(); ++i) {
          if (i) s += ",";
          s += names[i];
        }
        return {s + ": " + b, true};
      }
      case AssertionKind::And:
      case AssertionKind::Or: {
        const bool is_and = a.is(AssertionKind::And);
        auto [l, lopen] = go(a.left());
        auto [r, ropen] = go(a.right());
        const bool lb = lopen || (is_and && a.left().is(AssertionKind::Or));
        const bool rb = a.right().kind() == a.kind() || (is_and && a.right().is(AssertionKind::Or));
        if (lb) l = "[" + l + "]";
        if (rb) r = "[" + r + "]";
        return {l + (is_and ? " /\\ " : " \\/ ") + r, !rb && ropen};
      }
    }
    return {"?", false};
  }
};

}  // namespace

std::string to_string(const Assertion& a) {
  Printer p;
  collect_free_vars(a, p.taken);
  return p.go(a).first;
}

}  // namespace dya
