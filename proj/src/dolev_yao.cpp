#include "dya/dolev_yao.hpp"

#include <algorithm>

namespace dya {

std::string_view dy_rule_name(DyRule r) {
  switch (r) {
    case DyRule::Ax: return "ax";
    case DyRule::Var: return "var";
    case DyRule::Pair: return "pair";
    case DyRule::Split: return "split";
    case DyRule::Enc: return "enc";
    case DyRule::Dec: return "dec";
    case DyRule::App: return "app";
  }
  return "?";
}

DyKnowledge::DyKnowledge(const TermSet& base) { add_all(base); }

void DyKnowledge::add(const Term& t) {
  if (!base_.insert(t).second) return;
  if (learn(t, Origin{DyRule::Ax, Term()})) close();
  else origin_[t] = Origin{DyRule::Ax, Term()};  // known already by analysis; ax is the shorter proof
}

void DyKnowledge::add_all(const TermSet& ts) {
  bool grew = false;
  for (const Term& t : ts) {
    if (!base_.insert(t).second) continue;
    if (learn(t, Origin{DyRule::Ax, Term()})) grew = true;
    else origin_[t] = Origin{DyRule::Ax, Term()};
  }
  if (grew) close();
}

bool DyKnowledge::learn(const Term& t, Origin o) {
  if (!analyzed_.insert(t).second) return false;
  origin_.emplace(t, o);
  pending_.push_back(t);
  return true;
}

void DyKnowledge::close() {
  while (!pending_.empty()) {
    Term t = pending_.back();
    pending_.pop_back();
    if (t.is_pair()) {
      learn(t.left(), Origin{DyRule::Split, t});
      learn(t.right(), Origin{DyRule::Split, t});
    } else if (t.is_enc()) {
      locked_.push_back(t);
    }
    if (pending_.empty()) {
      // try the locked ciphertexts; new keys may have appeared
      auto it = std::partition(locked_.begin(), locked_.end(), [&](const Term& c) {
        auto inv = inverse(c.key());
        return !(inv && derivable(*inv));
      });
      std::vector<Term> opened(it, locked_.end());
      locked_.erase(it, locked_.end());
      for (const Term& c : opened) learn(c.body(), Origin{DyRule::Dec, c});
    }
  }
}

bool DyKnowledge::derivable(const Term& t) const {
  if (analyzed_.count(t)) return true;
  switch (t.kind()) {
    case TermKind::Var: return true;
    case TermKind::Basic: return false;
    case TermKind::Pair: return derivable(t.left()) && derivable(t.right());
    case TermKind::Enc: return is_key_term(t.key()) && derivable(t.key()) && derivable(t.body());
    case TermKind::App:
      if (t.is_key_app()) return false;
      return std::all_of(t.args().begin(), t.args().end(), [&](const Term& a) { return derivable(a); });
  }
  return false;
}

DyProof DyKnowledge::analysis_proof(const Term& t) const {
  const Origin& o = origin_.at(t);
  DyProof p{o.rule, t, {}};
  if (o.rule == DyRule::Split) {
    p.premises.push_back(analysis_proof(o.from));
  } else if (o.rule == DyRule::Dec) {
    p.premises.push_back(analysis_proof(o.from));
    p.premises.push_back(*prove(*inverse(o.from.key())));
  }
  return p;
}

std::optional<DyProof> DyKnowledge::prove(const Term& t) const {
  if (analyzed_.count(t)) return analysis_proof(t);
  if (!derivable(t)) return std::nullopt;
  switch (t.kind()) {
    case TermKind::Var: return DyProof{DyRule::Var, t, {}};
    case TermKind::Pair: return DyProof{DyRule::Pair, t, {*prove(t.left()), *prove(t.right())}};
    case TermKind::Enc: return DyProof{DyRule::Enc, t, {*prove(t.body()), *prove(t.key())}};
    case TermKind::App: {
      DyProof p{DyRule::App, t, {}};
      for (const Term& a : t.args()) p.premises.push_back(*prove(a));
      return p;
    }
    default: return std::nullopt;
  }
}

TermSet dy_saturate(const TermSet& X) { return DyKnowledge(X).analyzed(); }

std::optional<DyProof> dy_derive(const TermSet& X, const Term& t) { return DyKnowledge(X).prove(t); }

namespace {

bool bad(std::string* why, const DyProof& p, const char* msg) {
  if (why) *why = std::string(msg) + " at " + std::string(dy_rule_name(p.rule)) + " " + to_string(p.conclusion);
  return false;
}

}  // namespace

bool check_dy_proof(const TermSet& X, const DyProof& p, std::string* why) {
  for (const DyProof& q : p.premises)
    if (!check_dy_proof(X, q, why)) return false;
  const Term& c = p.conclusion;
  const auto& ps = p.premises;
  switch (p.rule) {
    case DyRule::Ax:
      if (!ps.empty() || !X.count(c)) return bad(why, p, "axiom not in X");
      return true;
    case DyRule::Var:
      if (!ps.empty() || !c.is_var()) return bad(why, p, "var rule on non-variable");
      return true;
    case DyRule::Pair:
      if (ps.size() != 2 || !(c == Term::pair(ps[0].conclusion, ps[1].conclusion)))
        return bad(why, p, "pair mismatch");
      return true;
    case DyRule::Split:
      if (ps.size() != 1 || !ps[0].conclusion.is_pair() ||
          !(ps[0].conclusion.left() == c || ps[0].conclusion.right() == c))
        return bad(why, p, "split mismatch");
      return true;
    case DyRule::Enc:
      if (ps.size() != 2 || !is_key_term(ps[1].conclusion) ||
          !(c == Term::enc(ps[0].conclusion, ps[1].conclusion)))
        return bad(why, p, "enc mismatch");
      return true;
    case DyRule::Dec: {
      if (ps.size() != 2 || !ps[0].conclusion.is_enc() || !(ps[0].conclusion.body() == c))
        return bad(why, p, "dec mismatch");
      auto inv = inverse(ps[0].conclusion.key());
      if (!inv || !(*inv == ps[1].conclusion)) return bad(why, p, "dec without inverse key");
      return true;
    }
    case DyRule::App: {
      if (!c.is_app() || c.is_key_app() || ps.size() != c.args().size()) return bad(why, p, "app mismatch");
      for (std::size_t i = 0; i < ps.size(); ++i)
        if (!(ps[i].conclusion == c.args()[i])) return bad(why, p, "app argument mismatch");
      return true;
    }
  }
  return bad(why, p, "unknown rule");
}

std::string to_string(const DyProof& p, int indent) {
  std::string out(static_cast<std::size_t>(indent) * 2, ' ');
  out += std::string(dy_rule_name(p.rule)) + "  " + to_string(p.conclusion) + "\n";
  for (const DyProof& q : p.premises) out += to_string(q, indent + 1);
  return out;
}

}  // namespace dya
