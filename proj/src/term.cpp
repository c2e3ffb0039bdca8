#include "dya/term.hpp"

#include <stdexcept>

namespace dya {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

std::string_view sort_name(Sort s) {
  switch (s) {
    case Sort::Agent: return "agent";
    case Sort::Nonce: return "nonce";
    case Sort::Key: return "key";
  }
  return "?";
}

Term Term::make(Node n) {
  std::size_t h = std::hash<std::string>{}(n.name);
  h = mix(h, static_cast<std::size_t>(n.kind) * 31 + static_cast<std::size_t>(n.sort));
  n.size = 1;
  n.ground = n.kind != TermKind::Var;
  for (const Term& a : n.args) {
    h = mix(h, a.hash());
    n.size += a.size();
    n.ground = n.ground && a.is_ground();
  }
  n.hash = h;
  return Term(std::make_shared<const Node>(std::move(n)));
}

Term Term::basic(std::string name, Sort sort) {
  return make(Node{TermKind::Basic, sort, std::move(name), {}});
}

Term Term::var(std::string name) {
  return make(Node{TermKind::Var, Sort::Nonce, std::move(name), {}});
}

Term Term::pair(Term left, Term right) {
  return make(Node{TermKind::Pair, Sort::Nonce, {}, {std::move(left), std::move(right)}});
}

Term Term::enc(Term body, Term key) {
  return make(Node{TermKind::Enc, Sort::Nonce, {}, {std::move(body), std::move(key)}});
}

Term Term::app(std::string ctor, std::vector<Term> args) {
  return make(Node{TermKind::App, Sort::Nonce, std::move(ctor), std::move(args)});
}

Term Term::sk(Term agent) { return app(std::string(kSigningKey), {std::move(agent)}); }
Term Term::vk(Term agent) { return app(std::string(kVerifyKey), {std::move(agent)}); }

bool Term::is_key_app() const {
  return kind() == TermKind::App && node_->args.size() == 1 &&
         (node_->name == kSigningKey || node_->name == kVerifyKey);
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.hash() != b.hash() || a.size() != b.size()) return false;
  if (a.kind() != b.kind() || a.sort() != b.sort() || a.name() != b.name()) return false;
  const auto& x = a.args();
  const auto& y = b.args();
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] == y[i])) return false;
  return true;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (!a.node_) return std::strong_ordering::less;
  if (!b.node_) return std::strong_ordering::greater;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (auto c = a.sort() <=> b.sort(); c != 0) return c;
  if (auto c = a.name().compare(b.name()); c != 0)
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  const auto& x = a.args();
  const auto& y = b.args();
  if (auto c = x.size() <=> y.size(); c != 0) return c;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (auto c = x[i] <=> y[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

bool is_key_term(const Term& t) {
  return (t.is_basic() && t.sort() == Sort::Key) || t.is_var() || t.is_key_app();
}

std::optional<Term> inverse(const Term& k) {
  if (k.is_var()) return k;
  if (k.is_basic()) {
    if (k.sort() == Sort::Key) return k;
    return std::nullopt;
  }
  if (k.is_key_app()) {
    if (k.name() == kSigningKey) return Term::vk(k.args()[0]);
    return Term::sk(k.args()[0]);
  }
  return std::nullopt;
}

void collect_subterms(const Term& t, TermSet& out) {
  if (!out.insert(t).second) return;
  for (const Term& a : t.args()) collect_subterms(a, out);
}

TermSet subterms(const Term& t) {
  TermSet out;
  collect_subterms(t, out);
  return out;
}

void collect_atoms(const Term& t, TermSet& out) {
  if (t.is_atom()) {
    out.insert(t);
    return;
  }
  for (const Term& a : t.args()) collect_atoms(a, out);
}

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_ground()) return;
  if (t.is_var()) {
    out.insert(t.name());
    return;
  }
  for (const Term& a : t.args()) collect_vars(a, out);
}

bool occurs(const Term& needle, const Term& hay) {
  if (needle.size() > hay.size()) return false;
  if (needle == hay) return true;
  for (const Term& a : hay.args())
    if (occurs(needle, a)) return true;
  return false;
}

Term substitute(const Term& t, const std::function<std::optional<Term>(const std::string&)>& image) {
  if (t.is_ground()) return t;
  if (t.is_var()) {
    if (auto r = image(t.name())) return *r;
    return t;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (const Term& a : t.args()) {
    args.push_back(substitute(a, image));
    changed = changed || !(args.back() == a);
  }
  if (!changed) return t;
  switch (t.kind()) {
    case TermKind::Pair: return Term::pair(args[0], args[1]);
    case TermKind::Enc: return Term::enc(args[0], args[1]);
    case TermKind::App: return Term::app(t.name(), std::move(args));
    default: return t;
  }
}

Term replace_terms(const Term& t, const std::function<std::optional<Term>(const Term&)>& image) {
  if (auto r = image(t)) return *r;
  if (t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (const Term& a : t.args()) {
    args.push_back(replace_terms(a, image));
    changed = changed || !(args.back() == a);
  }
  if (!changed) return t;
  switch (t.kind()) {
    case TermKind::Pair: return Term::pair(args[0], args[1]);
    case TermKind::Enc: return Term::enc(args[0], args[1]);
    case TermKind::App: return Term::app(t.name(), std::move(args));
    default: return t;
  }
}

namespace {

void print(const Term& t, std::string& out) {
  switch (t.kind()) {
    case TermKind::Basic:
    case TermKind::Var: out += t.name(); break;
    case TermKind::Pair:
      out += '(';
      print(t.left(), out);
      out += ',';
      print(t.right(), out);
      out += ')';
      break;
    case TermKind::Enc:
      out += '{';
      print(t.body(), out);
      out += '}';
      // a pair key needs no extra delimiters: the grammar reads one primary term
      print(t.key(), out);
      break;
    case TermKind::App:
      out += t.name();
      out += '(';
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) out += ',';
        print(t.args()[i], out);
      }
      out += ')';
      break;
  }
}

}  // namespace

std::string to_string(const Term& t) {
  std::string out;
  print(t, out);
  return out;
}

}  // namespace dya
