#include "dya/egraph.hpp"

#include <algorithm>

namespace dya {

std::size_t EGraph::SigHash::operator()(const SigKey& k) const {
  std::size_t h = std::hash<std::string>{}(k.name) ^ (static_cast<std::size_t>(k.kind) << 7);
  for (int c : k.kids) h = h * 1000003u + static_cast<std::size_t>(c);
  return h;
}

int EGraph::find(int n) const {
  while (uf_[n] != n) n = uf_[n];
  return n;
}

std::optional<int> EGraph::lookup(const Term& t) const {
  auto it = index_.find(t);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> EGraph::canon(const Term& t) const {
  if (auto n = lookup(t)) return n;
  if (t.is_atom()) return std::nullopt;
  SigKey key{t.kind(), t.is_app() ? t.name() : std::string(), {}};
  for (const Term& a : t.args()) {
    auto c = canon(a);
    if (!c || !active_[find(*c)]) return std::nullopt;
    key.kids.push_back(find(*c));
  }
  auto it = sig_.find(key);
  if (it == sig_.end()) return std::nullopt;
  // the table entry is only trusted while its own arguments still map to these roots
  const int m = it->second;
  for (std::size_t i = 0; i < kids_[m].size(); ++i)
    if (find(kids_[m][i]) != key.kids[i]) return std::nullopt;
  return m;
}

bool EGraph::ground_atom(int n) const {
  const Term& t = terms_[n];
  return t.is_basic() || (t.is_key_app() && t.is_ground());
}

int EGraph::add(const Term& t) {
  if (auto it = index_.find(t); it != index_.end()) return it->second;
  std::vector<int> kids;
  kids.reserve(t.args().size());
  for (const Term& a : t.args()) kids.push_back(add(a));
  const int n = static_cast<int>(terms_.size());
  terms_.push_back(t);
  index_.emplace(t, n);
  kids_.push_back(kids);
  bool enc_ok = false;
  if (t.is_enc()) {
    auto inv = inverse(t.key());
    enc_ok = inv && dy_->derivable(*inv);
  }
  enc_ok_.push_back(enc_ok);
  uf_.push_back(n);
  members_.push_back({n});
  uses_.emplace_back();
  active_.push_back(false);
  basic_.push_back(-1);
  pair_rep_.push_back(t.is_pair() ? n : -1);
  enc_rep_.push_back(enc_ok ? n : -1);
  act_.emplace_back();
  pf_parent_.push_back(-1);
  pf_edge_.emplace_back();
  if (ground_atom(n)) basic_[n] = n;
  if (!t.is_key_app())
    for (int k : kids) uses_[find(k)].push_back(n);
  if (t.is_atom()) {
    if (t.is_var() || dy_->derivable(t)) activate_class(n, n, Activation{Activation::Atom});
  } else {
    dirty_.push_back(n);
  }
  return n;
}

void EGraph::assert_eq(const Term& s, const Term& t, ProofRef why) {
  const int a = add(s);
  const int b = add(t);
  Edge e;
  e.kind = Edge::Hyp;
  e.lhs = a;
  e.rhs = b;
  e.hyp = std::move(why);
  pending_.push_back(Pending{a, b, std::move(e)});
}

bool EGraph::all_kids_active(int n) const {
  for (int k : kids_[n])
    if (!active_[find(k)]) return false;
  return true;
}

void EGraph::set_node_reason(int n, Activation why) {
  if (act_[n].kind == Activation::None) act_[n] = why;
}

void EGraph::activate_class(int root, int node, Activation why) {
  if (active_[root]) return;
  active_[root] = true;
  set_node_reason(node, why);
  for (int m : members_[root])
    if (m != node) set_node_reason(m, Activation{Activation::Member, node});
  // components of an active pair / openable ciphertext are active too
  for (int m : members_[root]) {
    if (terms_[m].is_pair() || enc_ok_[m])
      for (std::size_t i = 0; i < kids_[m].size(); ++i)
        activate_class(find(kids_[m][i]), kids_[m][i], Activation{Activation::Down, m, static_cast<int>(i)});
  }
  touch_parents(root);
}

void EGraph::touch_parents(int root) {
  for (int u : uses_[root]) dirty_.push_back(u);
}

void EGraph::reroot(int n) {
  int prev = -1;
  Edge prev_edge;
  int cur = n;
  while (cur != -1) {
    const int next = pf_parent_[cur];
    Edge e = pf_edge_[cur];
    pf_parent_[cur] = prev;
    pf_edge_[cur] = prev_edge;
    prev = cur;
    prev_edge = std::move(e);
    cur = next;
  }
}

void EGraph::merge(int a, int b, const Edge& e) {
  int ra = find(a), rb = find(b);
  if (ra == rb) return;
  if (++merges_ > merge_cap_) {
    exhausted_ = true;
    return;
  }
  reroot(a);
  pf_parent_[a] = b;
  pf_edge_[a] = e;

  const bool was_a = active_[ra], was_b = active_[rb];
  for (int m : members_[ra]) set_node_reason(m, Activation{Activation::Member, b});
  for (int m : members_[rb]) set_node_reason(m, Activation{Activation::Member, a});

  if (members_[ra].size() > members_[rb].size()) std::swap(ra, rb);
  const bool small_was = ra == find(a) ? was_a : was_b;
  const bool big_was = ra == find(a) ? was_b : was_a;
  // ra is the smaller class and is absorbed into rb
  uf_[ra] = rb;
  std::vector<int> moved = std::move(members_[ra]);
  members_[rb].insert(members_[rb].end(), moved.begin(), moved.end());
  members_[ra].clear();
  uses_[rb].insert(uses_[rb].end(), uses_[ra].begin(), uses_[ra].end());
  uses_[ra].clear();

  if (basic_[ra] >= 0 && basic_[rb] >= 0 && !(terms_[basic_[ra]] == terms_[basic_[rb]])) {
    if (bottom_a_ < 0) {
      bottom_a_ = basic_[ra];
      bottom_b_ = basic_[rb];
    }
  } else if (basic_[rb] < 0) {
    basic_[rb] = basic_[ra];
  }

  auto project = [&](int p, int q) {
    for (std::size_t i = 0; i < kids_[p].size(); ++i) {
      Edge pe;
      pe.kind = Edge::Proj;
      pe.lhs = kids_[p][i];
      pe.rhs = kids_[q][i];
      pe.p1 = p;
      pe.p2 = q;
      pe.index = static_cast<int>(i);
      pending_.push_back(Pending{pe.lhs, pe.rhs, pe});
    }
  };
  if (pair_rep_[ra] >= 0 && pair_rep_[rb] >= 0) project(pair_rep_[rb], pair_rep_[ra]);
  else if (pair_rep_[rb] < 0) pair_rep_[rb] = pair_rep_[ra];
  if (enc_rep_[ra] >= 0 && enc_rep_[rb] >= 0) project(enc_rep_[rb], enc_rep_[ra]);
  else if (enc_rep_[rb] < 0) enc_rep_[rb] = enc_rep_[ra];

  active_[rb] = true;
  active_[ra] = false;
  // members that were not active before now are; push activity downwards
  auto wake = [&](const std::vector<int>& nodes) {
    for (int m : nodes)
      if (terms_[m].is_pair() || enc_ok_[m])
        for (std::size_t i = 0; i < kids_[m].size(); ++i)
          activate_class(find(kids_[m][i]), kids_[m][i], Activation{Activation::Down, m, static_cast<int>(i)});
  };
  if (!small_was) wake(moved);
  if (!big_was) {
    std::vector<int> old(members_[rb].begin(), members_[rb].end() - static_cast<std::ptrdiff_t>(moved.size()));
    wake(old);
  }
  touch_parents(rb);
}

void EGraph::check_node(int n) {
  if (kids_[n].empty() || terms_[n].is_key_app()) return;
  if (!all_kids_active(n)) return;
  const int r = find(n);
  if (!active_[r]) activate_class(r, n, Activation{Activation::Cong});
  SigKey key{terms_[n].kind(), terms_[n].is_app() ? terms_[n].name() : std::string(), {}};
  for (int k : kids_[n]) key.kids.push_back(find(k));
  auto [it, inserted] = sig_.emplace(std::move(key), n);
  if (inserted) return;
  const int m = it->second;
  bool fresh = true;
  for (std::size_t i = 0; i < kids_[m].size(); ++i)
    if (find(kids_[m][i]) != it->first.kids[i]) fresh = false;
  if (!fresh) {
    it->second = n;
    return;
  }
  if (find(m) == find(n)) return;
  Edge e;
  e.kind = Edge::Cong;
  e.lhs = n;
  e.rhs = m;
  e.p1 = n;
  e.p2 = m;
  pending_.push_back(Pending{n, m, e});
}

void EGraph::close() {
  while (!exhausted_ && !bottom() && (!pending_.empty() || !dirty_.empty())) {
    if (!pending_.empty()) {
      Pending p = std::move(pending_.front());
      pending_.pop_front();
      merge(p.a, p.b, p.edge);
    } else {
      const int n = dirty_.front();
      dirty_.pop_front();
      check_node(n);
    }
  }
}

std::vector<int> EGraph::roots() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(uf_.size()); ++i)
    if (uf_[i] == i) out.push_back(i);
  return out;
}

std::vector<std::pair<const EGraph::Edge*, bool>> EGraph::path(int a, int b) const {
  std::vector<int> up_a{a};
  for (int c = a; pf_parent_[c] != -1; c = pf_parent_[c]) up_a.push_back(pf_parent_[c]);
  std::vector<int> up_b{b};
  auto pos_in_a = [&](int n) { return std::find(up_a.begin(), up_a.end(), n); };
  while (pos_in_a(up_b.back()) == up_a.end()) up_b.push_back(pf_parent_[up_b.back()]);
  const auto lca = pos_in_a(up_b.back());
  std::vector<std::pair<const Edge*, bool>> out;
  for (auto it = up_a.begin(); it != lca; ++it) {
    const Edge& e = pf_edge_[*it];
    out.emplace_back(&e, e.lhs == *it);
  }
  for (std::size_t i = up_b.size() - 1; i-- > 0;) {
    const int c = up_b[i];
    const Edge& e = pf_edge_[c];
    // traversing from parent down to c
    out.emplace_back(&e, e.rhs == c);
  }
  return out;
}

}  // namespace dya
