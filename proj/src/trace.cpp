#include <regex>
#include <sstream>

#include "dya/parse.hpp"
#include "dya/runtime.hpp"
#include "text_util.hpp"

namespace dya {

using detail::join;
using detail::trim;

std::string write_trace(const Run& run) {
  std::ostringstream os;
  os << "run " << run.protocol << " seed=" << run.seed << '\n';
  for (const SessionSpec& s : run.setup.sessions) {
    os << "session " << s.role;
    for (const auto& [v, t] : s.sigma) os << ' ' << v << '=' << to_string(t);
    os << '\n';
  }
  auto terms = [](const auto& ts) { return join(std::vector<Term>(ts.begin(), ts.end()), [](const Term& t) { return to_string(t); }); };
  if (!run.setup.compromised.empty()) os << "compromise " << terms(run.setup.compromised) << '\n';
  for (const Term& t : run.setup.intruder_terms) os << "intruder-knows " << to_string(t) << '\n';
  for (std::size_t i = 0; i < run.actions.size(); ++i)
    os << i << ' ' << to_string(run.actions[i].agent) << ' ' << to_string(run.actions[i], false) << '\n';
  return os.str();
}

Run parse_trace(std::string_view text, const Protocol& p) {
  Run run;
  std::istringstream in{std::string(text)};
  std::string raw;
  int n = 0;
  bool header = false;
  static const std::regex head(R"(run\s+(\S+)\s+seed=(\d+))");
  while (std::getline(in, raw)) {
    ++n;
    const std::string line = trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    if (!header) {
      std::smatch m;
      if (!std::regex_match(line, m, head)) throw ParseError("expected 'run <protocol> seed=<n>'", n, 1);
      run.protocol = m[1];
      run.seed = std::stoull(m[2]);
      header = true;
      continue;
    }
    Parser ps(tokenize(line, n), p.sig);
    if (detail::starts_with_word(line, "session")) {
      ps.next();
      SessionSpec s;
      s.role = ps.expect_ident();
      const Role* r = p.role(s.role);
      if (!r) throw ParseError("unknown role '" + s.role + "'", n, 1);
      while (!ps.at_end()) {
        std::string v = ps.expect_ident();
        ps.expect_punct("=");
        s.sigma[v] = ps.term();
      }
      std::string why;
      if (!suitable(s.sigma, *r, &why)) throw ParseError(why, n, 1);
      run.setup.sessions.push_back(std::move(s));
      continue;
    }
    if (detail::starts_with_word(line, "compromise")) {
      ps.next();
      while (!ps.at_end()) {
        if (ps.is_punct(",")) {
          ps.next();
          continue;
        }
        run.setup.compromised.push_back(ps.term());
      }
      continue;
    }
    if (detail::starts_with_word(line, "intruder-knows")) {
      const Term t = parse_term(line.substr(14), p.sig);
      if (!t.is_ground()) throw ParseError("intruder terms must be ground", n, 1);
      run.setup.intruder_terms.insert(t);
      continue;
    }
    std::istringstream words(line);
    std::string idx, agent;
    words >> idx >> agent;
    if (idx != std::to_string(run.actions.size())) throw ParseError("expected step index " + std::to_string(run.actions.size()), n, 1);
    const std::size_t at = line.find(agent, idx.size()) + agent.size();
    Action a = parse_action(line.substr(at), p.sig, n);
    if (to_string(a.agent) != agent) throw ParseError("acting agent does not match the action", n, 1);
    run.actions.push_back(std::move(a));
  }
  if (!header) throw ParseError("empty trace", n, 1);
  return run;
}

std::string dump_knowledge(const Knowledge& k) {
  std::ostringstream os;
  os << "terms:\n";
  for (const Term& t : k.X) os << "  " << to_string(t) << '\n';
  os << "assertions:\n";
  for (const Assertion& a : k.phi) os << "  " << to_string(a) << '\n';
  return os.str();
}

}  // namespace dya
