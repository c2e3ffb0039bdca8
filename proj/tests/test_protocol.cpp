#include <doctest.h>

#include "dya/protocol.hpp"
#include "support.hpp"

using namespace dya;

namespace {

const char* kVoterGolden =
    "role voter(id, v):\n"
    "  send id fresh(k): {v}k, id says ex x,r: {x}r = {v}k /\\ valid(x) @auth\n"
    "  recv id: _, auth says [elg(id) /\\ voted(id, {v}k) /\\ id says ex x,r: {x}r = {v}k /\\ valid(x)] @auth\n"
    "  send* id fresh(k'): ({v}k',k'), ex X,y,s: auth says [elg(X) /\\ voted(X, {y}s) /\\ X says ex x,r: {x}r = "
    "{y}s /\\ valid(x)] /\\ y = v @vote\n";

std::vector<std::string> codes(const std::string& src) {
  std::vector<std::string> out;
  for (const Diagnostic& d : validate_protocol(parse_protocol(src))) out.push_back(d.code);
  return out;
}

const char* kHeader =
    "protocol t\n"
    "phases: one\n"
    "agents A, B\n"
    "nonces m\n"
    "keys k0\n"
    "predicates p/1\n";

}  // namespace

TEST_CASE("FOO voter role golden") {
  const std::string printed = print_protocol(builtin_foo());
  CHECK(printed.find(kVoterGolden) != std::string::npos);

  const Protocol p = builtin_foo();
  const Role* voter = p.role("voter");
  REQUIRE(voter);
  REQUIRE(voter->actions.size() == 3);
  CHECK(voter->actions[0].kind == ActionKind::Send);
  CHECK(voter->actions[1].kind == ActionKind::Receive);
  CHECK(voter->actions[2].kind == ActionKind::AnonSend);
  CHECK(voter->actions[2].phase == "vote");
  CHECK(key_vars(*voter) == std::set<std::string>{"k", "k'"});
  CHECK(agent_vars(*voter).count("id"));
}

TEST_CASE("built-in models round-trip and validate clean") {
  std::vector<Protocol> models = {builtin_foo(), builtin_foo_mutant()};
  for (int n = 1; n <= 4; ++n) models.push_back(builtin_helios(n));
  for (const Protocol& p : models) {
    CAPTURE(p.name);
    CHECK(parse_protocol(print_protocol(p)) == p);
    CHECK(validate_protocol(p).empty());
  }
  CHECK(parse_protocol(foo_source()) == builtin_foo());
}

TEST_CASE("mutant differs only in the cast") {
  const Protocol foo = builtin_foo(), mut = builtin_foo_mutant();
  CHECK(mut.role("voter")->actions[2].kind == ActionKind::Send);
  CHECK(mut.role("authority")->actions == foo.role("authority")->actions);
  CHECK(mut.role("counter")->actions == foo.role("counter")->actions);
}

TEST_CASE("validation diagnostics") {
  const std::string h = kHeader;
  CHECK(codes(h + "role r(id):\n  send id: m, p(m)\n").empty());
  CHECK(codes(h + "role r(id):\n  send id: y, _\n") == std::vector<std::string>{"unbound-variable"});
  CHECK(codes(h + "role r(id):\n  recv id: y, _\n  send id: y, _\n").empty());
  CHECK(codes(h + "role r(id):\n  send id fresh(m): m, _\n") == std::vector<std::string>{"fresh-not-variable"});
  CHECK(codes(h + "role r(id):\n  send id fresh(k): {m}k, _\n  send id fresh(k): {m}k, _\n") ==
        std::vector<std::string>{"fresh-reuse"});
  CHECK(codes(h + "role r(id):\n  send id: m, _\n  send B: m, _\n") == std::vector<std::string>{"principal"});
  // the witness y never travelled
  CHECK(codes(h + "role r(id):\n  recv id: {y}k0, _\n  send id: m, p(y)\n").empty());
  CHECK(codes(h + "role r(id, y):\n  send id: m, p(y)\n") == std::vector<std::string>{"reveal-violation"});
  CHECK(codes(h + "role r(id, y):\n  send id: m, ex z: z = y /\\ p(z)\n") ==
        std::vector<std::string>{"reveal-violation"});
  CHECK(codes(h + "role r(id, y):\n  send id fresh(k): {y}k, ex z: {z}k = {y}k /\\ p(z)\n").empty());
}

TEST_CASE("parse errors") {
  const std::string h = kHeader;
  CHECK_THROWS_AS(parse_protocol(h + "role r(id):\n  shout id: m, _\n"), ParseError);
  CHECK_THROWS_AS(parse_protocol(h + "role r(id):\n  send id m, _\n"), ParseError);
  CHECK_THROWS_AS(parse_protocol(h + "predicates p/1\nrole r(id):\n  send id: m, p(m, m)\n"), ParseError);
  CHECK_THROWS_AS(parse_protocol("agents A\n"), ParseError);  // no protocol line
  CHECK_THROWS_AS(parse_protocol(h + "role r(id):\n  send id fresh(k): {m}k, _ @two\n"), ParseError);
}

TEST_CASE("suitability and instantiation") {
  const Protocol p = builtin_foo();
  const Role& voter = *p.role("voter");
  const Term V0 = Term::basic("V0", Sort::Agent), v0 = Term::basic("v0", Sort::Nonce);
  std::string why;
  CHECK(suitable(TermMap{{"id", V0}, {"v", v0}}, voter, &why));
  CHECK_FALSE(suitable(TermMap{{"id", V0}}, voter, &why));                  // not total
  CHECK_FALSE(suitable(TermMap{{"id", v0}, {"v", v0}}, voter, &why));       // id is an agent
  CHECK_FALSE(suitable(TermMap{{"id", V0}, {"v", Term::var("z")}}, voter));  // not ground
  CHECK_FALSE(suitable(TermMap{{"id", V0}, {"v", v0}, {"k", v0}}, voter));  // fresh variable
  CHECK_THROWS_AS(instantiate(voter, TermMap{{"id", V0}}), std::invalid_argument);
  const auto acts = instantiate(voter, TermMap{{"id", V0}, {"v", v0}});
  CHECK(acts[0].agent == V0);
  CHECK(to_string(*acts[0].term) == "{v0}k");
}

TEST_CASE("single action parsing") {
  const Protocol p = builtin_foo();
  const Action a = parse_action("recv A: {v0}k, V0 says [ex x, r: {x}r = {v0}k /\\ valid(x)] @auth", p.sig);
  CHECK(a.kind == ActionKind::Receive);
  CHECK(a.phase == "auth");
  CHECK(to_string(a, false) == "recv A: {v0}k, V0 says ex x,r: {x}r = {v0}k /\\ valid(x)");
  CHECK(parse_action(to_string(a), p.sig) == a);
}
