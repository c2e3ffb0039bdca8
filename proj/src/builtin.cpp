#include <stdexcept>
#include <string>

#include "dya/protocol.hpp"

namespace dya {

namespace {

const char* kFooHeader = R"(protocol foo
phases: auth, vote
agents A, C, V0, V1, V2, V3
nonces v0, v1
predicates elg/1, valid/1, voted/2
public v0, v1
fact *: valid(v0)
fact *: valid(v1)
fact A: elg(V0)
fact A: elg(V1)
fact A: elg(V2)
fact A: elg(V3)

role voter(id, v):
  send id fresh(k): {v}k, id says [ex x, r: {x}r = {v}k /\ valid(x)] @auth
  recv id: _, auth says [elg(id) /\ voted(id, {v}k) /\ id says [ex x, r: {x}r = {v}k /\ valid(x)]] @auth
)";

const char* kFooCast =
    R"(  %s id fresh(k'): ({v}k', k'), ex X, y, s: auth says [elg(X) /\ voted(X, {y}s) /\ X says [ex x, r: {x}r = {y}s /\ valid(x)]] /\ y = v @vote
)";

const char* kFooRest = R"(
# one authority session per voter name
role authority(id, V):
  recv id: c, V says [ex x, r: {x}r = c /\ valid(x)] @auth
  deny id: ex x: voted(V, x) @auth
  insert id: voted(V, c) @auth
  send id: _, id says [elg(V) /\ voted(V, c) /\ V says [ex x, r: {x}r = c /\ valid(x)]] @auth

role counter(id):
  recv id: ({w}r, r), ex X, y, s: a says [elg(X) /\ voted(X, {y}s) /\ X says [ex x, r': {x}r' = {y}s /\ valid(x)]] /\ y = w @vote
  confirm id: ex X, y, s: a says [elg(X) /\ voted(X, {y}s) /\ X says [ex x, r': {x}r' = {y}s /\ valid(x)]] /\ y = w @vote
  send id: ({w}r, r), _ @vote
)";

std::string foo_with(const char* kw) {
  std::string cast = kFooCast;
  cast.replace(cast.find("%s"), 2, kw);
  return std::string(kFooHeader) + cast + kFooRest;
}

}  // namespace

std::string foo_source() { return foo_with("send*"); }

// The cast goes over an ordinary channel, so observers learn who sent it.
std::string foo_mutant_source() {
  std::string s = foo_with("send");
  s.replace(s.find("protocol foo"), 12, "protocol foo_mutant");
  return s;
}

std::string helios_source(int voters) {
  if (voters < 1 || voters > 4) throw std::invalid_argument("helios model supports 1 to 4 voters");
  const int k = voters;
  auto seq = [&](const std::string& pre, const std::string& sep) {
    std::string out;
    for (int i = 1; i <= k; ++i) out += (i > 1 ? sep : "") + pre + std::to_string(i);
    return out;
  };
  std::string s = R"(protocol helios
phases: prepare, cast, tally
agents S, A, V0, V1, V2, V3
nonces v0, v1, cast
predicates valid/1, voted/1
constructors ballot/1, sum/)" + std::to_string(k) + R"(
public v0, v1, cast
fact *: valid(v0)
fact *: valid(v1)

role voter(id, v):
  send id: v, id says valid(v) @prepare
  recv id: b, srv says [ex x: b = ballot(x) /\ id says valid(x)] @prepare
  send id: cast, _ @cast

# ballot preparation script, one session per voter
role script(id, V):
  recv id: u, V says valid(u) @prepare
  send id: ballot(u), id says [ex x: ballot(u) = ballot(x) /\ V says valid(x)] @prepare
  recv id: cast, _ @cast
  send id: ballot(u), id says [ex x: ballot(u) = ballot(x) /\ V says valid(x)] @cast

role admin(id, V):
  recv id: b, srv says [ex x: b = ballot(x) /\ V says valid(x)] @cast
  deny id: voted(V) @cast
  insert id: voted(V) @cast
  send id: b, id says srv says [ex x: b = ballot(x) /\ V says valid(x)] @cast

# homomorphic tally over the published ballot of each voter
role tally(id, )" + seq("W", ", ") + R"():
)";
  for (int i = 1; i <= k; ++i) {
    const std::string n = std::to_string(i);
    s += "  recv id: ballot(x" + n + "), id says s" + n + " says [ex x: ballot(x" + n + ") = ballot(x) /\\ W" + n +
         " says valid(x)] @tally\n";
  }
  const std::string t = "ballot(sum(" + seq("x", ", ") + "))";
  std::string ballots;
  for (int i = 1; i <= k; ++i)
    ballots += " /\\ ballot(x" + std::to_string(i) + ") = ballot(y" + std::to_string(i) + ")";
  s += "  send id: " + t + ", id says [ex s: " + t + " = ballot(s) /\\ [ex " + seq("y", ", ") + ": s = sum(" +
       seq("y", ", ") + ")" + ballots + "]] @tally\n";
  return s;
}

// Two certificates about the same ciphertext pin the vote to 0.
std::string leak_sequent_source() {
  return R"(# vote leak from two certificates
nonces v, 0, 1, 2
keys k
terms:
  {v}k
  0
  1
  2
assertions:
  ex x, y: {v}k = {x}y /\ (x = 0 \/ x = 1)
  ex x, y: {v}k = {x}y /\ (x = 0 \/ x = 2)
goal:
  ex y: {v}k = {0}y
)";
}

Protocol builtin_foo() { return parse_protocol(foo_source()); }
Protocol builtin_foo_mutant() { return parse_protocol(foo_mutant_source()); }
Protocol builtin_helios(int voters) { return parse_protocol(helios_source(voters)); }

}  // namespace dya
