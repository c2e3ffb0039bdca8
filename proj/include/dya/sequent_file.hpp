#pragma once

#include <string>
#include <string_view>

#include "dya/engine.hpp"
#include "dya/signature.hpp"

namespace dya {

/// A query file: declaration lines, then `terms:`, `assertions:` and `goal:`
/// sections with one item per line.
///
///   agents A, B
///   nonces v, 0, 1
///   keys k
///   predicates valid/1
///   constructors ballot/1
struct SequentFile {
  Signature sig;
  Sequent sequent;
};

SequentFile parse_sequent_file(std::string_view text);
std::string print_sequent_file(const SequentFile& f);

/// Parses one declaration line (agents/nonces/keys/predicates/constructors)
/// into `sig`. Returns false when the line is not a declaration.
bool parse_declaration(std::string_view line, int line_no, Signature& sig);
std::string print_declarations(const Signature& sig);

}  // namespace dya
