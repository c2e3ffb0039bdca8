#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "dya/term.hpp"

namespace dya {

/// Declared symbols: sorted constants, predicates and constructors with arity.
/// Identifiers that are not declared parse as variables.
struct Signature {
  std::map<std::string, Sort> constants;
  std::map<std::string, int> predicates;
  std::map<std::string, int> constructors;

  void add_constant(const std::string& name, Sort s) { constants[name] = s; }
  void add_predicate(const std::string& name, int arity) { predicates[name] = arity; }
  void add_constructor(const std::string& name, int arity) { constructors[name] = arity; }

  std::optional<Sort> constant_sort(const std::string& name) const;
  std::optional<int> predicate_arity(const std::string& name) const;
  /// Includes the reserved key constructors sk/1 and vk/1.
  std::optional<int> constructor_arity(const std::string& name) const;

  /// Union; conflicting redeclarations throw.
  void merge(const Signature& other);
};

/// Names produced by the fresh-value allocator ("n#1#0", "k#1#0") carry their
/// sort in the prefix.
std::optional<Sort> generated_sort(const std::string& name);

}  // namespace dya
