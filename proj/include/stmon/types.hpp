#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace stmon {

// Local (endpoint) session types with asynchronous multi-input-queue
// semantics. Terms are immutable and shared; structural equality is defined
// up to alpha-renaming of recursion binders via canonical de-Bruijn strings.

using Role = std::string;
using Label = std::string;
using Sort = std::string;

struct SessionType;
using TypePtr = std::shared_ptr<const SessionType>;

// One branch of an internal choice: send `label(sort)` to `to`, continue.
struct SendBranch {
  Role to;
  Label label;
  Sort sort;
  TypePtr cont;
};

// One branch of an external choice (the sender is stored on the choice).
struct RecvBranch {
  Label label;
  Sort sort;
  TypePtr cont;
};

struct IntChoice {
  std::vector<SendBranch> branches;
};
struct ExtChoice {
  Role from;
  std::vector<RecvBranch> branches;
};
struct EndType {};
struct RecType {
  std::string var;
  TypePtr body;
};
struct VarType {
  std::string var;
};

struct SessionType {
  std::variant<IntChoice, ExtChoice, EndType, RecType, VarType> node;
};

TypePtr make_end();
TypePtr make_var(std::string var);
TypePtr make_rec(std::string var, TypePtr body);
TypePtr make_int_choice(std::vector<SendBranch> branches);
TypePtr make_ext_choice(Role from, std::vector<RecvBranch> branches);

// Human-readable form, round-trips through the parser.
std::string to_string(const TypePtr& t);

// Canonical key: like to_string but recursion binders are de-Bruijn encoded,
// so alpha-equivalent terms map to the same string.
std::string canonical(const TypePtr& t);

bool equal_types(const TypePtr& a, const TypePtr& b);

// Capture-free substitution of a closed term for a free recursion variable.
TypePtr substitute(const TypePtr& t, const std::string& var, const TypePtr& repl);

// Number of syntax nodes; used by the synthesis growth guard.
std::size_t term_size(const TypePtr& t);

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Checks the term invariants: closed, guarded (every recursion variable is
// separated from its binder by at least one choice prefix), and labels
// pairwise distinct within each choice. Throws ValidationError otherwise.
void validate(const TypePtr& t);

// Roles mentioned anywhere in a term (as recipients or senders).
std::set<Role> roles_of(const TypePtr& t);
// (label, sort) pairs mentioned anywhere in a term.
std::set<std::pair<Label, Sort>> messages_of(const TypePtr& t);

// A message sitting in an endpoint's input queue.
struct QueuedMsg {
  Role sender;
  Label label;
  Sort sort;
  bool operator==(const QueuedMsg&) const = default;
};
using InputQueue = std::vector<QueuedMsg>;

// An endpoint: its local type plus its input queue (oldest first).
struct EndpointConfig {
  TypePtr type;
  InputQueue queue;
};

// The message universe an endpoint may be offered: the roles that might talk
// to it and the message alphabet. Used to bound the enqueue rule.
struct Universe {
  std::set<Role> roles;
  std::set<std::pair<Label, Sort>> messages;
  static Universe from_types(const std::vector<TypePtr>& ts);
};

inline constexpr int kMaxRoles = 15;    // role ids 1..15; 0 is invalid
inline constexpr int kMaxLabels = 64;   // label ids 0..63

}  // namespace stmon
