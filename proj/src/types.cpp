#include "stmon/types.hpp"

#include <algorithm>
#include <sstream>

namespace stmon {

TypePtr make_end() {
  static const TypePtr end = std::make_shared<SessionType>(SessionType{EndType{}});
  return end;
}

TypePtr make_var(std::string var) {
  return std::make_shared<SessionType>(SessionType{VarType{std::move(var)}});
}

TypePtr make_rec(std::string var, TypePtr body) {
  return std::make_shared<SessionType>(SessionType{RecType{std::move(var), std::move(body)}});
}

TypePtr make_int_choice(std::vector<SendBranch> branches) {
  return std::make_shared<SessionType>(SessionType{IntChoice{std::move(branches)}});
}

TypePtr make_ext_choice(Role from, std::vector<RecvBranch> branches) {
  return std::make_shared<SessionType>(SessionType{ExtChoice{std::move(from), std::move(branches)}});
}

namespace {

void print(std::ostringstream& out, const TypePtr& t, bool canon,
           std::vector<std::string>* binders) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, EndType>) {
          out << "end";
        } else if constexpr (std::is_same_v<N, VarType>) {
          if (canon) {
            // de Bruijn index: distance from the innermost binder.
            for (std::size_t i = binders->size(); i-- > 0;) {
              if ((*binders)[i] == n.var) {
                out << '%' << (binders->size() - 1 - i);
                return;
              }
            }
            out << '?' << n.var;  // free variable (invalid term)
          } else {
            out << n.var;
          }
        } else if constexpr (std::is_same_v<N, RecType>) {
          if (canon) {
            binders->push_back(n.var);
            out << "rec.";
            print(out, n.body, canon, binders);
            binders->pop_back();
          } else {
            out << "rec " << n.var << ".";
            print(out, n.body, canon, binders);
          }
        } else if constexpr (std::is_same_v<N, IntChoice>) {
          out << "+{";
          bool first = true;
          for (const auto& b : n.branches) {
            if (!first) out << ", ";
            first = false;
            out << b.to << '!' << b.label << '(' << b.sort << ").";
            print(out, b.cont, canon, binders);
          }
          out << '}';
        } else if constexpr (std::is_same_v<N, ExtChoice>) {
          out << n.from << "&{";
          bool first = true;
          for (const auto& b : n.branches) {
            if (!first) out << ", ";
            first = false;
            out << b.label << '(' << b.sort << ").";
            print(out, b.cont, canon, binders);
          }
          out << '}';
        }
      },
      t->node);
}

}  // namespace

std::string to_string(const TypePtr& t) {
  std::ostringstream out;
  print(out, t, false, nullptr);
  return out.str();
}

std::string canonical(const TypePtr& t) {
  std::ostringstream out;
  std::vector<std::string> binders;
  print(out, t, true, &binders);
  return out.str();
}

bool equal_types(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  return canonical(a) == canonical(b);
}

TypePtr substitute(const TypePtr& t, const std::string& var, const TypePtr& repl) {
  return std::visit(
      [&](const auto& n) -> TypePtr {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, EndType>) {
          return t;
        } else if constexpr (std::is_same_v<N, VarType>) {
          return n.var == var ? repl : t;
        } else if constexpr (std::is_same_v<N, RecType>) {
          if (n.var == var) return t;  // shadowed
          return make_rec(n.var, substitute(n.body, var, repl));
        } else if constexpr (std::is_same_v<N, IntChoice>) {
          std::vector<SendBranch> bs;
          bs.reserve(n.branches.size());
          for (const auto& b : n.branches)
            bs.push_back({b.to, b.label, b.sort, substitute(b.cont, var, repl)});
          return make_int_choice(std::move(bs));
        } else {
          std::vector<RecvBranch> bs;
          bs.reserve(n.branches.size());
          for (const auto& b : n.branches)
            bs.push_back({b.label, b.sort, substitute(b.cont, var, repl)});
          return make_ext_choice(n.from, std::move(bs));
        }
      },
      t->node);
}

std::size_t term_size(const TypePtr& t) {
  return std::visit(
      [&](const auto& n) -> std::size_t {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, EndType> || std::is_same_v<N, VarType>) {
          return 1;
        } else if constexpr (std::is_same_v<N, RecType>) {
          return 1 + term_size(n.body);
        } else if constexpr (std::is_same_v<N, IntChoice>) {
          std::size_t s = 1;
          for (const auto& b : n.branches) s += 1 + term_size(b.cont);
          return s;
        } else {
          std::size_t s = 1;
          for (const auto& b : n.branches) s += 1 + term_size(b.cont);
          return s;
        }
      },
      t->node);
}

namespace {

// `bound` = binders in scope; `unguarded` = binders not yet separated from
// the current position by a choice prefix.
void validate_rec(const TypePtr& t, std::vector<std::string>& bound,
                  std::set<std::string>& unguarded) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, EndType>) {
        } else if constexpr (std::is_same_v<N, VarType>) {
          if (std::find(bound.begin(), bound.end(), n.var) == bound.end())
            throw ValidationError("free recursion variable: " + n.var);
          if (unguarded.count(n.var))
            throw ValidationError("unguarded recursion variable: " + n.var);
        } else if constexpr (std::is_same_v<N, RecType>) {
          bound.push_back(n.var);
          const bool was_unguarded = !unguarded.insert(n.var).second;
          validate_rec(n.body, bound, unguarded);
          if (!was_unguarded) unguarded.erase(n.var);
          bound.pop_back();
        } else if constexpr (std::is_same_v<N, IntChoice>) {
          if (n.branches.empty())
            throw ValidationError("empty internal choice");
          // branches are identified by (recipient, label); the same label may
          // go to different peers
          std::set<std::pair<Role, Label>> keys;
          for (const auto& b : n.branches)
            if (!keys.insert({b.to, b.label}).second)
              throw ValidationError("duplicate branch in internal choice: " +
                                    b.to + "!" + b.label);
          for (const auto& b : n.branches) {
            std::set<std::string> g;  // all binders are guarded below a prefix
            validate_rec(b.cont, bound, g);
          }
        } else {
          if (n.branches.empty())
            throw ValidationError("empty external choice");
          std::set<Label> labels;
          for (const auto& b : n.branches)
            if (!labels.insert(b.label).second)
              throw ValidationError("duplicate label in external choice: " + b.label);
          for (const auto& b : n.branches) {
            std::set<std::string> g;
            validate_rec(b.cont, bound, g);
          }
        }
      },
      t->node);
}

void collect(const TypePtr& t, std::set<Role>* roles,
             std::set<std::pair<Label, Sort>>* msgs) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, RecType>) {
          collect(n.body, roles, msgs);
        } else if constexpr (std::is_same_v<N, IntChoice>) {
          for (const auto& b : n.branches) {
            if (roles) roles->insert(b.to);
            if (msgs) msgs->insert({b.label, b.sort});
            collect(b.cont, roles, msgs);
          }
        } else if constexpr (std::is_same_v<N, ExtChoice>) {
          if (roles) roles->insert(n.from);
          for (const auto& b : n.branches) {
            if (msgs) msgs->insert({b.label, b.sort});
            collect(b.cont, roles, msgs);
          }
        }
      },
      t->node);
}

}  // namespace

void validate(const TypePtr& t) {
  std::vector<std::string> bound;
  std::set<std::string> unguarded;
  validate_rec(t, bound, unguarded);
}

std::set<Role> roles_of(const TypePtr& t) {
  std::set<Role> roles;
  collect(t, &roles, nullptr);
  return roles;
}

std::set<std::pair<Label, Sort>> messages_of(const TypePtr& t) {
  std::set<std::pair<Label, Sort>> msgs;
  collect(t, nullptr, &msgs);
  return msgs;
}

Universe Universe::from_types(const std::vector<TypePtr>& ts) {
  Universe u;
  for (const auto& t : ts) {
    collect(t, &u.roles, &u.messages);
  }
  return u;
}

}  // namespace stmon
