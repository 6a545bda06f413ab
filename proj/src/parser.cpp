#include "stmon/parser.hpp"

#include <cctype>

namespace stmon {

namespace {

class Parser {
 public:
  Parser(const std::string& text, const ParseOptions& opts)
      : text_(text), opts_(opts) {}

  TypePtr parse() {
    TypePtr t = parse_type();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input after type");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool peek_char(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c)
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool try_char(char c) {
    if (peek_char(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_cont(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  std::string ident() {
    skip_ws();
    if (pos_ >= text_.size() || !ident_start(text_[pos_]))
      fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_cont(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  Sort sort() {
    std::string s = ident();
    if (!opts_.sorts.empty() && !opts_.sorts.count(s))
      fail("unknown sort: " + s);
    return s;
  }

  // ROLE "!" LABEL "(" SORT ")" "." type  -- ROLE already consumed
  SendBranch send_branch(Role to) {
    expect('!');
    Label l = ident();
    expect('(');
    Sort s = sort();
    expect(')');
    expect('.');
    return {std::move(to), std::move(l), std::move(s), parse_type()};
  }

  // LABEL "(" SORT ")" "." type
  RecvBranch recv_branch() {
    Label l = ident();
    expect('(');
    Sort s = sort();
    expect(')');
    expect('.');
    return {std::move(l), std::move(s), parse_type()};
  }

  TypePtr parse_type() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (try_char('+')) {
      expect('{');
      std::vector<SendBranch> bs;
      do {
        Role to = ident();
        bs.push_back(send_branch(std::move(to)));
      } while (try_char(','));
      expect('}');
      return make_int_choice(std::move(bs));
    }
    std::string id = ident();
    if (id == "end") return make_end();
    if (id == "rec") {
      std::string var = ident();
      expect('.');
      return make_rec(std::move(var), parse_type());
    }
    if (peek_char('!')) {
      // singleton internal choice without braces
      std::vector<SendBranch> bs;
      bs.push_back(send_branch(std::move(id)));
      return make_int_choice(std::move(bs));
    }
    if (try_char('&')) {
      if (try_char('{')) {
        std::vector<RecvBranch> bs;
        do {
          bs.push_back(recv_branch());
        } while (try_char(','));
        expect('}');
        return make_ext_choice(std::move(id), std::move(bs));
      }
      // singleton external choice without braces
      std::vector<RecvBranch> bs;
      bs.push_back(recv_branch());
      return make_ext_choice(std::move(id), std::move(bs));
    }
    return make_var(std::move(id));
  }

  const std::string& text_;
  const ParseOptions& opts_;
  std::size_t pos_ = 0;
};

}  // namespace

TypePtr parse_session_type(const std::string& text, const ParseOptions& opts) {
  Parser p(text, opts);
  TypePtr t = p.parse();
  validate(t);
  return t;
}

}  // namespace stmon
