#include "floatdv/sexpr.hpp"

#include <cctype>

namespace floatdv {

std::string Sexpr::str() const {
  if (!is_list) return quoted ? "|" + atom + "|" : atom;
  std::string s = "(";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += ' ';
    s += items[i].str();
  }
  return s + ")";
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view t) : t_(t) {}

  std::vector<Sexpr> all() {
    std::vector<Sexpr> out;
    for (skip(); i_ < t_.size(); skip()) out.push_back(one());
    return out;
  }

 private:
  void skip() {
    while (i_ < t_.size()) {
      if (std::isspace(static_cast<unsigned char>(t_[i_]))) {
        ++i_;
      } else if (t_[i_] == ';') {
        while (i_ < t_.size() && t_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  Sexpr one() {
    Sexpr e;
    const char c = t_[i_];
    if (c == '(') {
      ++i_;
      e.is_list = true;
      for (skip(); i_ < t_.size() && t_[i_] != ')'; skip()) e.items.push_back(one());
      if (i_ >= t_.size()) throw SexprError("unbalanced parenthesis");
      ++i_;
      return e;
    }
    if (c == ')') throw SexprError("unexpected ')' at offset " + std::to_string(i_));
    if (c == '|' || c == '"') {
      const std::size_t end = t_.find(c, i_ + 1);
      if (end == std::string_view::npos) throw SexprError("unterminated quoted token");
      e.quoted = true;
      e.atom = std::string(t_.substr(i_ + 1, end - i_ - 1));
      i_ = end + 1;
      return e;
    }
    const std::size_t start = i_;
    while (i_ < t_.size() && !std::isspace(static_cast<unsigned char>(t_[i_])) && t_[i_] != '(' && t_[i_] != ')' && t_[i_] != ';') ++i_;
    e.atom = std::string(t_.substr(start, i_ - start));
    return e;
  }

  std::string_view t_;
  std::size_t i_ = 0;
};

}  // namespace

std::vector<Sexpr> parse_sexprs(std::string_view text) { return Reader(text).all(); }

}  // namespace floatdv
