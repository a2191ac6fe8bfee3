#include "glp/formula.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <mutex>
#include <unordered_set>

namespace glp {

struct Formula::Node {
  Kind kind = Kind::Bot;
  std::size_t index = 0;   // Box
  std::string name;        // Var
  const Node* a = nullptr; // Imp left / Box body
  const Node* b = nullptr; // Imp right
  std::size_t hash = 0;
  int max_box = -1;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t node_hash(const Formula::Node& n) {
  std::size_t h = static_cast<std::size_t>(n.kind) + 0x51;
  h = mix(h, n.index);
  h = mix(h, std::hash<std::string>{}(n.name));
  h = mix(h, reinterpret_cast<std::size_t>(n.a));
  h = mix(h, reinterpret_cast<std::size_t>(n.b));
  return h;
}

struct NodeEq {
  bool operator()(const Formula::Node* x, const Formula::Node* y) const {
    return x->kind == y->kind && x->index == y->index && x->name == y->name &&
           x->a == y->a && x->b == y->b;
  }
};
struct NodePtrHash {
  std::size_t operator()(const Formula::Node* n) const { return node_hash(*n); }
};

// Interning table; nodes live for the whole process.
const Formula::Node* intern(Formula::Node&& proto) {
  static std::mutex mu;
  static auto* table =
      new std::unordered_set<const Formula::Node*, NodePtrHash, NodeEq>();
  proto.hash = node_hash(proto);
  int mb = -1;
  if (proto.kind == Formula::Kind::Box) {
    mb = std::max<int>(static_cast<int>(proto.index), proto.a->max_box);
  } else if (proto.kind == Formula::Kind::Imp) {
    mb = std::max(proto.a->max_box, proto.b->max_box);
  }
  proto.max_box = mb;
  std::lock_guard<std::mutex> lock(mu);
  auto it = table->find(&proto);
  if (it != table->end()) return *it;
  auto* owned = new Formula::Node(std::move(proto));
  table->insert(owned);
  return owned;
}

}  // namespace

Formula Formula::bot() {
  static const Node* n = [] {
    Node proto;
    proto.kind = Kind::Bot;
    return intern(std::move(proto));
  }();
  return Formula(n);
}

Formula Formula::var(std::string_view name) {
  Node proto;
  proto.kind = Kind::Var;
  proto.name.assign(name);
  return Formula(intern(std::move(proto)));
}

Formula Formula::imp(Formula lhs, Formula rhs) {
  Node proto;
  proto.kind = Kind::Imp;
  proto.a = lhs.node_;
  proto.b = rhs.node_;
  return Formula(intern(std::move(proto)));
}

Formula Formula::box(std::size_t index, Formula body) {
  Node proto;
  proto.kind = Kind::Box;
  proto.index = index;
  proto.a = body.node_;
  return Formula(intern(std::move(proto)));
}

Formula Formula::top() { return imp(bot(), bot()); }
Formula Formula::neg(Formula a) { return imp(a, bot()); }
Formula Formula::conj(Formula a, Formula b) { return neg(imp(a, neg(b))); }
Formula Formula::disj(Formula a, Formula b) { return imp(neg(a), b); }
Formula Formula::iff(Formula a, Formula b) {
  return conj(imp(a, b), imp(b, a));
}
Formula Formula::diamond(std::size_t index, Formula a) {
  return neg(box(index, neg(a)));
}

Formula::Kind Formula::kind() const { return node_->kind; }

const std::string& Formula::var_name() const {
  if (kind() != Kind::Var) throw std::logic_error("var_name on non-variable");
  return node_->name;
}
std::size_t Formula::box_index() const {
  if (kind() != Kind::Box) throw std::logic_error("box_index on non-box");
  return node_->index;
}
Formula Formula::box_body() const {
  if (kind() != Kind::Box) throw std::logic_error("box_body on non-box");
  return Formula(node_->a);
}
Formula Formula::left() const {
  if (kind() != Kind::Imp) throw std::logic_error("left on non-implication");
  return Formula(node_->a);
}
Formula Formula::right() const {
  if (kind() != Kind::Imp) throw std::logic_error("right on non-implication");
  return Formula(node_->b);
}

std::size_t Formula::hash() const { return node_->hash; }
int Formula::max_box_index() const { return node_->max_box; }

int Formula::compare(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return 0;
  auto rank = [](Kind k) { return static_cast<int>(k); };
  if (rank(a.kind()) != rank(b.kind()))
    return rank(a.kind()) < rank(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case Kind::Bot:
      return 0;
    case Kind::Var:
      return a.node_->name.compare(b.node_->name) < 0 ? -1 : 1;
    case Kind::Box: {
      if (a.node_->index != b.node_->index)
        return a.node_->index < b.node_->index ? -1 : 1;
      return compare(Formula(a.node_->a), Formula(b.node_->a));
    }
    case Kind::Imp: {
      int c = compare(Formula(a.node_->a), Formula(b.node_->a));
      if (c != 0) return c;
      return compare(Formula(a.node_->b), Formula(b.node_->b));
    }
  }
  return 0;
}

namespace {
void render(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Formula::Kind::Bot:
      out += 'F';
      return;
    case Formula::Kind::Var:
      out += f.var_name();
      return;
    case Formula::Kind::Box:
      out += '[';
      out += std::to_string(f.box_index());
      out += ']';
      render(f.box_body(), out);
      return;
    case Formula::Kind::Imp:
      out += '(';
      render(f.left(), out);
      out += " -> ";
      render(f.right(), out);
      out += ')';
      return;
  }
}
}  // namespace

std::string Formula::str() const {
  std::string out;
  render(*this, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

constexpr std::size_t kMaxBoxIndex = 1000000;

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse_top() {
    Formula f = parse_unary();
    skip_ws();
    if (!eof()) {
      int op = try_binop();
      if (op < 0) fail("expected operator or end of input");
      Formula g = parse_unary();
      skip_ws();
      if (!eof()) fail("trailing input after top-level formula");
      return combine(op, f, g);
    }
    return f;
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool lookahead(std::string_view s) const {
    return text_.substr(pos_, s.size()) == s;
  }

  // Returns operator id or -1: 0 '->', 1 '&', 2 '|', 3 '<->'.
  int try_binop() {
    skip_ws();
    if (eof()) return -1;
    if (lookahead("->")) { pos_ += 2; return 0; }
    if (lookahead("<->")) { pos_ += 3; return 3; }
    if (peek() == '&') { ++pos_; return 1; }
    if (peek() == '|') { ++pos_; return 2; }
    return -1;
  }

  static Formula combine(int op, Formula a, Formula b) {
    switch (op) {
      case 0: return Formula::imp(a, b);
      case 1: return Formula::conj(a, b);
      case 2: return Formula::disj(a, b);
      default: return Formula::iff(a, b);
    }
  }

  std::size_t parse_nat() {
    skip_ws();
    if (eof() || !std::isdigit(static_cast<unsigned char>(peek())))
      fail("box index must be a natural number");
    std::size_t start = pos_;
    std::size_t value = 0;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + static_cast<std::size_t>(peek() - '0');
      if (value > kMaxBoxIndex) {
        pos_ = start;
        fail("box index out of range");
      }
      ++pos_;
    }
    return value;
  }

  Formula parse_unary() {
    skip_ws();
    if (eof()) fail("unexpected end of input");
    char c = peek();
    if (c == 'F') { ++pos_; return Formula::bot(); }
    if (c == 'T') { ++pos_; return Formula::top(); }
    if (c == '~') { ++pos_; return Formula::neg(parse_unary()); }
    if (c == '[') {
      ++pos_;
      std::size_t idx = parse_nat();
      skip_ws();
      if (eof() || peek() != ']') fail("expected ']'");
      ++pos_;
      return Formula::box(idx, parse_unary());
    }
    if (c == '<') {
      if (lookahead("<->")) fail("expected formula before '<->'");
      ++pos_;
      std::size_t idx = parse_nat();
      skip_ws();
      if (eof() || peek() != '>') fail("expected '>'");
      ++pos_;
      return Formula::diamond(idx, parse_unary());
    }
    if (c == '(') {
      ++pos_;
      Formula f = parse_unary();
      int op = try_binop();
      if (op >= 0) {
        Formula g = parse_unary();
        f = combine(op, f, g);
      }
      skip_ws();
      if (eof() || peek() != ')') fail("expected ')'");
      ++pos_;
      return f;
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      ++pos_;
      while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                        peek() == '_'))
        ++pos_;
      return Formula::var(text_.substr(start, pos_ - start));
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse_top(); }

// ---------------------------------------------------------------------------
// FormulaSet and modal atoms

FormulaSet::FormulaSet(std::vector<Formula> items) {
  for (auto& f : items) insert(f);
}

void FormulaSet::insert(Formula f) {
  auto it = std::lower_bound(items_.begin(), items_.end(), f, FormulaLess{});
  if (it != items_.end() && *it == f) return;
  items_.insert(it, f);
}

bool FormulaSet::contains(const Formula& f) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), f, FormulaLess{});
  return it != items_.end() && *it == f;
}

bool FormulaSet::includes(const FormulaSet& other) const {
  return std::includes(items_.begin(), items_.end(), other.items_.begin(),
                       other.items_.end(), FormulaLess{});
}

FormulaSet FormulaSet::union_of(const FormulaSet& a, const FormulaSet& b) {
  FormulaSet out = a;
  for (const auto& f : b) out.insert(f);
  return out;
}

std::string FormulaSet::str() const {
  std::string out = "{";
  bool first = true;
  for (const auto& f : items_) {
    if (!first) out += ", ";
    first = false;
    out += f.str();
  }
  out += '}';
  return out;
}

namespace {
void collect_atoms(const Formula& f, FormulaSet& out) {
  switch (f.kind()) {
    case Formula::Kind::Bot:
      return;
    case Formula::Kind::Var:
    case Formula::Kind::Box:
      out.insert(f);
      return;
    case Formula::Kind::Imp:
      collect_atoms(f.left(), out);
      collect_atoms(f.right(), out);
      return;
  }
}
}  // namespace

FormulaSet modal_atoms(const Formula& f) {
  FormulaSet out;
  collect_atoms(f, out);
  return out;
}

Formula fold_conj(const std::vector<Formula>& items) {
  if (items.empty()) return Formula::top();
  Formula acc = items.back();
  for (std::size_t i = items.size() - 1; i-- > 0;)
    acc = Formula::conj(items[i], acc);
  return acc;
}

}  // namespace glp
