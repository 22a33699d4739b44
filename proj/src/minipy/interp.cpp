#include <limits>
#include <map>
#include <unordered_map>

#include "execbench/minipy.hpp"

namespace execbench::minipy {

std::string repr(const Value& v) {
  if (v.is_none()) return "None";
  if (auto i = std::get_if<std::int64_t>(&v.v)) return std::to_string(*i);
  if (auto b = std::get_if<bool>(&v.v)) return *b ? "True" : "False";
  const auto& items = *std::get<ListRef>(v.v);
  std::string out = "[";
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k) out += ", ";
    out += repr(items[k]);
  }
  return out + "]";
}

bool structurally_equal(const Value& a, const Value& b) {
  if (a.v.index() != b.v.index()) return false;
  if (a.is_none()) return true;
  if (a.is_int()) return std::get<std::int64_t>(a.v) == std::get<std::int64_t>(b.v);
  if (a.is_bool()) return std::get<bool>(a.v) == std::get<bool>(b.v);
  const auto& xs = *std::get<ListRef>(a.v);
  const auto& ys = *std::get<ListRef>(b.v);
  if (xs.size() != ys.size()) return false;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!structurally_equal(xs[i], ys[i])) return false;
  return true;
}

std::optional<Value> from_literal(const pyliteral::Literal& lit) {
  using pyliteral::Kind;
  switch (lit.kind) {
    case Kind::None: return Value::none();
    case Kind::Bool: return Value::boolean(lit.boolean);
    case Kind::Int: {
      auto i = lit.as_int64();
      if (!i) return std::nullopt;
      return Value::integer(*i);
    }
    case Kind::List: {
      std::vector<Value> xs;
      for (const auto& item : lit.items) {
        auto v = from_literal(item);
        if (!v) return std::nullopt;
        xs.push_back(std::move(*v));
      }
      return Value::list(std::move(xs));
    }
    default: return std::nullopt;
  }
}

std::string_view error_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::None: return "None";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::PopFromEmpty: return "PopFromEmpty";
    case ErrorKind::PopIndexOutOfRange: return "PopIndexOutOfRange";
    case ErrorKind::ZeroDivision: return "ZeroDivision";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::Type: return "Type";
    case ErrorKind::Name: return "Name";
    case ErrorKind::ValueError: return "ValueError";
    case ErrorKind::StepLimitExceeded: return "StepLimitExceeded";
    case ErrorKind::ListTooLong: return "ListTooLong";
  }
  return "Unknown";
}

std::string_view python_exception(ErrorKind k) {
  switch (k) {
    case ErrorKind::None: return "";
    case ErrorKind::IndexOutOfRange:
    case ErrorKind::PopFromEmpty:
    case ErrorKind::PopIndexOutOfRange: return "IndexError";
    case ErrorKind::ZeroDivision: return "ZeroDivisionError";
    case ErrorKind::Overflow: return "OverflowError";
    case ErrorKind::Type: return "TypeError";
    case ErrorKind::Name: return "NameError";
    case ErrorKind::ValueError: return "ValueError";
    case ErrorKind::StepLimitExceeded: return "StepLimitExceeded";
    case ErrorKind::ListTooLong: return "MemoryError";
  }
  return "";
}

namespace {

struct Raised {
  ErrorKind kind;
  int line;
  std::string message;
};

enum class Flow { Normal, Break, Continue, Return };

Value deep_copy(const Value& v) {
  if (!v.is_list()) return v;
  std::vector<Value> xs;
  for (const auto& x : *std::get<ListRef>(v.v)) xs.push_back(deep_copy(x));
  return Value::list(std::move(xs));
}

class Interpreter {
 public:
  Interpreter(const Program& p, const Limits& limits) : prog_(p), limits_(limits) {}

  ExecResult call(const std::vector<Value>& args) {
    ExecResult r;
    try {
      const auto& fn = prog_.fn;
      step(fn.line);
      covered_.insert(fn.line);
      if (args.size() != fn.params.size())
        throw Raised{ErrorKind::Type, fn.line,
                     fn.name + "() takes " + std::to_string(fn.params.size()) + " arguments but " +
                         std::to_string(args.size()) + " were given"};
      for (std::size_t i = 0; i < args.size(); ++i) vars_[fn.params[i]] = deep_copy(args[i]);
      if (block(fn.body) == Flow::Return) r.output = ret_;
    } catch (const Raised& e) {
      r.error = e.kind;
      r.error_line = e.line;
      r.message = e.message;
    }
    r.covered_lines = std::move(covered_);
    r.steps = steps_;
    return r;
  }

 private:
  void step(int line) {
    if (++steps_ > limits_.max_steps)
      throw Raised{ErrorKind::StepLimitExceeded, line, "step limit exceeded"};
  }

  [[noreturn]] static void raise(ErrorKind k, int line, std::string msg) {
    throw Raised{k, line, std::move(msg)};
  }

  void check_len(std::size_t n, int line) const {
    if (n > limits_.max_list_len) raise(ErrorKind::ListTooLong, line, "list too long");
  }

  Flow block(const std::vector<Stmt>& body) {
    for (const auto& s : body) {
      Flow f = statement(s);
      if (f != Flow::Normal) return f;
    }
    return Flow::Normal;
  }

  Flow statement(const Stmt& s) {
    step(s.line);
    covered_.insert(s.line);
    switch (s.kind) {
      case StmtKind::Assign: assign(s); return Flow::Normal;
      case StmtKind::Expr: eval(s.values[0]); return Flow::Normal;
      case StmtKind::Return:
        ret_ = s.values.empty() ? Value::none() : eval(s.values[0]);
        return Flow::Return;
      case StmtKind::Break: return Flow::Break;
      case StmtKind::Continue: return Flow::Continue;
      case StmtKind::If: {
        for (std::size_t i = 0; i < s.values.size(); ++i) {
          if (i > 0) {
            step(s.values[i].line);
            covered_.insert(s.values[i].line);
          }
          if (truthy(eval(s.values[i]))) return block(s.bodies[i]);
        }
        if (s.has_else) return block(s.bodies.back());
        return Flow::Normal;
      }
      case StmtKind::For: return for_loop(s);
      case StmtKind::While: {
        bool first = true;
        for (;;) {
          if (!first) {
            step(s.line);
            covered_.insert(s.line);
          }
          first = false;
          if (!truthy(eval(s.values[0]))) return Flow::Normal;
          Flow f = block(s.bodies[0]);
          if (f == Flow::Break) return Flow::Normal;
          if (f == Flow::Return) return f;
        }
      }
    }
    return Flow::Normal;
  }

  Flow for_loop(const Stmt& s) {
    std::int64_t start = 0, stop = 0, stride = 1;
    std::vector<std::int64_t> a;
    for (const auto& e : s.values) a.push_back(as_int(eval(e), e.line, "range"));
    if (a.size() == 1) {
      stop = a[0];
    } else {
      start = a[0];
      stop = a[1];
      if (a.size() == 3) stride = a[2];
    }
    if (stride == 0) raise(ErrorKind::ValueError, s.line, "range() arg 3 must not be zero");
    bool first = true;
    for (__int128 i = start; stride > 0 ? i < stop : i > stop; i += stride) {
      if (!first) {
        step(s.line);
        covered_.insert(s.line);
      }
      first = false;
      vars_[s.var] = Value::integer(static_cast<std::int64_t>(i));
      Flow f = block(s.bodies[0]);
      if (f == Flow::Break) return Flow::Normal;
      if (f == Flow::Return) return f;
    }
    return Flow::Normal;
  }

  void assign(const Stmt& s) {
    std::vector<Value> vals;
    if (s.targets.size() == 1) {
      vals.push_back(eval(s.values[0]));
    } else if (s.values.size() == 1) {
      Value v = eval(s.values[0]);
      if (!v.is_list()) raise(ErrorKind::Type, s.line, "cannot unpack non-iterable object");
      const auto& xs = *std::get<ListRef>(v.v);
      if (xs.size() != s.targets.size())
        raise(ErrorKind::ValueError, s.line, "wrong number of values to unpack");
      vals = xs;
    } else {
      for (const auto& e : s.values) vals.push_back(eval(e));
    }
    for (std::size_t i = 0; i < s.targets.size(); ++i) store(s.targets[i], std::move(vals[i]));
  }

  void store(const Expr& target, Value v) {
    if (target.kind == ExprKind::Name) {
      vars_[target.name] = std::move(v);
      return;
    }
    Value container = eval(target.kids[0]);
    Value idx = eval(target.kids[1]);
    if (!container.is_list()) raise(ErrorKind::Type, target.line, "object does not support item assignment");
    auto& xs = *std::get<ListRef>(container.v);
    std::size_t at = normalize(as_int(idx, target.line, "list indices"), xs.size(), target.line,
                               ErrorKind::IndexOutOfRange, "list assignment index out of range");
    xs[at] = std::move(v);
  }

  static bool truthy(const Value& v) {
    if (v.is_none()) return false;
    if (auto b = std::get_if<bool>(&v.v)) return *b;
    if (auto i = std::get_if<std::int64_t>(&v.v)) return *i != 0;
    return !std::get<ListRef>(v.v)->empty();
  }

  static bool numeric(const Value& v) { return v.is_int() || v.is_bool(); }

  static std::int64_t num(const Value& v) {
    if (auto b = std::get_if<bool>(&v.v)) return *b ? 1 : 0;
    return std::get<std::int64_t>(v.v);
  }

  static std::int64_t as_int(const Value& v, int line, const std::string& what) {
    if (!numeric(v)) raise(ErrorKind::Type, line, what + " must be integers");
    return num(v);
  }

  static std::size_t normalize(std::int64_t k, std::size_t size, int line, ErrorKind kind,
                               const char* msg) {
    const auto n = static_cast<std::int64_t>(size);
    const std::int64_t at = k < 0 ? k + n : k;
    if (at < 0 || at >= n) raise(kind, line, msg);
    return static_cast<std::size_t>(at);
  }

  static Value checked(__int128 x, int line) {
    if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
      raise(ErrorKind::Overflow, line, "integer overflow");
    return Value::integer(static_cast<std::int64_t>(x));
  }

  Value eval(const Expr& e) {
    step(e.line);
    switch (e.kind) {
      case ExprKind::Int: return Value::integer(e.ival);
      case ExprKind::Bool: return Value::boolean(e.bval);
      case ExprKind::None: return Value::none();
      case ExprKind::Name: {
        auto it = vars_.find(e.name);
        if (it == vars_.end()) raise(ErrorKind::Name, e.line, "name '" + e.name + "' is not defined");
        return it->second;
      }
      case ExprKind::List: {
        std::vector<Value> xs;
        for (const auto& k : e.kids) xs.push_back(eval(k));
        return Value::list(std::move(xs));
      }
      case ExprKind::Unary: {
        Value x = eval(e.kids[0]);
        if (e.op == "not") return Value::boolean(!truthy(x));
        if (!numeric(x)) raise(ErrorKind::Type, e.line, "bad operand type for unary -");
        return checked(-static_cast<__int128>(num(x)), e.line);
      }
      case ExprKind::Binary: return binary(e, eval(e.kids[0]), eval(e.kids[1]));
      case ExprKind::BoolOp: {
        Value a = eval(e.kids[0]);
        if ((e.op == "and") != truthy(a)) return a;
        return eval(e.kids[1]);
      }
      case ExprKind::Compare: {
        Value lhs = eval(e.kids[0]);
        for (std::size_t i = 0; i < e.ops.size(); ++i) {
          Value rhs = eval(e.kids[i + 1]);
          if (!compare(e.ops[i], lhs, rhs, e.line)) return Value::boolean(false);
          lhs = std::move(rhs);
        }
        return Value::boolean(true);
      }
      case ExprKind::Subscript: {
        Value c = eval(e.kids[0]);
        Value idx = eval(e.kids[1]);
        if (!c.is_list()) raise(ErrorKind::Type, e.line, "object is not subscriptable");
        const auto& xs = *std::get<ListRef>(c.v);
        return xs[normalize(as_int(idx, e.line, "list indices"), xs.size(), e.line,
                            ErrorKind::IndexOutOfRange, "list index out of range")];
      }
      case ExprKind::Call: {
        Value x = eval(e.kids[0]);
        if (!x.is_list()) raise(ErrorKind::Type, e.line, "object has no len()");
        return Value::integer(static_cast<std::int64_t>(std::get<ListRef>(x.v)->size()));
      }
      case ExprKind::Method: return method(e);
    }
    return Value::none();
  }

  Value method(const Expr& e) {
    Value recv = eval(e.kids[0]);
    std::vector<Value> args;
    for (std::size_t i = 1; i < e.kids.size(); ++i) args.push_back(eval(e.kids[i]));
    if (!recv.is_list()) raise(ErrorKind::Type, e.line, "object has no attribute '" + e.name + "'");
    auto& xs = *std::get<ListRef>(recv.v);
    if (e.name == "append") {
      check_len(xs.size() + 1, e.line);
      xs.push_back(std::move(args[0]));
      return Value::none();
    }
    if (e.name == "extend") {
      if (!args[0].is_list()) raise(ErrorKind::Type, e.line, "object is not iterable");
      std::vector<Value> copy = *std::get<ListRef>(args[0].v);
      check_len(xs.size() + copy.size(), e.line);
      xs.insert(xs.end(), copy.begin(), copy.end());
      return Value::none();
    }
    if (xs.empty()) raise(ErrorKind::PopFromEmpty, e.line, "pop from empty list");
    std::size_t at = xs.size() - 1;
    if (!args.empty())
      at = normalize(as_int(args[0], e.line, "pop index"), xs.size(), e.line,
                     ErrorKind::PopIndexOutOfRange, "pop index out of range");
    Value out = xs[at];
    xs.erase(xs.begin() + static_cast<std::ptrdiff_t>(at));
    return out;
  }

  Value binary(const Expr& e, const Value& a, const Value& b) {
    const int line = e.line;
    if (numeric(a) && numeric(b)) {
      const __int128 x = num(a), y = num(b);
      if (e.op == "+") return checked(x + y, line);
      if (e.op == "-") return checked(x - y, line);
      if (e.op == "*") return checked(x * y, line);
      if (y == 0) raise(ErrorKind::ZeroDivision, line, "integer division or modulo by zero");
      __int128 q = x / y, r = x % y;
      if (r != 0 && ((r < 0) != (y < 0))) {
        q -= 1;
        r += y;
      }
      return checked(e.op == "//" ? q : r, line);
    }
    if (e.op == "+" && a.is_list() && b.is_list()) {
      const auto& xs = *std::get<ListRef>(a.v);
      const auto& ys = *std::get<ListRef>(b.v);
      check_len(xs.size() + ys.size(), line);
      std::vector<Value> out = xs;
      out.insert(out.end(), ys.begin(), ys.end());
      return Value::list(std::move(out));
    }
    if (e.op == "*" && ((a.is_list() && numeric(b)) || (numeric(a) && b.is_list()))) {
      const auto& xs = *std::get<ListRef>(a.is_list() ? a.v : b.v);
      const std::int64_t n = num(a.is_list() ? b : a);
      std::vector<Value> out;
      if (n > 0 && !xs.empty()) {
        if (static_cast<std::uint64_t>(n) > limits_.max_list_len / xs.size() + 1)
          raise(ErrorKind::ListTooLong, line, "list too long");
        check_len(xs.size() * static_cast<std::size_t>(n), line);
        for (std::int64_t i = 0; i < n; ++i) out.insert(out.end(), xs.begin(), xs.end());
      }
      return Value::list(std::move(out));
    }
    raise(ErrorKind::Type, line, "unsupported operand type(s) for " + e.op);
  }

  // Python == on values: numbers compare by value (True == 1), lists elementwise.
  static bool py_equal(const Value& a, const Value& b) {
    if (numeric(a) && numeric(b)) return num(a) == num(b);
    if (a.is_none() || b.is_none()) return a.is_none() && b.is_none();
    if (a.is_list() && b.is_list()) {
      const auto& xs = *std::get<ListRef>(a.v);
      const auto& ys = *std::get<ListRef>(b.v);
      if (xs.size() != ys.size()) return false;
      for (std::size_t i = 0; i < xs.size(); ++i)
        if (!py_equal(xs[i], ys[i])) return false;
      return true;
    }
    return false;
  }

  // Three-way ordering for < <= > >=.
  static int order(const Value& a, const Value& b, int line) {
    if (numeric(a) && numeric(b)) return num(a) < num(b) ? -1 : num(a) > num(b) ? 1 : 0;
    if (a.is_list() && b.is_list()) {
      const auto& xs = *std::get<ListRef>(a.v);
      const auto& ys = *std::get<ListRef>(b.v);
      for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i)
        if (!py_equal(xs[i], ys[i])) return order(xs[i], ys[i], line);
      return xs.size() < ys.size() ? -1 : xs.size() > ys.size() ? 1 : 0;
    }
    raise(ErrorKind::Type, line, "'<' not supported between these operands");
  }

  static bool compare(const std::string& op, const Value& a, const Value& b, int line) {
    if (op == "==") return py_equal(a, b);
    if (op == "!=") return !py_equal(a, b);
    const int c = order(a, b, line);
    if (op == "<") return c < 0;
    if (op == "<=") return c <= 0;
    if (op == ">") return c > 0;
    return c >= 0;
  }

  const Program& prog_;
  Limits limits_;
  std::unordered_map<std::string, Value> vars_;
  std::set<int> covered_;
  std::uint64_t steps_ = 0;
  Value ret_;
};

}  // namespace

ExecResult interpret(const Program& program, const std::vector<Value>& args, const Limits& limits) {
  return Interpreter(program, limits).call(args);
}

ExecResult interpret_text(const Program& program, std::string_view arguments, const Limits& limits) {
  ExecResult bad;
  bad.error = ErrorKind::Type;
  bad.error_line = program.fn.line;
  auto parsed = pyliteral::parse_arguments(arguments);
  if (!parsed) {
    bad.message = "unparseable arguments";
    return bad;
  }
  const auto& params = program.fn.params;
  std::vector<std::optional<Value>> slots(params.size());
  std::size_t positional = 0;
  for (const auto& a : *parsed) {
    auto v = from_literal(a.value);
    if (!v) {
      bad.message = "unsupported argument value";
      return bad;
    }
    std::size_t at = positional;
    if (a.name.empty()) {
      ++positional;
    } else {
      at = params.size();
      for (std::size_t i = 0; i < params.size(); ++i)
        if (params[i] == a.name) at = i;
    }
    if (at >= params.size() || slots[at]) {
      bad.message = "argument mismatch";
      return bad;
    }
    slots[at] = std::move(*v);
  }
  std::vector<Value> args;
  for (auto& s : slots) {
    if (!s) {
      bad.message = "missing argument";
      return bad;
    }
    args.push_back(std::move(*s));
  }
  return interpret(program, args, limits);
}

}  // namespace execbench::minipy
