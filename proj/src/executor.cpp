#include "execbench/executor.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <condition_variable>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace execbench {

using nlohmann::json;

std::string_view status_name(ExecStatus s) {
  switch (s) {
    case ExecStatus::Ok: return "ok";
    case ExecStatus::Error: return "error";
    case ExecStatus::Timeout: return "timeout";
    case ExecStatus::Protocol: return "protocol";
  }
  return "protocol";
}

ExecResponse BuiltinExecutor::run(const ExecRequest& req) {
  ExecResponse out;
  minipy::Program prog;
  try {
    prog = minipy::parse(req.source);
  } catch (const minipy::SyntaxError& e) {
    out.status = ExecStatus::Error;
    out.error_kind = "SyntaxError";
    out.error_message = e.what();
    out.error_line = e.line;
    return out;
  }
  if (prog.fn.name != req.function_name) {
    out.status = ExecStatus::Error;
    out.error_kind = "NameError";
    out.error_message = "name '" + req.function_name + "' is not defined";
    return out;
  }
  auto r = minipy::interpret_text(prog, req.input, limits_);
  out.steps = r.steps;
  if (req.trace) out.covered_lines = r.covered_lines;
  if (r.ok()) {
    out.status = ExecStatus::Ok;
    out.output_repr = minipy::repr(r.output);
  } else {
    out.status = ExecStatus::Error;
    out.error_kind = std::string(minipy::python_exception(r.error));
    out.error_message = r.message;
    out.error_line = r.error_line;
  }
  return out;
}

namespace {

class Child {
 public:
  explicit Child(const std::string& command) : command_(command) { spawn(); }
  ~Child() { stop(); }

  // Sends one line and waits for one line back.
  bool exchange(const std::string& line, std::string& reply, std::chrono::milliseconds timeout) {
    if (pid_ <= 0) spawn();
    std::string msg = line + "\n";
    std::size_t off = 0;
    while (off < msg.size()) {
      ssize_t n = ::write(in_, msg.data() + off, msg.size() - off);
      if (n <= 0) {
        restart();
        return false;
      }
      off += static_cast<std::size_t>(n);
    }
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
      auto nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        reply = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return true;
      }
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) {
        restart();
        timed_out_ = true;
        return false;
      }
      pollfd p{out_, POLLIN, 0};
      int rc = ::poll(&p, 1, static_cast<int>(left.count()));
      if (rc < 0 && errno == EINTR) continue;
      if (rc <= 0) continue;
      char buf[65536];
      ssize_t n = ::read(out_, buf, sizeof buf);
      if (n <= 0) {
        restart();
        return false;
      }
      buffer_.append(buf, static_cast<std::size_t>(n));
    }
  }

  bool take_timeout() {
    bool t = timed_out_;
    timed_out_ = false;
    return t;
  }

 private:
  void spawn() {
    int to_child[2], from_child[2];
    if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) throw std::runtime_error("pipe failed");
    pid_ = ::fork();
    if (pid_ < 0) throw std::runtime_error("fork failed");
    if (pid_ == 0) {
      ::dup2(to_child[0], 0);
      ::dup2(from_child[1], 1);
      ::close(to_child[0]);
      ::close(to_child[1]);
      ::close(from_child[0]);
      ::close(from_child[1]);
      ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    in_ = to_child[1];
    out_ = from_child[0];
    ::fcntl(in_, F_SETFD, FD_CLOEXEC);
    ::fcntl(out_, F_SETFD, FD_CLOEXEC);
    buffer_.clear();
  }

  void stop() {
    if (pid_ <= 0) return;
    ::close(in_);
    ::close(out_);
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, nullptr, 0);
    pid_ = -1;
  }

  void restart() {
    stop();
    spawn();
  }

  std::string command_;
  pid_t pid_ = -1;
  int in_ = -1;
  int out_ = -1;
  std::string buffer_;
  bool timed_out_ = false;
};

}  // namespace

struct ExternalExecutor::Pool {
  ExternalOptions opts;
  std::vector<std::unique_ptr<Child>> idle;
  std::mutex mu;
  std::condition_variable cv;
};

ExternalExecutor::ExternalExecutor(ExternalOptions opts) : pool_(std::make_unique<Pool>()) {
  if (opts.command.empty()) throw std::invalid_argument("external executor command is empty");
  ::signal(SIGPIPE, SIG_IGN);
  pool_->opts = opts;
  for (int i = 0; i < std::max(1, opts.pool_size); ++i)
    pool_->idle.push_back(std::make_unique<Child>(opts.command));
}

ExternalExecutor::~ExternalExecutor() = default;

ExecResponse ExternalExecutor::run(const ExecRequest& req) {
  std::unique_ptr<Child> child;
  {
    std::unique_lock lock(pool_->mu);
    pool_->cv.wait(lock, [&] { return !pool_->idle.empty(); });
    child = std::move(pool_->idle.back());
    pool_->idle.pop_back();
  }
  json q = {{"source", req.source}, {"function_name", req.function_name}, {"input", req.input},
            {"trace", req.trace}};
  std::string reply;
  ExecResponse out;
  const bool got = child->exchange(q.dump(), reply, pool_->opts.timeout);
  const bool timed_out = child->take_timeout();
  {
    std::lock_guard lock(pool_->mu);
    pool_->idle.push_back(std::move(child));
  }
  pool_->cv.notify_one();
  if (!got) {
    out.status = timed_out ? ExecStatus::Timeout : ExecStatus::Protocol;
    out.error_kind = timed_out ? "Timeout" : "ExecutorCrashed";
    return out;
  }
  try {
    json r = json::parse(reply);
    const std::string status = r.at("status").get<std::string>();
    out.status = status == "ok" ? ExecStatus::Ok : ExecStatus::Error;
    if (r.contains("output_repr") && r["output_repr"].is_string()) out.output_repr = r["output_repr"];
    if (r.contains("covered_lines"))
      for (int l : r["covered_lines"]) out.covered_lines.insert(l);
    if (r.contains("steps")) out.steps = r["steps"].get<std::uint64_t>();
    if (r.contains("error") && r["error"].is_object()) {
      const auto& e = r["error"];
      out.error_kind = e.value("kind", "");
      out.error_message = e.value("message", "");
      out.error_line = e.value("line", 0);
    }
  } catch (const std::exception& e) {
    out = {};
    out.status = ExecStatus::Protocol;
    out.error_kind = "ProtocolError";
    out.error_message = e.what();
  }
  return out;
}

}  // namespace execbench
