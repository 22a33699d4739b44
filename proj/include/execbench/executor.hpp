#pragma once

// Program executors: the built-in interpreter and a pool of child processes
// speaking a JSON-lines protocol.

#include <chrono>
#include <cstdint>
#include <memory>
#include <set>
#include <string>

#include "execbench/minipy.hpp"

namespace execbench {

struct ExecRequest {
  std::string source;
  std::string function_name;
  std::string input;  // call-argument literal text
  bool trace = true;
};

enum class ExecStatus { Ok, Error, Timeout, Protocol };

struct ExecResponse {
  ExecStatus status = ExecStatus::Protocol;
  std::string output_repr;
  std::set<int> covered_lines;
  std::string error_kind;  // exception class name, e.g. IndexError
  std::string error_message;
  int error_line = 0;
  std::uint64_t steps = 0;

  bool ok() const { return status == ExecStatus::Ok; }
};

std::string_view status_name(ExecStatus s);

class Executor {
 public:
  virtual ~Executor() = default;
  virtual ExecResponse run(const ExecRequest& req) = 0;
  virtual std::string kind() const = 0;
};

class BuiltinExecutor : public Executor {
 public:
  explicit BuiltinExecutor(minipy::Limits limits = {}) : limits_(limits) {}
  ExecResponse run(const ExecRequest& req) override;
  std::string kind() const override { return "builtin"; }

 private:
  minipy::Limits limits_;
};

struct ExternalOptions {
  std::string command;  // run through /bin/sh -c
  int pool_size = 1;
  std::chrono::milliseconds timeout{10'000};
};

class ExternalExecutor : public Executor {
 public:
  explicit ExternalExecutor(ExternalOptions opts);
  ~ExternalExecutor() override;
  ExternalExecutor(const ExternalExecutor&) = delete;
  ExternalExecutor& operator=(const ExternalExecutor&) = delete;

  ExecResponse run(const ExecRequest& req) override;
  std::string kind() const override { return "external"; }

 private:
  struct Pool;
  std::unique_ptr<Pool> pool_;
};

}  // namespace execbench
