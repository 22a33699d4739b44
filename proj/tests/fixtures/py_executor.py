#!/usr/bin/env python3
"""Reference executor: one JSON request per stdin line, one JSON response per stdout line."""

import json
import os
import sys

FILENAME = "<program>"
MAX_STEPS = 1_000_000


class StepLimitExceeded(Exception):
    pass


def error(kind, message, line):
    return {"status": "error", "output_repr": None, "covered_lines": [],
            "error": {"kind": kind, "message": message, "line": line}, "steps": 0}


def error_kind(exc):
    for cls in type(exc).__mro__:
        if cls.__module__ == "builtins":
            return cls.__name__
    return type(exc).__name__


def run(req):
    source = req["source"]
    name = req["function_name"]
    trace = req.get("trace", True)
    try:
        code = compile(source, FILENAME, "exec")
    except SyntaxError as e:
        return error("SyntaxError", str(e.msg), e.lineno or 0)
    env = {"__name__": "__program__"}
    try:
        exec(code, env)
        func = env[name]
        args = eval("(lambda *a, **k: (a, k))(" + req["input"] + ")", {})
    except Exception as e:
        return error(error_kind(e), str(e), 0)

    covered = set()
    steps = [0]

    def local(frame, event, arg):
        if event == "line":
            steps[0] += 1
            if steps[0] > MAX_STEPS:
                raise StepLimitExceeded("step limit exceeded")
            covered.add(frame.f_lineno)
        return local

    def glob(frame, event, arg):
        if frame.f_code.co_filename != FILENAME:
            return None
        if event == "call":
            covered.add(frame.f_code.co_firstlineno)
        return local

    last_line = [0]
    if trace:
        sys.settrace(glob)
    try:
        result = func(*args[0], **args[1])
    except StepLimitExceeded as e:
        sys.settrace(None)
        return error("StepLimitExceeded", str(e), 0)
    except RecursionError as e:
        sys.settrace(None)
        return error("RecursionError", str(e), 0)
    except Exception as e:
        sys.settrace(None)
        tb = e.__traceback__
        while tb is not None:
            if tb.tb_frame.f_code.co_filename == FILENAME:
                last_line[0] = tb.tb_lineno
            tb = tb.tb_next
        return error(error_kind(e), str(e), last_line[0])
    finally:
        sys.settrace(None)
    return {"status": "ok", "output_repr": repr(result), "covered_lines": sorted(covered),
            "error": None, "steps": steps[0]}


def main():
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        try:
            resp = run(json.loads(line))
        except Exception as e:  # malformed request
            resp = error("ProtocolError", str(e), 0)
        sys.stdout.write(json.dumps(resp) + "\n")
        sys.stdout.flush()


if __name__ == "__main__":
    try:
        main()
    except BrokenPipeError:
        os._exit(0)
