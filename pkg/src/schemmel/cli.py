"""Command-line client for the schemmel service.

Every subcommand talks HTTP.  By default the app is mounted in-process
(no socket, no separate server to start); --server points the same
client at a remote instance.  Exit codes are part of the contract:
0 success, 1 usage error, 2 verification failure, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings

import httpx

from .arith import ResourceLimitError
from .dynamics import DEFAULT_TABLE_LIMIT

DEFAULT_SIEVE_LIMIT = 10**7

SIEVE_LIMIT_ENV = "SCHEMMEL_SIEVE_LIMIT"

# frozen key order of the scan JSON object
SCAN_KEYS = (
    "m",
    "start",
    "end",
    "deficient",
    "perfect_count",
    "abundant",
    "stagnant",
    "perfect",
    "elapsed_ms",
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_RESOURCE = 3


class UsageError(Exception):
    pass


class _ExitWith(Exception):
    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the CLI contract wants 1
    def error(self, message):  # noqa: D102 - argparse hook
        raise UsageError(message)


def build_parser() -> _Parser:
    shared = _Parser(add_help=False)
    shared.add_argument("--server", help="base URL of a running service; default runs in-process")
    shared.add_argument("--sieve-limit", type=int, default=None,
                        help=f"cap on sieve/table size (env {SIEVE_LIMIT_ENV}, default {DEFAULT_SIEVE_LIMIT})")
    shared.add_argument("--table-limit", type=int, default=None,
                        help="dense-table threshold; larger inputs use per-n descent")
    shared.add_argument("--workers", type=int, default=1)
    shared.add_argument("--out", help="write output to this file instead of stdout")
    shared.add_argument("--format", choices=("plain", "json", "csv"), default=None)

    parser = _Parser(prog="schemmel", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[shared], help="L, R, H, D and classification of one n")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--show-trajectory", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("scan", parents=[shared], help="classification counts over a range")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--start", type=int, default=1)
    p.add_argument("--end", type=int, required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("plot-data", parents=[shared], help="CSV of R_m(n) for n = 2..limit")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--limit", type=int, required=True)
    p.set_defaults(func=cmd_plot_data)

    p = sub.add_parser("sets", parents=[shared], help="membership of the recursively defined set")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--limit", type=int, required=True)
    p.add_argument("--check-equality", action="store_true",
                   help="also build the prime-exclusion set and require agreement")
    p.set_defaults(func=cmd_sets)

    p = sub.add_parser("verify", parents=[shared], help="named verification suites")
    p.add_argument("suite", choices=("thm25", "conjecture", "upper-bound",
                                     "counterexample", "remark-m4", "perfect-scan"))
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--A", default="1")
    p.add_argument("--delta", default="1")
    p.add_argument("--alpha-max", type=int, default=6)
    p.add_argument("--search-limit", type=int, default=10**6)
    p.add_argument("--end", type=int, default=10**4)
    p.add_argument("--strict", action="store_true",
                   help="treat conjecture findings as failures")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sequence", parents=[shared], help="first count values of L, R, H, or D")
    p.add_argument("--function", choices=("L", "R", "H", "D"), required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.set_defaults(func=cmd_sequence)

    p = sub.add_parser("serve", parents=[shared], help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8757)
    p.set_defaults(func=cmd_serve)

    return parser


def resolve_sieve_limit(args) -> int:
    """Flag wins over the environment variable, which wins over the default."""
    if args.sieve_limit is not None:
        if args.sieve_limit < 2:
            raise UsageError("--sieve-limit must be >= 2")
        return args.sieve_limit
    raw = os.environ.get(SIEVE_LIMIT_ENV)
    if raw is not None:
        try:
            value = int(raw, 10)
        except ValueError:
            raise UsageError(f"{SIEVE_LIMIT_ENV} must be a decimal integer, got {raw!r}")
        if value < 2:
            raise UsageError(f"{SIEVE_LIMIT_ENV} must be >= 2")
        return value
    return DEFAULT_SIEVE_LIMIT


def resolve_table_limit(args) -> int:
    """Dense-table threshold, never above the sieve limit."""
    sieve_limit = resolve_sieve_limit(args)
    if args.table_limit is None:
        return min(DEFAULT_TABLE_LIMIT, sieve_limit)
    if args.table_limit < 2:
        raise UsageError("--table-limit must be >= 2")
    if args.table_limit > sieve_limit:
        raise UsageError("--table-limit cannot exceed the sieve limit")
    return args.table_limit


def _client(args) -> httpx.Client:
    if args.server:
        return httpx.Client(base_url=args.server.rstrip("/"), timeout=600.0)
    # this environment's starlette warns about its own test client on import;
    # harmless for the in-process transport, so keep it off the CLI's stderr
    with warnings.catch_warnings():
        warnings.filterwarnings(
            "ignore", message="Using .httpx. with .starlette"
        )
        from fastapi.testclient import TestClient

    from .service import create_app

    return TestClient(create_app())


def _request(client: httpx.Client, path: str, params: dict) -> httpx.Response:
    resp = client.get(path, params=params)
    if resp.status_code == 503:
        detail = resp.json().get("detail", {})
        raise _ExitWith(EXIT_RESOURCE, detail.get("message", "resource limit exceeded"))
    if resp.status_code >= 400:
        try:
            detail = resp.json().get("detail")
        except ValueError:
            detail = resp.text
        if isinstance(detail, dict):
            detail = detail.get("message", detail)
        raise UsageError(f"request rejected: {detail}")
    return resp


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "wb") as fh:
            fh.write(text.encode())
    else:
        sys.stdout.write(text)


def _check_format(args, allowed: tuple[str, ...]) -> str:
    fmt = args.format or allowed[0]
    if fmt not in allowed:
        raise UsageError(
            f"--format {fmt} is not valid for {args.command}; choose from {', '.join(allowed)}"
        )
    return fmt


def cmd_eval(args, client) -> int:
    fmt = _check_format(args, ("plain", "json"))
    resp = _request(client, "/eval", {
        "m": args.m, "n": args.n, "show_trajectory": args.show_trajectory,
    })
    data = resp.json()
    if fmt == "json":
        _emit(json.dumps(data, separators=(",", ":")) + "\n", args.out)
        return EXIT_OK
    kind = data["kind"] + (" (stagnant)" if data["stagnant"] else "")
    lines = [
        f"L = {data['L']}",
        f"R = {data['R']}",
        f"H = {data['H']}",
        f"D = {data['D']}",
        f"classification = {kind}",
    ]
    if data.get("trajectory") is not None:
        chain = " -> ".join(str(v) for v in [data["n"], *data["trajectory"]])
        lines.append(f"trajectory: {chain}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_scan(args, client) -> int:
    fmt = _check_format(args, ("json", "plain"))
    resp = _request(client, "/scan", {
        "m": args.m,
        "start": args.start,
        "end": args.end,
        "workers": args.workers,
        "table_limit": resolve_table_limit(args),
    })
    data = resp.json()
    if fmt == "json":
        ordered = {key: data[key] for key in SCAN_KEYS}
        _emit(json.dumps(ordered, separators=(",", ":")) + "\n", args.out)
        return EXIT_OK
    lines = [f"{key} = {data[key]}" for key in SCAN_KEYS]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_plot_data(args, client) -> int:
    _check_format(args, ("csv",))
    resp = _request(client, "/plot-data", {
        "m": args.m,
        "limit": args.limit,
        "table_limit": resolve_table_limit(args),
    })
    _emit(resp.text, args.out)
    return EXIT_OK


def cmd_sets(args, client) -> int:
    fmt = _check_format(args, ("plain", "json"))
    resp = _request(client, "/sets", {
        "m": args.m,
        "limit": args.limit,
        "check_equality": args.check_equality,
    })
    data = resp.json()
    code = EXIT_OK
    if args.check_equality and not data["equality"]["agree"]:
        code = EXIT_VERIFY
    if fmt == "json":
        _emit(json.dumps(data, separators=(",", ":")) + "\n", args.out)
        return code
    lines = []
    if data.get("members") is not None:
        lines.append("{" + ",".join(str(v) for v in data["members"]) + "}")
    else:
        lines.append(f"count = {data['count']}")
    if args.check_equality:
        eq = data["equality"]
        verdict = "PASS" if eq["agree"] else f"FAIL disagreements={eq['disagreements'][:20]}"
        lines.append(f"set agreement on [1, {data['limit']}] {verdict}")
    _emit("\n".join(lines) + "\n", args.out)
    return code


def cmd_verify(args, client) -> int:
    _check_format(args, ("plain",))
    resp = _request(client, f"/verify/{args.suite}", {
        "m": args.m,
        "a": args.A,
        "delta": args.delta,
        "alpha_max": args.alpha_max,
        "search_limit": args.search_limit,
        "end": args.end,
        "table_limit": resolve_table_limit(args),
    })
    data = resp.json()
    _emit("\n".join(data["lines"]) + "\n", args.out)
    if not data["passed"]:
        return EXIT_VERIFY
    if args.strict and not data["strict_passed"]:
        return EXIT_VERIFY
    return EXIT_OK


def cmd_sequence(args, client) -> int:
    _check_format(args, ("plain",))
    resp = _request(client, "/sequence", {
        "function": args.function,
        "m": args.m,
        "count": args.count,
        "table_limit": resolve_table_limit(args),
    })
    _emit(resp.text, args.out)
    return EXIT_OK


def cmd_serve(args, client) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(sys.argv[1:] if argv is None else list(argv))
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.func is cmd_serve:
            return cmd_serve(args, None)
        with _client(args) as client:
            return args.func(args, client)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _ExitWith as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except httpx.HTTPError as exc:
        print(f"request failed: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
