"""Command-line client for the reconstruction service.

Commands post to the HTTP API: by default against an in-process
application instance (no server required), or against a running server
via --server.  Input is one "residue modulus" pair per line ('#' starts
a comment), or a JSON array of {"x": "...", "m": "..."} objects with
decimal strings; --json forces the JSON reader, otherwise a leading '['
selects it.

Exit status: 0 on a reconstructed value, 1 when the algorithm reports
failure (stderr carries "FAILURE: <reason>"), 2 on malformed input or
flags.
"""

import argparse
import json
import sys

PROG = "ratrecon"


class CliInputError(Exception):
    pass


def _read_input(args) -> str:
    if args.input:
        with open(args.input, "r", encoding="utf-8") as fh:
            return fh.read()
    return sys.stdin.read()


def _parse_text_pairs(text: str) -> list[dict]:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise CliInputError(
                f"line {lineno}: expected 'residue modulus', got {raw.strip()!r}"
            )
        for tok in tokens:
            body = tok[1:] if tok[:1] in "+-" else tok
            if not body.isdigit():
                raise CliInputError(f"line {lineno}: {tok!r} is not an integer")
        pairs.append({"x": tokens[0], "m": tokens[1]})
    if not pairs:
        raise CliInputError("line 1: no residue-modulus pairs found")
    return pairs


def _parse_json_pairs(text: str) -> list[dict]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliInputError(f"line {exc.lineno}: invalid JSON: {exc.msg}")
    if not isinstance(data, list):
        raise CliInputError("line 1: JSON input must be an array of objects")
    pairs = []
    for i, item in enumerate(data):
        if not isinstance(item, dict) or "x" not in item or "m" not in item:
            raise CliInputError(f"entry {i}: expected an object with 'x' and 'm'")
        pairs.append({"x": str(item["x"]), "m": str(item["m"])})
    return pairs


def _load_pairs(args) -> list[dict]:
    text = _read_input(args)
    if args.json or text.lstrip()[:1] == "[":
        return _parse_json_pairs(text)
    return _parse_text_pairs(text)


def _client(args):
    if getattr(args, "server", None):
        import httpx

        return httpx.Client(base_url=args.server)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # in-process client import is chatty
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _post(args, path: str, payload: dict):
    with _client(args) as client:
        return client.post(path, json=payload)


def _finish_reconstruct(response) -> int:
    if response.status_code == 422:
        detail = response.json().get("detail", "invalid input")
        print(f"error: {detail}", file=sys.stderr)
        return 2
    if response.status_code != 200:
        print(f"error: HTTP {response.status_code}", file=sys.stderr)
        return 2
    data = response.json()
    status = data["status"]
    if status in ("value", "zero"):
        print(data["value"])
        if data.get("bad_moduli"):
            print("bad_moduli: " + ",".join(str(i) for i in data["bad_moduli"]))
        return 0
    if status == "ambiguous":
        print(
            "FAILURE: ambiguous (" + ", ".join(data.get("candidates", [])) + ")",
            file=sys.stderr,
        )
        return 1
    print(f"FAILURE: {data.get('reason') or 'reconstruction failed'}", file=sys.stderr)
    return 1


def _cmd_ftrr(args) -> int:
    payload = {
        "pairs": _load_pairs(args),
        "num_bound": args.num_bound,
        "den_bound": args.den_bound,
        "max_bad": args.max_bad,
    }
    return _finish_reconstruct(_post(args, "/reconstruct/ftrr", payload))


def _cmd_vote(args) -> int:
    payload = {
        "pairs": _load_pairs(args),
        "num_bound": args.num_bound,
        "den_bound": args.den_bound,
        "max_bad": args.max_bad,
    }
    return _finish_reconstruct(_post(args, "/reconstruct/vote", payload))


def _cmd_hrr(args) -> int:
    payload = {"pairs": _load_pairs(args), "a_crit": args.a_crit}
    if args.ratio_threshold is not None:
        payload["ratio_threshold"] = args.ratio_threshold
    return _finish_reconstruct(_post(args, "/reconstruct/hrr", payload))


def _cmd_etl(args) -> int:
    payload = {
        "pairs": _load_pairs(args),
        "refinement_a": args.refinement_a,
        "b_divisor": args.b_divisor,
    }
    return _finish_reconstruct(_post(args, "/reconstruct/etl", payload))


def _cmd_bench(args) -> int:
    payload = {
        "num_bits": args.num_bits,
        "den_bits": args.den_bits,
        "bad_prob": args.bad_prob,
        "algorithms": args.algorithms.split(","),
        "trials": args.trials,
        "seed": args.seed,
        "start_prime": args.start_prime,
    }
    response = _post(args, "/bench", payload)
    if response.status_code != 200:
        detail = response.json().get("detail", f"HTTP {response.status_code}")
        print(f"error: {detail}", file=sys.stderr)
        return 2
    data = response.json()
    print(data["table"])
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(data["csv"])
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _add_io_flags(parser):
    parser.add_argument("--input", help="pair file (default: stdin)")
    parser.add_argument(
        "--json", action="store_true", help="input file is a JSON pair array"
    )
    parser.add_argument(
        "--server", help="base URL of a running service (default: in-process)"
    )


def _add_bound_flags(parser):
    parser.add_argument("--num-bound", required=True, help="numerator bound")
    parser.add_argument("--den-bound", required=True, help="denominator bound")
    parser.add_argument(
        "--max-bad", type=int, default=0, help="fault tolerance (default 0)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG, description="rational reconstruction from residue-modulus pairs"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "ftrr", help="guaranteed reconstruction with explicit bounds"
    )
    _add_io_flags(p)
    _add_bound_flags(p)
    p.set_defaults(func=_cmd_ftrr)

    p = sub.add_parser("hrr", help="heuristic reconstruction, no bounds needed")
    _add_io_flags(p)
    p.add_argument(
        "--a-crit", type=int, default=10**6,
        help="convincingness threshold (default 1000000)",
    )
    p.add_argument(
        "--ratio-threshold", type=int, default=None,
        help="accept on largest/second-largest quotient ratio instead",
    )
    p.set_defaults(func=_cmd_hrr)

    p = sub.add_parser(
        "etl", help="lattice-reduction reconstruction (comparison algorithm; prefer hrr)"
    )
    _add_io_flags(p)
    p.add_argument(
        "--refinement-a", action=argparse.BooleanOptionalAction, default=True,
        help="reject results with half or more pairs bad (default on)",
    )
    p.add_argument(
        "--b-divisor", type=int, default=100,
        help="norm acceptance divisor (default 100; 1 = loose test)",
    )
    p.set_defaults(func=_cmd_etl)

    p = sub.add_parser("vote", help="brute-force voting reconstruction (oracle)")
    _add_io_flags(p)
    _add_bound_flags(p)
    p.set_defaults(func=_cmd_vote)

    p = sub.add_parser("bench", help="fault-injection benchmark")
    p.add_argument("--num-bits", type=int, required=True)
    p.add_argument("--den-bits", type=int, required=True)
    p.add_argument("--bad-prob", type=float, default=0.0)
    p.add_argument(
        "--algorithms", default="hrr", help="comma list from hrr,etl,ftrr"
    )
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--start-prime", type=int, default=1013)
    p.add_argument("--csv", help="also write per-trial rows to this file")
    p.add_argument("--server", help="base URL of a running service")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
