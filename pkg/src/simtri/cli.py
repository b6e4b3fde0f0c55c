"""Command-line front end.

A thin client over the HTTP service: every subcommand reads its input files,
posts one request (to an in-process app by default, or to --server), and
formats the response as JSON or CSV.  Exit codes: 0 success, 1 computation
error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

PATTERN_CHOICES = ["K4-", "C5", "C5-", "C5+", "L2", "L3", "L4", "L5", "L6", "P7-", "F32"]


def _client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=None)
    import warnings

    with warnings.catch_warnings():
        # starlette 1.3 deprecates its httpx-backed TestClient in favor of
        # httpx2, which is not available everywhere; the shim still works
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

        from .service.app import app

        return TestClient(app)


def _shape_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--T", help="triangle as three comma-separated angles in degrees")
    p.add_argument("--z", help="triangle shape parameter as 're,im'")


def _shape_payload(args) -> dict:
    if (args.T is None) == (args.z is None):
        raise UsageError("give exactly one of --T or --z")
    if args.T is not None:
        parts = [float(t) for t in args.T.split(",")]
        if len(parts) != 3 or min(parts) <= 0:
            raise UsageError(f"--T needs three positive angles, got {args.T!r}")
        return {"angles_deg": parts}
    re_im = [float(t) for t in args.z.split(",")]
    if len(re_im) != 2:
        raise UsageError(f"--z needs 're,im', got {args.z!r}")
    return {"z": re_im}


class UsageError(Exception):
    pass


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _json_dump(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2)


def _read_points_payload(path: str) -> list[list[float]]:
    from .fileio import read_points

    return [[float(x), float(y)] for x, y in read_points(path).points]


def _read_hypergraph_payload(path: str) -> dict:
    from .fileio import read_hypergraph

    H = read_hypergraph(path)
    return {"r": H.r, "edges": [list(e) for e in sorted(H.edges)]}


def _post(client, url: str, payload: dict) -> dict:
    resp = client.post(url, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except Exception:
            detail = resp.text
        raise RuntimeError(f"{url} failed ({resp.status_code}): {detail}")
    return resp.json()


def cmd_count(args, client) -> int:
    payload = {
        "points": _read_points_payload(args.points),
        "shape": _shape_payload(args),
        "eps_deg": args.eps,
        "include_edges": args.edges or bool(args.edges_out),
    }
    data = _post(client, "/count", payload)
    if args.edges_out:
        lines = [f"{data['n']} {len(data['edges'])}"]
        lines += [f"{i} {j} {k}" for i, j, k in data["edges"]]
        Path(args.edges_out).write_text("\n".join(lines) + "\n")
    if args.format == "csv":
        lines = ["n,total", f"{data['n']},{data['total']}"]
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, _json_dump(data))
    return 0


def cmd_hn(args, client) -> int:
    data = _post(client, "/hn", {"n_max": args.n_max})
    if args.format == "csv":
        lines = ["n,h,a,b,c,upper_bound,gap"]
        for row in data["rows"]:
            a = "" if row["a"] is None else row["a"]
            b = "" if row["b"] is None else row["b"]
            c = "" if row["c"] is None else row["c"]
            lines.append(
                f"{row['n']},{row['h']},{a},{b},{c},{row['upper_bound']},{row['gap']}"
            )
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, _json_dump(data))
    return 0


def cmd_build(args, client) -> int:
    payload: dict = {"n": args.n, "verify_recount": not args.no_verify}
    if args.example:
        payload["example"] = args.example
        payload["eps_deg"] = args.eps
    else:
        if not (args.points and (args.T or args.z) and args.weights):
            raise UsageError(
                "custom build needs --points, --T/--z and --weights (or use --example)"
            )
        payload["custom"] = {
            "points": _read_points_payload(args.points),
            "shape": _shape_payload(args),
            "eps_deg": args.eps,
            "weights": [float(w) for w in args.weights.split(",")],
        }
    data = _post(client, "/build", payload)
    if args.out:
        lines = [f"{x!r},{y!r}" for x, y in data["points"]]
        Path(args.out).write_text("\n".join(lines) + "\n")
        sidecar = {
            "schema": data["schema"],
            "n": data["n"],
            "predicted_count": data["predicted_count"],
            "recount": data.get("recount"),
            "rho": data["rho"],
            "tree": data["tree"],
        }
        Path(args.out).with_suffix(".json").write_text(_json_dump(sidecar))
    else:
        sys.stdout.write(_json_dump(data) + "\n")
    return 0


def cmd_optimize(args, client) -> int:
    payload: dict = {"starts": args.starts, "tol": args.tol, "seed": args.seed}
    if args.example:
        payload["example"] = args.example
    elif args.hypergraph:
        payload["hypergraph"] = _read_hypergraph_payload(args.hypergraph)
    else:
        raise UsageError("optimize needs --example or --hypergraph")
    data = _post(client, "/optimize", payload)
    _emit(args, _json_dump(data))
    return 0


def cmd_detect(args, client) -> int:
    payload: dict = {"hypergraph": _read_hypergraph_payload(args.hypergraph)}
    if args.patterns:
        payload["patterns"] = args.patterns.split(",")
    data = _post(client, "/detect", payload)
    _emit(args, _json_dump(data))
    return 0


def cmd_realize(args, client) -> int:
    payload = {
        "pattern": args.pattern,
        "shape": _shape_payload(args),
        "tol": args.tol,
    }
    data = _post(client, "/realize", payload)
    _emit(args, _json_dump(data))
    return 0


def cmd_scan(args, client) -> int:
    payload = {
        "pattern": args.pattern,
        "grid_steps": args.grid_steps,
        "tol": args.tol,
        "threads": args.threads,
    }
    data = _post(client, "/scan", payload)
    if args.format == "csv":
        lines = ["alpha,beta,gamma,realizable,residual"]
        for row in data["rows"]:
            lines.append(
                f"{row['alpha']!r},{row['beta']!r},{row['gamma']!r},"
                f"{int(row['realizable'])},{row['residual']!r}"
            )
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, _json_dump(data))
    return 0


def cmd_verify(args, client) -> int:
    if args.target == "appendix":
        data = _post(
            client,
            "/verify/appendix",
            {"n_max": args.n_max, "seed": args.seed},
        )
    elif args.target == "sweep":
        data = _post(client, "/verify/sweep", {})
    else:
        data = _post(client, "/verify/gridcase", {})
    _emit(args, _json_dump(data))
    return 0 if data.get("ok") else 1


def cmd_serve(args, client) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="simtri",
        description="Planar configurations rich in almost-similar triangles",
    )
    ap.add_argument("--server", help="base URL of a running service (default: in-process)")
    ap.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("SIMTRI_THREADS", "0")),
        help="worker threads for scans (default: SIMTRI_THREADS or serial)",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count eps-similar triangles in a point file")
    p.add_argument("--points", required=True)
    _shape_args(p)
    p.add_argument("--eps", type=float, required=True, help="tolerance in degrees")
    p.add_argument("--edges", action="store_true", help="include the edge list")
    p.add_argument(
        "--edges-out", help="write the similarity hypergraph in text format"
    )
    p.add_argument("--out")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(fn=cmd_count)

    p = sub.add_parser("hn", help="the recursive lower-bound table h(n)")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(fn=cmd_hn)

    p = sub.add_parser("build", help="build a recursive configuration")
    p.add_argument("--example", help="catalog skeleton name")
    p.add_argument("--points", help="custom skeleton point file")
    _shape_args(p)
    p.add_argument("--weights", help="comma-separated skeleton weights")
    p.add_argument("--eps", type=float, default=0.5, help="tolerance in degrees")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--no-verify", action="store_true", help="skip the recount check")
    p.add_argument("--out", help="points CSV path; sidecar JSON goes next to it")
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("optimize", help="maximize the density functional")
    p.add_argument("--example", help="catalog skeleton name")
    p.add_argument("--hypergraph", help="hypergraph text file")
    p.add_argument("--starts", type=int, default=200)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_optimize)

    p = sub.add_parser("detect", help="find forbidden patterns in a hypergraph")
    p.add_argument("--hypergraph", required=True)
    p.add_argument("--patterns", help="comma-separated names (default: all)")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_detect)

    p = sub.add_parser("realize", help="realize a pattern by a triangle shape")
    p.add_argument("--pattern", required=True, choices=PATTERN_CHOICES)
    _shape_args(p)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_realize)

    p = sub.add_parser("scan", help="scan shape space for realizability")
    p.add_argument("--pattern", required=True, choices=PATTERN_CHOICES)
    p.add_argument("--grid-steps", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--out")
    p.add_argument("--format", choices=["json", "csv"], default="csv")
    p.set_defaults(fn=cmd_scan)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("target", choices=["appendix", "sweep", "gridcase"])
    p.add_argument("--n-max", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    client = None
    try:
        if args.fn is not cmd_serve:
            client = _client(args.server)
        return args.fn(args, client)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    finally:
        if client is not None:
            client.close()


if __name__ == "__main__":
    sys.exit(main())
