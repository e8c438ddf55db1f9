"""Command-line front end.

Every subcommand builds the same request models the HTTP service accepts
and executes them in-process by default; ``--server URL`` sends them to a
running service instead. Outputs are written atomically and runs with
identical flags and input files produce identical output files.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import PgirError
from .fileio import json_document, write_text_atomic
from .service import ops, schemas


class LocalTransport:
    """Execute operations in this process."""

    def call(self, name: str, req):
        return getattr(ops, name)(req)


class HttpTransport:
    """Send operations to a running service."""

    ROUTES = {
        "gen_graph": ("/graphs/generate", schemas.GenGraphResponse),
        "analyze": ("/analyze", schemas.AnalyzeResponse),
        "gen_signal": ("/signals/generate", schemas.GenSignalResponse),
        "sample": ("/sampling/draw", schemas.SampleResponse),
        "reconstruct": ("/reconstruct", schemas.ReconstructResponse),
        "benchmark": ("/benchmark", schemas.BenchmarkResponse),
    }

    def __init__(self, base_url: str):
        self.base_url = base_url.rstrip("/")

    def call(self, name: str, req):
        import httpx

        path, model = self.ROUTES[name]
        resp = httpx.post(self.base_url + path, json=req.model_dump(mode="json"),
                          timeout=600.0)
        if resp.status_code != 200:
            try:
                detail = resp.json().get("detail", resp.text)
            except ValueError:
                detail = resp.text
            raise PgirError(f"server returned {resp.status_code}: {detail}")
        return model.model_validate(resp.json())


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _echo(command: str, **flags) -> str:
    parts = " ".join(f"{k}={v}" for k, v in flags.items())
    return f"# pgir {command} {parts}\n"


def _parse_methods(text: str) -> list[str]:
    methods = [m.strip() for m in text.split(",") if m.strip()]
    if not methods:
        raise PgirError("empty methods list")
    return methods


def _parse_snr(text: str) -> list[float]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        out.append(float(tok))
    if not out:
        raise PgirError("empty snr list")
    return out


def _parse_er(text: str) -> schemas.ErSpec:
    parts = text.split(",")
    if len(parts) != 2:
        raise PgirError("--er expects 'n,m'")
    return schemas.ErSpec(n=int(parts[0]), m=int(parts[1]))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pgir",
        description="Bandlimited graph-signal reconstruction from partial samples",
    )
    parser.add_argument("--server", metavar="URL", default=None,
                        help="send requests to a running service instead of running in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-graph", help="generate a random graph")
    p.add_argument("--model", choices=["er"], default="er")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("analyze", help="report recovery/convergence diagnostics")
    p.add_argument("--graph", required=True)
    p.add_argument("--mask", required=True)
    p.add_argument("--omega", type=float, default=None)

    p = sub.add_parser("gen-signal", help="generate a random bandlimited signal")
    p.add_argument("--graph", required=True)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("sample", help="draw a uniform sampling set")
    p.add_argument("--graph", required=True)
    p.add_argument("--fraction", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("reconstruct", help="reconstruct a signal from its samples")
    p.add_argument("--graph", required=True)
    p.add_argument("--signal", required=True)
    p.add_argument("--mask", required=True)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--method", default="opgir",
                   help="ilsr, opgir, or mu=<real> (default opgir)")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=5000)
    p.add_argument("--truth", default=None)
    p.add_argument("--trace", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("benchmark", help="multi-trial convergence/noise benchmark")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", default=None)
    src.add_argument("--er", default=None, metavar="N,M")
    p.add_argument("--fraction", type=float, required=True)
    p.add_argument("--omega", default="auto", help="cutoff frequency or 'auto'")
    p.add_argument("--methods", default="ilsr,opgir")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--snr", default=None, help="comma-separated SNR list in dB")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=5000)
    p.add_argument("--redraw-mask", action="store_true",
                   help="re-draw the sampling set per trial")
    p.add_argument("--keep-traces", action="store_true",
                   help="also write raw per-trial traces for aggregation re-checks")
    p.add_argument("--out", required=True)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _cmd_gen_graph(args, transport) -> int:
    req = schemas.GenGraphRequest(model=args.model, n=args.n, m=args.m, seed=args.seed)
    resp = transport.call("gen_graph", req)
    header = _echo("gen-graph", model=args.model, n=args.n, m=args.m, seed=args.seed)
    write_text_atomic(args.out, header + resp.edge_list)
    print(f"wrote {args.out}: n={resp.n} m={resp.m} hash={resp.graph_hash[:16]}",
          file=sys.stderr)
    return 0


def _cmd_analyze(args, transport) -> int:
    req = schemas.AnalyzeRequest(edge_list=_read(args.graph), mask=_read(args.mask),
                                 omega=args.omega)
    resp = transport.call("analyze", req)
    sys.stdout.write(json_document(resp.model_dump()))
    return 0


def _cmd_gen_signal(args, transport) -> int:
    req = schemas.GenSignalRequest(edge_list=_read(args.graph), omega=args.omega,
                                   seed=args.seed)
    resp = transport.call("gen_signal", req)
    header = _echo("gen-signal", graph=args.graph, omega=args.omega, seed=args.seed)
    write_text_atomic(args.out, header + resp.signal_csv)
    print(f"wrote {args.out}: band width {resp.band_width}", file=sys.stderr)
    return 0


def _cmd_sample(args, transport) -> int:
    req = schemas.SampleRequest(edge_list=_read(args.graph), fraction=args.fraction,
                                seed=args.seed)
    resp = transport.call("sample", req)
    header = _echo("sample", graph=args.graph, fraction=args.fraction, seed=args.seed)
    write_text_atomic(args.out, header + resp.mask)
    print(f"wrote {args.out}: {resp.sampled_count} sampled (density {resp.density:.6g})",
          file=sys.stderr)
    return 0


def _cmd_reconstruct(args, transport) -> int:
    req = schemas.ReconstructRequest(
        edge_list=_read(args.graph),
        signal_csv=_read(args.signal),
        mask=_read(args.mask),
        omega=args.omega,
        method=args.method,
        tolerance=args.tol,
        max_iterations=args.max_iter,
        truth_csv=_read(args.truth) if args.truth else None,
    )
    resp = transport.call("reconstruct", req)
    write_text_atomic(args.out, resp.signal_csv)
    write_text_atomic(args.trace, resp.trace_csv)
    sys.stdout.write(json_document(resp.report))
    return 0


def _cmd_benchmark(args, transport) -> int:
    req = schemas.BenchmarkRequest(
        edge_list=_read(args.graph) if args.graph else None,
        er=_parse_er(args.er) if args.er else None,
        fraction=args.fraction,
        omega=args.omega if args.omega == "auto" else float(args.omega),
        methods=_parse_methods(args.methods),
        trials=args.trials,
        seed=args.seed,
        snr_db=_parse_snr(args.snr) if args.snr else None,
        tolerance=args.tol,
        max_iterations=args.max_iter,
        redraw_mask_per_trial=args.redraw_mask,
        keep_traces=args.keep_traces,
    )
    resp = transport.call("benchmark", req)
    out = Path(args.out)
    meta_path = out.parent / (out.stem + ".meta.json")
    write_text_atomic(out, resp.curves_csv)
    write_text_atomic(meta_path, json_document(resp.metadata))
    written = [str(out), str(meta_path)]
    if resp.snr_csv is not None:
        snr_path = out.parent / (out.stem + ".snr.csv")
        write_text_atomic(snr_path, resp.snr_csv)
        written.append(str(snr_path))
    if resp.trials_csv is not None:
        trials_path = out.parent / (out.stem + ".trials.csv")
        write_text_atomic(trials_path, resp.trials_csv)
        written.append(str(trials_path))
    print("wrote " + ", ".join(written), file=sys.stderr)
    return 0


def _cmd_serve(args, _transport) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


_COMMANDS = {
    "gen-graph": _cmd_gen_graph,
    "analyze": _cmd_analyze,
    "gen-signal": _cmd_gen_signal,
    "sample": _cmd_sample,
    "reconstruct": _cmd_reconstruct,
    "benchmark": _cmd_benchmark,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    transport = HttpTransport(args.server) if args.server else LocalTransport()
    try:
        return _COMMANDS[args.command](args, transport)
    except (PgirError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
