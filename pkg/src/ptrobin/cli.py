"""Command-line front end; a thin HTTP client of the service.

Without ``--server`` the commands talk to an in-process instance of the
FastAPI app over an ASGI transport, so no daemon is needed for batch use;
with ``--server URL`` the same requests go to a running instance
(``ptrobin serve``).

Exit codes: 0 success (including verify with all checks passing),
1 verification failures, 2 usage/parameter errors, 3 operations rejected
at a degenerate coupling.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import math
import sys
from pathlib import Path

import httpx

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_USAGE = 2
EXIT_DEGENERATE = 3

SUITE_CHOICES = ("spectrum", "metric", "forms", "expansions", "all")


def _parse_length(text: str) -> float:
    """Float literal with ``pi`` expanded to full double precision."""
    stripped = text.strip().lower()
    if stripped == "pi":
        return math.pi
    if stripped == "-pi":
        return -math.pi
    return float(text)


def _parse_range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"range must be start:stop:steps, got {text!r}")
    start, stop = _parse_length(parts[0]), _parse_length(parts[1])
    steps = int(parts[2])
    if steps < 2:
        raise ValueError(f"range needs at least 2 steps, got {steps}")
    return start, stop, steps


def _call_service(server: str | None, method: str, path: str, payload: dict | None = None):
    """POST/GET against a remote server or the in-process app."""

    async def go():
        if server:
            async with httpx.AsyncClient(base_url=server, timeout=600.0) as client:
                response = await client.request(method, path, json=payload)
                return response.status_code, response.json()
        from .service import create_app

        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://ptrobin.internal", timeout=600.0
        ) as client:
            response = await client.request(method, path, json=payload)
            return response.status_code, response.json()

    return asyncio.run(go())


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _float_repr(x: float) -> str:
    return repr(float(x))


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------

def _spectrum_csv(records: list[dict]) -> str:
    flagged = any(not r["resolved"] for r in records)
    header = "j,re_k2,im_k2,residual" + (",flag" if flagged else "")
    lines = [header]
    for r in records:
        row = ",".join(
            [str(r["j"]), _float_repr(r["re_k2"]), _float_repr(r["im_k2"]), _float_repr(r["residual"])]
        )
        if flagged:
            row += "," + ("ok" if r["resolved"] else "unresolved")
        lines.append(row)
    return "\n".join(lines) + "\n"


def _cmd_spectrum(args: argparse.Namespace) -> int:
    payload = {
        "alpha": args.alpha,
        "beta": args.beta,
        "d": args.d,
        "j_max": args.jmax,
        "expect_complex": args.expect_complex,
    }
    if args.kmax is not None:
        payload["k_max"] = args.kmax
    if args.tol is not None:
        payload["residual_tol"] = args.tol
    status, body = _call_service(args.server, "POST", "/spectrum", payload)
    if status != 200:
        sys.stderr.write(f"error: {body}\n")
        return EXIT_USAGE
    records = body["records"]
    for r in records:
        if not r["resolved"]:
            sys.stderr.write(
                f"warning: unresolved root near k^2 = {r['re_k2']}+{r['im_k2']}j "
                f"(residual {r['residual']:.3e})\n"
            )
    if args.format == "csv":
        _emit(_spectrum_csv(records), args.out)
    else:
        _emit(json.dumps(body, indent=2), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# metric apply
# ---------------------------------------------------------------------------

def _cmd_metric_apply(args: argparse.Namespace) -> int:
    try:
        function_payload = json.loads(Path(args.infile).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: cannot read input function: {exc}\n")
        return EXIT_USAGE
    if args.d is not None and not math.isclose(
        args.d, float(function_payload.get("d", float("nan"))), rel_tol=1e-12
    ):
        sys.stderr.write(
            f"error: --d {args.d} does not match the input file's d = {function_payload.get('d')}\n"
        )
        return EXIT_USAGE
    payload = {
        "alpha": args.alpha,
        "method": args.method,
        "j_max": args.jmax if args.jmax is not None else 1000,
        "function": function_payload,
    }
    status, body = _call_service(args.server, "POST", "/metric/apply", payload)
    if status == 409:
        sys.stderr.write(f"error: {body['detail']['message']}\n")
        return EXIT_DEGENERATE
    if status != 200:
        sys.stderr.write(f"error: {body}\n")
        return EXIT_USAGE
    out_function = body["function"]
    _emit(json.dumps(out_function), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _report_text(body: dict) -> str:
    lines = []
    header = f"{'status':6}  {'suite':10}  {'check':44}  {'residual':>12}  {'tolerance':>12}"
    lines.append(header)
    lines.append("-" * len(header))
    for r in body["checks"]:
        res = "-" if r["residual"] is None else f"{r['residual']:.3e}"
        tol = "-" if r["tolerance"] is None else f"{r['tolerance']:.3e}"
        lines.append(f"{r['status'].upper():6}  {r['suite']:10}  {r['name']:44}  {res:>12}  {tol:>12}")
    s = body["summary"]
    lines.append("-" * len(header))
    lines.append(
        f"{s['passed']} passed, {s['failed']} failed, {s['informational']} informational "
        f"out of {s['total']} checks ({body['elapsed_seconds']:.1f} s)"
    )
    return "\n".join(lines) + "\n"


def _cmd_verify(args: argparse.Namespace) -> int:
    payload = {
        "d": args.d,
        "n": args.n,
        "seed": args.seed,
        "suites": args.suite,
        "tol_scale": args.tol if args.tol is not None else 1.0,
    }
    if args.alpha is not None:
        payload["alpha"] = args.alpha
    if args.jmax is not None:
        payload["j_max"] = args.jmax
    status, body = _call_service(args.server, "POST", "/verify", payload)
    if status != 200:
        sys.stderr.write(f"error: {body}\n")
        return EXIT_USAGE
    if args.format == "json":
        _emit(json.dumps(body, indent=2), args.out)
    else:
        _emit(_report_text(body), args.out)
        if args.out:
            # keep the machine-readable report alongside the table
            Path(str(args.out) + ".json").write_text(json.dumps(body, indent=2))
    return EXIT_OK if body["summary"]["all_passed"] else EXIT_CHECKS_FAILED


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _sweep_csv(rows: list[dict]) -> str:
    lines = ["param,j,re_k2,im_k2,residual"]
    for r in rows:
        lines.append(
            ",".join(
                [
                    _float_repr(r["param_value"]),
                    str(r["j"]),
                    _float_repr(r["re_k2"]),
                    _float_repr(r["im_k2"]),
                    _float_repr(r["residual"]),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _sweep_plot_data(rows: list[dict]) -> str:
    """Whitespace-delimited, blank-line-separated blocks per parameter value."""
    lines = ["# param j re_k2 im_k2 residual"]
    current = None
    for r in rows:
        if current is not None and r["param_value"] != current:
            lines.append("")
        current = r["param_value"]
        lines.append(
            f"{_float_repr(r['param_value'])} {r['j']} {_float_repr(r['re_k2'])} "
            f"{_float_repr(r['im_k2'])} {_float_repr(r['residual'])}"
        )
    return "\n".join(lines) + "\n"


def _cmd_sweep(args: argparse.Namespace) -> int:
    if (args.alpha_range is None) == (args.beta_range is None):
        sys.stderr.write("error: provide exactly one of --alpha-range / --beta-range\n")
        return EXIT_USAGE
    try:
        if args.alpha_range is not None:
            param = "alpha"
            start, stop, steps = _parse_range(args.alpha_range)
        else:
            param = "beta"
            start, stop, steps = _parse_range(args.beta_range)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    payload = {
        "param": param,
        "start": start,
        "stop": stop,
        "steps": steps,
        "alpha": args.alpha,
        "beta": args.beta,
        "d": args.d,
        "j_max": args.jmax if args.jmax is not None else 10,
    }
    if args.kmax is not None:
        payload["k_max"] = args.kmax
    if args.tol is not None:
        payload["residual_tol"] = args.tol
    status, body = _call_service(args.server, "POST", "/sweep", payload)
    if status != 200:
        sys.stderr.write(f"error: {body}\n")
        return EXIT_USAGE
    if body["pairing_defects"]:
        sys.stderr.write(
            f"warning: {body['pairing_defects']} complex eigenvalue(s) lack a conjugate partner\n"
        )
    if args.plot_data:
        _emit(_sweep_plot_data(body["rows"]), args.out)
    elif args.format == "json":
        _emit(json.dumps(body, indent=2), args.out)
    else:
        _emit(_sweep_csv(body["rows"]), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# serve
# ---------------------------------------------------------------------------

def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--server", default=None, help="base URL of a running service; in-process if omitted")
    parser.add_argument("--alpha", type=_parse_length, default=0.0, help="imaginary Robin coupling")
    parser.add_argument("--beta", type=_parse_length, default=0.0, help="real Robin coupling (default 0)")
    parser.add_argument("--d", type=_parse_length, default=math.pi, help="interval length; 'pi' accepted")
    parser.add_argument("--n", type=int, default=4096, help="grid subintervals (default 4096)")
    parser.add_argument("--jmax", type=int, default=None, help="mode/series cutoff")
    parser.add_argument("--kmax", type=_parse_length, default=None, help="wavenumber search bound")
    parser.add_argument("--tol", type=float, default=None, help="tolerance scale override")
    parser.add_argument("--seed", type=int, default=1234, help="seed for randomized checks")
    parser.add_argument("--format", choices=("json", "csv"), default="csv", help="output format")
    parser.add_argument("--out", default=None, help="output path (stdout if omitted)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptrobin",
        description="PT-symmetric Robin Laplacian: spectra, metric operator, verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_spectrum = sub.add_parser("spectrum", help="compute eigenvalues")
    _add_common(p_spectrum)
    p_spectrum.add_argument("--expect-complex", action="store_true", help="force the complex-plane search")
    p_spectrum.set_defaults(func=_cmd_spectrum)
    p_spectrum.set_defaults(jmax_default=10)

    p_metric = sub.add_parser("metric", help="metric operator commands")
    metric_sub = p_metric.add_subparsers(dest="metric_command", required=True)
    p_apply = metric_sub.add_parser("apply", help="apply the metric to a stored grid function")
    _add_common(p_apply)
    p_apply.add_argument("--in", dest="infile", required=True, help="input grid-function JSON file")
    p_apply.add_argument("--method", choices=("closed", "series"), default="closed")
    p_apply.set_defaults(func=_cmd_metric_apply)

    p_verify = sub.add_parser("verify", help="run the verification suites")
    _add_common(p_verify)
    p_verify.add_argument(
        "--suite",
        action="append",
        default=None,
        choices=SUITE_CHOICES,
        help="suite to run (repeatable; default all)",
    )
    p_verify.set_defaults(func=_cmd_verify)

    p_sweep = sub.add_parser("sweep", help="eigenvalue trajectories over a parameter range")
    _add_common(p_sweep)
    p_sweep.add_argument("--alpha-range", default=None, help="start:stop:steps ('pi' allowed)")
    p_sweep.add_argument("--beta-range", default=None, help="start:stop:steps ('pi' allowed)")
    p_sweep.add_argument("--plot-data", action="store_true", help="gnuplot-ready whitespace blocks")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "verify":
        if args.alpha == 0.0:
            args.alpha = None
        args.suite = args.suite or ["all"]
    if getattr(args, "command", None) == "spectrum" and args.jmax is None:
        args.jmax = 10
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
