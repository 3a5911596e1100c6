"""Command-line entry point: ``cgl <subcommand> ...``.

Exit status is 0 on success (including DEGENERATE and INCONCLUSIVE outcomes,
which are reported in a ``status`` field), 1 on other domain errors and 2 on
usage errors. JSON output is key-sorted and carries ``schema_version``, so
identical invocations give byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .census import census_table, sample_tuples, transitivity_experiment
from .counts import km_count
from .errors import CGLError, DegenerateError, DuplicatePointError
from .galois import certify_symmetric, chebotarev_census
from .pencil import cubics_through_points, load_cubics, load_points, pencil_discriminant, worked_example
from .poly import parse_poly
from .sieve import (
    Form,
    GrowthReport,
    ThinSetModel,
    deligne_gap,
    g_growth_report,
    g_of_q,
    hensel_check,
    omega_from_model,
    parameter_check,
)
from .primes import primes_up_to

SCHEMA_VERSION = 1


class UsageError(Exception):
    """Bad flag or unreadable input; exit status 2."""


@dataclass
class RunConfig:
    command: str
    options: dict = field(default_factory=dict)
    output: str | None = None
    seed: int = 0
    prime_bound: int | None = None
    format: str = "json"


# ---------------------------------------------------------------------------
# output helpers


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _document(payload: dict, status: str = "ok") -> dict:
    return {"schema_version": SCHEMA_VERSION, "status": status, **payload}


def emit_plot_data(report, path) -> None:
    """Two whitespace-separated columns ``log x  log y``.

    ``report`` is a list of ``(x, y)`` rows (a census sweep) or a
    :class:`GrowthReport`; rows with a nonpositive value are skipped.
    """
    if isinstance(report, GrowthReport):
        pts = report.plot_points()
    else:
        pts = [(math.log(x), math.log(y)) for x, y in report if x > 0 and y > 0]
    with open(path, "w") as fh:
        for x, y in pts:
            fh.write(f"{x:.12g} {y:.12g}\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _form(text: str | None, nvars: int | None) -> Form:
    if text is None:
        return Form.zero(nvars or 3)
    return Form.parse(text, nvars)


# ---------------------------------------------------------------------------
# subcommands: each returns (text, exit status)


def _cmd_nd(o: dict, cfg: RunConfig):
    rows = [(d, km_count(d)) for d in range(1, o["max"] + 1)]
    if cfg.format == "csv":
        return _csv(["d", "N_d"], rows), 0
    return _json(_document({"counts": [{"d": d, "N_d": str(n)} for d, n in rows]})), 0


def _cmd_pencil(o: dict, cfg: RunConfig):
    reference = parse_poly(_read(o["reference"])) if o.get("reference") else None
    if o.get("example"):
        ex = worked_example()
        pencil = ex.pencil
        reference = reference or ex.reference_delta
    elif o.get("cubics"):
        pencil = load_cubics(_read(o["cubics"]))
    else:
        try:
            pencil = cubics_through_points(load_points(_read(o["points"])))
        except (DegenerateError, DuplicatePointError) as exc:
            return _json(_document({"error": exc.to_dict()}, status="DEGENERATE")), 0
    report = pencil_discriminant(pencil, reference, method=o.get("method", "both"))
    return _json(_document(report.to_dict())), 0


def _cmd_galois(o: dict, cfg: RunConfig):
    f = parse_poly(_read(o["poly"]))
    cert = certify_symmetric(f, cfg.prime_bound)
    payload = {"certificate": cert.to_dict()}
    if o.get("census"):
        payload["census"] = chebotarev_census(f, cfg.prime_bound, workers=o.get("workers", 1)).to_dict()
    return _json(_document(payload, status=cert.conclusion)), 0


def _cmd_census(o: dict, cfg: RunConfig):
    rows = census_table(o["B"], o.get("factors", 1))
    if o.get("plot"):
        emit_plot_data(rows, o["plot"])
    if cfg.format == "json":
        return _json(_document({"factors": o.get("factors", 1), "rows": [[b, str(c)] for b, c in rows]})), 0
    return _csv(["B", "count"], rows), 0


def _cmd_experiment(o: dict, cfg: RunConfig):
    tuples = sample_tuples(3, o["coord_bound"], o["samples"], cfg.seed)
    report = transitivity_experiment(tuples, cfg.prime_bound, workers=o.get("workers", 1))
    payload = {
        "config": {
            "coord_bound": o["coord_bound"],
            "samples": o["samples"],
            "seed": cfg.seed,
            "prime_bound": cfg.prime_bound,
        },
        "report": report.to_dict(),
        "tuples": [t.to_dict() for t in tuples],
    }
    return _json(_document(payload)), 0


def _model(o: dict) -> ThinSetModel:
    return ThinSetModel.parse(o["model"])


def _cmd_sieve(o: dict, cfg: RunConfig):
    action = o["action"]
    if action == "omega":
        d = omega_from_model(_model(o), _form(o.get("form"), o.get("nvars")), o["p"], o.get("m", 1), o.get("n", 1))
        payload = {"density": d.to_dict()}
    elif action == "gq":
        Q = o["Q"]
        if o.get("omega") is not None:
            dens = {p: Fraction(o["omega"]) for p in primes_up_to(Q)}
            densities = []
        else:
            F = _form(o.get("form"), o.get("nvars"))
            densities = [omega_from_model(_model(o), F, p, o.get("m", 1)) for p in primes_up_to(Q)]
            dens = densities
        payload = {"Q": Q, "G": str(g_of_q(dens, Q)), "densities": [d.to_dict() for d in densities]}
    elif action == "growth":
        source = Fraction(o["omega"]) if o.get("omega") is not None else _model(o)
        report = g_growth_report(source, _form(o.get("form"), o.get("nvars")), o["Q"], o.get("m", 1))
        if o.get("plot"):
            emit_plot_data(report, o["plot"])
        payload = {"report": report.to_dict()}
    elif action == "hensel":
        payload = {"result": hensel_check(_form(o["form"], o.get("nvars")), o["p"], o["ell"]).to_dict()}
    elif action == "deligne":
        payload = {"result": deligne_gap(_form(o["form"], o.get("nvars")), o["p"]).to_dict()}
    elif action == "params":
        payload = {"result": parameter_check(o["N"], o["d"], o["e"]).to_dict()}
    else:  # pragma: no cover - argparse restricts the choices
        raise UsageError(f"unknown sieve action {action!r}")
    return _json(_document(payload)), 0


_COMMANDS = {
    "nd": _cmd_nd,
    "pencil": _cmd_pencil,
    "galois": _cmd_galois,
    "census": _cmd_census,
    "experiment": _cmd_experiment,
    "sieve": _cmd_sieve,
}


def run(config: RunConfig, stdout=None) -> int:
    """Dispatch one subcommand; returns the exit status."""
    stdout = stdout or sys.stdout
    try:
        text, status = _COMMANDS[config.command](config.options, config)
    except UsageError as exc:
        print(f"cgl {config.command}: {exc}", file=sys.stderr)
        return 2
    except CGLError as exc:
        text, status = _json(_document({"error": exc.to_dict()}, status="error")), 1
    except ValueError as exc:
        # malformed input data (bad polynomial text, non-prime modulus, ...)
        print(f"cgl {config.command}: {exc}", file=sys.stderr)
        return 2
    if config.output:
        Path(config.output).write_text(text)
    else:
        stdout.write(text)
    return status


# ---------------------------------------------------------------------------
# argument parsing


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cgl", description="Counting and Galois tools for rational plane curves.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt="json"):
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default=fmt)

    p = sub.add_parser("nd", help="N_d by recursion")
    p.add_argument("--max", type=_positive, required=True, help="largest degree")
    common(p, "csv")

    p = sub.add_parser("pencil", help="discriminant of the pencil of cubics")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--points", help="file with 8 points, one 'x y z' per line")
    src.add_argument("--cubics", help="file with two cubics, one per line")
    src.add_argument("--example", action="store_true", help="use the bundled worked example")
    p.add_argument("--reference", help="file with a reference polynomial in t")
    p.add_argument("--method", choices=("both", "interpolation", "symbolic"), default="both")
    common(p)

    p = sub.add_parser("galois", help="S_n certificate from Frobenius cycle types")
    p.add_argument("--poly", required=True, help="file with a polynomial in t")
    p.add_argument("--prime-bound", type=_positive, required=True)
    p.add_argument("--census", action="store_true", help="also tabulate all cycle types")
    p.add_argument("--workers", type=_positive, default=1)
    common(p)

    p = sub.add_parser("census", help="points of bounded height")
    p.add_argument("--B", type=_positive, nargs="+", required=True, help="height bound(s)")
    p.add_argument("--factors", type=_positive, default=1, help="number of P^2 factors")
    p.add_argument("--plot", help="write log B / log count columns here")
    common(p, "csv")

    p = sub.add_parser("experiment", help="flag random 8-tuples by their discriminant")
    p.add_argument("--coord-bound", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prime-bound", type=_positive, default=10000)
    p.add_argument("--workers", type=_positive, default=1)
    common(p)

    p = sub.add_parser("sieve", help="sieve densities and local counts")
    actions = p.add_subparsers(dest="action", required=True)

    def shape(q, form_required=False):
        q.add_argument("--form", required=form_required, help="homogeneous form in x0..xN (default: no equation)")
        q.add_argument("--nvars", type=_positive, help="number of cone variables (default: from the form)")
        common(q)

    q = actions.add_parser("omega")
    q.add_argument("--model", required=True, help="'type1 form=<poly>' or 'type2 predicate=<name>'")
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--m", type=_positive, default=1)
    q.add_argument("--n", type=_positive, default=1, help="number of factors")
    shape(q)

    for name in ("gq", "growth"):
        q = actions.add_parser(name)
        g = q.add_mutually_exclusive_group(required=True)
        g.add_argument("--model")
        g.add_argument("--omega", help="constant omega_p at every prime")
        if name == "gq":
            q.add_argument("--Q", type=_positive, required=True)
        else:
            q.add_argument("--Q", type=_positive, nargs="*", default=[])
            q.add_argument("--plot", help="write log Q / log G columns here")
        q.add_argument("--m", type=_positive, default=1)
        shape(q)

    q = actions.add_parser("hensel")
    q.add_argument("--p", type=int, required=True)
    q.add_argument("--ell", type=int, required=True)
    shape(q, form_required=True)

    q = actions.add_parser("deligne")
    q.add_argument("--p", type=int, required=True)
    shape(q, form_required=True)

    q = actions.add_parser("params")
    q.add_argument("--N", type=int, required=True)
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--e", type=int, required=True)
    common(q)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    options = {k: v for k, v in vars(ns).items() if v is not None and k not in ("out", "format", "command")}
    return RunConfig(
        command=ns.command,
        options=options,
        output=ns.out,
        seed=getattr(ns, "seed", 0) or 0,
        prime_bound=getattr(ns, "prime_bound", None),
        format=ns.format,
    )


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
