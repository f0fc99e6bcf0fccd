"""Command-line front end: reproducible batch computations with JSON or CSV output.

Exit codes: 0 when every certificate passes, 1 when one fails, 2 for bad
flags or unreadable inputs.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from typing import Optional

import click

from .cech import cohomology_table, default_window, ext_twists, sheaf_cohomology
from .exact_linalg import field_from_name
from .gorenstein.functors import UnsupportedRingError, am_sequence_check, tate_table
from .gorenstein.modules import parse_module
from .gorenstein.predicates import EnumerationBoundError, enumerate_universe, gorenstein_predicates
from .gorenstein.resolutions import NotSelfInjectiveError, ResolutionError
from .gorenstein.rings import RingSpecError, parse_ring
from .presentation_io import load_presentation
from .proj_quiver import (
    PresentationError,
    TwistPresentation,
    UnsupportedPresentationError,
    Vertex,
    WindowError,
)
from .sheaf_functors import LocalModule, ZeroModuleError, adjunction_roundtrips, decomposition_sequence

INPUT_ERRORS = (
    RingSpecError, PresentationError, UnsupportedPresentationError, WindowError,
    NotSelfInjectiveError, UnsupportedRingError, EnumerationBoundError, ZeroModuleError, ValueError,
)


class CertificateFailure(click.ClickException):
    exit_code = 1


def parse_range(text: str) -> tuple[int, int]:
    """"a..b" (inclusive) or a single integer."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise click.BadParameter(f"{text!r} is not a range like -3..3") from None
    if lo > hi:
        raise click.BadParameter(f"empty range {text!r}")
    return lo, hi


def emit(payload: dict, rows: list[dict], fmt: str) -> None:
    if fmt == "json":
        click.echo(json.dumps(payload, indent=2))
        return
    buf = io.StringIO()
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, (list, dict, bool)) or v is None else v
                    for k, v in r.items()})
    click.echo(buf.getvalue(), nl=False)


def flat_rows(d: dict, prefix: str = "") -> list[dict]:
    """key/value rows for nested reports."""
    out = []
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.extend(flat_rows(v, key + "."))
        else:
            out.append({"key": key, "value": v})
    return out


def fail_if(condition: bool, message: str) -> None:
    if condition:
        raise CertificateFailure(message)


format_option = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
                             show_default=True)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="artifact")
def main() -> None:
    """Quasi-coherent sheaves on P^n and Gorenstein homological algebra over finite rings."""


def _sheaf(n: Optional[int], twist: Optional[int], sheaf: Optional[str], field: str) -> TwistPresentation:
    if sheaf is not None:
        if twist is not None:
            raise click.UsageError("give either --sheaf or --twist, not both")
        P = load_presentation(sheaf)
        if n is not None and n != P.n:
            raise click.UsageError(f"--n {n} disagrees with the file (n = {P.n})")
        return P
    if n is None or twist is None:
        raise click.UsageError("need --n and --twist, or --sheaf FILE")
    return TwistPresentation.twist(n, twist, field_from_name(field))


def _run(fn):
    """Turn library input errors into exit code 2."""
    try:
        return fn()
    except click.ClickException:
        raise
    except ResolutionError as exc:
        raise CertificateFailure(str(exc)) from exc
    except INPUT_ERRORS as exc:
        raise click.UsageError(str(exc)) from exc
    except FileNotFoundError as exc:
        raise click.UsageError(str(exc)) from exc


@main.command()
@click.option("--n", type=int, help="dimension of projective space")
@click.option("--twist", type=int, help="twist d of O(d)")
@click.option("--sheaf", type=click.Path(dir_okay=False), help="presentation JSON file")
@click.option("--degree-range", help="table of h^i(O(d)) for d in a..b")
@click.option("--window", type=int, help="exponent window W")
@click.option("--field", default="Q", show_default=True, help="Q or a prime such as F7")
@click.option("--check/--no-check", default=True, show_default=True, help="certify stabilization at W+2")
@format_option
def cohomology(n, twist, sheaf, degree_range, window, field, check, fmt):
    """Sheaf cohomology h^i by Čech matrix ranks."""
    def go():
        if degree_range is not None:
            if n is None or twist is not None or sheaf is not None:
                raise click.UsageError("--degree-range needs --n and excludes --twist/--sheaf")
            lo, hi = parse_range(degree_range)
            rows = cohomology_table(n, range(lo, hi + 1), window, check=check, fld=field_from_name(field))
            fail_if(check and not all(r["stabilized"] for r in rows), "stabilization check failed")
            csv_rows = [{"n": r["n"], "d": r["d"], **{f"h{i}": x for i, x in enumerate(r["h"])},
                         "window": r["window"], "stabilized": r["stabilized"]} for r in rows]
            emit({"n": n, "rows": rows}, csv_rows, fmt)
            return
        P = _sheaf(n, twist, sheaf, field)
        res = sheaf_cohomology(P, window, check=check)
        fail_if(check and not res.stabilized, f"h changes between window {res.window} and {res.window + 2}")
        payload = res.as_dict()
        if twist is not None:
            payload = {"n": P.n, "twist": twist, **{k: v for k, v in payload.items() if k != "n"}}
        row = {"n": P.n, **({"twist": twist} if twist is not None else {}),
               **{f"h{i}": x for i, x in enumerate(res.h)}, "window": res.window, "stabilized": res.stabilized}
        emit(payload, [row], fmt)
    _run(go)


@main.command("ext-twists")
@click.option("--n", type=int, required=True)
@click.option("--source", "a", type=int, required=True, help="a in Ext^i(O(a), O(b))")
@click.option("--target", "b", type=int, required=True, help="b in Ext^i(O(a), O(b))")
@click.option("--window", type=int)
@click.option("--field", default="Q", show_default=True)
@format_option
def ext_twists_cmd(n, a, b, window, field, fmt):
    """dim Ext^i(O(a), O(b)) on P^n for i = 0..n."""
    def go():
        fld = field_from_name(field)
        W = window if window is not None else default_window(n, [b - a])
        dims = [ext_twists(a, b, i, n, W, fld) for i in range(n + 1)]
        payload = {"n": n, "source": a, "target": b, "window": W, "ext": dims}
        emit(payload, [{"n": n, "source": a, "target": b, "i": i, "dim": x} for i, x in enumerate(dims)], fmt)
    _run(go)


@main.command()
@click.option("--sheaf", type=click.Path(dir_okay=False), help="presentation JSON file")
@click.option("--n", type=int)
@click.option("--twist", type=int)
@click.option("--window", type=int, help="exponent window W (default max|twist| + n + 2)")
@click.option("--field", default="Q", show_default=True)
@click.option("--check/--no-check", default=True, show_default=True, help="fail unless exact with strict supports")
@format_option
def decompose(sheaf, n, twist, window, field, check, fmt):
    """The sequence 0 -> K -> M -> sum D^v(M(v)) -> C -> 0 over the maximal support vertices."""
    def go():
        P = _sheaf(n, twist, sheaf, field)
        W = window if window is not None else default_window(P.n, P.targets + P.sources)
        res = decomposition_sequence(P, W)
        fail_if(check and not (res.exact and res.strict), "decomposition certificate failed")
        payload = res.as_dict()
        emit(payload, flat_rows(payload), fmt)
    _run(go)


@main.command("adjunction-check")
@click.option("--n", type=int, required=True)
@click.option("--vertex", required=True, help="comma-separated members, e.g. 0,2")
@click.option("--twist", type=int, help="M = O(twist)")
@click.option("--sheaf", type=click.Path(dir_okay=False), help="M from a presentation file")
@click.option("--against", "against", type=int, default=0, show_default=True, help="N = O(against) on the chart")
@click.option("--window", type=int, default=2, show_default=True)
@click.option("--samples", type=int, default=2, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--field", default="Q", show_default=True)
@format_option
def adjunction_check(n, vertex, twist, sheaf, against, window, samples, seed, field, fmt):
    """Round-trip the transpose maps Hom(M, D^v N) <-> Hom(M(v), N)."""
    def go():
        try:
            v = Vertex(n, tuple(int(x) for x in vertex.split(",")))
        except ValueError as exc:
            raise click.BadParameter(str(exc), param_hint="--vertex") from None
        M = _sheaf(n, twist, sheaf, field)
        N = LocalModule(v, TwistPresentation.twist(n, against, M.field))
        rep = adjunction_roundtrips(M, N, window, samples=samples, seed=seed)
        payload = {"n": n, "vertex": v.label(), "window": window, **rep}
        emit(payload, [{"n": n, "vertex": v.label(), "window": window, "tested": rep["tested"],
                        "failures": len(rep["failures"]), "ok": rep["ok"]}], fmt)
        fail_if(not rep["ok"], f"{len(rep['failures'])} round trips failed")
    _run(go)


def _modules(ring: str, module: str, against: str):
    R = parse_ring(ring)
    return R, parse_module(R, module), parse_module(R, against)


@main.command()
@click.option("--ring", required=True, help="Zmod:m, GF:p:f(x) or Trunc:p:nvars:degree")
@click.option("--module", "module", required=True, help="0, R, R^n, k or pres:g:rows")
@click.option("--against", required=True, help="second module, same syntax")
@click.option("--range", "rng", default="-3..3", show_default=True)
@click.option("--side", type=click.Choice(["projective", "injective", "both"]), default="both", show_default=True)
@format_option
def tate(ring, module, against, rng, side, fmt):
    """Tate cohomology lengths of Êxt^i(M, N) from complete resolutions."""
    def go():
        R, M, N = _modules(ring, module, against)
        lo, hi = parse_range(rng)
        sides = ["projective", "injective"] if side == "both" else [side]
        tables = {s: tate_table(M, N, lo, hi, s) for s in sides}
        rows = []
        for k, i in enumerate(range(lo, hi + 1)):
            row = {"i": i, **{s: tables[s][k]["dim"] for s in sides}}
            if side == "both":
                row["dim"] = row["projective"] if row["projective"] == row["injective"] else None
            else:
                row["dim"] = row[side]
            rows.append(row)
        payload = {"ring": R.name, "module": M.spec(), "against": N.spec(), "rows": rows}
        emit(payload, rows, fmt)
        fail_if(any(r["dim"] is None for r in rows), "projective and injective sides disagree")
    _run(go)


@main.command("am-check")
@click.option("--ring", required=True)
@click.option("--module", "module", help="X; omit with --all")
@click.option("--against", help="Y; omit with --all")
@click.option("--degree", type=int, default=5, show_default=True, help="check up to this degree")
@click.option("--all", "all_pairs", is_flag=True, help="every pair in the enumerated universe")
@click.option("--size-bound", type=int, default=16, show_default=True)
@format_option
def am_check(ring, module, against, degree, all_pairs, size_bound, fmt):
    """Exactness of the Gext / Ext / Êxt long exact sequence."""
    def go():
        R = parse_ring(ring)
        if all_pairs:
            if module or against:
                raise click.UsageError("--all excludes --module/--against")
            mods = enumerate_universe(R, size_bound=size_bound).modules
            pairs = [(X, Y) for X in mods for Y in mods]
        else:
            if not (module and against):
                raise click.UsageError("need --module and --against (or --all)")
            pairs = [(parse_module(R, module), parse_module(R, against))]
        reports = [am_sequence_check(X, Y, degree) for X, Y in pairs]
        rows = [{"module": r["module"], "against": r["against"], **row}
                for r in reports for row in r["rows"]]
        payload = {"ring": R.name, "degree": degree, "exact": all(r["exact"] for r in reports),
                   "reports": reports}
        emit(payload, rows, fmt)
        fail_if(not payload["exact"], "sequence is not exact")
    _run(go)


@main.command("gorenstein-report")
@click.option("--ring", required=True)
@click.option("--size-bound", type=int, default=16, show_default=True)
@click.option("--max-gens", type=int, default=2, show_default=True)
@click.option("--max-rels", type=int, default=2, show_default=True)
@click.option("--degree", type=int, default=5, show_default=True)
@click.option("--fixed-i", type=int, default=0, show_default=True, help="the i of the fixed-degree condition")
@format_option
def gorenstein_report(ring, size_bound, max_gens, max_rels, degree, fixed_i, fmt):
    """Gorenstein-category predicates over an enumerated module universe."""
    def go():
        R = parse_ring(ring)
        rep = gorenstein_predicates(R, size_bound, max_gens, max_rels, degree, fixed_i)
        emit(rep, flat_rows(rep["predicates"]), fmt)
        p = rep["predicates"]
        fail_if(not p["conditions_coherent"], "mixed verdict on the equivalent conditions")
        fail_if(not p["four_way_equality"], "FPD, FID, glGpd, glGid differ")
    _run(go)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
