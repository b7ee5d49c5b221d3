"""Command-line interface.

Exit codes: 0 covered/success, 1 not covered (or empty solved range),
2 usage or parse error, 3 violated hypothesis or unsupported operation.
"""

from __future__ import annotations

import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

import click

from . import appsuite, dsl, normlab
from .errors import (EngineError, HypothesisViolation, IncompatibleSpaces,
                     NotIdentifiable, Unsupported)
from .lemmas import (MinimizationInput, RealizationInput, minimize_phi,
                     realize_exponents)
from .psolver import ParamSet
from .ratcore import render_fraction
from .spaces import Scale

_HYPOTHESIS_ERRORS = (HypothesisViolation, NotIdentifiable, IncompatibleSpaces,
                      Unsupported)


def _load_prelude(path: str | None) -> dict[str, tuple[int, ...]]:
    if path is None:
        return dict(dsl.DEFAULT_PRELUDE)
    return dsl.parse_prelude(Path(path).read_text())


def _emit(report: dsl.Report, machine: bool, explain: bool,
          timing: float | None = None) -> None:
    if machine:
        click.echo(report.to_json())
    else:
        if timing is not None:
            report.timing_ms = timing
        click.echo(report.to_text(explain=explain))


def _run_text_query(text: str, prelude, machine: bool, explain: bool) -> int:
    t0 = time.perf_counter()
    try:
        query = dsl.parse_query(text, prelude)
    except dsl.ParseError as exc:
        click.echo(f"parse error: {exc}", err=True)
        return dsl.EXIT_USAGE
    try:
        report = dsl.run(query)
    except _HYPOTHESIS_ERRORS as exc:
        click.echo(f"{type(exc).__name__}: {exc}", err=True)
        return dsl.EXIT_HYPOTHESIS
    _emit(report, machine, explain, (time.perf_counter() - t0) * 1e3)
    return report.exit_code


_common = [
    click.option("--prelude", "prelude_path", type=click.Path(exists=True),
                 default=None, help="alias bindings file (ALIAS = dims)"),
    click.option("--machine", is_flag=True, help="one JSON document per query"),
    click.option("--explain", is_flag=True,
                 help="append the rulebook text of every anchor"),
]


def _with_common(fn):
    for opt in reversed(_common):
        fn = opt(fn)
    return fn


@click.group()
def main() -> None:
    """Exact decision engine for anisotropic function-space calculus."""


def _query_command(name: str, prefix: str, help_text: str):
    @main.command(name=name, help=help_text)
    @click.argument("query", nargs=-1, required=True)
    @_with_common
    def _cmd(query: tuple[str, ...], prelude_path, machine, explain):
        text = " ".join(query)
        if prefix and not text.lstrip().startswith(prefix):
            text = f"{prefix}{text}"
        code = _run_text_query(text, _load_prelude(prelude_path), machine,
                               explain)
        sys.exit(code)
    return _cmd


_query_command("index", "index ", "Regularity index of a space.")
_query_command("embed", "", "Embedding query: 'A -> B ?'.")
_query_command("mult", "", "Multiplication query: 'A * B -> C ?'.")
_query_command("multiplier", "multiplier: ",
               "Multiplier query (one factor equals the target).")
_query_command("algebra", "algebra ", "Multiplication-algebra query.")
_query_command("nemytskij", "nemytskij: ",
               "Analytic superposition gate: 'A * B -> C ?'.")
_query_command("solve-p", "solve p: ",
               "Exact admissible p-range of a decision query.")
_query_command("interp", "", "Interpolation: '[A, B]_{1/2}' or '(A, B)_{1/2, q}'.")


@main.command(name="batch", help="Evaluate a query file (one query per line, "
              "'#' comments).")
@click.argument("path", type=click.Path(exists=True))
@click.option("--jobs", type=int, default=1, help="parallel evaluation")
@_with_common
def batch(path: str, jobs: int, prelude_path, machine, explain) -> None:
    prelude = _load_prelude(prelude_path)
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    queries = [ln for ln in lines if ln and not ln.startswith("#")]

    def evaluate(text: str) -> tuple[dsl.Report | None, str | None, int]:
        try:
            report = dsl.run(dsl.parse_query(text, prelude))
            return report, None, report.exit_code
        except dsl.ParseError as exc:
            return None, f"parse error: {exc}", dsl.EXIT_USAGE
        except _HYPOTHESIS_ERRORS as exc:
            return None, f"{type(exc).__name__}: {exc}", dsl.EXIT_HYPOTHESIS

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(evaluate, queries))
    else:
        results = [evaluate(q) for q in queries]
    worst = 0
    for (report, error, code) in results:
        if report is not None:
            _emit(report, machine, explain)
        else:
            click.echo(error, err=True)
        worst = max(worst, code)
    sys.exit(worst)


@main.command(name="realize", help="Split a feasible target sum into "
              "per-factor exponents.")
@click.option("--sigma", required=True, help="comma-separated caps, e.g. 1/2,2")
@click.option("--pi", "pi_", required=True, help="comma-separated reciprocals")
@click.option("--rho", required=True, help="target sum")
@click.option("--machine", is_flag=True)
def realize(sigma: str, pi_: str, rho: str, machine: bool) -> None:
    try:
        inp = RealizationInput(
            tuple(Fraction(v) for v in sigma.split(",")),
            tuple(Fraction(v) for v in pi_.split(",")),
            Fraction(rho))
        out = realize_exponents(inp)
    except (ValueError, EngineError) as exc:
        click.echo(f"{type(exc).__name__}: {exc}", err=True)
        sys.exit(dsl.EXIT_HYPOTHESIS if isinstance(exc, EngineError)
                 else dsl.EXIT_USAGE)
    if machine:
        click.echo(json.dumps({"schema": dsl.SCHEMA, "kind": "realize",
                               "rho_j": [render_fraction(v) for v in out]}))
    else:
        click.echo("rho_j = " + ", ".join(render_fraction(v) for v in out))
    sys.exit(0)


@main.command(name="minimize", help="Minimum of the piecewise-linear "
              "composition functional.")
@click.option("--sigma", required=True)
@click.option("--pi", "pi_", required=True)
@click.option("--order", "n", required=True, type=int)
@click.option("--machine", is_flag=True)
def minimize(sigma: str, pi_: str, n: int, machine: bool) -> None:
    try:
        inp = MinimizationInput(
            tuple(Fraction(v) for v in sigma.split(",")),
            tuple(Fraction(v) for v in pi_.split(",")), n)
        val, rule = minimize_phi(inp)
    except ValueError as exc:
        click.echo(f"ValueError: {exc}", err=True)
        sys.exit(dsl.EXIT_USAGE)
    if machine:
        click.echo(json.dumps({
            "schema": dsl.SCHEMA, "kind": "minimize",
            "phi_min": render_fraction(val), "case": rule.case,
            "mu": render_fraction(rule.mu),
            "argmin_sets": {"plus": sorted(rule.m_plus),
                            "zero": sorted(rule.m_zero),
                            "minus": sorted(rule.m_minus),
                            "star": sorted(rule.m_star)}}))
    else:
        click.echo(f"phi_min = {render_fraction(val)} (case: {rule.case}, "
                   f"mu = {render_fraction(rule.mu)})")
    sys.exit(0)


@main.command(name="seminorm", help="Difference-quotient seminorm of a "
              "Gaussian test function.")
@click.option("--space", "space_text", required=True,
              help="a concrete W or B space, e.g. 'W^{1/2,(1)}_2(R^1)'")
@click.option("--sigma", default="1",
              help="comma-separated Gaussian widths, one per axis")
@click.option("--freq", default=None,
              help="comma-separated modulation frequencies")
@click.option("--spacing", default=None,
              help="comma-separated grid spacings, one per slice")
@click.option("--radius", type=float, default=None, help="grid half-width")
@click.option("--dilations", default=None,
              help="comma-separated dilation parameters for a scaling table")
@click.option("--csv", "csv_path", type=click.Path(), default=None,
              help="write the (lambda, seminorm) table as CSV")
@click.option("--prelude", "prelude_path", type=click.Path(exists=True),
              default=None)
@click.option("--machine", is_flag=True)
def seminorm(space_text, sigma, freq, spacing, radius, dilations, csv_path,
             prelude_path, machine) -> None:
    try:
        space = dsl.parse_space(space_text, _load_prelude(prelude_path))
    except dsl.ParseError as exc:
        click.echo(f"parse error: {exc}", err=True)
        sys.exit(dsl.EXIT_USAGE)
    dims = tuple(space.aniso.dims)
    total_axes = sum(dims)
    sigmas = tuple(float(Fraction(v)) for v in sigma.split(","))
    if len(sigmas) == 1:
        sigmas = sigmas * total_axes
    freqs = None
    if freq is not None:
        freqs = tuple(float(Fraction(v)) for v in freq.split(","))
        if len(freqs) == 1:
            freqs = freqs * total_axes
    spec = normlab.GaussianSpec(sigmas, freqs)
    radius = radius if radius is not None else 10.0 * max(sigmas)
    if spacing is None:
        spacings = tuple(min(sigmas) / 25 for _ in dims)
    else:
        vals = [float(Fraction(v)) for v in spacing.split(",")]
        if len(vals) == 1:
            spacings = tuple(vals * len(dims))
        elif len(vals) == len(dims):
            spacings = tuple(vals)
        else:
            click.echo(f"expected 1 or {len(dims)} spacings, got {len(vals)}",
                       err=True)
            sys.exit(dsl.EXIT_USAGE)

    def one(lam: float) -> float:
        sampled = spec.dilated(lam, tuple(space.aniso.weights), dims) \
            .sample(dims, spacings, radius)
        if space.scale is Scale.W:
            return normlab.seminorm_slobodeckij(sampled, space).value
        return normlab.seminorm_besov(sampled, space).value

    try:
        if dilations is None:
            value = one(1.0)
            if machine:
                click.echo(json.dumps({"schema": dsl.SCHEMA,
                                       "kind": "seminorm",
                                       "space": str(space), "value": value}))
            else:
                click.echo(f"seminorm = {value:.6g}")
        else:
            lams = [float(Fraction(v)) for v in dilations.split(",")]
            rows = [(lam, one(lam)) for lam in lams]
            table = "lambda,seminorm\n" + "\n".join(
                f"{lam},{val:.12g}" for lam, val in rows)
            if csv_path is not None:
                Path(csv_path).write_text(table + "\n")
                click.echo(f"wrote {csv_path}")
            elif machine:
                click.echo(json.dumps({"schema": dsl.SCHEMA,
                                       "kind": "seminorm-scaling",
                                       "space": str(space), "rows": rows}))
            else:
                click.echo(table)
    except EngineError as exc:
        click.echo(f"{type(exc).__name__}: {exc}", err=True)
        sys.exit(dsl.EXIT_HYPOTHESIS)
    sys.exit(0)


@main.command(name="app", help="Run a built-in application checklist.")
@click.argument("problem", type=click.Choice(["stefan", "nvs"]))
@click.option("--n", "n", type=int, required=True, help="space dimension")
@click.option("--p", "p_text", default=None,
              help="concrete integrability exponent (rational)")
@click.option("--solve-p", "solve_p", is_flag=True,
              help="solve every term symbolically (default when --p absent)")
@click.option("--machine", is_flag=True)
def app(problem: str, n: int, p_text: str | None, solve_p: bool,
        machine: bool) -> None:
    try:
        p = None if (solve_p or p_text is None) else Fraction(p_text)
    except ValueError:
        click.echo(f"--p expects a rational, got {p_text!r}", err=True)
        sys.exit(dsl.EXIT_USAGE)
    try:
        report = (appsuite.run_stefan if problem == "stefan"
                  else appsuite.run_nvs)(n, p)
    except ValueError as exc:
        click.echo(f"ValueError: {exc}", err=True)
        sys.exit(dsl.EXIT_USAGE)
    if machine:
        click.echo(json.dumps(_suite_machine(report), sort_keys=True))
    else:
        click.echo(_suite_text(report))
    if p is None:
        sys.exit(dsl.EXIT_COVERED if report.final is not None
                 and not report.final.is_empty else dsl.EXIT_NOT_COVERED)
    sys.exit(dsl.EXIT_COVERED if report.all_covered else dsl.EXIT_NOT_COVERED)


def _param_set_machine(ps: ParamSet) -> dict:
    return {
        "x_intervals": [
            {"lo": render_fraction(iv.lo), "lo_closed": iv.lo_closed,
             "hi": render_fraction(iv.hi), "hi_closed": iv.hi_closed}
            for iv in ps.intervals],
        "excluded": [{"x": render_fraction(e.x), "reason": e.reason}
                     for e in ps.excluded],
        "p": ps.describe_p(),
    }


def _suite_machine(report: appsuite.SuiteReport) -> dict:
    terms = []
    for res in report.terms:
        row: dict = {"name": res.check.name, "term": res.check.term_text,
                     "kind": res.check.kind,
                     "governing": res.check.governing,
                     "anchor": res.check.anchor}
        if res.param_set is not None:
            row["param_set"] = _param_set_machine(res.param_set)
            row["expected"] = _param_set_machine(res.check.expected)
            row["matches_expected"] = res.matches_expected
        if res.decision is not None:
            row["verdict"] = res.decision.verdict.value
            fail = res.decision.first_failure()
            if fail is not None:
                row["first_failure"] = {"label": fail.label,
                                        "anchor": fail.anchor}
        terms.append(row)
    out = {
        "schema": dsl.SCHEMA,
        "kind": f"app.{report.problem}",
        "n": report.n,
        "p": None if report.p is None else render_fraction(Fraction(report.p)),
        "facts": [{"quantity": f.quantity, "space": str(f.space),
                   "anchor": f.anchor} for f in report.facts],
        "terms": terms,
        "exclusions": [{"p": render_fraction(q), "anchor": a}
                       for q, a in report.exclusions],
        "footnotes": list(report.footnotes),
    }
    if report.intersection is not None:
        out["intersection"] = _param_set_machine(report.intersection)
        out["final"] = _param_set_machine(report.final)
    return out


def _suite_text(report: appsuite.SuiteReport) -> str:
    lines = [f"checklist: {report.problem} (n = {report.n})"]
    lines.append("facts:")
    for f in report.facts:
        lines.append(f"  {f.quantity}: {f.space} [{f.anchor}]")
    lines.append("terms:")
    for res in report.terms:
        if res.param_set is not None:
            mark = "ok" if res.matches_expected else "MISMATCH"
            lines.append(f"  {res.check.name} ({res.check.term_text}): "
                         f"p in {res.param_set.describe_p()} "
                         f"[{res.check.governing}] {mark}")
        else:
            v = res.decision.verdict.value
            line = f"  {res.check.name} ({res.check.term_text}): {v}"
            fail = res.decision.first_failure()
            if fail is not None:
                line += f" (first failed: {fail.label} [{fail.anchor}])"
            lines.append(line)
    if report.intersection is not None:
        lines.append(f"intersection: p in {report.intersection.describe_p()}")
        lines.append(f"after exclusions: p in {report.final.describe_p()}")
    lines.append("exclusions: " + ", ".join(
        f"p = {render_fraction(q)} [{a}]" for q, a in report.exclusions))
    for note in report.footnotes:
        lines.append(f"note: {note}")
    return "\n".join(lines)


if __name__ == "__main__":  # pragma: no cover
    main()
