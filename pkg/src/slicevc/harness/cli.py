"""slicevc command line.

Exit codes: 0 success, 1 an audit (or oracle comparison) came out below its
threshold, 2 bad input.
"""

from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

import click

from .. import __version__
from ..core import BipartiteGraph, EdgeColoredBipartiteGraph, GeneralThreeGraph, Graph, TripartiteThreeGraph, VertexPart, as_rational
from ..partitions import Partition, almost_good_partition, audit_pair_homogeneity, audit_triple_homogeneity
from . import io as fio
from .generators import KINDS, GenSpec, generate

EXIT_OK, EXIT_AUDIT, EXIT_INPUT = 0, 1, 2


class AuditBelowThreshold(Exception):
    pass


def _rational(ctx, param, value):
    if value is None:
        return None
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"{value!r} is not a rational number") from None


def _emit(ctx: click.Context, payload: dict, summary: str) -> None:
    if ctx.obj["json"]:
        click.echo(fio.dumps(payload), nl=False)
    else:
        click.echo(summary)


def _load(path: str, want: tuple, default_color: Optional[int] = None):
    G = fio.read_graph(path, default_color)
    if not isinstance(G, want):
        names = " or ".join(t.__name__ for t in want)
        raise fio.InputError(path, 1, f"expected {names}, got {type(G).__name__}")
    return G


def _out_dir(out: Optional[str]) -> Optional[Path]:
    if out is None:
        return None
    p = Path(out)
    p.mkdir(parents=True, exist_ok=True)
    return p


@click.group()
@click.version_option(__version__)
@click.option("--seed", type=int, default=0, show_default=True, help="64-bit generator seed.")
@click.option("--threads", type=click.IntRange(1), default=1, show_default=True, help="Worker threads; outputs do not depend on it.")
@click.option("--json", "as_json", is_flag=True, help="Print machine-readable JSON.")
@click.pass_context
def cli(ctx, seed, threads, as_json):
    """Slicewise VC-dimension tools: generators, VC search, partitions, audits."""
    ctx.ensure_object(dict)
    ctx.obj.update(seed=seed & ((1 << 64) - 1), threads=threads, json=as_json)


@cli.command()
@click.option("--kind", type=click.Choice(KINDS), required=True)
@click.option("--n", type=click.IntRange(0), required=True, help="Vertices per part.")
@click.option("--d", type=click.IntRange(1), default=2, show_default=True, help="Classes/templates (U(k): k).")
@click.option("--noise", default="0", callback=_rational, show_default=True)
@click.option("--p", "prob", default="1/2", callback=_rational, show_default=True, help="Pattern density.")
@click.option("--out", type=click.Path(dir_okay=False), help="Output file (default stdout).")
@click.pass_context
def gen(ctx, kind, n, d, noise, prob, out):
    """Generate a seeded instance."""
    try:
        spec = GenSpec(kind, n, d, noise, ctx.obj["seed"], prob)
    except ValueError as e:
        raise click.BadParameter(str(e)) from None
    text = fio.format_graph(generate(spec))
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


@cli.command()
@click.option("--input", "path", required=True)
@click.option("--cap", type=click.IntRange(0), default=None, help="Stop the search at this value.")
@click.pass_context
def vc(ctx, path, cap):
    """VC-dimension of a graph."""
    from ..vc import vc_dimension

    G = _load(path, (BipartiteGraph, Graph))
    n = G.nA + G.nB if isinstance(G, BipartiteGraph) else G.n
    res = vc_dimension(G, n if cap is None else cap)
    _emit(ctx, res.to_json(), f"vc = {res.value}" + (" (capped)" if res.capped else ""))


@cli.command()
@click.option("--input", "path", required=True)
@click.option("--cap", type=click.IntRange(0), default=None)
@click.pass_context
def svc(ctx, path, cap):
    """Slicewise VC-dimension of a 3-graph."""
    from ..vc import slicewise_vc

    H = _load(path, (TripartiteThreeGraph, GeneralThreeGraph))
    n = max(H.sizes) * 2 if isinstance(H, TripartiteThreeGraph) else H.n
    res = slicewise_vc(H, n if cap is None else cap)
    _emit(ctx, res.to_json(), f"svc = {res.value}" + (" (capped)" if res.capped else ""))


@cli.command("partition-graph")
@click.option("--input", "path", required=True)
@click.option("--k", type=click.IntRange(1), required=True)
@click.option("--eps", required=True, callback=_rational)
@click.option("--out", type=click.Path(file_okay=False))
@click.pass_context
def partition_graph(ctx, path, k, eps, out):
    """Homogeneous equipartition of a bipartite graph with equal sides."""
    from ..graphreg import homogeneous_equipartition

    G = _load(path, (BipartiteGraph,))
    try:
        res = homogeneous_equipartition(G, k, eps)
    except ValueError as e:
        raise fio.InputError(path, 0, str(e)) from None
    part, audit = res.partition.to_json(), res.audit.to_json()
    d = _out_dir(out)
    if d:
        fio.write_json(part, d / "partition.json")
        fio.write_json(audit, d / "audit.json")
    _emit(ctx, {"partition": part, "audit": audit}, f"{len(res.partition)} blocks, audit fraction {float(res.audit.fraction):.6f}")
    if not res.audit.passes:
        raise AuditBelowThreshold


@cli.command("ecg-partition")
@click.option("--input", "path", required=True)
@click.option("--k", type=click.IntRange(1), required=True)
@click.option("--eps", required=True, callback=_rational)
@click.option("--delta", default="1/10", callback=_rational, show_default=True)
@click.option("--default-color", type=int, default=None, help="Color for pairs missing from the file.")
@click.option("--out", type=click.Path(file_okay=False))
@click.pass_context
def ecg_partition(ctx, path, k, eps, delta, default_color, out):
    """Homogeneous pair partition of an edge-colored bipartite graph (colors 0/1/2)."""
    from ..ecg import vcremoval_partition

    G = _load(path, (EdgeColoredBipartiteGraph,), default_color)
    if G.r != 2:
        raise fio.InputError(path, 1, "expected r = 2 (colors 0, 1 and error color 2)")
    try:
        res = vcremoval_partition(G, k, eps, delta)
    except ValueError as e:
        raise fio.InputError(path, 0, str(e)) from None
    payload = res.to_json()
    d = _out_dir(out)
    if d:
        fio.write_json(res.P_A.to_json(), d / "partition_A.json")
        fio.write_json(res.P_B.to_json(), d / "partition_B.json")
        fio.write_json(payload, d / "audit.json")
    _emit(ctx, payload, f"size {res.size}, coverage {float(res.coverage):.6f}, achieved eps {float(res.achieved_eps):.6f}")
    if res.achieved_eps > eps:
        raise AuditBelowThreshold


@cli.command()
@click.option("--input", "path", required=True)
@click.option("--k", type=click.IntRange(1), required=True)
@click.option("--eps", required=True, callback=_rational, help="Working tolerance of the audit.")
@click.option("--eps-slice", default="1/20", callback=_rational, show_default=True)
@click.option("--delta-cover", default="1/100", callback=_rational, show_default=True)
@click.option("--delta-pack", default="1/20", callback=_rational, show_default=True)
@click.option("--strict-report", is_flag=True, help="Also evaluate the theoretical schedule.")
@click.option("--out", type=click.Path(file_okay=False), required=True)
@click.pass_context
def pipeline(ctx, path, k, eps, eps_slice, delta_cover, delta_pack, strict_report, out):
    """Full construction on a 3-graph; writes partitions, audit, constants and run log."""
    from ..constants import theoretical_constants
    from ..pipeline import WorkingParams, slvc_partition, slvccor_partition

    H = _load(path, (TripartiteThreeGraph, GeneralThreeGraph))
    try:
        params = WorkingParams(k, eps_slice, eps, delta_cover, delta_pack, strict_mode=strict_report)
    except ValueError as e:
        raise click.BadParameter(str(e)) from None
    d = _out_dir(out)
    threads = ctx.obj["threads"]
    try:
        if isinstance(H, TripartiteThreeGraph):
            res = slvc_partition(H, params, threads)
            for nm, P in res.sides.items():
                fio.write_json(P.to_json(), d / f"partition_{nm}.json")
            audit = res.report.to_json()
            passes, frac, rows = res.report.working.passes, res.fraction, res.runlog.rows
        else:
            res = slvccor_partition(H, params, threads)
            fio.write_json(res.partition.to_json(), d / "partition.json")
            audit = res.audit.to_json()
            audit["diagonal_mass"] = res.diagonal_mass
            passes, frac, rows = res.audit.passes, res.fraction, res.tripartite.runlog.rows
    except ValueError as e:
        raise fio.InputError(path, 0, str(e)) from None
    fio.write_json(audit, d / "audit.json")
    fio.write_json(theoretical_constants(k, eps).to_json(), d / "constants.json")
    fio.write_runlog(rows, d / "runlog.csv")
    _emit(ctx, {"fraction": {"num": frac.numerator, "den": frac.denominator}, "passes": passes}, f"audit fraction {float(frac):.6f} ({'pass' if passes else 'FAIL'})")
    if not passes:
        raise AuditBelowThreshold


@cli.command()
@click.option("--input", "path", required=True)
@click.option("--partition", "ppath", required=True, help="Partition JSON over all vertices.")
@click.option("--eps", required=True, callback=_rational)
@click.option("--goodness", "part", default=None, help="Audit almost-goodness of this part instead.")
@click.pass_context
def audit(ctx, path, ppath, eps, part):
    """Exact homogeneity (or almost-goodness) audit of a given partition."""
    G = _load(path, (BipartiteGraph, Graph, TripartiteThreeGraph, GeneralThreeGraph))
    if part is not None:
        if not isinstance(G, TripartiteThreeGraph):
            raise fio.InputError(path, 1, "--goodness needs a tripartite 3-graph")
        try:
            p = G.part_index(part)
        except (KeyError, ValueError):
            raise click.BadParameter(f"unknown part {part!r}") from None
        P = fio.read_partition(ppath, G.sizes[p])
        try:
            res = almost_good_partition(G, p, P, eps)
        except ValueError as e:
            raise fio.InputError(ppath, 0, str(e)) from None
        _emit(ctx, res.to_json(), f"covered {float(res.covered.value):.6f}, {'good' if res.is_good else 'NOT good'}")
        if not res.is_good:
            raise AuditBelowThreshold
        return
    if isinstance(G, BipartiteGraph):
        n = G.nA + G.nB
    elif isinstance(G, TripartiteThreeGraph):
        n = sum(G.sizes)
    else:
        n = G.n
    P = fio.read_partition(ppath, n)
    try:
        if isinstance(G, (BipartiteGraph, Graph)):
            res = audit_pair_homogeneity(G, P, eps)
        else:
            res = audit_triple_homogeneity(G, P, eps)
    except ValueError as e:
        raise fio.InputError(ppath, 0, str(e)) from None
    _emit(ctx, res.to_json(), f"fraction {float(res.fraction):.6f} ({'pass' if res.passes else 'FAIL'})")
    if not res.passes:
        raise AuditBelowThreshold


@cli.command()
@click.option("--k", type=click.IntRange(1), required=True)
@click.option("--tau", required=True, callback=_rational)
@click.option("--c1", default="1", callback=_rational, show_default=True)
@click.option("--C1", "C1", default="1", callback=_rational, show_default=True)
@click.pass_context
def constants(ctx, k, tau, c1, C1):
    """Evaluate the theoretical constant schedule (documentation only)."""
    from ..constants import theoretical_constants

    try:
        c = theoretical_constants(k, tau, c1, C1)
    except ValueError as e:
        raise click.BadParameter(str(e)) from None
    payload = c.to_json()
    lines = [f"{name} = {payload[name]}" for name in ("D", "c2", "c3", "c4", "K1", "K2", "K3", "K", "eps", "mu", "ell", "loglog_bound")]
    _emit(ctx, payload, "\n".join(lines))


@cli.command()
@click.option("--input", "path", required=True)
@click.option("--quantity", "quantities", multiple=True, help="Restrict to these quantities.")
@click.option("--eps", default="1/10", callback=_rational, show_default=True)
@click.pass_context
def oracle(ctx, path, quantities, eps):
    """Compare fast and brute-force values on a small instance."""
    from .oracles import QUANTITIES, OracleSizeError, brute_oracles

    G = fio.read_graph(path)
    try:
        reports = brute_oracles(G, quantities or QUANTITIES, eps)
    except (OracleSizeError, ValueError, TypeError) as e:
        raise fio.InputError(path, 0, str(e)) from None
    payload = {"reports": [r.to_json() for r in reports]}
    _emit(ctx, payload, "\n".join(f"{r.quantity}: {'match' if r.match else 'MISMATCH'} ({r.fast} vs {r.brute})" for r in reports))
    if not all(r.match for r in reports):
        raise AuditBelowThreshold


def main(argv: Optional[list] = None) -> int:
    try:
        cli.main(args=argv, prog_name="slicevc", standalone_mode=False)
    except AuditBelowThreshold:
        return EXIT_AUDIT
    except fio.InputError as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_INPUT
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_INPUT
    except click.ClickException as e:
        e.show()
        return EXIT_INPUT
    except click.exceptions.Exit as e:
        return e.exit_code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
