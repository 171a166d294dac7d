"""Command-line interface: ``dmsx <command> ...``.

Surfaces are given as ``seed:<name>`` (for example ``seed:disk_a2`` or
``seed:annulus(1,1)``) or as a path to a surface JSON file.  Curves are
inline JSON literals in the curve schema, ``dual:<arc>`` for the dual arc
of an arc, or a path to a curve JSON file.

Exit codes: 0 success, 2 usage error, 3 invalid input, 4 failed verification.
"""
from __future__ import annotations

import json
import os
import sys
from typing import Callable

import click

from .algebra import algebra_to_dict, build_differential, build_ext, render_algebra, zero_part
from .bigraded_poly import format_degree, render
from .curves import (
    ClosedArc,
    CurveWalk,
    braid_twist,
    classify,
    curve_from_dict,
    curve_to_dict,
    dual_arc,
    normalize,
    same_underlying,
)
from .errors import DmsxError, InternalCheckFailure, NotAClosedArc, ValidationError
from .harness import (
    OrbitSpec,
    VerificationReport,
    enumerate_closed_arcs,
    verify_compositions,
    verify_cones,
    verify_main_theorem,
    verify_slide,
    verify_twist_compat,
)
from .intersect import crossings, q_int
from .strings import fingerprint, inverse_spherical_twist, minimize, qdim_hom, spherical_twist, string_of_curve
from .surface import SEED_NAMES, Surface, compile_surface, load_surface, seed_surface, validate_surface

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_VERIFY = 4


class _Ctx:
    def __init__(self, fmt: str, jobs: int, seed: int):
        self.fmt = fmt
        self.jobs = jobs
        self.seed = seed

    def emit(self, text: Callable[[], str], data: Callable[[], object]) -> None:
        if self.fmt == "json":
            click.echo(json.dumps(data(), indent=2, sort_keys=True))
        else:
            click.echo(text())


def _surface(ref: str) -> tuple:
    spec = load_surface(ref)
    return spec, compile_surface(spec)


def _curve(surf: Surface, ref: str) -> CurveWalk:
    """Parse a curve literal, ``dual:<arc>`` or a curve file, then normalize it."""
    text = ref.strip()
    if text.startswith("dual:"):
        key = text[5:]
        for arc_id, idx in surf.arc_index.items():
            if str(arc_id) == key:
                return dual_arc(surf, idx)
        raise click.BadParameter(f"no arc {key!r} on this surface")
    if not text.startswith("{"):
        if not os.path.exists(text):
            raise click.BadParameter(f"{ref!r} is neither a curve literal nor a file")
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise click.BadParameter(f"curve literal is not valid JSON: {exc}") from exc
    return normalize(surf, curve_from_dict(surf, data))


def _closed_arc(surf: Surface, ref: str, depth: int, seed: int) -> ClosedArc | int:
    """A closed arc with a braid word reaching it from a dual arc."""
    text = ref.strip()
    if text.startswith("dual:"):
        target = _curve(surf, text)
        return next(i for i in range(surf.n_arcs) if dual_arc(surf, i) == target)
    target = _curve(surf, text)
    if classify(surf, target) != "closed arc":
        raise NotAClosedArc("the twisting curve must be a closed arc")
    for arc in enumerate_closed_arcs(surf, OrbitSpec(depth=depth, seed=seed)).arcs:
        if same_underlying(surf, arc.curve, target):
            return arc
    raise NotAClosedArc(f"closed arc not reached by braid words of length <= {depth}; raise --depth")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True, help="Worker processes.")
@click.option("--seed", type=int, default=0, show_default=True, help="Sampling seed.")
@click.pass_context
def cli(ctx: click.Context, fmt: str, jobs: int, seed: int) -> None:
    """Graded curves, string objects and q-intersections on decorated surfaces."""
    ctx.obj = _Ctx(fmt, jobs, seed)


@cli.command()
@click.argument("surface")
@click.pass_obj
def validate(c: _Ctx, surface: str) -> int:
    """Validate a surface and print its topology."""
    rep = validate_surface(load_surface(surface))
    c.emit(rep.render, rep.to_dict)
    return EXIT_OK


@cli.command()
@click.argument("name", required=False)
@click.pass_obj
def seed(c: _Ctx, name: str | None) -> int:
    """Print a seed surface as JSON, or list the seed families."""
    if name is None:
        c.emit(lambda: "\n".join(SEED_NAMES), lambda: list(SEED_NAMES))
        return EXIT_OK
    spec = seed_surface(name)
    click.echo(spec.to_json())
    return EXIT_OK


@cli.command()
@click.argument("surface")
@click.pass_obj
def algebra(c: _Ctx, surface: str) -> int:
    """Print the arrows, the differential and the zero part."""
    _, surf = _surface(surface)
    dga = build_differential(surf)
    zero = zero_part(dga)
    c.emit(lambda: render_algebra(dga, zero), lambda: algebra_to_dict(dga, zero))
    return EXIT_OK


@cli.command()
@click.argument("surface")
@click.argument("curve")
@click.pass_obj
def string(c: _Ctx, surface: str, curve: str) -> int:
    """Print the string object of a curve."""
    _, surf = _surface(surface)
    X = string_of_curve(surf, build_ext(surf), _curve(surf, curve))
    c.emit(X.render, X.to_dict)
    return EXIT_OK


@cli.command()
@click.argument("surface")
@click.argument("curve_a")
@click.argument("curve_b")
@click.option("--self-crossings", is_flag=True, help="Count self-crossings when both curves coincide.")
@click.pass_obj
def qint(c: _Ctx, surface: str, curve_a: str, curve_b: str, self_crossings: bool) -> int:
    """Print q_int of two curves and the table of their crossings."""
    _, surf = _surface(surface)
    a, b = _curve(surf, curve_a), _curve(surf, curve_b)
    poly = q_int(surf, a, b, self_crossings=self_crossings)
    xs = crossings(surf, a, b)

    def text() -> str:
        lines = [render(poly)]
        for x in xs:
            lines.append(f"  {x.kind:<10} polygon {x.poly}  index {format_degree(x.index)}  reverse {format_degree(x.index_rev)}")
        return "\n".join(lines)

    c.emit(text, lambda: {"q_int": poly.to_json(), "text": render(poly), "crossings": [x.to_dict() for x in xs]})
    return EXIT_OK


@cli.command()
@click.argument("surface")
@click.argument("curve_a")
@click.argument("curve_b")
@click.pass_obj
def qhom(c: _Ctx, surface: str, curve_a: str, curve_b: str) -> int:
    """Print the q-dimension of Hom between two string objects."""
    _, surf = _surface(surface)
    ext = build_ext(surf)
    X = string_of_curve(surf, ext, _curve(surf, curve_a))
    Y = string_of_curve(surf, ext, _curve(surf, curve_b))
    poly = qdim_hom(X, Y)
    c.emit(lambda: render(poly), lambda: {"qdim_hom": poly.to_json(), "text": render(poly)})
    return EXIT_OK


@cli.command()
@click.argument("surface")
@click.argument("alpha")
@click.argument("curve")
@click.option("--inverse", is_flag=True, help="Apply the inverse braid twist.")
@click.option("--depth", type=click.IntRange(min=0), default=2, show_default=True, help="Search depth for alpha.")
@click.pass_obj
def twist(c: _Ctx, surface: str, alpha: str, curve: str, inverse: bool, depth: int) -> int:
    """Apply the braid twist along the closed arc ALPHA to CURVE."""
    _, surf = _surface(surface)
    a = _closed_arc(surf, alpha, depth, c.seed)
    img = braid_twist(surf, a, -1 if inverse else 1, _curve(surf, curve))
    c.emit(lambda: json.dumps(curve_to_dict(surf, img)), lambda: curve_to_dict(surf, img))
    return EXIT_OK


@cli.command("twist-compare")
@click.argument("surface")
@click.argument("alpha")
@click.argument("beta")
@click.option("--inverse", is_flag=True, help="Compare inverse twists.")
@click.option("--depth", type=click.IntRange(min=0), default=2, show_default=True, help="Search depth for alpha.")
@click.pass_obj
def twist_compare(c: _Ctx, surface: str, alpha: str, beta: str, inverse: bool, depth: int) -> int:
    """Compare the spherical twist of strings with the braid twist of curves."""
    _, surf = _surface(surface)
    ext = build_ext(surf)
    a = _closed_arc(surf, alpha, depth, c.seed)
    a_curve = dual_arc(surf, a) if isinstance(a, int) else a.curve
    b = _curve(surf, beta)
    M, X = string_of_curve(surf, ext, a_curve), string_of_curve(surf, ext, b)
    op = inverse_spherical_twist if inverse else spherical_twist
    f_alg = fingerprint(minimize(op(M, X)))
    f_geo = fingerprint(string_of_curve(surf, ext, braid_twist(surf, a, -1 if inverse else 1, b)))
    same = f_alg == f_geo

    def text() -> str:
        return "\n".join(
            [
                "spherical twist: " + ", ".join(render(p) for p in f_alg),
                "braid twist:     " + ", ".join(render(p) for p in f_geo),
                "verdict: " + ("equal" if same else "different"),
            ]
        )

    c.emit(
        text,
        lambda: {
            "spherical_twist": [render(p) for p in f_alg],
            "braid_twist": [render(p) for p in f_geo],
            "equal": same,
        },
    )
    return EXIT_OK if same else EXIT_VERIFY


CAMPAIGNS = ("main", "twist", "cones", "compose", "slide")


@cli.command()
@click.argument("surface")
@click.option("--depth", type=click.IntRange(min=0), default=2, show_default=True, help="Orbit depth.")
@click.option(
    "--campaign",
    "campaigns",
    type=click.Choice(CAMPAIGNS + ("all",)),
    multiple=True,
    default=("main",),
    show_default=True,
)
@click.option("--partners", type=click.IntRange(min=0), default=50, show_default=True, help="Extension partners.")
@click.pass_obj
def verify(c: _Ctx, surface: str, depth: int, campaigns: tuple[str, ...], partners: int) -> int:
    """Run verification campaigns on the closed arcs of a surface."""
    spec = load_surface(surface)
    orbit = OrbitSpec(depth=depth, seed=c.seed)
    chosen = CAMPAIGNS if "all" in campaigns else tuple(dict.fromkeys(campaigns))
    reports: list[VerificationReport] = []
    for name in chosen:
        if name == "main":
            reports.append(verify_main_theorem(spec, orbit, extension_partners=partners, jobs=c.jobs))
        elif name == "twist":
            reports.append(verify_twist_compat(spec, orbit))
        elif name == "cones":
            reports.append(verify_cones(spec, orbit))
        elif name == "compose":
            reports.append(verify_compositions(spec, orbit))
        else:
            reports.append(verify_slide(spec, orbit))
    c.emit(
        lambda: "\n".join(r.render() for r in reports),
        lambda: {"reports": [r.to_dict() for r in reports], "ok": all(r.ok for r in reports)},
    )
    return EXIT_OK if all(r.ok for r in reports) else EXIT_VERIFY


def main(argv: list[str] | None = None) -> int:
    """Entry point; returns the exit code."""
    try:
        rv = cli.main(args=argv, prog_name="dmsx", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except click.BadParameter as exc:
        exc.show()
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except ValidationError as exc:
        click.echo(f"invalid input: {exc}", err=True)
        return EXIT_INVALID
    except InternalCheckFailure as exc:
        click.echo(f"internal check failed: {exc}", err=True)
        return EXIT_VERIFY
    except (DmsxError, OSError, json.JSONDecodeError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INVALID
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
