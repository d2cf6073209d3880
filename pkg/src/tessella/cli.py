"""Command-line interface: ``tessella enumerate | verify | render | info``.

Exit codes: 0 success, 1 count mismatch, 2 invalid input, 3 resource exhaustion.
"""
from __future__ import annotations

import functools
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import product

import click

from . import __version__
from .catalog import (
    CHIRALLY_PERFECT,
    PERFECT,
    FamilyId,
    Mode,
    config_label,
    default_mode,
    expected_count,
    instantiate,
    parse_instance,
)
from .coloring import count_precise, enumerate_colorings, serialize, sweep_params
from .errors import InvalidParameters, NoConvergence, ResourceExhausted, TessellaError
from .words import WordSyntaxError, format_word, free_reduce, parse_word

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_RESOURCE = 0, 1, 2, 3


class _Fail(click.ClickException):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.exit_code = code


def _guard(fn):
    """Map library errors onto exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ResourceExhausted, NoConvergence, MemoryError) as exc:
            raise _Fail(f"resource exhausted: {exc}", EXIT_RESOURCE) from exc
        except (InvalidParameters, WordSyntaxError) as exc:
            raise _Fail(str(exc), EXIT_INVALID) from exc
        except TessellaError as exc:
            raise _Fail(str(exc), EXIT_INVALID) from exc

    return wrapper


def _instance(text: str):
    try:
        return parse_instance(text)
    except InvalidParameters as exc:
        raise _Fail(f"invalid instance {text!r}: {exc}", EXIT_INVALID) from exc


_RANGE = re.compile(r"^\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*$")


def parse_range(text: str) -> list[int]:
    """``3..13``, ``4``, or comma-joined pieces such as ``3..10,15``."""
    out: list[int] = []
    for piece in text.split(","):
        m = _RANGE.match(piece)
        if not m:
            raise InvalidParameters(f"bad range {text!r}")
        a = int(m.group(1))
        b = int(m.group(2)) if m.group(2) else a
        if b < a:
            raise InvalidParameters(f"empty range {piece.strip()!r}")
        out.extend(range(a, b + 1))
    return sorted(set(out))


def _emit(ctx: click.Context, doc: dict, text: str) -> None:
    if ctx.obj["json"]:
        click.echo(json.dumps(doc, indent=2, sort_keys=True))
    else:
        click.echo(text)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="tessella")
@click.option("--json", "as_json", is_flag=True, help="Emit a JSON document instead of text.")
@click.pass_context
def main(ctx: click.Context, as_json: bool) -> None:
    """Perfect precise colorings of semiregular tilings."""
    ctx.ensure_object(dict)
    ctx.obj["json"] = as_json


def _json_option(fn):
    # --json is accepted after the subcommand as well
    def set_json(ctx, _param, value):
        if value:
            ctx.find_root().obj["json"] = True
        return value

    return click.option("--json", "as_json", is_flag=True, expose_value=False, callback=set_json,
                        help="Emit a JSON document instead of text.")(fn)


# ---------------------------------------------------------------------------


@main.command("enumerate")
@click.argument("spec")
@click.option("--colors", "-m", type=int, default=None, help="Number of colors (default: valency).")
@click.option("--mode", type=click.Choice(["full", "chiral"]), default="full", show_default=True)
@click.option("--precise-only", is_flag=True, help="Keep only colorings with distinct colors at every vertex.")
@click.option("--no-shared-orbit-colors", is_flag=True, help="Tiles of different symmetry orbits never share a color.")
@_json_option
@click.pass_context
@_guard
def cmd_enumerate(ctx, spec, colors, mode, precise_only, no_shared_orbit_colors):
    """List the colorings of SPEC (for example quasi:6,4)."""
    inst = _instance(spec)
    m = inst.valency if colors is None else colors
    if m < 1:
        raise _Fail("--colors must be positive", EXIT_INVALID)
    schemes = enumerate_colorings(inst, mode, m, precise_only, no_shared_orbit_colors)
    texts = [serialize(s) for s in schemes]
    doc = {
        "instance": inst.spec,
        "config": inst.label,
        "mode": mode,
        "colors": m,
        "precise_only": precise_only,
        "no_shared_orbit_colors": no_shared_orbit_colors,
        "schemes": [{"index": i + 1, "indices": list(s.indices), "text": t} for i, (s, t) in enumerate(zip(schemes, texts))],
        "count": len(schemes),
    }
    lines = [f"[{i + 1}]\n{t}" for i, t in enumerate(texts)]
    lines.append(f"count: {len(schemes)}")
    _emit(ctx, doc, "\n".join(lines))


# ---------------------------------------------------------------------------


def _verify_cell(args):
    family, params, mode = args
    try:
        inst = instantiate(family, *params)
        got = count_precise(inst, mode)
    except ResourceExhausted as exc:
        return params, None, str(exc)
    return params, got, None


def _cells(fam: FamilyId, ps, qs, rs, mode: str) -> list[tuple[int, ...]]:
    if fam is FamilyId.THREE_VALENT:
        rs = rs if rs is not None else qs
        if qs is None or rs is None:
            raise InvalidParameters("3val needs --p, --q and --r ranges")
        return [c for c in product(ps, qs, rs)]
    if fam is not FamilyId.HEX6_EQ and qs is None:
        raise InvalidParameters(f"{fam.value} needs a --q range")
    return sweep_params(fam, ps, qs, mode)


@main.command("verify")
@click.option("--family", "family", required=True, type=click.Choice([f.value for f in FamilyId]))
@click.option("--p", "p_text", required=True, help="Range such as 3..13 or 3..10,15.")
@click.option("--q", "q_text", default=None, help="Range for the second parameter.")
@click.option("--r", "r_text", default=None, help="Third range (3val only).")
@click.option("--mode", type=click.Choice(["full", "perfect", "chiral"]), default="full", show_default=True,
              help="full counts perfect colorings, chiral counts chirally perfect ones.")
@click.option("--jobs", "-j", type=int, default=None, help="Worker processes (default: CPU count).")
@_json_option
@click.pass_context
@_guard
def cmd_verify(ctx, family, p_text, q_text, r_text, mode, jobs):
    """Compare enumerated counts with the closed-form counts over a parameter sweep."""
    fam = FamilyId(family)
    cmode = CHIRALLY_PERFECT if mode == "chiral" else PERFECT
    ps = parse_range(p_text)
    qs = parse_range(q_text) if q_text else None
    rs = parse_range(r_text) if r_text else None
    cells = _cells(fam, ps, qs, rs, cmode)
    # reject malformed cells before any enumeration
    valid = []
    for c in cells:
        try:
            instantiate(fam, *c)
        except InvalidParameters:
            if fam is FamilyId.THREE_VALENT:
                continue
            raise
        valid.append(c)
    if not valid:
        raise _Fail("no valid cells in the requested ranges", EXIT_INVALID)
    jobs = max(1, min(jobs or os.cpu_count() or 1, len(valid)))
    work = [(fam, c, cmode) for c in valid]
    if jobs == 1:
        results = [_verify_cell(w) for w in work]
    else:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_verify_cell, work))

    rows, exhausted = [], []
    for params, got, err in results:
        exp = expected_count(fam, params, cmode)
        if err is not None:
            exhausted.append(params)
        rows.append({
            "params": list(params),
            "config": config_label(instantiate(fam, *params).config),
            "enumerated": got,
            "expected": exp,
            "ok": got == exp,
        })
    ok = all(r["ok"] for r in rows)
    doc = {"family": fam.value, "mode": cmode, "rows": rows, "ok": ok}
    width = max(len(r["config"]) for r in rows)
    lines = [f"{'params':<12} {'config':<{width}} {'enum':>5} {'expect':>6}  status"]
    for r in rows:
        got = "-" if r["enumerated"] is None else str(r["enumerated"])
        status = "ok" if r["ok"] else "MISMATCH"
        lines.append(f"{','.join(map(str, r['params'])):<12} {r['config']:<{width}} {got:>5} {r['expected']:>6}  {status}")
    lines.append(f"{sum(r['ok'] for r in rows)}/{len(rows)} cells pass")
    _emit(ctx, doc, "\n".join(lines))
    if exhausted:
        ctx.exit(EXIT_RESOURCE)
    ctx.exit(EXIT_OK if ok else EXIT_MISMATCH)


# ---------------------------------------------------------------------------


@main.command("render")
@click.argument("spec")
@click.option("--coloring", "-k", type=int, default=None, help="1-based scheme number; omit for an uncolored patch.")
@click.option("--colors", "-m", type=int, default=None, help="Number of colors (default: valency).")
@click.option("--mode", type=click.Choice(["full", "chiral"]), default=None,
              help="Symmetry used for enumeration (default follows the family).")
@click.option("--radius", "-r", type=int, default=3, show_default=True)
@click.option("--overlay", multiple=True, help="Word whose mirror axis is drawn (repeatable).")
@click.option("--output", "-o", type=click.Path(dir_okay=False, writable=True), default=None,
              help="SVG file (default: standard output).")
@_json_option
@click.pass_context
@_guard
def cmd_render(ctx, spec, coloring, colors, mode, radius, overlay, output):
    """Render a precise coloring of SPEC to SVG."""
    from .patch import realize_patch
    from .render import RenderOptions, render

    inst = _instance(spec)
    if radius < 1:
        raise _Fail("--radius must be at least 1", EXIT_INVALID)
    words = [free_reduce(parse_word(w)) for w in overlay]
    scheme = None
    if coloring is not None:
        if mode is None:
            mode = "chiral" if default_mode(inst) == CHIRALLY_PERFECT else "full"
        m = inst.valency if colors is None else colors
        schemes = enumerate_colorings(inst, mode, m, precise_only=True)
        if not 1 <= coloring <= len(schemes):
            raise _Fail(f"--coloring {coloring} out of range: {len(schemes)} precise scheme(s)", EXIT_INVALID)
        scheme = schemes[coloring - 1]
    patch = realize_patch(inst, radius)
    svg = render(patch, scheme, RenderOptions(overlay_words=words))
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(svg)
    doc = {
        "instance": inst.spec,
        "config": inst.label,
        "coloring": coloring,
        "radius": radius,
        "tiles": len(patch.tiles),
        "colors": scheme.color_count if scheme else 0,
        "output": output,
    }
    if output or ctx.obj["json"]:
        if not output:
            doc["svg"] = svg
        _emit(ctx, doc, f"wrote {output}: {len(patch.tiles)} tiles, {doc['colors']} colors")
    else:
        sys.stdout.write(svg)


# ---------------------------------------------------------------------------


@main.command("info")
@click.argument("spec")
@_json_option
@click.pass_context
@_guard
def cmd_info(ctx, spec):
    """Geometry, symmetry and tile orbits of SPEC."""
    from .patch import tile_stabilizer
    from . import geometry as geo

    inst = _instance(spec)
    mirrors = geo.mirror_setup(inst.ambient)
    orbits = []
    for k, o in enumerate(inst.tile_orbits):
        orbits.append({
            "orbit": k,
            "name": o.name,
            "gon": o.gon,
            "stabilizer": [format_word(w) for w in o.stabilizer],
            "stabilizer_order": len(tile_stabilizer(inst, k, Mode.FULL, mirrors)),
            "chiral_stabilizer_order": len(tile_stabilizer(inst, k, Mode.CHIRAL, mirrors)),
        })
    corona = [{"orbit": k, "gon": inst.tile_orbits[k].gon, "word": format_word(w) or "e"} for k, w in inst.vertex_corona]
    doc = {
        "instance": inst.spec,
        "config": inst.label,
        "geometry": inst.geometry_class,
        "ambient": inst.ambient.name,
        "symmetry_index": inst.full_symmetry.index,
        "chiral_index": inst.chiral_symmetry.index,
        "mirror_symmetric": inst.mirror_symmetric,
        "tile_orbits": orbits,
        "corona": corona,
        "counting_mode": default_mode(inst),
    }
    lines = [
        f"instance:  {inst.spec}  {inst.label}",
        f"geometry:  {inst.geometry_class}",
        f"ambient:   {inst.ambient.name}",
        f"symmetry:  index {inst.full_symmetry.index} in {inst.ambient.name}"
        + ("" if inst.mirror_symmetric else " (orientation preserving)"),
        "tile orbits:",
    ]
    for o in orbits:
        gens = ", ".join(o["stabilizer"]) or "-"
        lines.append(f"  {o['orbit']}: {o['name']:<9} {o['gon']:>3}-gon  stabilizer <{gens}> order {o['stabilizer_order']}"
                     f" (chiral {o['chiral_stabilizer_order']})")
    lines.append("corona:    " + " ".join(f"{c['gon']}@{c['word']}" for c in corona))
    _emit(ctx, doc, "\n".join(lines))


if __name__ == "__main__":  # pragma: no cover
    main()
