import dataclasses
import os
import re
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from tessella.catalog import instantiate
from tessella.coloring import enumerate_colorings
from tessella.errors import NotAReflection, PaletteTooSmall
from tessella.patch import realize_patch
from tessella.render import RenderOptions, default_palette, render

GOLDEN = Path(__file__).parent / "golden"
SVG = "{http://www.w3.org/2000/svg}"

# (file, family and params, overlay words)
CASES = [
    ("8.6.6-overlay.svg", ("3val", 8, 6, 6), ["PRP", "Q", "R"]),
    ("6.4.6.4-scheme1.svg", ("quasi", 6, 4), []),
    ("3.9.3.9.3.9-scheme1.svg", ("hex6eq", 9), []),
]


def build(args, overlay):
    inst = instantiate(*args)
    patch = realize_patch(inst, 3)
    scheme = enumerate_colorings(inst, precise_only=True)[0]
    return patch, scheme, render(patch, scheme, RenderOptions(overlay_words=overlay))


def tile_paths(svg):
    root = ET.fromstring(svg.encode())
    return [p for p in root.iter(f"{SVG}path") if "tile" in p.get("class", "").split()]


@pytest.mark.parametrize("name,args,overlay", CASES, ids=[c[0] for c in CASES])
def test_golden(name, args, overlay):
    patch, scheme, svg = build(args, overlay)
    path = GOLDEN / name
    if os.environ.get("TESSELLA_UPDATE_GOLDENS"):
        path.write_text(svg)
    assert svg == path.read_text()
    assert build(args, overlay)[2] == svg
    tiles = tile_paths(svg)
    assert len(tiles) == len(patch.tiles)
    assert len({p.get("fill") for p in tiles}) == scheme.color_count
    assert len(re.findall(r"\.tile-c\d+ \{", svg)) == scheme.color_count


def test_overlay_draws_one_axis_per_word():
    svg = build(("3val", 8, 6, 6), ["PRP", "Q", "R"])[2]
    root = ET.fromstring(svg.encode())
    axes = [p for p in root.iter(f"{SVG}path") if p.get("class") == "axis"]
    assert [a.get("data-word") for a in axes] == ["PRP", "Q", "R"]


def test_uncolored_render_uses_one_fill():
    patch = realize_patch(instantiate("rhombi", 3, 4), 5)
    tiles = tile_paths(render(patch))
    assert len(tiles) == 26
    assert len({p.get("fill") for p in tiles}) == 1


def test_empty_patch_is_a_valid_document():
    patch = realize_patch(instantiate("quasi", 3, 6), 1)
    empty = dataclasses.replace(patch, tiles=[], vertices=[])
    svg = render(empty)
    assert tile_paths(svg) == []
    assert svg.startswith("<?xml")


def test_rotation_is_not_a_mirror():
    patch = realize_patch(instantiate("quasi", 6, 4), 2)
    with pytest.raises(NotAReflection):
        render(patch, options=RenderOptions(overlay_words=["PQ"]))


def test_palette_too_small():
    inst = instantiate("quasi", 6, 4)
    patch = realize_patch(inst, 2)
    scheme = enumerate_colorings(inst, precise_only=True)[0]
    with pytest.raises(PaletteTooSmall):
        render(patch, scheme, RenderOptions(palette=["#000000"]))


def test_scheme_from_other_instance_is_refused():
    patch = realize_patch(instantiate("quasi", 6, 4), 2)
    other = enumerate_colorings(instantiate("hex6eq", 9), precise_only=True)[0]
    with pytest.raises(ValueError):
        render(patch, other)


def test_default_palette_distinct():
    for m in range(1, 13):
        pal = default_palette(m)
        assert len(set(pal)) == m and all(re.fullmatch(r"#[0-9a-f]{6}", c) for c in pal)


@pytest.mark.parametrize("spec", [("snub5", 3, 5), ("quasi", 4, 4), ("hex6neq", 9, 5), ("3val", 4, 6, 8)])
def test_all_geometries_render_well_formed(spec):
    inst = instantiate(*spec)
    patch = realize_patch(inst, 3)
    schemes = enumerate_colorings(inst, "chiral", precise_only=True)
    svg = render(patch, schemes[0] if schemes else None, RenderOptions(label="a < b & c"))
    root = ET.fromstring(svg.encode())
    assert root.find(f"{SVG}title").text == "a < b & c"
    for p in tile_paths(svg):
        assert "nan" not in p.get("d") and "inf" not in p.get("d")
