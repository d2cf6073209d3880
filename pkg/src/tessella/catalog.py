"""The tiling families and their symmetry data.

Every family is realized by a Wythoff-type construction inside a triangle
group ``*abc``: a seed vertex ``x`` in (or on) the fundamental triangle, one
seed tile per tile orbit, and the vertex corona around ``x`` written as
``(orbit, word)`` pairs.  Words act on the left, so the tile ``w . t_j`` is the
image of seed tile ``t_j`` under ``w``.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from functools import cached_property

from .errors import InvalidParameters
from .groups import ParitySubgroup, Presentation, build_triangle_group, even_subgroup, intersect
from .words import Word, free_reduce


class FamilyId(enum.Enum):
    THREE_VALENT = "3val"
    QUASI = "quasi"
    RHOMBI = "rhombi"
    SNUB5 = "snub5"
    HEX6_EQ = "hex6eq"
    HEX6_NEQ = "hex6neq"


class Mode(enum.Enum):
    FULL = "full"
    CHIRAL = "chiral"


PERFECT = "perfect"
CHIRALLY_PERFECT = "chirally_perfect"


@dataclass(frozen=True)
class TileOrbitSpec:
    name: str
    gon: int
    stabilizer: tuple[Word, ...]
    vertex_words: tuple[Word, ...]  # seed tile vertices are w . x, in cyclic order
    rep_anchor: Word = ""


@dataclass(frozen=True)
class TilingInstance:
    family: FamilyId
    params: tuple[int, ...]
    ambient: Presentation
    full_symmetry: ParitySubgroup
    tile_orbits: tuple[TileOrbitSpec, ...]
    vertex_corona: tuple[tuple[int, Word], ...]
    vertex_stabilizer: tuple[Word, ...]
    config: tuple[int, ...]
    seed: str  # how the seed vertex is placed, see geometry.generator_point

    @property
    def p(self) -> int:
        return self.params[0]

    @property
    def q(self) -> int:
        return self.params[1] if len(self.params) > 1 else self.params[0]

    @property
    def valency(self) -> int:
        return len(self.config)

    @cached_property
    def chiral_symmetry(self) -> ParitySubgroup:
        return intersect(self.full_symmetry, even_subgroup(self.ambient))

    def symmetry(self, mode: Mode | str) -> ParitySubgroup:
        return self.full_symmetry if Mode(mode) is Mode.FULL else self.chiral_symmetry

    @property
    def geometry_class(self) -> str:
        return classify_geometry(self.config)

    @property
    def label(self) -> str:
        return config_label(self.config)

    @property
    def spec(self) -> str:
        return f"{self.family.value}:" + ",".join(map(str, self.params))

    @property
    def mirror_symmetric(self) -> bool:
        """Whether the full symmetry group contains orientation-reversing words."""
        return self.chiral_symmetry.index != self.full_symmetry.index

    def __str__(self) -> str:
        return f"{self.label} [{self.spec}]"


def config_label(config) -> str:
    return "(" + ".".join(map(str, config)) + ")"


def classify_geometry(config) -> str:
    """Angle-sum test: compare the interior angles at a vertex with a full turn."""
    config = tuple(config)
    if len(config) < 3 or any(g < 3 for g in config):
        raise InvalidParameters(f"not a polygon vertex configuration: {config_label(config)}")
    # sum (g-2)/g against 2, in exact integer arithmetic
    den = math.prod(config)
    num = sum((g - 2) * (den // g) for g in config)
    if num < 2 * den:
        return "spherical"
    if num == 2 * den:
        return "euclidean"
    return "hyperbolic"


def _alternating(a: str, b: str, n: int) -> tuple[Word, ...]:
    """Prefixes ``"", a, ab, aba, ...`` of length < n."""
    s = (a + b) * n
    return tuple(s[:k] for k in range(n))


def _powers(w: Word, n: int) -> tuple[Word, ...]:
    return tuple(free_reduce(w * k) for k in range(n))


def _whole(pres: Presentation) -> ParitySubgroup:
    return ParitySubgroup(pres, ())


# Vertex coronas in cyclic order; derived from the geometric realization and
# checked against it by geometry.validate_realization.
_CORONA: dict[str, tuple[tuple[int, Word], ...]] = {
    "quasi": ((0, ""), (1, ""), (0, "PQ"), (1, "PQ")),
    "rhombi": ((0, ""), (1, ""), (2, ""), (1, "R")),
    "truncated": ((0, ""), (1, ""), (1, "P")),
    "omnitruncated": ((0, ""), (1, ""), (2, "")),
    "snub5": ((2, "PQ"), (2, ""), (0, ""), (2, "RQ"), (1, "")),
    "hex6eq": ((0, ""), (1, "Q"), (0, "QP"), (1, "PQ"), (0, "P"), (1, "")),
    "hex6neq": ((2, "RP"), (0, ""), (2, "QRP"), (1, "Q"), (2, ""), (1, "")),
}


def _check_int(*vals):
    for v in vals:
        if not isinstance(v, int) or isinstance(v, bool):
            raise InvalidParameters(f"parameters must be integers, got {v!r}")


def instantiate(family: FamilyId | str, *params: int) -> TilingInstance:
    """Build the instance of ``family`` with the given polygon parameters."""
    fam = FamilyId(family) if not isinstance(family, FamilyId) else family
    _check_int(*params)
    builder = _BUILDERS[fam]
    return builder(*params)


def _need(params, n, fam):
    if len(params) != n:
        raise InvalidParameters(f"{fam} takes {n} parameter(s), got {len(params)}")


def _quasi(*params):
    _need(params, 2, "quasi")
    p, q = params
    if p < 3 or q < 3:
        raise InvalidParameters("quasi needs p, q >= 3")
    g = build_triangle_group(p, q, 2)
    orbits = (
        TileOrbitSpec("p-gon", p, ("Q", "R"), _powers("QR", p)),
        TileOrbitSpec("q-gon", q, ("R", "P"), _powers("RP", q)),
    )
    return TilingInstance(FamilyId.QUASI, (p, q), g, _whole(g), orbits, _CORONA["quasi"], ("P", "Q"), (p, q, p, q), "corner:PQ")


def _rhombi(*params):
    _need(params, 2, "rhombi")
    p, q = params
    if p < 3 or q < 3:
        raise InvalidParameters("rhombi needs p, q >= 3")
    if p == q:
        raise InvalidParameters("rhombi needs p != q")
    g = build_triangle_group(p, q, 2)
    orbits = (
        TileOrbitSpec("p-gon", p, ("Q", "R"), _powers("QR", p)),
        TileOrbitSpec("square", 4, ("P", "Q"), ("", "P", "PQ", "Q")),
        TileOrbitSpec("q-gon", q, ("R", "P"), _powers("RP", q)),
    )
    return TilingInstance(FamilyId.RHOMBI, (p, q), g, _whole(g), orbits, _CORONA["rhombi"], ("R",), (p, 4, q, 4), "mirror:R:P:Q")


def _snub5(*params):
    _need(params, 2, "snub5")
    p, q = params
    if p < 3 or q < 3:
        raise InvalidParameters("snub5 needs p, q >= 3")
    g = build_triangle_group(p, q, 2)
    orbits = (
        TileOrbitSpec("p-gon", p, ("QR",), _powers("QR", p)),
        TileOrbitSpec("q-gon", q, ("RP",), _powers("RP", q)),
        TileOrbitSpec("triangle", 3, (), ("", "QR", "QP")),
    )
    return TilingInstance(FamilyId.SNUB5, (p, q), g, even_subgroup(g), orbits, _CORONA["snub5"], (), (3, 3, p, 3, q), "snub")


def _hex6eq(*params):
    _need(params, 1, "hex6eq")
    (p,) = params
    if p < 3:
        raise InvalidParameters("hex6eq needs p >= 3")
    g = build_triangle_group(p, 3, 3)
    orbits = (
        TileOrbitSpec("p-gon", p, ("Q", "R"), _powers("QR", p)),
        TileOrbitSpec("triangle", 3, ("R", "P"), _powers("RP", 3)),
    )
    return TilingInstance(FamilyId.HEX6_EQ, (p,), g, _whole(g), orbits, _CORONA["hex6eq"], ("P", "Q"), (3, p) * 3, "corner:PQ")


def _hex6neq(*params):
    _need(params, 2, "hex6neq")
    p, q = params
    if p < 3 or q < 3:
        raise InvalidParameters("hex6neq needs p, q >= 3")
    if p == q:
        raise InvalidParameters("hex6neq needs p != q")
    g = build_triangle_group(2 * p, q, 2)
    full = ParitySubgroup(g, ((1, 0, 1),))
    orbits = (
        TileOrbitSpec("p-gon", p, ("Q", "RQR"), _powers("QRQR", p)),
        TileOrbitSpec("q-gon", q, ("PR",), _powers("PR", q)),
        TileOrbitSpec("triangle", 3, ("Q",), ("", "PR", "QPR")),
    )
    return TilingInstance(FamilyId.HEX6_NEQ, (p, q), g, full, orbits, _CORONA["hex6neq"], ("Q",), (3, p, 3, q, 3, q), "hex6neq")


def _three_valent(*params):
    _need(params, 3, "3val")
    vals = sorted(params)
    if any(v < 3 for v in vals):
        raise InvalidParameters("3val needs polygons with >= 3 sides")
    a, b, c = params
    if a == b == c or len(set(vals)) == 2:
        # (q.2p'.2p'): the repeated value is 2p'
        if a == b == c:
            big, q = a, a
        else:
            big = max(set(vals), key=vals.count)
            q = next(v for v in vals if v != big)
        if big % 2:
            raise InvalidParameters(f"{config_label(params)} is not a (q.2p.2p) tiling: repeated polygon must be even")
        pp = big // 2
        g = build_triangle_group(pp, q, 2)
        orbits = (
            TileOrbitSpec("q-gon", q, ("R", "P"), _powers("RP", q)),
            TileOrbitSpec(f"{big}-gon", big, ("Q", "R"), _alternating("R", "Q", big)),
        )
        return TilingInstance(FamilyId.THREE_VALENT, (q, big, big), g, _whole(g), orbits, _CORONA["truncated"], ("P",), (q, big, big), "mirror:P:Q:R")
    if any(v % 2 for v in params):
        raise InvalidParameters(f"{config_label(params)}: three distinct polygons must all be even")
    g = build_triangle_group(a // 2, b // 2, c // 2)
    orbits = (
        TileOrbitSpec(f"{a}-gon", a, ("Q", "R"), _alternating("Q", "R", a)),
        TileOrbitSpec(f"{b}-gon", b, ("R", "P"), _alternating("R", "P", b)),
        TileOrbitSpec(f"{c}-gon", c, ("P", "Q"), _alternating("P", "Q", c)),
    )
    return TilingInstance(FamilyId.THREE_VALENT, (a, b, c), g, _whole(g), orbits, _CORONA["omnitruncated"], (), (a, b, c), "incenter")


_BUILDERS = {
    FamilyId.QUASI: _quasi,
    FamilyId.RHOMBI: _rhombi,
    FamilyId.SNUB5: _snub5,
    FamilyId.HEX6_EQ: _hex6eq,
    FamilyId.HEX6_NEQ: _hex6neq,
    FamilyId.THREE_VALENT: _three_valent,
}


def vertex_corona(instance: TilingInstance) -> tuple[tuple[int, Word], ...]:
    return instance.vertex_corona


# ---------------------------------------------------------------------------
# instance specs such as "quasi:6,4"

_SPEC = re.compile(r"^\s*([a-z0-9]+)\s*:\s*([0-9,\s]+)$")


def parse_instance(text: str) -> TilingInstance:
    m = _SPEC.match(text.lower())
    if not m:
        raise InvalidParameters(f"cannot parse instance spec {text!r}")
    name, nums = m.groups()
    try:
        fam = FamilyId(name)
    except ValueError:
        raise InvalidParameters(f"unknown family {name!r}") from None
    params = tuple(int(x) for x in nums.split(",") if x.strip())
    return instantiate(fam, *params)


# ---------------------------------------------------------------------------
# closed-form counts of perfect (or chirally perfect) precise colorings


def _m(n: int, d: int) -> bool:
    return n % d == 0


def _even(n: int) -> bool:
    return n % 2 == 0


def _odd_mult3(n: int) -> bool:
    return _m(n, 3) and not _even(n)


def _either(p: int, q: int, f, g) -> bool:
    """One of p, q satisfies f and the other satisfies g."""
    return (f(p) and g(q)) or (f(q) and g(p))


def _quasi_counts(p: int, q: int) -> dict[int, bool]:
    return {
        1: (_even(p) and _even(q) and (not _m(p, 3) or not _m(q, 3)))
        or (_m(p, 3) and _m(q, 3) and (not _even(p) or not _even(q))),
        2: _m(p, 6) and _m(q, 6),
    }


def _rhombi_counts(p: int, q: int) -> dict[int, bool]:
    return {
        1: (_even(p) and _even(q) and not _m(p, 3) and not _m(q, 3))
        or _either(p, q, _even, _odd_mult3),
        2: _even(p) and _even(q) and (_m(p, 3) != _m(q, 3)),
        3: _m(p, 6) and _m(q, 6),
    }


def _snub_counts(p: int, q: int) -> dict[int, bool]:
    m3n4 = lambda n: _m(n, 3) and not _m(n, 4)
    m4n3 = lambda n: _m(n, 4) and not _m(n, 3)
    evn4 = lambda n: _even(n) and not _m(n, 4)
    m12 = lambda n: _m(n, 12)
    even_n3n4 = lambda n: _even(n) and not _m(n, 3) and not _m(n, 4)
    m6n4 = lambda n: _m(n, 6) and not _m(n, 4)
    m6 = lambda n: _m(n, 6)
    return {
        1: _either(p, q, m3n4, evn4) or _either(p, q, m4n3, evn4) or _either(p, q, m4n3, _odd_mult3),
        2: _either(p, q, m12, even_n3n4)
        or (_odd_mult3(p) and _odd_mult3(q))
        or (m4n3(p) and m4n3(q))
        or _either(p, q, m6n4, m4n3),
        3: _either(p, q, m6, _odd_mult3) or _either(p, q, m12, m4n3),
        4: m6n4(p) and m6n4(q),
        5: _either(p, q, m12, m6n4),
        6: m12(p) and m12(q),
    }


def _snub_chiral_counts(p: int) -> dict[int, bool]:
    return {
        1: _odd_mult3(p) or (_m(p, 4) and not _m(p, 3)),
        2: _m(p, 6) and not _m(p, 4),
        3: _m(p, 12),
    }


def _hex6eq_counts(p: int) -> dict[int, bool]:
    return {1: _m(p, 3)}


def _hex6neq_counts(p: int, q: int) -> dict[int, bool]:
    m3n5 = _m(p, 3) and not _m(p, 5)
    m5n3 = _m(p, 5) and not _m(p, 3)
    m15 = _m(p, 15)
    return {
        1: (m3n5 and _even(q))
        or (m5n3 and _even(q) and not _m(q, 4))
        or (m3n5 and _odd_mult3(q))
        or (m5n3 and _odd_mult3(q)),
        2: (m15 and _even(q) and not _m(q, 4))
        or (m15 and _odd_mult3(q))
        or (m3n5 and _m(q, 6))
        or (m5n3 and _m(q, 6) and not _m(q, 4)),
        3: m5n3 and _m(q, 4) and not _m(q, 3),
        4: (m15 and _m(q, 4) and not _m(q, 3))
        or (m15 and _m(q, 6) and not _m(q, 4))
        or (m5n3 and _m(q, 12)),
        6: m15 and _m(q, 12),
    }


def _three_valent_counts(*config: int) -> dict[int, bool]:
    return {1: all(_even(g) for g in config)}


def count_clauses(family: FamilyId | str, params: tuple[int, ...], mode: str = PERFECT) -> dict[int, bool]:
    """Every clause of the closed-form count, as ``{count: fires}``."""
    fam = FamilyId(family) if not isinstance(family, FamilyId) else family
    if fam is FamilyId.QUASI:
        return _quasi_counts(*params)
    if fam is FamilyId.RHOMBI:
        return _rhombi_counts(*params)
    if fam is FamilyId.SNUB5:
        p, q = params
        if p == q:
            return _snub_chiral_counts(p) if mode == CHIRALLY_PERFECT else {}
        return _snub_counts(p, q) if mode == PERFECT else {}
    if fam is FamilyId.HEX6_EQ:
        return _hex6eq_counts(*params)
    if fam is FamilyId.HEX6_NEQ:
        return _hex6neq_counts(*params)
    return _three_valent_counts(*params)


def expected_count(family: FamilyId | str, params: tuple[int, ...], mode: str = PERFECT) -> int:
    """Number of (chirally) perfect precise colorings with as many colors as the valency.

    Returns 0 when no clause applies.  Some clause lists overlap as stated
    (e.g. (3.3.3.3.6) satisfies both the "one" and the "three" clause of the
    snub count); the larger count is the more specific clause and wins.
    """
    fired = [n for n, ok in count_clauses(family, tuple(params), mode).items() if ok]
    return max(fired) if fired else 0


def overlapping_clauses(family: FamilyId | str, params: tuple[int, ...], mode: str = PERFECT) -> list[int]:
    """Counts of all clauses that fire, when more than one does."""
    fired = [n for n, ok in count_clauses(family, tuple(params), mode).items() if ok]
    return fired if len(fired) > 1 else []


def default_mode(instance: TilingInstance) -> str:
    """Counting mode the closed forms use for this instance."""
    if instance.family is FamilyId.SNUB5 and instance.p == instance.q:
        return CHIRALLY_PERFECT
    return PERFECT
