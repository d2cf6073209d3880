"""Shared test data: sweep cells, named schemes, small utilities."""
from __future__ import annotations

from tessella import geometry as geo
from tessella.catalog import CHIRALLY_PERFECT, PERFECT, FamilyId, Mode, instantiate
from tessella.coloring import ColoringScheme, SymmetryContext, coset_union_group, tile_at
from tessella.patch import realize_patch

R13 = list(range(3, 14))
HEX6_NEQ_P = [3, 4, 5, 6, 9, 10, 15]

# subgroup index fixtures: (ambient orders, generators, index)
INDEX_FIXTURES = [
    ((6, 3, 2), ["PRQRP", "Q", "R"], 3),
    ((3, 8, 2), ["PRP", "Q", "R"], 2),
    ((6, 4, 2), ["PRP", "Q", "R"], 2),
    ((6, 6, 2), ["PRP", "Q", "R"], 2),
    ((6, 4, 2), ["P", "QRQ", "R"], 2),
    ((8, 3, 2), ["P", "QRQ", "R"], 2),
    ((6, 6, 2), ["PRPRPR", "PRQRQRP", "Q", "R"], 4),
    ((6, 4, 2), ["P", "Q", "RPR", "RQR"], 2),
    ((6, 6, 2), ["P", "Q", "RPR", "RQR"], 2),
    ((6, 3, 2), ["PRPRP", "PRQRP", "Q", "R"], 3),
    ((6, 3, 3), ["PRQP", "Q", "R"], 3),
    ((9, 3, 3), ["PRQP", "Q", "R"], 3),
    ((9, 3, 3), ["P", "QRPRPQ", "R"], 3),
    ((6, 4, 2), ["P", "R", "QRPRQ", "QRQRQ"], 3),
    ((6, 4, 2), ["PQRQRP", "Q", "R"], 4),
    ((6, 4, 2), ["P", "R", "QRQ"], 2),
]


def sweep_cells() -> list[tuple[FamilyId, tuple[int, ...], str]]:
    """Every (family, params, counting mode) of the closed-form sweeps."""
    cells = []
    for p in R13 + [18]:
        for q in R13 + [18]:
            cells.append((FamilyId.QUASI, (p, q), PERFECT))
    for p in R13:
        for q in R13:
            if p != q:
                cells.append((FamilyId.RHOMBI, (p, q), PERFECT))
                cells.append((FamilyId.SNUB5, (p, q), PERFECT))
    cells.append((FamilyId.SNUB5, (6, 12), PERFECT))
    cells.append((FamilyId.SNUB5, (12, 12), PERFECT))
    for p in R13:
        cells.append((FamilyId.SNUB5, (p, p), CHIRALLY_PERFECT))
    for p in range(3, 11):
        cells.append((FamilyId.HEX6_EQ, (p,), PERFECT))
    for p in HEX6_NEQ_P:
        for q in R13:
            if p != q:
                cells.append((FamilyId.HEX6_NEQ, (p, q), PERFECT))
    return list(dict.fromkeys(cells))


def sweep_instances():
    """Distinct instances of the sweeps, each once."""
    seen = {}
    for fam, ps, _ in sweep_cells():
        seen.setdefault((fam, ps), None)
    return [instantiate(f, *ps) for f, ps in seen]


def enumeration_mode(instance) -> str:
    return "chiral" if instance.family is FamilyId.SNUB5 and instance.p == instance.q else "full"


def canonical(colors) -> tuple[int, ...]:
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(c, len(seen)) for c in colors)


def build_scheme(instance, spec, mode=Mode.FULL) -> ColoringScheme:
    """Scheme from ``[(orbit, J generators, rotation fixing the tile or None)]``.

    The tile of each orbit is the one fixed by the given rotation; with
    ``None`` the seed tile is used.
    """
    ctx = SymmetryContext(instance, mode)
    mirrors = geo.mirror_setup(instance.ambient)
    patch = realize_patch(instance, 2, mirrors)
    groups = []
    for orbit, gens, rot in spec:
        w = tile_at(instance, mirrors, orbit, rot, patch) if rot else ""
        groups.append(coset_union_group(ctx, (orbit,), gens, [w]))
    groups.sort(key=lambda g: g.members)
    return ColoringScheme(ctx, tuple(groups))


G = ["P", "Q", "R"]


def named_schemes():
    """The four hand-built schemes as ``(label, instance, m, scheme)``."""
    r = instantiate("rhombi", 6, 3)  # (6.4.3.4): QR fixes the hexagon
    q = instantiate("quasi", 6, 4)
    return [
        ("(3.4.6.4) J2=<PRQRP,Q,R>", r, 5,
         build_scheme(r, [(0, G, None), (1, ["PRQRP", "Q", "R"], "PRQRPR"), (2, G, None)])),
        ("(3.4.6.4) J2=<P,Q,QRPQRQ>", r, 5,
         build_scheme(r, [(0, G, None), (1, ["P", "Q", "QRPQRQ"], "PQ"), (2, G, None)])),
        ("(6.4.6.4) J1,J2", q, 5,
         build_scheme(q, [(0, ["PRP", "Q", "R"], "QR"), (1, ["P", "R", "QRPRQ", "QRQRQ"], "PR")])),
        ("(6.4.6.4) K1,K2", q, 6,
         build_scheme(q, [(0, ["PQRQRP", "Q", "R"], "QR"), (1, ["P", "R", "QRQ"], "PR")])),
    ]
