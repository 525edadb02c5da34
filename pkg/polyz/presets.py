# polyz/presets.py
from typing import Dict, Optional, Tuple

from sympy import Matrix

from polyz.engine import AutMatrix, Tower
from polyz.errors import NotAnAutomorphismError, UnknownGroupError

Z = Tower.free_cyclic("z")

# Klein-bottle group: g2 g1 g2^-1 = g1^-1
G2 = Z.extend(AutMatrix(rows=((-1,),)), [(-1,)], name="g2")
ZXZ = Z.extend(AutMatrix(rows=((1,),)), [(1,)], name="zxz")

# The four G2 ⋊ Z groups, one per outer class of the twist
B1 = G2.extend(AutMatrix(rows=((-1, 1), (0, 1))), [(-1, 0), (1, 1)], name="b1")
A0 = G2.extend(AutMatrix(rows=((1, 0), (0, -1))), [(1, 0), (0, -1)], name="a0")
A1 = G2.extend(AutMatrix(rows=((1, 1), (0, -1))), [(1, 0), (-1, -1)], name="a1")
B0 = G2.extend(AutMatrix(rows=((-1, 0), (0, 1))), [(-1, 0), (0, 1)], name="b0")

PRESETS: Dict[str, Tower] = {
    "z": Z,
    "g2": G2,
    "zxz": ZXZ,
    "b1": B1,
    "a0": A0,
    "a1": A1,
    "b0": B0,
}

# The same groups as presentation text
PRESENTATIONS: Dict[str, str] = {
    "z": "<g1>",
    "g2": "<g1,g2 | g2*g1 = g1^-1*g2>",
    "zxz": "<g1,g2 | g2*g1 = g1*g2>",
    "b1": "<g1,g2,g3 | g2*g1 = g1^-1*g2, g3*g1 = g1^-1*g3, g3*g2 = g1*g2*g3>",
    "a0": "<g1,g2,g3 | g2*g1 = g1^-1*g2, g3*g1 = g1*g3, g3*g2 = g2^-1*g3>",
    "a1": "<g1,g2,g3 | g2*g1 = g1^-1*g2, g3*g1 = g1*g3, g3*g2 = g1*g2^-1*g3>",
    "b0": "<g1,g2,g3 | g2*g1 = g1^-1*g2, g3*g1 = g1^-1*g3, g3*g2 = g2*g3>",
}


def get_preset(name: str) -> Tower:
    try:
        return PRESETS[name.strip().lower()]
    except KeyError:
        raise UnknownGroupError(f"unknown group {name!r}; choose one of {', '.join(PRESETS)}")


def gl2_inverse(rows: Tuple[Tuple[int, int], Tuple[int, int]]) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """Inverse of an integer 2x2 matrix with determinant ±1."""
    m = Matrix(rows)
    if m.shape != (2, 2) or abs(m.det()) != 1:
        raise NotAnAutomorphismError(f"{list(map(list, rows))} is not in GL(2,Z)")
    inverse = m.inv()
    return tuple(tuple(int(v) for v in inverse.row(r)) for r in range(2))


def torus_bundle(matrix: AutMatrix, name: Optional[str] = None) -> Tower:
    """(Z×Z) ⋊_M Z for M in GL(2,Z)."""
    if matrix.dimension != 2:
        raise NotAnAutomorphismError("a torus bundle needs a 2x2 matrix")
    inverse = AutMatrix(rows=gl2_inverse(matrix.rows))
    return ZXZ.extend(matrix, inverse.columns, name=name)
