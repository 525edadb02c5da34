# polyz/g3.py
"""
Closed forms and automorphism groups for the four groups G2 ⋊ Z.

    b1: g3 acts by beta_1   (g3 g1 = g1^-1 g3,  g3 g2 = g1 g2 g3)
    a0: g3 acts by alpha_0  (g3 g1 = g1 g3,     g3 g2 = g2^-1 g3)
    a1: g3 acts by alpha_1  (g3 g1 = g1 g3,     g3 g2 = g1 g2^-1 g3)
    b0: g3 acts by beta_0   (g3 g1 = g1^-1 g3,  g3 g2 = g2 g3)

Automorphism matrices (columns are generator images):

    b1, b0   [[e, t2, t3], [0, p, q], [0, r, s]]     block M = [[p, q], [r, s]]
    a0, a1   [[e1, a, u], [0, e2, 2c], [0, 0, e3]]

b1: alpha_{a,A} (e=1, t3=a+1), beta_{a,A} (e=-1, t3=a) with A in pattern A;
    gamma_{a,B} (e=1, t3=a), delta_{a,B} (e=-1, t3=a-1) with B in pattern B.
b0: alpha_{a,M} (e=1), beta_{a,M} (e=-1), t2 = t3 = a, M in either pattern.
a0: u = 0; the family fixes (e1, e2): alpha (1,1), beta (1,-1), gamma (-1,1),
    delta (-1,-1); parameters (a, b, c) with entry 2b and e3 = (-1)^c.
a1: as a0 with parameters (a, b, c, d), top-right entry b = (e1 - e3) / 2
    forced by g3 g2 g3^-1 = g1 g2^-1, and e3 = (-1)^d.

Out(b1) is GL-block data, Out(b0) adds the parity of a. Out(a0) and Out(a1)
are Z2^3: conjugation by g1^a g2^b g3^c sends g1 to g1^((-1)^b) while adding
2b to the (2,3) entry, which ties e1 to the parity of that entry.
"""
import json
import logging
import re
from enum import Enum
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator
from sympy import Matrix

from polyz.engine import AutMatrix, Tower
from polyz.errors import ClassificationError, DimensionMismatchError, PolyZParseError
from polyz.g2 import Aut2, Family, mu
from polyz.presentation import NormalWord
from polyz.presets import A0, A1, B0, B1

logger = logging.getLogger(__name__)


class Variant(str, Enum):
    B1 = "b1"
    A0 = "a0"
    A1 = "a1"
    B0 = "b0"

    @property
    def phi2(self) -> Aut2:
        return _PHI2[self]

    @property
    def tower(self) -> Tower:
        return _TOWERS[self]

    @property
    def block_type(self) -> bool:
        """True for b1/b0, whose automorphisms carry a 2x2 GL block."""
        return self in (Variant.B1, Variant.B0)


_PHI2 = {
    Variant.B1: Aut2(family=Family.BETA, a=1),
    Variant.A0: Aut2(family=Family.ALPHA, a=0),
    Variant.A1: Aut2(family=Family.ALPHA, a=1),
    Variant.B0: Aut2(family=Family.BETA, a=0),
}
_TOWERS = {Variant.B1: B1, Variant.A0: A0, Variant.A1: A1, Variant.B0: B0}


def _vector(x: NormalWord) -> NormalWord:
    if len(x) != 3:
        raise DimensionMismatchError(f"expected 3 exponents, got {len(x)}")
    return tuple(x)


# Kernels

def g3_mul(variant: Variant, x: NormalWord, y: NormalWord) -> NormalWord:
    a1, b1, c1 = _vector(x)
    a2, b2, c2 = _vector(y)
    # Push g3^c1 past g1^a2 g2^b2, then g2^b1 past g1^a2
    if variant is Variant.B1:
        if c1 & 1:
            a2 = mu(b2) - a2
    elif variant is Variant.A0:
        if c1 & 1:
            b2 = -b2
    elif variant is Variant.A1:
        a2 += c1 * mu(b2)
        if c1 & 1:
            b2 = -b2
    else:
        if c1 & 1:
            a2 = -a2
    return (a1 - a2 if b1 & 1 else a1 + a2, b1 + b2, c1 + c2)


def g3_pow(variant: Variant, x: NormalWord, m: int) -> NormalWord:
    a, b, c = _vector(x)
    b_odd, c_odd = b & 1, c & 1
    if variant is Variant.B1:
        if b_odd and c_odd:
            return (m * a - m // 2, m * b, m * c)
        if b_odd or c_odd:
            return (mu(m) * a, m * b, m * c)
        return (m * a, m * b, m * c)
    if variant is Variant.A0:
        return (mu(m) * a if b_odd else m * a, mu(m) * b if c_odd else m * b, m * c)
    if variant is Variant.A1:
        if b_odd:
            sign = 1 if m & 1 else -1
            return (mu(m) * a + (m // 2) * c * sign, mu(m) * b if c_odd else m * b, m * c)
        return (m * a, mu(m) * b if c_odd else m * b, m * c)
    if b_odd ^ c_odd:
        return (mu(m) * a, m * b, m * c)
    return (m * a, m * b, m * c)


def g3_inv(variant: Variant, x: NormalWord) -> NormalWord:
    return g3_pow(variant, x, -1)


def g3_conjugate(variant: Variant, h: NormalWord, x: NormalWord) -> NormalWord:
    """h x h^-1."""
    return g3_mul(variant, g3_mul(variant, h, x), g3_inv(variant, h))


# 2x2 blocks

Entries2x2 = Tuple[Tuple[int, int], Tuple[int, int]]


def pattern_kind(entries: Entries2x2) -> Optional[str]:
    """'A' for even diagonal / odd anti-diagonal, 'B' for the reverse."""
    (p, q), (r, s) = entries
    parities = (p & 1, q & 1, r & 1, s & 1)
    if parities == (0, 1, 1, 0):
        return "A"
    if parities == (1, 0, 0, 1):
        return "B"
    return None


class Pattern2x2(BaseModel):
    """Unimodular 2x2 integer block with parity pattern A or B."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["A", "B"]
    entries: Entries2x2

    @model_validator(mode="after")
    def _check(self):
        if pattern_kind(self.entries) != self.kind:
            raise ValueError(f"{self.to_list()} does not have parity pattern {self.kind}")
        if abs(self.det) != 1:
            raise ValueError(f"{self.to_list()} is not in GL(2,Z)")
        return self

    @classmethod
    def of(cls, entries: Entries2x2) -> "Pattern2x2":
        entries = tuple(tuple(int(v) for v in row) for row in entries)
        kind = pattern_kind(entries)
        if kind is None:
            raise ValueError(f"{[list(row) for row in entries]} matches neither parity pattern")
        return cls(kind=kind, entries=entries)

    @classmethod
    def identity(cls) -> "Pattern2x2":
        return cls(kind="B", entries=((1, 0), (0, 1)))

    @property
    def matrix(self) -> Matrix:
        return Matrix(self.entries)

    @property
    def det(self) -> int:
        return int(self.matrix.det())

    def inverse(self) -> "Pattern2x2":
        inverse = self.matrix.inv()
        return Pattern2x2.of(tuple(tuple(int(v) for v in inverse.row(r)) for r in range(2)))

    def __matmul__(self, other: "Pattern2x2") -> "Pattern2x2":
        product = self.matrix * other.matrix
        return Pattern2x2.of(tuple(tuple(int(v) for v in product.row(r)) for r in range(2)))

    def to_list(self) -> List[List[int]]:
        return [list(row) for row in self.entries]

    def __str__(self) -> str:
        return json.dumps(self.to_list())


# Automorphism families

# b1 families: (sign on g1, t3 - t2, block kind)
_B1_SHAPE: Dict[Family, Tuple[int, int, str]] = {
    Family.ALPHA: (1, 1, "A"),
    Family.BETA: (-1, 0, "A"),
    Family.GAMMA: (1, 0, "B"),
    Family.DELTA: (-1, -1, "B"),
}
# a0/a1 families: (e1, e2)
_DIAGONAL: Dict[Family, Tuple[int, int]] = {
    Family.ALPHA: (1, 1),
    Family.BETA: (1, -1),
    Family.GAMMA: (-1, 1),
    Family.DELTA: (-1, -1),
}
_FAMILY_BY_DIAGONAL = {signs: family for family, signs in _DIAGONAL.items()}


def _a1_top_right(family: Family, d: int) -> int:
    e1 = _DIAGONAL[family][0]
    e3 = -1 if d & 1 else 1
    return (e1 - e3) // 2


class Aut3(BaseModel):
    """Automorphism of a 3-step group, stored by family and parameters."""

    model_config = ConfigDict(frozen=True)

    variant: Variant
    family: Family
    a: int
    b: Optional[int] = None
    c: Optional[int] = None
    d: Optional[int] = None
    block: Optional[Pattern2x2] = None

    @model_validator(mode="before")
    @classmethod
    def _reduce_mod_two(cls, data):
        # c (a0) and d (a1) only matter through (-1)^c, (-1)^d
        if isinstance(data, dict):
            data = dict(data)
            variant = data.get("variant")
            key = {Variant.A0: "c", Variant.A1: "d", "a0": "c", "a1": "d"}.get(variant)
            if key and isinstance(data.get(key), int):
                data[key] = data[key] % 2
        return data

    @model_validator(mode="after")
    def _check_shape(self):
        variant = self.variant
        if variant.block_type:
            if self.block is None or any(v is not None for v in (self.b, self.c, self.d)):
                raise ValueError(f"{variant.value} automorphisms take a and a 2x2 block only")
            if variant is Variant.B1 and self.block.kind != _B1_SHAPE[self.family][2]:
                raise ValueError(f"{self.family.value} on b1 needs a pattern {_B1_SHAPE[self.family][2]} block")
            if variant is Variant.B0 and self.family not in (Family.ALPHA, Family.BETA):
                raise ValueError("b0 automorphisms are alpha or beta")
        elif variant is Variant.A0:
            if self.block is not None or self.b is None or self.c is None or self.d is not None:
                raise ValueError("a0 automorphisms take parameters a, b, c")
        else:
            if self.block is not None or None in (self.b, self.c, self.d):
                raise ValueError("a1 automorphisms take parameters a, b, c, d")
            if self.b != _a1_top_right(self.family, self.d):
                raise ValueError(
                    f"a1 {self.family.value} with d={self.d} needs b={_a1_top_right(self.family, self.d)}"
                )
        return self

    def rows(self) -> Tuple[Tuple[int, ...], ...]:
        a = self.a
        if self.variant is Variant.B1:
            e, offset, _ = _B1_SHAPE[self.family]
            (p, q), (r, s) = self.block.entries
            return ((e, a, a + offset), (0, p, q), (0, r, s))
        if self.variant is Variant.B0:
            e = 1 if self.family is Family.ALPHA else -1
            (p, q), (r, s) = self.block.entries
            return ((e, a, a), (0, p, q), (0, r, s))
        e1, e2 = _DIAGONAL[self.family]
        if self.variant is Variant.A0:
            return ((e1, a, 0), (0, e2, 2 * self.b), (0, 0, -1 if self.c else 1))
        return ((e1, a, self.b), (0, e2, 2 * self.c), (0, 0, -1 if self.d else 1))

    def matrix(self) -> AutMatrix:
        return AutMatrix(rows=self.rows())

    def __str__(self) -> str:
        return format_aut3(self)


def aut3_matrix(f: Aut3) -> AutMatrix:
    return f.matrix()


def identity_aut3(variant: Variant) -> Aut3:
    found = aut3_membership(variant, AutMatrix.identity(3))
    assert found is not None
    return found


def aut3_membership(variant: Variant, m: AutMatrix) -> Optional[Aut3]:
    """The unique Aut3 of the variant with matrix m, or None."""
    if m.dimension != 3:
        return None
    (e, t2, t3), (zero1, p, q), (zero2, r, s) = m.rows
    if zero1 or zero2 or e not in (1, -1):
        return None

    if variant.block_type:
        kind = pattern_kind(((p, q), (r, s)))
        if kind is None or abs(p * s - q * r) != 1:
            return None
        block = Pattern2x2(kind=kind, entries=((p, q), (r, s)))
        if variant is Variant.B0:
            if t2 != t3:
                return None
            family = Family.ALPHA if e == 1 else Family.BETA
            return Aut3(variant=variant, family=family, a=t2, block=block)
        for family, (sign, offset, block_kind) in _B1_SHAPE.items():
            if sign == e and block_kind == kind and t3 - t2 == offset:
                return Aut3(variant=variant, family=family, a=t2, block=block)
        return None

    # a0 / a1: lower triangular part must vanish, diagonal ±1, (2,3) entry even
    e2, h, e3 = p, q, s
    if r != 0 or e2 not in (1, -1) or e3 not in (1, -1) or h & 1:
        return None
    family = _FAMILY_BY_DIAGONAL[(e, e2)]
    if variant is Variant.A0:
        if t3 != 0:
            return None
        return Aut3(variant=variant, family=family, a=t2, b=h // 2, c=0 if e3 == 1 else 1)
    d = 0 if e3 == 1 else 1
    if t3 != _a1_top_right(family, d):
        return None
    return Aut3(variant=variant, family=family, a=t2, b=t3, c=h // 2, d=d)


def aut3_apply(f: Aut3, x: NormalWord) -> NormalWord:
    """f(x) by the closed-form kernels."""
    variant = f.variant
    result = (0, 0, 0)
    for image, e in zip(f.matrix().columns, _vector(x)):
        if e:
            result = g3_mul(variant, result, g3_pow(variant, image, e))
    return result


def aut3_compose(f: Aut3, g: Aut3) -> Aut3:
    """f∘g."""
    if f.variant is not g.variant:
        raise ClassificationError("automorphisms of different groups cannot be composed")
    columns = tuple(aut3_apply(f, column) for column in g.matrix().columns)
    found = aut3_membership(f.variant, AutMatrix.from_columns(columns))
    if found is None:
        raise ClassificationError(f"composition of {f} and {g} left the automorphism families")
    return found


def aut3_inverse(f: Aut3) -> Aut3:
    family, a = f.family, f.a
    if f.variant is Variant.B1:
        if family is Family.ALPHA:
            a = -a - 1
        elif family is Family.GAMMA:
            a = -a
        return f.model_copy(update={"a": a, "block": f.block.inverse()})
    if f.variant is Variant.B0:
        if family is Family.ALPHA:
            a = -a
        return f.model_copy(update={"a": a, "block": f.block.inverse()})
    # a0/a1: (e1, a, e2, c) -> (e1, -e1 a, e2, -e2 c) in the (2,3)-entry parameter
    e1, e2 = _DIAGONAL[family]
    if f.variant is Variant.A0:
        return f.model_copy(update={"a": -e1 * a, "b": -e2 * f.b})
    return f.model_copy(update={"a": -e1 * a, "c": -e2 * f.c})


def inner_from_element(variant: Variant, h: NormalWord) -> Aut3:
    """Conjugation x -> h x h^-1 as an Aut3."""
    generators = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    columns = tuple(g3_conjugate(variant, _vector(h), g) for g in generators)
    found = aut3_membership(variant, AutMatrix.from_columns(columns))
    if found is None:
        raise ClassificationError(f"conjugation by {h} escaped the {variant.value} families")
    return found


def _conjugator_or_none(f: Aut3) -> Optional[NormalWord]:
    variant, family, a = f.variant, f.family, f.a
    if variant is Variant.B1:
        if f.block != Pattern2x2.identity():
            return None
        if family is Family.GAMMA:
            return (a // 2, 0, 0) if a % 2 == 0 else ((a + 1) // 2, 1, 1)
        return (a // 2, 1, 0) if a % 2 == 0 else ((a - 1) // 2, 0, 1)
    if variant is Variant.B0:
        if f.block != Pattern2x2.identity() or a % 2:
            return None
        return (a // 2, 0 if family is Family.ALPHA else 1, 0)

    e1, e2 = _DIAGONAL[family]
    if variant is Variant.A0:
        if f.c != 0 or a % 2 or e1 != (-1) ** (f.b % 2):
            return None
        return (a // 2, f.b, 0 if e2 == 1 else 1)
    z = 0 if e2 == 1 else 1
    if f.d != 0 or e1 != (-1) ** (f.c % 2) or a % 2 != z:
        return None
    sign = -1 if f.c & 1 else 1
    return ((a - z * sign) // 2, f.c, z)


def aut3_is_inner(f: Aut3) -> bool:
    return _conjugator_or_none(f) is not None


def conjugator(f: Aut3) -> NormalWord:
    """An element h whose conjugation equals f."""
    h = _conjugator_or_none(f)
    if h is None:
        raise ClassificationError(f"{f} is not inner")
    if inner_from_element(f.variant, h) != f:
        raise ClassificationError(f"conjugator {h} does not realise {f}")
    return h


# Outer classes

class OutClass3(BaseModel):
    """Outer class of a 3-step automorphism, held by its canonical representative."""

    model_config = ConfigDict(frozen=True)

    variant: Variant
    representative: Aut3

    @model_validator(mode="after")
    def _canonical(self):
        rep = self.representative
        if rep.variant is not self.variant or _representative(rep) != rep:
            raise ValueError(f"{rep} is not a canonical outer class representative")
        return self

    @property
    def is_identity(self) -> bool:
        return aut3_is_inner(self.representative)

    def __str__(self) -> str:
        return f"[{format_aut3(self.representative)}]"


def _invariants(f: Aut3) -> tuple:
    """Complete invariant of the Inn-coset of f."""
    if f.variant is Variant.B1:
        return (f.block,)
    if f.variant is Variant.B0:
        return (mu(f.a), f.block)
    e1, e2 = _DIAGONAL[f.family]
    if f.variant is Variant.A0:
        return (mu(f.a), e1 * (-1) ** (f.b % 2), f.c)
    e3 = -1 if f.d else 1
    return ((-1) ** (f.a % 2) * e2, e1 * (-1) ** (f.c % 2), e3)


def _from_invariants(variant: Variant, invariants: tuple) -> Aut3:
    if variant is Variant.B1:
        (block,) = invariants
        family = Family.ALPHA if block.kind == "A" else Family.GAMMA
        return Aut3(variant=variant, family=family, a=0, block=block)
    if variant is Variant.B0:
        parity, block = invariants
        return Aut3(variant=variant, family=Family.ALPHA, a=parity, block=block)
    if variant is Variant.A0:
        parity, sign, c = invariants
        family = Family.ALPHA if sign == 1 else Family.GAMMA
        return Aut3(variant=variant, family=family, a=parity, b=0, c=c)
    twist, sign, e3 = invariants
    family = Family.ALPHA if sign == 1 else Family.GAMMA
    d = 0 if e3 == 1 else 1
    return Aut3(variant=variant, family=family, a=0 if twist == 1 else 1, b=_a1_top_right(family, d), c=0, d=d)


def _representative(f: Aut3) -> Aut3:
    return _from_invariants(f.variant, _invariants(f))


def out_class(f: Aut3) -> OutClass3:
    return OutClass3(variant=f.variant, representative=_representative(f))


def out_class_witness(f: Aut3) -> Tuple[OutClass3, NormalWord]:
    """Class of f and an element h with i_h ∘ f equal to the representative."""
    result = out_class(f)
    inner = aut3_compose(result.representative, aut3_inverse(f))
    return result, conjugator(inner)


def out_compose(c1: OutClass3, c2: OutClass3) -> OutClass3:
    """Product of outer classes, computed on the class invariants."""
    if c1.variant is not c2.variant:
        raise ClassificationError("outer classes of different groups cannot be composed")
    variant = c1.variant
    i1, i2 = _invariants(c1.representative), _invariants(c2.representative)
    if variant is Variant.B1:
        invariants = (i1[0] @ i2[0],)
    elif variant is Variant.B0:
        invariants = ((i1[0] + i2[0]) % 2, i1[1] @ i2[1])
    elif variant is Variant.A0:
        invariants = ((i1[0] + i2[0]) % 2, i1[1] * i2[1], (i1[2] + i2[2]) % 2)
    else:
        invariants = (i1[0] * i2[0], i1[1] * i2[1], i1[2] * i2[2])
    return OutClass3(variant=variant, representative=_from_invariants(variant, invariants))


def out_classes(variant: Variant) -> List[OutClass3]:
    """All outer classes of a0 or a1 (b1 and b0 have infinitely many)."""
    if variant.block_type:
        raise ClassificationError(f"Out({variant.value}) is infinite")
    classes = []
    for sign in (1, -1):
        for x in (0, 1):
            for z in (0, 1):
                if variant is Variant.A0:
                    invariants = (x, sign, z)
                else:
                    invariants = ((-1) ** x, sign, (-1) ** z)
                classes.append(OutClass3(variant=variant, representative=_from_invariants(variant, invariants)))
    return classes


# Text form:  b1:alpha(a=0; A=[[0,1],[1,0]])   a1:gamma(a=1; b=-1; c=0; d=0)

_AUT3_TEXT = re.compile(r"^\s*(b1|a0|a1|b0)\s*:\s*(alpha|beta|gamma|delta)\s*\((.*)\)\s*$", re.DOTALL)


def parse_aut3(text: str) -> Aut3:
    match = _AUT3_TEXT.match(text)
    if not match:
        raise PolyZParseError(f"expected variant:family(params), got {text!r}")
    variant, family, body = Variant(match.group(1)), Family(match.group(2)), match.group(3)

    params = {}
    for part in filter(None, (p.strip() for p in body.split(";"))):
        key, sep, value = part.partition("=")
        key = key.strip()
        if not sep or key not in ("a", "b", "c", "d", "A", "B", "M"):
            raise PolyZParseError(f"bad parameter {part!r}", match.start(3) + body.find(part))
        try:
            parsed = json.loads(value)
        except json.JSONDecodeError:
            raise PolyZParseError(f"bad value for {key}: {value.strip()!r}", match.start(3) + body.find(part))
        params["block" if key in ("A", "B", "M") else key] = parsed

    try:
        if "block" in params:
            params["block"] = Pattern2x2.of(params["block"])
        return Aut3(variant=variant, family=family, **params)
    except (ValidationError, ValueError, TypeError) as e:
        raise ClassificationError(f"{text.strip()} is not an automorphism: {e}")


def format_aut3(f: Aut3) -> str:
    if f.variant.block_type:
        label = "M" if f.variant is Variant.B0 else f.block.kind
        body = f"a={f.a}; {label}={f.block}"
    elif f.variant is Variant.A0:
        body = f"a={f.a}; b={f.b}; c={f.c}"
    else:
        body = f"a={f.a}; b={f.b}; c={f.c}; d={f.d}"
    return f"{f.variant.value}:{f.family.value}({body})"
