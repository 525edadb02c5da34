# polyz/g2.py
"""
Closed forms for the Klein-bottle group G2 = <g1, g2 | g2 g1 = g1^-1 g2>.

Every automorphism has the shape g1 -> g1^s, g2 -> g1^a g2^u with s, u = ±1,
giving four families:

    alpha_a: s = 1,  u = -1        beta_a:  s = -1, u = 1
    gamma_a: s = 1,  u = 1         delta_a: s = -1, u = -1

Composition is (s, a, u)(s', a', u') = (s s', a + s a', u u'). Inner
automorphisms are beta_{2a} and gamma_{2a}; Out(G2) has the four classes
[alpha_0], [alpha_1], [beta_0] (identity) and [beta_1].
"""
import logging
import re
from enum import Enum
from typing import Dict, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict, field_validator

from polyz.engine import AutMatrix, Tower
from polyz.errors import ClassificationError, PolyZParseError
from polyz.presentation import NormalWord
from polyz.presets import G2

logger = logging.getLogger(__name__)


def mu(x: int) -> int:
    """Parity indicator: 0 for even x, 1 for odd x."""
    return x & 1


def g2_mul(x: NormalWord, y: NormalWord) -> NormalWord:
    a1, b1 = x
    a2, b2 = y
    return (a1 - a2 if b1 & 1 else a1 + a2, b1 + b2)


def g2_pow(x: NormalWord, m: int) -> NormalWord:
    a, b = x
    if b & 1:
        return (mu(m) * a, m * b)
    return (m * a, m * b)


def g2_inv(x: NormalWord) -> NormalWord:
    a, b = x
    return (a if b & 1 else -a, -b)


class Family(str, Enum):
    ALPHA = "alpha"
    BETA = "beta"
    GAMMA = "gamma"
    DELTA = "delta"


# (exponent of g1 in the image of g1, exponent of g2 in the image of g2)
_SIGNS: Dict[Family, Tuple[int, int]] = {
    Family.ALPHA: (1, -1),
    Family.BETA: (-1, 1),
    Family.GAMMA: (1, 1),
    Family.DELTA: (-1, -1),
}
_FAMILY_BY_SIGNS = {signs: family for family, signs in _SIGNS.items()}

# Family of f∘g
_COMPOSITION_TABLE: Dict[Tuple[Family, Family], Family] = {
    (Family.ALPHA, Family.ALPHA): Family.GAMMA,
    (Family.ALPHA, Family.BETA): Family.DELTA,
    (Family.ALPHA, Family.GAMMA): Family.ALPHA,
    (Family.ALPHA, Family.DELTA): Family.BETA,
    (Family.BETA, Family.ALPHA): Family.DELTA,
    (Family.BETA, Family.BETA): Family.GAMMA,
    (Family.BETA, Family.GAMMA): Family.BETA,
    (Family.BETA, Family.DELTA): Family.ALPHA,
    (Family.GAMMA, Family.ALPHA): Family.ALPHA,
    (Family.GAMMA, Family.BETA): Family.BETA,
    (Family.GAMMA, Family.GAMMA): Family.GAMMA,
    (Family.GAMMA, Family.DELTA): Family.DELTA,
    (Family.DELTA, Family.ALPHA): Family.BETA,
    (Family.DELTA, Family.BETA): Family.ALPHA,
    (Family.DELTA, Family.GAMMA): Family.DELTA,
    (Family.DELTA, Family.DELTA): Family.GAMMA,
}

_AUT2_TEXT = re.compile(r"^\s*(alpha|beta|gamma|delta)\s*\(\s*([+-]?\d+)\s*\)\s*$")


class Aut2(BaseModel):
    """Automorphism of G2 stored as (family, parameter)."""

    model_config = ConfigDict(frozen=True)

    family: Family
    a: int

    @property
    def g1_sign(self) -> int:
        return _SIGNS[self.family][0]

    @property
    def g2_sign(self) -> int:
        return _SIGNS[self.family][1]

    def matrix(self) -> AutMatrix:
        return AutMatrix(rows=((self.g1_sign, self.a), (0, self.g2_sign)))

    @classmethod
    def parse(cls, text: str) -> "Aut2":
        """Read ``alpha(3)`` or a JSON matrix such as ``[[1,3],[0,-1]]``."""
        if text.lstrip().startswith("["):
            found = aut2_from_matrix(AutMatrix.parse(text))
            if found is None:
                raise ClassificationError(f"{text.strip()} is not an automorphism of G2")
            return found
        match = _AUT2_TEXT.match(text)
        if not match:
            raise PolyZParseError(f"expected alpha(n), beta(n), gamma(n) or delta(n), got {text!r}")
        return cls(family=Family(match.group(1)), a=int(match.group(2)))

    def __str__(self) -> str:
        return f"{self.family.value}({self.a})"


IDENTITY = Aut2(family=Family.GAMMA, a=0)


def aut2_from_matrix(m: AutMatrix) -> Optional[Aut2]:
    """The Aut2 with matrix m, or None."""
    if m.dimension != 2:
        return None
    (s, a), (zero, u) = m.rows
    family = _FAMILY_BY_SIGNS.get((s, u))
    if zero != 0 or family is None:
        return None
    return Aut2(family=family, a=a)


def aut2_compose(f: Aut2, g: Aut2) -> Aut2:
    """f∘g."""
    return Aut2(family=_COMPOSITION_TABLE[(f.family, g.family)], a=f.a + f.g1_sign * g.a)


def aut2_inverse(f: Aut2) -> Aut2:
    return Aut2(family=f.family, a=-f.g1_sign * f.a)


def aut2_apply(f: Aut2, x: NormalWord) -> NormalWord:
    a, b = x
    return g2_mul((f.g1_sign * a, 0), g2_pow((f.a, f.g2_sign), b))


def aut2_is_inner(f: Aut2) -> bool:
    return f.family in (Family.BETA, Family.GAMMA) and f.a % 2 == 0


def inner_from_element_g2(h: NormalWord) -> Aut2:
    """Conjugation by h = g1^a g2^b."""
    a, b = h
    return Aut2(family=Family.BETA if b & 1 else Family.GAMMA, a=2 * a)


def conjugator_g2(f: Aut2) -> NormalWord:
    """An element h with inner_from_element_g2(h) == f."""
    if not aut2_is_inner(f):
        raise ClassificationError(f"{f} is not inner")
    return (f.a // 2, 1 if f.family is Family.BETA else 0)


class OutClass2(BaseModel):
    """Outer class of an automorphism of G2."""

    model_config = ConfigDict(frozen=True)

    representative: Aut2

    @field_validator("representative")
    @classmethod
    def _canonical(cls, rep):
        if rep.family not in (Family.ALPHA, Family.BETA) or rep.a not in (0, 1):
            raise ValueError(f"{rep} is not one of alpha(0), alpha(1), beta(0), beta(1)")
        return rep

    @property
    def is_identity(self) -> bool:
        return self.representative == Aut2(family=Family.BETA, a=0)

    def __str__(self) -> str:
        return f"[{self.representative}]"


def aut2_out_class(f: Aut2) -> OutClass2:
    # alpha/delta invert g2, beta/gamma fix it; the parity of a survives Inn
    family = Family.ALPHA if f.g2_sign == -1 else Family.BETA
    return OutClass2(representative=Aut2(family=family, a=mu(f.a)))


def out_class_witness_g2(f: Aut2) -> Tuple[OutClass2, NormalWord]:
    """Class of f and an element h with i_h ∘ f equal to the representative."""
    out_class = aut2_out_class(f)
    inner = aut2_compose(out_class.representative, aut2_inverse(f))
    return out_class, conjugator_g2(inner)


def out_compose_g2(c1: OutClass2, c2: OutClass2) -> OutClass2:
    return aut2_out_class(aut2_compose(c1.representative, c2.representative))


def inner_subgroup_window(bound: int) -> Set[Aut2]:
    """Closure of <alpha_1^2, beta_0> among automorphisms with |a| <= bound."""
    alpha_1 = Aut2(family=Family.ALPHA, a=1)
    generators = [aut2_compose(alpha_1, alpha_1), Aut2(family=Family.BETA, a=0)]
    generators += [aut2_inverse(g) for g in generators]

    reached = {IDENTITY}
    frontier = [IDENTITY]
    while frontier:
        current = frontier.pop()
        for g in generators:
            nxt = aut2_compose(g, current)
            if abs(nxt.a) <= bound and nxt not in reached:
                reached.add(nxt)
                frontier.append(nxt)
    return reached


# 3-step groups G2 ⋊ Z up to isomorphism, by the Out class of the twist
_VARIANT_BY_CLASS = {
    (Family.ALPHA, 0): "a0",
    (Family.ALPHA, 1): "a1",
    (Family.BETA, 0): "b0",
    (Family.BETA, 1): "b1",
}


def variant_for_out_class(out_class: OutClass2) -> str:
    rep = out_class.representative
    return _VARIANT_BY_CLASS[(rep.family, rep.a)]


def g2_semidirect(f: Aut2, name: Optional[str] = None) -> Tower:
    """G2 ⋊_f Z."""
    logger.debug("building G2 semidirect product twisted by %s", f)
    return G2.extend(f.matrix(), aut2_inverse(f).matrix().columns, name=name)
