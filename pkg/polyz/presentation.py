# polyz/presentation.py
"""
Polycyclic presentations and words.

A presentation on generators g1..gn carries, for i < j,

    u_{i,j} = g_j g_i g_j^-1        (written  g_j*g_i = u*g_j)
    v_{i,j} = g_j^-1 g_i g_j        (written  g_j^-1*g_i = v*g_j^-1)

and optional power relations g_i^o = w_i. Words are written
``g3*g2^-2*g1^5``; ``1`` (or the empty string) is the identity.
"""
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from polyz.errors import PolyZParseError

# Exponent vector (e_1, ..., e_n) of g1^e1 ... gn^en
NormalWord = Tuple[int, ...]


class RawWord(BaseModel):
    """Uncollected word as an ordered sequence of (generator, exponent) factors."""

    model_config = ConfigDict(frozen=True)

    factors: Tuple[Tuple[int, int], ...] = ()

    @field_validator("factors")
    @classmethod
    def _normalize(cls, factors):
        # Drop zero powers and merge neighbours on the same generator
        merged: List[Tuple[int, int]] = []
        for gen, exp in factors:
            if gen < 1:
                raise ValueError(f"generator index must be positive, got {gen}")
            if exp == 0:
                continue
            if merged and merged[-1][0] == gen:
                total = merged[-1][1] + exp
                merged.pop()
                if total != 0:
                    merged.append((gen, total))
            else:
                merged.append((gen, exp))
        return tuple(merged)

    @property
    def max_generator(self) -> int:
        return max((gen for gen, _ in self.factors), default=0)

    def is_identity(self) -> bool:
        return not self.factors

    def __str__(self) -> str:
        return format_raw_word(self)


class Conjugation(BaseModel):
    """One conjugation relation: sign +1 stores u_{i,j}, sign -1 stores v_{i,j}."""

    model_config = ConfigDict(frozen=True)

    i: int
    j: int
    sign: Literal[1, -1]
    word: RawWord


class PowerRelation(BaseModel):
    model_config = ConfigDict(frozen=True)

    i: int
    order: int
    word: RawWord


class PolycyclicPresentation(BaseModel):
    """Presentation in polycyclic form on generators g1..gn."""

    model_config = ConfigDict(frozen=True)

    n: int
    conjugations: Tuple[Conjugation, ...] = ()
    powers: Tuple[PowerRelation, ...] = ()

    @model_validator(mode="after")
    def _check_relations(self):
        if self.n < 1:
            raise ValueError("a presentation needs at least one generator")
        seen = set()
        for rel in self.conjugations:
            if not 1 <= rel.i < rel.j <= self.n:
                raise ValueError(f"conjugation relation ({rel.i},{rel.j}) out of range for n={self.n}")
            if rel.word.max_generator >= rel.j:
                raise ValueError(
                    f"relation word for ({rel.i},{rel.j}) may only use g1..g{rel.j - 1}"
                )
            key = (rel.i, rel.j, rel.sign)
            if key in seen:
                raise ValueError(f"duplicate conjugation relation for ({rel.i},{rel.j})")
            seen.add(key)
        orders = set()
        for rel in self.powers:
            if not 1 <= rel.i <= self.n:
                raise ValueError(f"power relation for g{rel.i} out of range for n={self.n}")
            if rel.order < 2:
                raise ValueError(f"relative order of g{rel.i} must be at least 2")
            if rel.word.max_generator >= rel.i:
                raise ValueError(f"power word of g{rel.i} may only use g1..g{rel.i - 1}")
            if rel.i in orders:
                raise ValueError(f"duplicate power relation for g{rel.i}")
            orders.add(rel.i)
        return self

    def conj_pos(self, i: int, j: int) -> RawWord:
        """u_{i,j}; an omitted relation means g_i and g_j commute."""
        for rel in self.conjugations:
            if (rel.i, rel.j, rel.sign) == (i, j, 1):
                return rel.word
        return RawWord(factors=((i, 1),))

    def conj_neg(self, i: int, j: int) -> Optional[RawWord]:
        """v_{i,j}, or None when it must be derived from the u's."""
        for rel in self.conjugations:
            if (rel.i, rel.j, rel.sign) == (i, j, -1):
                return rel.word
        return None

    def relative_order(self, i: int) -> Optional[int]:
        for rel in self.powers:
            if rel.i == i:
                return rel.order
        return None

    def power_word(self, i: int) -> Optional[RawWord]:
        for rel in self.powers:
            if rel.i == i:
                return rel.word
        return None

    @property
    def is_poly_z(self) -> bool:
        return not self.powers

    def __str__(self) -> str:
        return format_presentation(self)


# Scanner shared by the word and presentation grammars
class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def at_end(self) -> bool:
        return self.peek() == ""

    def expect(self, char: str) -> None:
        if self.peek() != char:
            found = self.peek() or "end of input"
            raise PolyZParseError(f"expected {char!r}, found {found!r}", self.pos)
        self.pos += 1

    def integer(self, signed: bool) -> int:
        self.skip_ws()
        start = self.pos
        if signed and self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits_start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in "0123456789":
            self.pos += 1
        if self.pos == digits_start:
            raise PolyZParseError("expected an integer", start)
        try:
            return int(self.text[start : self.pos])
        except ValueError:
            raise PolyZParseError("integer literal too long", start)

    def factor(self) -> Tuple[int, int]:
        start = self.pos
        self.expect("g")
        index = self.integer(signed=False)
        if index < 1:
            raise PolyZParseError("generator indices start at 1", start)
        exponent = 1
        if self.peek() == "^":
            self.pos += 1
            exponent = self.integer(signed=True)
        return index, exponent

    def word(self, stop: str) -> Tuple[List[Tuple[int, int]], int]:
        """Factors of a word ending before any character in ``stop``."""
        self.skip_ws()
        start = self.pos
        if self.peek() == "" or self.peek() in stop:
            return [], start
        if self.peek() == "1":
            self.pos += 1
            return [], start
        factors = [self.factor()]
        while self.peek() == "*":
            self.pos += 1
            factors.append(self.factor())
        return factors, start


def _check_indices(factors, n: int, position: int) -> None:
    for gen, _ in factors:
        if gen > n:
            raise PolyZParseError(f"generator g{gen} out of range (n={n})", position)


def parse_word(text: str, n: int) -> RawWord:
    """Parse ``g3*g2^-2*g1^5`` style text into a RawWord over g1..gn."""
    if n < 1:
        raise ValueError("n must be at least 1")
    scanner = _Scanner(text)
    factors, start = scanner.word(stop="")
    if not scanner.at_end():
        raise PolyZParseError(f"unexpected {scanner.peek()!r}", scanner.pos)
    _check_indices(factors, n, start)
    return RawWord(factors=tuple(factors))


def _parse_generators(scanner: _Scanner) -> int:
    count = 0
    while True:
        scanner.skip_ws()
        position = scanner.pos
        index, exponent = scanner.factor()
        if exponent != 1 or index != count + 1:
            raise PolyZParseError(f"generators must be listed as g1..gn, expected g{count + 1}", position)
        count += 1
        if scanner.peek() != ",":
            return count
        scanner.pos += 1


def _classify_relation(lhs, rhs, n: int, position: int):
    """Map one ``lhs = rhs`` pair onto a conjugation or power relation."""
    if len(lhs) == 1:
        i, order = lhs[0]
        if order < 2:
            raise PolyZParseError("power relation needs an exponent of at least 2", position)
        return PowerRelation(i=i, order=order, word=_restricted(rhs, i, position))

    if len(lhs) == 2:
        (j, sign), (i, e) = lhs
        if e != 1 or sign not in (1, -1) or not i < j:
            raise PolyZParseError("relation is not of the form g_j^±1*g_i = W*g_j^±1", position)
        if not rhs or rhs[-1] != (j, sign):
            raise PolyZParseError(f"right side must end with g{j}^{sign}", position)
        return Conjugation(i=i, j=j, sign=sign, word=_restricted(rhs[:-1], j, position))

    if len(lhs) == 3:
        (j, sign), (i, e), (j2, back) = lhs
        if e != 1 or sign not in (1, -1) or j2 != j or back != -sign or not i < j:
            raise PolyZParseError("relation is not of the form g_j^±1*g_i*g_j^∓1 = W", position)
        return Conjugation(i=i, j=j, sign=sign, word=_restricted(rhs, j, position))

    raise PolyZParseError("relation is not in polycyclic form", position)


def _restricted(factors, bound: int, position: int) -> RawWord:
    word = RawWord(factors=tuple(factors))
    if word.max_generator >= bound:
        raise PolyZParseError(f"relation word may only use g1..g{bound - 1}", position)
    return word


def parse_presentation(text: str) -> PolycyclicPresentation:
    """Parse ``<g1,g2 | g2*g1 = g1^-1*g2>`` into a PolycyclicPresentation."""
    scanner = _Scanner(text)
    scanner.expect("<")
    n = _parse_generators(scanner)

    conjugations = []
    powers = []
    slots = set()
    if scanner.peek() == "|":
        scanner.pos += 1
        while True:
            scanner.skip_ws()
            position = scanner.pos
            lhs, _ = scanner.word(stop="=")
            scanner.expect("=")
            rhs, _ = scanner.word(stop=",>")
            _check_indices(lhs, n, position)
            _check_indices(rhs, n, position)
            lhs = list(RawWord(factors=tuple(lhs)).factors)
            rhs = list(RawWord(factors=tuple(rhs)).factors)
            relation = _classify_relation(lhs, rhs, n, position)
            slot = (
                (relation.i, relation.j, relation.sign)
                if isinstance(relation, Conjugation)
                else ("power", relation.i)
            )
            if slot in slots:
                raise PolyZParseError("relation given twice", position)
            slots.add(slot)
            if isinstance(relation, Conjugation):
                conjugations.append(relation)
            else:
                powers.append(relation)
            if scanner.peek() != ",":
                break
            scanner.pos += 1
    scanner.expect(">")
    if not scanner.at_end():
        raise PolyZParseError(f"unexpected {scanner.peek()!r} after presentation", scanner.pos)

    try:
        return PolycyclicPresentation(n=n, conjugations=tuple(conjugations), powers=tuple(powers))
    except ValueError as e:
        raise PolyZParseError(f"invalid presentation: {e}")


def _format_factors(factors) -> str:
    parts = [f"g{gen}" if exp == 1 else f"g{gen}^{exp}" for gen, exp in factors]
    return "*".join(parts) if parts else "1"


def format_word(w: NormalWord) -> str:
    """Text form of a normal word; the identity is ``1``."""
    return _format_factors((index + 1, exp) for index, exp in enumerate(w) if exp != 0)


def format_raw_word(w: RawWord) -> str:
    return _format_factors(w.factors)


def format_presentation(p: PolycyclicPresentation) -> str:
    generators = ",".join(f"g{i}" for i in range(1, p.n + 1))
    relations = []
    for rel in p.conjugations:
        top = f"g{rel.j}" if rel.sign == 1 else f"g{rel.j}^-1"
        rhs = top if rel.word.is_identity() else f"{format_raw_word(rel.word)}*{top}"
        relations.append(f"{top}*g{rel.i} = {rhs}")
    for rel in p.powers:
        relations.append(f"g{rel.i}^{rel.order} = {format_raw_word(rel.word)}")
    if not relations:
        return f"<{generators}>"
    return f"<{generators} | {', '.join(relations)}>"


def word_from_vector(w: NormalWord) -> RawWord:
    return RawWord(factors=tuple((index + 1, exp) for index, exp in enumerate(w)))
