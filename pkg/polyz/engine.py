# polyz/engine.py
"""
Generic poly-Z towers.

G_1 = Z and G_{i+1} = G_i ⋊ Z, where the new generator g_{i+1} acts on G_i by
conjugation through an automorphism phi_i. Elements are exponent vectors and
multiply as (h1, k1)(h2, k2) = (h1 * phi^k1(h2), k1 + k2), applied recursively
down the tower. phi^k is obtained by squaring generator images, so the cost of
a product grows with log|k|.

This module is the reference every closed-form kernel is checked against.
"""
import functools
import json
import logging
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from polyz.errors import (
    DimensionMismatchError,
    NotAnAutomorphismError,
    PolyZParseError,
    UnsupportedPresentationError,
)
from polyz.presentation import (
    Conjugation,
    NormalWord,
    PolycyclicPresentation,
    RawWord,
    format_word,
    word_from_vector,
)

logger = logging.getLogger(__name__)

# Generator images, one NormalWord per generator
Images = Tuple[NormalWord, ...]


class AutMatrix(BaseModel):
    """Square integer matrix; column c is the exponent vector of phi(g_c)."""

    model_config = ConfigDict(frozen=True)

    rows: Tuple[Tuple[int, ...], ...]

    @field_validator("rows")
    @classmethod
    def _square(cls, rows):
        if not rows:
            raise ValueError("matrix must have at least one row")
        if any(len(row) != len(rows) for row in rows):
            raise ValueError("matrix must be square")
        return rows

    @property
    def dimension(self) -> int:
        return len(self.rows)

    @property
    def columns(self) -> Images:
        return tuple(zip(*self.rows))

    @classmethod
    def from_columns(cls, columns: Sequence[NormalWord]) -> "AutMatrix":
        return cls(rows=tuple(zip(*columns)))

    @classmethod
    def identity(cls, n: int) -> "AutMatrix":
        return cls(rows=tuple(tuple(int(r == c) for c in range(n)) for r in range(n)))

    @classmethod
    def parse(cls, text: str) -> "AutMatrix":
        """Read a JSON array of rows such as ``[[1,0],[0,-1]]``."""
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise PolyZParseError(f"matrix is not valid JSON: {e.msg}", e.pos)
        if not isinstance(data, list) or not all(isinstance(row, list) for row in data):
            raise PolyZParseError("matrix must be a JSON array of rows")
        if not all(isinstance(v, int) and not isinstance(v, bool) for row in data for v in row):
            raise PolyZParseError("matrix entries must be integers")
        try:
            return cls(rows=tuple(tuple(row) for row in data))
        except ValueError as e:
            raise PolyZParseError(f"invalid matrix: {e}")

    def to_list(self) -> List[List[int]]:
        return [list(row) for row in self.rows]

    def __str__(self) -> str:
        return json.dumps(self.to_list())


def unit(index: int, n: int, exponent: int = 1) -> NormalWord:
    """Normal word of g_index^exponent in a tower with n generators."""
    return tuple(exponent if c == index else 0 for c in range(1, n + 1))


def _pad(word: NormalWord, n: int) -> NormalWord:
    return tuple(word) + (0,) * (n - len(word))


class Tower:
    """A poly-Z group Z ⋊ Z ⋊ ... ⋊ Z with verified twisting automorphisms."""

    def __init__(self, phis: Tuple[Images, ...] = (), inverses: Tuple[Images, ...] = (), name: Optional[str] = None):
        # Use Tower.free_cyclic() and extend(); this constructor trusts its input
        self._phis = phis
        self._inverses = inverses
        self.name = name
        self._power_images = functools.lru_cache(maxsize=65536)(self._compute_power_images)

    @classmethod
    def free_cyclic(cls, name: Optional[str] = "z") -> "Tower":
        return cls((), (), name)

    @classmethod
    def from_presentation(cls, presentation: PolycyclicPresentation, name: Optional[str] = None) -> "Tower":
        """Build the tower of a poly-Z presentation, deriving omitted v_{i,j}."""
        if not presentation.is_poly_z:
            raise UnsupportedPresentationError("finite relative orders are not supported by the engine")

        tower = cls.free_cyclic(name if presentation.n == 1 else None)
        for j in range(2, presentation.n + 1):
            columns = tuple(tower.collect(presentation.conj_pos(i, j)) for i in range(1, j))
            given = [presentation.conj_neg(i, j) for i in range(1, j)]
            if all(word is not None for word in given):
                inverse = tuple(tower.collect(word) for word in given)
            else:
                inverse = tower.derive_inverse_images(columns)
            matrix = AutMatrix.from_columns(columns)
            try:
                tower = tower.extend(matrix, inverse, name=name if j == presentation.n else None)
            except NotAnAutomorphismError:
                raise NotAnAutomorphismError(f"relations for g{j} do not define an automorphism of G_{j - 1}")
        return tower

    def to_presentation(self) -> PolycyclicPresentation:
        relations = []
        for j in range(2, self.n + 1):
            for i in range(1, j):
                relations.append(Conjugation(i=i, j=j, sign=1, word=word_from_vector(self._phis[j - 2][i - 1])))
                relations.append(Conjugation(i=i, j=j, sign=-1, word=word_from_vector(self._inverses[j - 2][i - 1])))
        return PolycyclicPresentation(n=self.n, conjugations=tuple(relations))

    @property
    def n(self) -> int:
        """Hirsch length."""
        return len(self._phis) + 1

    @property
    def identity(self) -> NormalWord:
        return (0,) * self.n

    def generator(self, index: int, exponent: int = 1) -> NormalWord:
        return unit(index, self.n, exponent)

    def phi(self, i: int) -> AutMatrix:
        """phi_i, the action of g_{i+1} on G_i."""
        return AutMatrix.from_columns(self._phis[i - 1])

    def inverse_images(self, i: int) -> Images:
        return self._inverses[i - 1]

    def truncate(self, i: int) -> "Tower":
        """The sub-tower G_i."""
        if not 1 <= i <= self.n:
            raise DimensionMismatchError(f"sub-tower G_{i} does not exist in a tower of length {self.n}")
        if i == self.n:
            return self
        return Tower(self._phis[: i - 1], self._inverses[: i - 1])

    def __eq__(self, other) -> bool:
        return isinstance(other, Tower) and self._phis == other._phis

    def __hash__(self) -> int:
        return hash(self._phis)

    def __repr__(self) -> str:
        label = self.name or "tower"
        return f"Tower({label}, n={self.n})"

    # Recursive arithmetic on G_level (level = number of generators)

    def _mul(self, x: NormalWord, y: NormalWord, level: int) -> NormalWord:
        if level == 1:
            return (x[0] + y[0],)
        k1 = x[-1]
        lower = y[:-1]
        if k1:
            lower = self._act(level - 1, k1, lower)
        return self._mul(x[:-1], lower, level - 1) + (k1 + y[-1],)

    def _inv(self, x: NormalWord, level: int) -> NormalWord:
        if level == 1:
            return (-x[0],)
        k = x[-1]
        lower = self._inv(x[:-1], level - 1)
        if k:
            lower = self._act(level - 1, -k, lower)
        return lower + (-k,)

    def _pow(self, x: NormalWord, m: int, level: int) -> NormalWord:
        if level == 1:
            return (x[0] * m,)
        if m < 0:
            x = self._inv(x, level)
            m = -m
        result = (0,) * level
        base = x
        while m:
            if m & 1:
                result = self._mul(result, base, level)
            m >>= 1
            if m:
                base = self._mul(base, base, level)
        return result

    def _apply(self, images: Images, x: NormalWord, level: int) -> NormalWord:
        if level == 1:
            return (images[0][0] * x[0],)
        result = (0,) * level
        for image, e in zip(images, x):
            if e:
                result = self._mul(result, self._pow(image, e, level), level)
        return result

    def _compose(self, outer: Images, inner: Images, level: int) -> Images:
        return tuple(self._apply(outer, column, level) for column in inner)

    def _act(self, level: int, k: int, h: NormalWord) -> NormalWord:
        """phi_level^k applied to h in G_level."""
        if k == 0 or not any(h):
            return h
        return self._apply(self._power_images(level, k), h, level)

    def _compute_power_images(self, level: int, k: int) -> Images:
        if k == 0:
            return tuple(unit(c, level) for c in range(1, level + 1))
        base = self._phis[level - 1] if k > 0 else self._inverses[level - 1]
        if abs(k) == 1:
            return base
        half = abs(k) // 2
        squared = self._power_images(level, half if k > 0 else -half)
        result = self._compose(squared, squared, level)
        if abs(k) % 2:
            result = self._compose(result, base, level)
        return result

    # Public element arithmetic

    def _check(self, x: NormalWord) -> NormalWord:
        if len(x) != self.n:
            raise DimensionMismatchError(f"expected {self.n} exponents, got {len(x)}")
        return tuple(x)

    def collect(self, w: RawWord) -> NormalWord:
        """Normal word of an arbitrary word in the generators."""
        if w.max_generator > self.n:
            raise DimensionMismatchError(f"word uses g{w.max_generator} but the tower has {self.n} generators")
        result = self.identity
        for gen, exp in w.factors:
            result = self._mul(result, unit(gen, self.n, exp), self.n)
        return result

    def mul(self, x: NormalWord, y: NormalWord) -> NormalWord:
        return self._mul(self._check(x), self._check(y), self.n)

    def inv(self, x: NormalWord) -> NormalWord:
        return self._inv(self._check(x), self.n)

    def pow(self, x: NormalWord, m: int) -> NormalWord:
        return self._pow(self._check(x), m, self.n)

    def conjugate(self, x: NormalWord, y: NormalWord) -> NormalWord:
        """x y x^-1."""
        x, y = self._check(x), self._check(y)
        return self._mul(self._mul(x, y, self.n), self._inv(x, self.n), self.n)

    def commutes(self, x: NormalWord, y: NormalWord) -> bool:
        x, y = self._check(x), self._check(y)
        return self._mul(x, y, self.n) == self._mul(y, x, self.n)

    def is_central(self, x: NormalWord) -> bool:
        return all(self.commutes(x, unit(c, self.n)) for c in range(1, self.n + 1))

    # Automorphisms of the whole tower, given by matrices

    def _check_matrix(self, m: AutMatrix) -> Images:
        if m.dimension != self.n:
            raise DimensionMismatchError(f"matrix of dimension {m.dimension} used on a tower with {self.n} generators")
        return m.columns

    def apply_aut(self, m: AutMatrix, x: NormalWord) -> NormalWord:
        """Image of x under the homomorphism g_c -> column c of m."""
        return self._apply(self._check_matrix(m), self._check(x), self.n)

    def compose_aut(self, m1: AutMatrix, m2: AutMatrix) -> AutMatrix:
        """Matrix of m1 ∘ m2 (apply m2 first)."""
        outer = self._check_matrix(m1)
        inner = self._check_matrix(m2)
        return AutMatrix.from_columns(self._compose(outer, inner, self.n))

    def aut_pow(self, m: AutMatrix, k: int, inverse_images: Optional[Sequence[NormalWord]] = None) -> AutMatrix:
        """m^k by repeated squaring; negative k needs the inverse images of m."""
        columns = self._check_matrix(m)
        if k < 0:
            if inverse_images is None:
                raise ValueError("negative automorphism powers need inverse images")
            if len(inverse_images) != self.n:
                raise DimensionMismatchError(f"expected {self.n} inverse images, got {len(inverse_images)}")
            columns = tuple(self._check(x) for x in inverse_images)
            k = -k
        result = tuple(unit(c, self.n) for c in range(1, self.n + 1))
        while k:
            if k & 1:
                result = self._compose(result, columns, self.n)
            k >>= 1
            if k:
                columns = self._compose(columns, columns, self.n)
        return AutMatrix.from_columns(result)

    def preserves_relations(self, m: AutMatrix) -> bool:
        """True iff g_c -> column c respects every g_j g_c g_j^-1 = u_{c,j}."""
        columns = self._check_matrix(m)
        n = self.n
        for j in range(2, n + 1):
            image_j = columns[j - 1]
            image_j_inv = self._inv(image_j, n)
            for c in range(1, j):
                lhs = self._mul(self._mul(image_j, columns[c - 1], n), image_j_inv, n)
                rhs = self._apply(columns, _pad(self._phis[j - 2][c - 1], n), n)
                if lhs != rhs:
                    return False
        return True

    def is_automorphism(self, m: AutMatrix, inverse_images: Sequence[NormalWord]) -> bool:
        """Relation preservation plus m(inverse_images[c]) = g_c for every c."""
        columns = self._check_matrix(m)
        if len(inverse_images) != self.n:
            raise DimensionMismatchError(f"expected {self.n} inverse images, got {len(inverse_images)}")
        inverse_images = [self._check(x) for x in inverse_images]
        if not self.preserves_relations(m):
            logger.debug("matrix %s does not preserve the relations of %r", m, self)
            return False
        for c, preimage in enumerate(inverse_images, start=1):
            if self._apply(columns, preimage, self.n) != unit(c, self.n):
                logger.debug("matrix %s does not map inverse image %d back to g%d", m, c, c)
                return False
        return True

    def extend(self, m: AutMatrix, inverse_images: Sequence[NormalWord], name: Optional[str] = None) -> "Tower":
        """G_{n+1} = G_n ⋊_m Z with g_{n+1} g_c g_{n+1}^-1 = column c of m."""
        if not self.is_automorphism(m, inverse_images):
            raise NotAnAutomorphismError(f"{m} is not an automorphism of {self!r}")
        tower = Tower(
            self._phis + (m.columns,),
            self._inverses + (tuple(tuple(x) for x in inverse_images),),
            name,
        )
        logger.debug("extended %r by %s to %r", self, m, tower)
        return tower

    def derive_inverse_images(self, columns: Sequence[NormalWord]) -> Images:
        """
        Preimages of the generators under a triangular automorphism.

        Each column c must read W * g_c^d with W in G_{c-1} and d = ±1. The
        preimage of g_c is phi^-1(g_c * phi(g_c)^-d) * g_c^d, built from the
        preimages already found for g_1..g_{c-1}.
        """
        n = self.n
        columns = [self._check(col) for col in columns]
        if len(columns) != n:
            raise DimensionMismatchError(f"expected {n} columns, got {len(columns)}")
        preimages: List[NormalWord] = []
        for c in range(1, n + 1):
            column = columns[c - 1]
            d = column[c - 1]
            if any(column[c:]) or d not in (1, -1):
                raise UnsupportedPresentationError(
                    f"cannot derive the inverse action on g{c}; supply the g_j^-1 conjugation relations"
                )
            lower = self._mul(unit(c, n), self._pow(column, -d, n), n)
            padded = tuple(preimages) + tuple(unit(r, n) for r in range(c, n + 1))
            preimages.append(self._mul(self._apply(padded, lower, n), unit(c, n, d), n))
        return tuple(preimages)


class Automorphism:
    """A verified automorphism of a tower together with its inverse images."""

    def __init__(self, tower: Tower, matrix: AutMatrix, inverse_images: Sequence[NormalWord], verify: bool = True):
        if verify and not tower.is_automorphism(matrix, inverse_images):
            raise NotAnAutomorphismError(f"{matrix} is not an automorphism of {tower!r}")
        self.tower = tower
        self.matrix = matrix
        self.inverse_images: Images = tuple(tuple(x) for x in inverse_images)

    @classmethod
    def identity(cls, tower: Tower) -> "Automorphism":
        columns = tuple(unit(c, tower.n) for c in range(1, tower.n + 1))
        return cls(tower, AutMatrix.from_columns(columns), columns, verify=False)

    @classmethod
    def inner(cls, tower: Tower, a: NormalWord) -> "Automorphism":
        """Conjugation x -> a x a^-1."""
        a_inv = tower.inv(a)
        generators = [unit(c, tower.n) for c in range(1, tower.n + 1)]
        columns = tuple(tower.conjugate(a, g) for g in generators)
        preimages = tuple(tower.conjugate(a_inv, g) for g in generators)
        return cls(tower, AutMatrix.from_columns(columns), preimages, verify=False)

    def apply(self, x: NormalWord) -> NormalWord:
        return self.tower.apply_aut(self.matrix, x)

    def inverse(self) -> "Automorphism":
        return Automorphism(self.tower, AutMatrix.from_columns(self.inverse_images), self.matrix.columns, verify=False)

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self ∘ other."""
        matrix = self.tower.compose_aut(self.matrix, other.matrix)
        inverse = self.tower.compose_aut(other.inverse().matrix, self.inverse().matrix)
        return Automorphism(self.tower, matrix, inverse.columns, verify=False)

    def power(self, k: int) -> "Automorphism":
        matrix = self.tower.aut_pow(self.matrix, k, self.inverse_images)
        inverse = self.tower.aut_pow(self.matrix, -k, self.inverse_images)
        return Automorphism(self.tower, matrix, inverse.columns, verify=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, Automorphism) and self.tower == other.tower and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash((self.tower, self.matrix))

    def __repr__(self) -> str:
        return f"Automorphism({self.matrix})"


class GroupElement(BaseModel):
    """An element of a tower, with group operations as operators."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    tower: Tower
    word: NormalWord

    @model_validator(mode="after")
    def _length(self):
        if len(self.word) != self.tower.n:
            raise ValueError(f"word has {len(self.word)} exponents, tower has {self.tower.n} generators")
        return self

    def _same_tower(self, other: "GroupElement") -> None:
        if self.tower != other.tower:
            raise DimensionMismatchError("elements belong to different towers")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        self._same_tower(other)
        return GroupElement(tower=self.tower, word=self.tower.mul(self.word, other.word))

    def __pow__(self, m: int) -> "GroupElement":
        return GroupElement(tower=self.tower, word=self.tower.pow(self.word, m))

    def __invert__(self) -> "GroupElement":
        return GroupElement(tower=self.tower, word=self.tower.inv(self.word))

    def is_central(self) -> bool:
        return self.tower.is_central(self.word)

    def __str__(self) -> str:
        return format_word(self.word)
