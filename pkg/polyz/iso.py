# polyz/iso.py
"""
Isomorphism witnesses between semidirect products H ⋊ Z.

Inner twist: for beta = i_a ∘ alpha the map (h, k) -> (h * A_k, k) is an
isomorphism H ⋊_beta Z -> H ⋊_alpha Z, where

    A_k = a alpha(a) ... alpha^(k-1)(a)                         k > 0
    A_0 = 1
    A_k = alpha^-1(a^-1) alpha^-2(a^-1) ... alpha^k(a^-1)       k < 0

Conjugation: for beta = psi ∘ alpha ∘ psi^-1 the map (g, k) -> (psi(g), k)
is an isomorphism G ⋊_alpha Z -> G ⋊_beta Z.

Witnesses are only checked on samples; verify_witness records the seed so a
report can be reproduced.
"""
import logging
import random
import threading
from typing import Any, Callable, Dict, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from polyz.config import get_settings
from polyz.engine import Automorphism, Tower
from polyz.errors import ClassificationError, DimensionMismatchError
from polyz.g2 import Aut2, aut2_compose, aut2_inverse, aut2_out_class, conjugator_g2
from polyz.presentation import NormalWord
from polyz.presets import G2
from polyz.schemas import encode_matrix, encode_tower, encode_word

logger = logging.getLogger(__name__)

WordMap = Callable[[NormalWord], NormalWord]


class TwistSequence:
    """The sequence A_k for a tower H, an automorphism alpha and an element a."""

    def __init__(self, alpha: Automorphism, a: NormalWord):
        tower = alpha.tower
        if len(a) != tower.n:
            raise DimensionMismatchError(f"expected {tower.n} exponents, got {len(a)}")
        self.tower = tower
        self.alpha = alpha
        self.a = tuple(a)
        self._alpha_inverse = alpha.inverse()
        self._lock = threading.Lock()
        # index k holds A_k (resp. A_-k) together with alpha^k(a) (resp. alpha^-k(a^-1))
        self._forward: List[Tuple[NormalWord, NormalWord]] = [(tower.identity, self.a)]
        self._backward: List[Tuple[NormalWord, NormalWord]] = [(tower.identity, tower.inv(self.a))]

    def __call__(self, k: int) -> NormalWord:
        with self._lock:
            if k >= 0:
                self._grow(self._forward, k, self.alpha, shift=False)
                return self._forward[k][0]
            self._grow(self._backward, -k, self._alpha_inverse, shift=True)
            return self._backward[-k][0]

    def _grow(self, table: List[Tuple[NormalWord, NormalWord]], k: int, step: Automorphism, shift: bool) -> None:
        tower = self.tower
        while len(table) <= k:
            product, image = table[-1]
            if shift:
                # A_-(j+1) = A_-j * alpha^-(j+1)(a^-1)
                image = step.apply(image)
                table.append((tower.mul(product, image), image))
            else:
                # A_(j+1) = A_j * alpha^j(a)
                table.append((tower.mul(product, image), step.apply(image)))

    def inverse(self, k: int) -> NormalWord:
        return self.tower.inv(self(k))


def twist_sequence(alpha: Automorphism, a: NormalWord, k: int) -> NormalWord:
    """A_k for one value of k."""
    return TwistSequence(alpha, a)(k)


class IsoWitness(BaseModel):
    """A constructive isomorphism source -> target with its inverse."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: Literal["inner_twist", "conjugation"]
    base: Tower
    source_twist: Automorphism
    target_twist: Automorphism
    source: Tower
    target: Tower
    forward: WordMap
    backward: WordMap
    alpha: Automorphism
    a: Optional[NormalWord] = None
    psi: Optional[Automorphism] = None

    def describe(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {
            "kind": self.kind,
            "base": encode_tower(self.base),
            "source": encode_tower(self.source),
            "target": encode_tower(self.target),
            "alpha": encode_matrix(self.alpha.matrix),
        }
        if self.a is not None:
            record["a"] = encode_word(self.a)
        if self.psi is not None:
            record["psi"] = encode_matrix(self.psi.matrix)
        return record


def _split(x: NormalWord) -> Tuple[NormalWord, int]:
    return tuple(x[:-1]), x[-1]


def inner_twist_witness(alpha: Automorphism, a: NormalWord) -> IsoWitness:
    """Witness H ⋊_beta Z -> H ⋊_alpha Z for beta = i_a ∘ alpha."""
    base = alpha.tower
    beta = Automorphism.inner(base, a).compose(alpha)
    source = base.extend(beta.matrix, beta.inverse_images)
    target = base.extend(alpha.matrix, alpha.inverse_images)
    sequence = TwistSequence(alpha, a)

    def forward(x: NormalWord) -> NormalWord:
        h, k = _split(x)
        return base.mul(h, sequence(k)) + (k,)

    def backward(x: NormalWord) -> NormalWord:
        h, k = _split(x)
        return base.mul(h, sequence.inverse(k)) + (k,)

    logger.debug("inner twist witness over %r with a=%s", base, a)
    return IsoWitness(
        kind="inner_twist",
        base=base,
        source_twist=beta,
        target_twist=alpha,
        source=source,
        target=target,
        forward=forward,
        backward=backward,
        alpha=alpha,
        a=tuple(a),
    )


def conjugation_witness(alpha: Automorphism, psi: Automorphism) -> IsoWitness:
    """Witness G ⋊_alpha Z -> G ⋊_beta Z for beta = psi ∘ alpha ∘ psi^-1."""
    base = alpha.tower
    if psi.tower != base:
        raise DimensionMismatchError("alpha and psi act on different towers")
    psi_inverse = psi.inverse()
    beta = psi.compose(alpha).compose(psi_inverse)
    source = base.extend(alpha.matrix, alpha.inverse_images)
    target = base.extend(beta.matrix, beta.inverse_images)

    def forward(x: NormalWord) -> NormalWord:
        g, k = _split(x)
        return psi.apply(g) + (k,)

    def backward(x: NormalWord) -> NormalWord:
        g, k = _split(x)
        return psi_inverse.apply(g) + (k,)

    return IsoWitness(
        kind="conjugation",
        base=base,
        source_twist=alpha,
        target_twist=beta,
        source=source,
        target=target,
        forward=forward,
        backward=backward,
        alpha=alpha,
        psi=psi,
    )


def aut2_automorphism(f: Aut2) -> Automorphism:
    """An Aut2 as an engine automorphism of the G2 preset."""
    return Automorphism(G2, f.matrix(), aut2_inverse(f).matrix().columns)


def g2_coset_witness(alpha: Aut2, alpha_prime: Aut2) -> IsoWitness:
    """Witness G2 ⋊_alpha Z -> G2 ⋊_alpha' Z for twists in the same outer class."""
    if aut2_out_class(alpha) != aut2_out_class(alpha_prime):
        raise ClassificationError(f"{alpha} and {alpha_prime} lie in different outer classes")
    a = conjugator_g2(aut2_compose(alpha, aut2_inverse(alpha_prime)))
    return inner_twist_witness(aut2_automorphism(alpha_prime), a)


class VerificationReport(BaseModel):
    """Outcome of a sampled witness check."""

    seed: int
    sample_count: int
    exponent_bound: int
    multiplicativity_failures: List[Tuple[NormalWord, NormalWord]] = Field(default_factory=list)
    round_trip_failures: List[NormalWord] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.multiplicativity_failures and not self.round_trip_failures

    def summary(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "sample_count": self.sample_count,
            "exponent_bound": self.exponent_bound,
            "multiplicativity_failures": len(self.multiplicativity_failures),
            "round_trip_failures": len(self.round_trip_failures),
            "ok": self.ok,
        }


def random_word(rng: random.Random, n: int, bound: int) -> NormalWord:
    return tuple(rng.randint(-bound, bound) for _ in range(n))


def verify_witness(
    witness: IsoWitness,
    sample_count: Optional[int] = None,
    exponent_bound: Optional[int] = None,
    seed: Optional[int] = None,
) -> VerificationReport:
    """Check multiplicativity and both round trips on random samples."""
    settings = get_settings()
    sample_count = settings.sample_count if sample_count is None else sample_count
    exponent_bound = settings.exponent_bound if exponent_bound is None else exponent_bound
    seed = settings.seed if seed is None else seed

    rng = random.Random(seed)
    source, target = witness.source, witness.target
    report = VerificationReport(seed=seed, sample_count=sample_count, exponent_bound=exponent_bound)
    for _ in range(sample_count):
        x = random_word(rng, source.n, exponent_bound)
        y = random_word(rng, source.n, exponent_bound)
        z = random_word(rng, target.n, exponent_bound)
        if witness.forward(source.mul(x, y)) != target.mul(witness.forward(x), witness.forward(y)):
            report.multiplicativity_failures.append((x, y))
        if witness.backward(witness.forward(x)) != x or witness.forward(witness.backward(z)) != z:
            report.round_trip_failures.append(x)

    logger.debug(
        "verified %s witness: %d samples, %d multiplicativity and %d round trip failures",
        witness.kind,
        sample_count,
        len(report.multiplicativity_failures),
        len(report.round_trip_failures),
    )
    return report


def twist_power_identity(
    alpha: Automorphism,
    a: NormalWord,
    powers: Sequence[int],
    samples: int = 20,
    exponent_bound: int = 10,
    seed: int = 0,
) -> List[Tuple[int, NormalWord]]:
    """Pairs (k, x) on which beta^k(x) != A_k alpha^k(x) A_k^-1 for beta = i_a ∘ alpha."""
    tower = alpha.tower
    beta = Automorphism.inner(tower, a).compose(alpha)
    sequence = TwistSequence(alpha, a)
    rng = random.Random(seed)
    failures = []
    for k in powers:
        beta_k, alpha_k = beta.power(k), alpha.power(k)
        a_k = sequence(k)
        for _ in range(samples):
            x = random_word(rng, tower.n, exponent_bound)
            if beta_k.apply(x) != tower.conjugate(a_k, alpha_k.apply(x)):
                failures.append((k, x))
    return failures
