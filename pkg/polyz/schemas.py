# polyz/schemas.py
"""
JSON shapes printed by ``polyz --json``.

Every command prints one CommandOutput object. Integers that can grow without
bound (word exponents, matrix entries) are written as decimal strings.
"""
from typing import Any, Dict, List, Optional

from pydantic import BaseModel

from polyz.engine import AutMatrix, Tower
from polyz.presentation import NormalWord


def encode_word(word: NormalWord) -> List[str]:
    return [str(e) for e in word]


def encode_matrix(matrix: AutMatrix) -> List[List[str]]:
    return [[str(v) for v in row] for row in matrix.rows]


def encode_tower(tower: Tower) -> Dict[str, Any]:
    return {
        "name": tower.name,
        "n": tower.n,
        "phis": [encode_matrix(tower.phi(i)) for i in range(1, tower.n)],
    }


# Request/Response Models
class CommandOutput(BaseModel):
    command: str
    group: Optional[str] = None
    result: Any


class WordResult(BaseModel):
    word: List[str]
    text: str


class ClassificationResult(BaseModel):
    automorphism: str
    matrix: List[List[str]]
    inner: bool
    out_class: str
    conjugator: Optional[List[str]] = None


class CentralResult(BaseModel):
    word: List[str]
    central: bool
