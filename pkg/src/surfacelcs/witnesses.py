"""Short words deep in the derived and lower central series of F(a, b).

x_1 = a, y_1 = b, x_k = [x_{k-1}, y_{k-1}], y_k = [x_{k-1}, y_{k-1}^-1].
x_k lies in the k-th derived subgroup, hence in gamma_{2^(k-1)}.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .fox import lcs_weight
from .words import GeneratorSet, Word, commutator, invert

MAX_LEVEL = 12
RANK2 = GeneratorSet(2)


class WitnessLevelError(ValueError):
    pass


class CertificationError(AssertionError):
    def __init__(self, clause: str, message: str):
        super().__init__(f"[{clause}] {message}")
        self.clause = clause


@dataclass(frozen=True)
class WitnessPair:
    level: int
    x: Word
    y: Word


def _check_level(k: int) -> None:
    if not 1 <= k <= MAX_LEVEL:
        raise WitnessLevelError(f"level must be in 1..{MAX_LEVEL}, got {k}")


@lru_cache(maxsize=None)
def _pair(k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if k == 1:
        return (1,), (2,)
    px, py = _pair(k - 1)
    x, y = Word(RANK2, px), Word(RANK2, py)
    return commutator(x, y).letters, commutator(x, invert(y)).letters


def derived_witness(k: int, gens: GeneratorSet = RANK2) -> WitnessPair:
    """The pair (x_k, y_k).  Over a larger generating set a, b become the
    first two generators."""
    _check_level(k)
    if gens.rank < 2:
        raise ValueError("witnesses need at least two generators")
    px, py = _pair(k)
    return WitnessPair(k, Word(gens, px), Word(gens, py))


def lcs_witness_level(k: int) -> int:
    """Smallest l with 2^(l-1) >= k."""
    if k < 1:
        raise WitnessLevelError("k must be >= 1")
    l = 1
    while 2 ** (l - 1) < k:
        l += 1
    return l


def lcs_witness(k: int, gens: GeneratorSet = RANK2) -> Word:
    l = lcs_witness_level(k)
    _check_level(l)
    return derived_witness(l, gens).x


def certify_witness(p: WitnessPair, weight_len_cap: int = 64) -> dict:
    k = p.level
    bound = 4 ** (k - 1)
    if p.x.is_identity() or p.y.is_identity():
        raise CertificationError("nontrivial", f"level {k} witness reduced to the identity")
    if len(p.x) > bound or len(p.y) > bound:
        raise CertificationError("length", f"|x|={len(p.x)}, |y|={len(p.y)} exceed 4^{k - 1}={bound}")
    comm = commutator(p.x, p.y)
    if comm.is_identity():
        raise CertificationError("commutator", f"[x_{k}, y_{k}] is trivial")
    record = {
        "level": k,
        "len_x": len(p.x),
        "len_y": len(p.y),
        "length_bound": bound,
        "commutator_len": len(comm),
        "derived_membership": f"by construction: x_{k} is a {k - 1}-fold nested commutator",
        "lcs_weight_x": None,
        "lcs_weight_lower_bound": 2 ** (k - 1),
    }
    if bound <= weight_len_cap:
        wt = lcs_weight(p.x)
        if wt < 2 ** (k - 1):
            raise CertificationError("weight", f"lcs_weight(x_{k}) = {wt} < 2^{k - 1}")
        record["lcs_weight_x"] = wt
    return record
