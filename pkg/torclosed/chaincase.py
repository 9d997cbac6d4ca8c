"""
Torclosed sets of a chain P = C_N described by words: u_c is the number of
elements of component c in the set. Covers chains phi with phi(0) != 0 as well,
and the classical Tamari lattice as phi = identity.
"""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from torclosed.errors import PreconditionViolated
from torclosed.lattice import Lattice, Verdict
from torclosed.poset import Poset
from torclosed.ptamari import Components, PhiChain, build_components, build_lattice

log = logging.getLogger(__name__)


def check_phi(N: int, phi: Sequence[int]):
    if not phi:
        raise PreconditionViolated('phi must not be empty')
    if any(not 0 <= p < N for p in phi):
        raise PreconditionViolated(f'phi = {list(phi)} must take values in 0..{N - 1}')
    if any(a >= b for a, b in zip(phi, phi[1:])):
        raise PreconditionViolated(f'phi = {list(phi)} is not strictly increasing')


@dataclass(frozen=True)
class PalloWord:
    u: Tuple[int, ...]
    phi: Tuple[int, ...]

    def __post_init__(self):
        if len(self.u) != len(self.phi):
            raise PreconditionViolated(f'word {list(self.u)} and chain {list(self.phi)} differ in length')
        if any(x < 0 for x in self.u):
            raise PreconditionViolated(f'word {list(self.u)} has a negative entry')

    def __str__(self):
        sep = ' ' if any(x >= 10 for x in self.u) else ''
        return sep.join(map(str, self.u))

    def __le__(self, other: 'PalloWord'):
        return all(a <= b for a, b in zip(self.u, other.u))


def _fits(u: Sequence[int], phi: Sequence[int], c: int) -> bool:
    """Conditions involving the last position c of the prefix u."""
    if u[c] > phi[c] + 1:
        return False
    for b in range(c):
        if u[b] and u[c] > phi[c] - phi[b + 1] and u[c] < u[b] + phi[c] - phi[b]:
            return False
    return True


def is_torclosed_word(w: PalloWord) -> bool:
    return all(_fits(w.u, w.phi, c) for c in range(len(w.u)))


def words(N: int, phi: Sequence[int]) -> Iterator[PalloWord]:
    """Every torclosed word, lexicographically."""
    check_phi(N, phi)
    phi = tuple(phi)
    prefix = []

    def extend(c):
        if c == len(phi):
            yield PalloWord(tuple(prefix), phi)
            return
        for value in range(phi[c] + 2):
            prefix.append(value)
            if _fits(prefix, phi, c):
                yield from extend(c + 1)
            prefix.pop()

    yield from extend(0)


@dataclass
class ChainTamari:
    words: List[PalloWord]
    lattice: Lattice


def build_chain_tamari(N: int, phi: Sequence[int]) -> ChainTamari:
    found = list(words(N, phi))
    U = np.array([w.u for w in found], dtype=int)
    leq = (U[:, None, :] <= U[None, :, :]).all(axis=-1)
    lattice = Lattice(Poset(leq, names=[str(w) for w in found], check=False))
    log.debug(f"chain Tamari lattice for N={N}, phi={list(phi)} with {lattice.n} words")
    return ChainTamari(words=found, lattice=lattice)


def pallo_tamari(n: int) -> Lattice:
    if n < 1:
        raise PreconditionViolated(f'n must be at least 1, got {n}')
    return build_chain_tamari(n, range(n)).lattice


def chain_components(N: int, phi: Sequence[int]) -> Components:
    check_phi(N, phi)
    return build_components(PhiChain(Poset.chain(N), tuple(phi)))


def word_of(cm: Components, F: int) -> PalloWord:
    return PalloWord(tuple(bin(F & mask).count('1') for mask in cm.masks), tuple(cm.phi))


def set_of(cm: Components, w: PalloWord) -> int:
    F = 0
    for c, (count, top) in enumerate(zip(w.u, cm.phi)):
        for x in range(top - count + 1, top + 1):
            F |= 1 << cm.index[(x, c)]
    return F


def check_word_model(N: int, phi: Sequence[int]) -> Verdict:
    """With phi(0) = 0, F -> word_of(F) is an order isomorphism onto the torclosed words."""
    cm = chain_components(N, phi)
    ptl = build_lattice(cm)
    chain_case = build_chain_tamari(N, phi)
    position = {w.u: i for i, w in enumerate(chain_case.words)}
    image = []
    for F in ptl.elements:
        w = word_of(cm, F)
        if w.u not in position:
            return Verdict(False, ('not a word', ptl.cm.name(F)))
        if set_of(cm, w) != F:
            return Verdict(False, ('round trip', ptl.cm.name(F)))
        image.append(position[w.u])
    if len(set(image)) != len(chain_case.words):
        return Verdict(False, ('sizes', (len(ptl), len(chain_case.words))))
    image = np.array(image)
    if not (chain_case.lattice.leq[np.ix_(image, image)] == ptl.lattice.leq).all():
        return Verdict(False, ('order', None))
    return Verdict(True)


def slope_phi(n: int, p: int) -> Tuple[int, ...]:
    return tuple((i + 1) * p - 1 for i in range(n))


def slope_check(w: PalloWord, p: int) -> bool:
    """
    Segments of heights u_c stand at positions c. Each segment of height at most
    (c+1)p; for a positive segment at c, the lines of slope p through (c+1, 0)
    and through the top (c, u_c) leave no later segment top strictly between them.
    """
    n = len(w.u)
    if p < 1 or w.phi != slope_phi(n, p):
        raise PreconditionViolated(f'chain {list(w.phi)} is not the slope {p} chain of length {n}')
    for c, height in enumerate(w.u):
        if height > (c + 1) * p:
            return False
        if not height:
            continue
        for later in range(c + 1, n):
            lower = p * (later - (c + 1))
            upper = height + p * (later - c)
            if lower < w.u[later] < upper:
                return False
    return True


def check_slope_agreement(n: int, p: int) -> Verdict:
    """Slope test and word conditions agree on every word with u_c <= phi(c) + 1."""
    phi = slope_phi(n, p)
    for u in product(*(range(top + 2) for top in phi)):
        w = PalloWord(u, phi)
        if slope_check(w, p) != is_torclosed_word(w):
            return Verdict(False, str(w))
    return Verdict(True)
