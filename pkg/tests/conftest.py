import random
from os.path import dirname, join, realpath
from typing import Iterator, List

import pytest

from torclosed.lattice import Lattice, all_lattices
from torclosed.poset import Poset
from torclosed.ptamari import PhiChain, build_components, build_lattice

DATA = join(dirname(realpath(__file__)), 'data')


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture(scope='session')
def diamond():
    """0 < 1, 2 < 3 with 1 and 2 incomparable"""
    return Poset.from_relations(4, [(0, 1), (0, 2), (1, 3), (2, 3)])


@pytest.fixture(scope='session')
def diamond_tamari(diamond):
    """Tam(P, phi) for the diamond with phi = (0, 1, 3)"""
    return build_lattice(build_components(PhiChain(diamond, (0, 1, 3))))


@pytest.fixture(scope='session')
def b2():
    return Lattice(Poset.chain(2).product(Poset.chain(2)))


@pytest.fixture(scope='session')
def b3():
    return Lattice(Poset.chain(2).product(Poset.chain(2)).product(Poset.chain(2)))


@pytest.fixture(scope='session')
def n5():
    """0 < 1 < 2 < 4 and 0 < 3 < 4"""
    return Lattice.from_relations(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])


@pytest.fixture(scope='session')
def m3():
    return Lattice.from_relations(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])


@pytest.fixture
def rng():
    return random.Random(20240601)


def random_phi_chain(rng: random.Random, size: int) -> PhiChain:
    """A random poset with minimum 0 on `size` elements and a random chain through 0."""
    pairs = [(0, k) for k in range(1, size)]
    pairs += [(i, j) for i in range(1, size) for j in range(i + 1, size) if rng.random() < 0.35]
    P = Poset.from_relations(size, pairs)
    phi = [0]
    while True:
        above = [y for y in range(size) if P.lt[phi[-1], y]]
        if not above or rng.random() < 0.25:
            break
        phi.append(rng.choice(above))
    return PhiChain(P, tuple(phi))


@pytest.fixture
def random_instances(rng):
    """Seeded (P, phi) with at most 12 ground elements."""

    def instances(count, max_size=5):
        found = []
        while len(found) < count:
            pc = random_phi_chain(rng, rng.randint(1, max_size))
            cm = build_components(pc)
            if cm.size <= 12:
                found.append(cm)
        return found

    return instances


@pytest.fixture(scope='session')
def lattices_up_to_eight():
    """Every lattice with at most eight elements, up to isomorphism."""
    return all_lattices(8)


def maximal_chains(L: Lattice) -> Iterator[List[int]]:
    path = [L.bottom]

    def walk():
        if path[-1] == L.top:
            yield list(path)
            return
        for y in L.upper_covers[path[-1]]:
            path.append(y)
            yield from walk()
            path.pop()

    yield from walk()


def random_maximal_chain(rng: random.Random, L: Lattice) -> List[int]:
    path = [L.bottom]
    while path[-1] != L.top:
        path.append(rng.choice(list(L.upper_covers[path[-1]])))
    return path
