"""
Lattices of d-torsion classes of higher Auslander algebras of type A, as
Tam(os_n^d, diagonal), their Nakayama quotients, and the counting identities
around the posets os_n^d of non-decreasing d-tuples.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations_with_replacement
from math import comb
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from torclosed import bitset
from torclosed.congruence import quotient
from torclosed.errors import InvalidKupisch, NotationUnresolved, PreconditionViolated, PropertyViolation
from torclosed.lattice import Lattice, Verdict
from torclosed.poset import Poset
from torclosed.ptamari import Components, PTamariLattice, PhiChain, build_components, build_lattice, count_torclosed, \
    kupisch_congruence, kupisch_region

log = logging.getLogger(__name__)

Tup = Tuple[int, ...]

# a_0, a_1, ...; a_i = |J(os_4^(i-1))| for i >= 2
A005157 = (1, 2, 5, 16, 66, 352, 2431, 21760, 252586)


def tuple_name(t: Tup) -> str:
    sep = ',' if any(x >= 10 for x in t) else ''
    return sep.join(map(str, t))


@dataclass
class OsPoset:
    n: int
    d: int
    elements: List[Tup]

    @cached_property
    def index(self) -> Dict[Tup, int]:
        return {t: i for i, t in enumerate(self.elements)}

    @cached_property
    def poset(self) -> Poset:
        T = np.array(self.elements, dtype=int).reshape(len(self.elements), self.d)
        leq = (T[:, None, :] <= T[None, :, :]).all(axis=-1)
        return Poset(leq, names=[tuple_name(t) for t in self.elements], check=False)

    def diagonal(self, k: int) -> int:
        return self.index[(k,) * self.d]

    def mask(self, predicate) -> int:
        return bitset.to_mask(i for i, t in enumerate(self.elements) if predicate(t))

    def __len__(self):
        return len(self.elements)


def os_poset(n: int, d: int) -> OsPoset:
    """Non-decreasing d-tuples over 0..n-1 under the componentwise order."""
    return OsPoset(n=n, d=d, elements=list(combinations_with_replacement(range(n), d)))


def count_os_ideals(n: int, d: int) -> int:
    return os_poset(n, d).poset.count_ideals()


def ground_tuples(ptl: PTamariLattice, d: int) -> List[Tup]:
    """Ground elements (x, k) of Tam(os_n^d, diagonal) as (d+1)-tuples x + (k,)."""
    os = os_poset(ptl.cm.n, d)
    return [os.elements[x] + (k,) for x, k in ptl.cm.ground]


def auslander_components(n: int, d: int) -> Components:
    os = os_poset(n, d)
    return build_components(PhiChain(os.poset, tuple(os.diagonal(k) for k in range(n))))


def auslander_subset(cm: Components, d: int, tuples: Sequence[Tup]) -> int:
    """Ground elements named by their (d+1)-tuples, as a bitset."""
    os = os_poset(cm.n, d)
    index = {os.elements[x] + (k,): g for g, (x, k) in enumerate(cm.ground)}
    for t in tuples:
        if t not in index:
            raise PreconditionViolated(f'{tuple_name(t)} is not a ground element of L_{cm.n}^{d}')
    return bitset.to_mask(index[t] for t in tuples)


def auslander_lattice(n: int, d: int, **kwargs) -> PTamariLattice:
    ptl = build_lattice(auslander_components(n, d), **kwargs)
    log.debug(f"L_{n}^{d} has {len(ptl)} elements")
    return ptl


def as_tuple_sets(ptl: PTamariLattice, d: int) -> List[FrozenSet[Tup]]:
    tuples = ground_tuples(ptl, d)
    return [frozenset(tuples[g] for g in bitset.members(F)) for F in ptl.elements]


def extension_condition(I: FrozenSet[Tup], d: int) -> Verdict:
    """(x_1..x_d, i) and (i+1, .., i+1, j) in I with j > i force (x_1..x_d, j) into I."""
    for y in I:
        *x, i = y
        for z in I:
            j = z[-1]
            if j > i and z == (i + 1,) * d + (j,) and tuple(x) + (j,) not in I:
                return Verdict(False, (y, z))
    return Verdict(True)


def direct_auslander_sets(n: int, d: int) -> List[FrozenSet[Tup]]:
    """
    Subsets of os_n^(d+1) whose fibres over the last coordinate are order filters
    of os_n^d and that satisfy extension_condition, built component by
    component without the closure operator.
    """
    os = os_poset(n, d)
    fibres = []
    for k in range(n):
        below = bitset.to_list(os.poset.down[os.diagonal(k)])
        sub = os.poset.subposet(below)
        fibres.append([
            frozenset(os.elements[below[i]] + (k,) for i in bitset.members(f))
            for f in sub.all_filters()
        ])
    found = []

    def extend(k, chosen):
        if k == n:
            found.append(chosen)
            return
        for fibre in fibres[k]:
            candidate = chosen | fibre
            if extension_condition(candidate, d):
                extend(k + 1, candidate)

    extend(0, frozenset())
    return found


def auslander_models_agree(n: int, d: int, ptl: Optional[PTamariLattice] = None) -> Verdict:
    ptl = auslander_lattice(n, d) if ptl is None else ptl
    closure_model = set(as_tuple_sets(ptl, d))
    direct_model = set(direct_auslander_sets(n, d))
    if closure_model != direct_model:
        return Verdict(False, sorted(map(sorted, closure_model ^ direct_model))[:1])
    return Verdict(True)


# counts

def binomial(m: int, r: int) -> int:
    """comb(m, r), zero for r < 0 or m < r."""
    if r < 0 or m < r:
        return 0
    return comb(m, r)


def jirr_formula(n: int, d: int) -> int:
    return comb(n + d, d + 1)


def mirr_formula(n: int, d: int) -> int:
    extra = sum(
        binomial(d + i + l - j - k - 2, d - 2)
        for i in range(n) for j in range(i + 1) for k in range(i - j) for l in range(1, j + 1)
    )
    return jirr_formula(n, d) + extra


def l3d_formula(d: int) -> int:
    return d + 3 + 5 * 2 ** d


@dataclass
class AuslanderCounts:
    n: int
    d: int
    jirr_formula: int
    mirr_formula: int
    spine_formula: int
    size: Optional[int] = None
    jirr: Optional[int] = None
    mirr: Optional[int] = None
    length: Optional[int] = None
    spine: Optional[int] = None
    sd: Optional[bool] = None

    @property
    def sd_formula(self) -> bool:
        return self.n <= 2 or self.d == 1

    def disagreements(self) -> List[str]:
        if self.size is None:
            return []
        pairs = [('jirr', self.jirr, self.jirr_formula), ('mirr', self.mirr, self.mirr_formula),
                 ('length', self.length, self.jirr_formula), ('spine', self.spine, self.spine_formula),
                 ('sd', self.sd, self.sd_formula)]
        return [name for name, found, expected in pairs if found != expected]


def auslander_counts(n: int, d: int, ptl: Optional[PTamariLattice] = None) -> AuslanderCounts:
    counts = AuslanderCounts(
        n=n, d=d,
        jirr_formula=jirr_formula(n, d),
        mirr_formula=mirr_formula(n, d),
        spine_formula=count_os_ideals(n, d + 1),
    )
    if ptl is not None:
        L = ptl.lattice
        data = L.irreducible_data
        counts.size = L.n
        counts.jirr = len(data.jirr)
        counts.mirr = len(data.mirr)
        counts.length = L.base.length
        counts.spine = bitset.count(L.base.spine())
        counts.sd = bool(L.is_sd())
    return counts


def a005157(i: int) -> int:
    if i < len(A005157):
        return A005157[i]
    return count_os_ideals(4, i - 1)


@dataclass
class Identity:
    name: str
    lhs: int
    rhs: int

    @property
    def holds(self):
        return self.lhs == self.rhs


def os_identities(bound_d: int = 6, max_sum: int = 9) -> List[Identity]:
    out = []
    for d in range(1, bound_d + 1):
        out.append(Identity(f'|J(os_3^{d})| = 2^{d + 1}', count_os_ideals(3, d), 2 ** (d + 1)))
    for d in range(1, min(bound_d, 4) + 1):
        out.append(Identity(f'|J(os_4^{d})| = a_{d + 1}', count_os_ideals(4, d), A005157[d + 1]))
    for n in range(1, max_sum):
        for d in range(1, max_sum - n + 1):
            out.append(Identity(f'|J(os_{n}^{d})| = |J(os_{d + 1}^{n - 1})|',
                                count_os_ideals(n, d), count_os_ideals(d + 1, n - 1)))
    return out


def os_isomorphism(n: int, d: int) -> Optional[Dict[Tup, Tup]]:
    """An explicit isomorphism os_n^d -> os_(d+1)^(n-1), found by graph matching."""
    left, right = os_poset(n, d), os_poset(d + 1, n - 1)
    mapping = left.poset.find_isomorphism(right.poset)
    if mapping is None:
        return None
    return {left.elements[a]: right.elements[b] for a, b in mapping.items()}


# closed form for n = 4

def _interval_ideals(os: OsPoset, name: str, lower: Tup, upper: Tup, strict: bool) -> int:
    P = os.poset
    a, b = os.index[lower], os.index[upper]
    if not P.leq[a, b]:
        if strict:
            raise NotationUnresolved(name, tuple_name(lower), tuple_name(upper))
        log.debug(f"{name} = [{tuple_name(lower)}, {tuple_name(upper)}] is empty")
        return 1
    return P.count_ideals(within=P.up[a] & P.down[b])


def l4d_terms(d: int, strict: bool = False) -> Dict[str, int]:
    os = os_poset(4, d + 1)
    zeros = (0,) * (d - 1)
    k1 = _interval_ideals(os, 'K1', zeros + (2, 2), (1,) + (3,) * d, strict)
    k2 = _interval_ideals(os, 'K2', zeros + (2, 3), (1,) + (3,) * d, strict)
    cut = (1,) * d + (3,)
    k3 = os.poset.count_ideals(within=os.mask(lambda t: not all(a >= b for a, b in zip(t, cut))))
    return dict(K1=k1, K2=k2, K3=k3)


def l4d_formula(d: int, strict: bool = False) -> int:
    terms = l4d_terms(d, strict)
    a = [a005157(i) for i in range(d + 1)]
    return (8 + d + 3 * 2 ** (d + 1) + (d + 4) * (a[d] - 1) + sum(a[2:d + 1])
            + 2 * (terms['K1'] + terms['K2']) + terms['K3'])


# growth in d for fixed n

@dataclass
class GrowthRow:
    n: int
    d: int
    size: int
    ideals: int

    @property
    def ratio(self) -> float:
        return self.size / self.ideals

    def line(self) -> str:
        return f"n={self.n} d={self.d}: |L|={self.size}, |J(os^(d+1))|={self.ideals}, ratio {self.ratio:.4f}"


def growth_data(n: int, max_d: int, budget: Optional[float] = None) -> Iterator[GrowthRow]:
    """|L_n^d| against |J(os_n^(d+1))| for d = 1..max_d, counted without building the lattices."""
    for d in range(1, max_d + 1):
        row = GrowthRow(n=n, d=d, size=count_torclosed(auslander_components(n, d), budget),
                        ideals=count_os_ideals(n, d + 1))
        log.debug(row.line())
        yield row


# Nakayama algebras

def check_kupisch_series(l: Sequence[int]):
    l = list(l)
    if not l or l[0] != 1:
        raise InvalidKupisch(l, 'the first entry must be 1')
    for i in range(1, len(l)):
        if not 2 <= l[i] <= l[i - 1] + 1:
            raise InvalidKupisch(l, f'entry {i} must lie in 2..{l[i - 1] + 1}')


def valid_kupisch_series(n: int) -> Iterator[Tuple[int, ...]]:
    def extend(prefix):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for value in range(2, prefix[-1] + 2):
            yield from extend(prefix + [value])

    if n >= 1:
        yield from extend([1])


def kupisch_to_k(l: Sequence[int]) -> Tuple[int, ...]:
    check_kupisch_series(l)
    return tuple(max(0, i - li + 1) for i, li in enumerate(l))


def nakayama_region(ptl: PTamariLattice, l: Sequence[int], d: int) -> int:
    """Ground elements y of os_n^(d+1) with y_1 >= y_(d+1) - l_(y_(d+1)) + 1."""
    check_kupisch_series(l)
    region = 0
    for g, y in enumerate(ground_tuples(ptl, d)):
        if y[0] >= y[-1] - l[y[-1]] + 1:
            region |= 1 << g
    return region


def nakayama_restriction(l: Sequence[int], d: int, ptl: Optional[PTamariLattice] = None) -> Tuple[List[int], Lattice]:
    """Distinct traces I & region of the torclosed sets I, ordered by inclusion."""
    ptl = auslander_lattice(len(l), d) if ptl is None else ptl
    region = nakayama_region(ptl, l, d)
    traces = sorted({F & region for F in ptl.elements}, key=lambda F: (bitset.count(F), F))
    members = np.zeros((len(traces), ptl.cm.size), dtype=np.float32)
    for i, F in enumerate(traces):
        members[i, bitset.to_list(F)] = 1
    leq = (members @ (1 - members).T) == 0
    return traces, Lattice(Poset(leq, names=[ptl.cm.name(F) for F in traces], check=False))


@dataclass
class NakayamaLattice:
    kupisch: Tuple[int, ...]
    d: int
    restriction: Lattice
    quotient: Lattice
    isomorphism: Dict[int, int] = field(default_factory=dict)


def nakayama_lattice(l: Sequence[int], d: int) -> NakayamaLattice:
    check_kupisch_series(l)
    ptl = auslander_lattice(len(l), d)
    K = kupisch_to_k(l)
    if kupisch_region(ptl.cm, K) != nakayama_region(ptl, l, d):
        raise PropertyViolation('Kupisch region equals the Nakayama region', list(l))
    _, restricted = nakayama_restriction(l, d, ptl)
    quotiented = quotient(ptl.lattice, kupisch_congruence(ptl, K))
    mapping = restricted.base.find_isomorphism(quotiented.base)
    if mapping is None:
        raise PropertyViolation('restriction and quotient models are isomorphic', list(l))
    if not quotiented.is_jsd():
        raise PropertyViolation('Nakayama lattice is join-semidistributive', list(l))
    log.debug(f"Nakayama lattice for l={list(l)}, d={d} has {restricted.n} elements")
    return NakayamaLattice(kupisch=tuple(l), d=d, restriction=restricted, quotient=quotiented,
                           isomorphism=mapping)
