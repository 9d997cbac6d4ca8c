import logging
import random
from math import comb
from typing import Iterable, List, Optional

from torclosed import bitset
from torclosed.certify import CheckResult, Certifier, from_verdict
from torclosed.chaincase import pallo_tamari
from torclosed.config import DEFAULTS, Settings
from torclosed.congruence import DoublingScript, certify_congruence_normal, check_doubling_criteria, d_graph, replay
from torclosed.labels import ChainContext, gamma, gamma_all, is_el_labelling, mobius_via_chains, \
    verify_labelling_identities
from torclosed.lattice import Lattice
from torclosed.ptamari import PTamariLattice, bounds, check_irreducibles, component_order_conditions, count_small_chain, \
    cover_differences, d_relation_formula, kupisch_congruence, omega_labelling, psi_chain, satisfies_gamma_conditions, \
    sd_criterion, spine_and_longest_chains, tamari_sublattice

log = logging.getLogger(__name__)

EXPECTATIONS = ('leftmodular', 'jsd', 'msd', 'sd', 'joinextremal', 'extremal', 'congruencenormal')


def _not_left_modular_witness(L: Lattice):
    for a in range(L.n):
        verdict = L.is_left_modular_element(a)
        if not verdict:
            return a, verdict.witness
    return None


def expectation(L: Lattice, name: str, settings: Settings = DEFAULTS) -> CheckResult:
    if name == 'leftmodular':
        verdict = L.is_left_modular()
        return CheckResult(f'expect {name}', bool(verdict), None if verdict else _not_left_modular_witness(L))
    if name in ('jsd', 'msd', 'sd'):
        return from_verdict(f'expect {name}', getattr(L, f'is_{name}')())
    if name == 'joinextremal':
        ext = L.extremality()
        return CheckResult(f'expect {name}', ext.join_extremal, (ext.length, ext.jirr))
    if name == 'extremal':
        ext = L.extremality()
        return CheckResult(f'expect {name}', ext.extremal, (ext.length, ext.jirr, ext.mirr))
    if name == 'congruencenormal':
        found = certify_congruence_normal(L, bound=settings.certify_bound, budget=settings.budget)
        return CheckResult(f'expect {name}', found is not None)
    raise ValueError(f'unknown property "{name}", expected one of {", ".join(EXPECTATIONS)}')


class LatticeCertifier(Certifier):
    """Checks that apply to any finite lattice."""

    def __init__(self, lattice: Lattice, expect: Iterable[str] = (), settings: Settings = DEFAULTS):
        super(LatticeCertifier, self).__init__()
        self.lattice = lattice
        self.expect = list(expect)
        self.settings = settings

    def chains(self) -> List[List[int]]:
        chains = [list(next(self.lattice.base.longest_chains()))]
        lm_chain = self.lattice.left_modular_chain()
        if lm_chain is not None and lm_chain != chains[0]:
            chains.append(lm_chain)
        return chains

    def checks(self):
        out = [self.jsd_cover_criterion, self.labelling_identities, self.left_modular_chain_is_el,
               self.extremal_sd_has_left_modular_chain]
        for name in self.expect:
            out.append(lambda name=name: expectation(self.lattice, name, self.settings))
        return out

    def jsd_cover_criterion(self):
        L = self.lattice
        by_covers, by_definition = bool(L.is_jsd()), bool(L.is_jsd_by_definition())
        return CheckResult('join-semidistributivity: cover criterion agrees with definition',
                           by_covers == by_definition, (by_covers, by_definition))

    def labelling_identities(self):
        for chain in self.chains():
            report = verify_labelling_identities(ChainContext(self.lattice, chain))
            if not report.consistent:
                return CheckResult('chain labellings: gamma_2 = gamma_3 <= gamma_1 = gamma_4', False,
                                   (chain, report.violations))
        return CheckResult('chain labellings: gamma_2 = gamma_3 <= gamma_1 = gamma_4', True)

    def left_modular_chain_is_el(self):
        name = 'left modular chain labelling is an EL-labelling'
        chain = self.lattice.left_modular_chain()
        if chain is None:
            return CheckResult(name + ' (no left modular chain)', True)
        return from_verdict(name, is_el_labelling(self.lattice, gamma(ChainContext(self.lattice, chain), 1)))

    def extremal_sd_has_left_modular_chain(self):
        return from_verdict('extremal semidistributive lattices are left modular',
                            self.lattice.check_cor_extremal_sd())


class PTamariCertifier(Certifier):
    """Structural claims about Tam(P, phi)."""

    def __init__(self, ptl: PTamariLattice, settings: Settings = DEFAULTS):
        super(PTamariCertifier, self).__init__()
        self.ptl = ptl
        self.L = ptl.lattice
        self.settings = settings
        self.rng = random.Random(settings.seed)

    def checks(self):
        return [self.atoms_and_coatoms, self.irreducibles, self.semidistributivity, self.cover_structure,
                self.spine, self.tamari_sublattice, self.small_chain_count, self.size_bounds, self.omega_equals_gammas,
                self.gamma_criterion, self.el_labelling, self.d_relation, self.congruence_uniform, self.kupisch_congruences]

    def atoms_and_coatoms(self):
        self.ptl.verify(self.settings.verify_limit)
        return CheckResult('atoms, coatoms, meets and joins', True)

    def irreducibles(self):
        return from_verdict('irreducibles match the closed form', check_irreducibles(self.ptl))

    def semidistributivity(self):
        expected, jsd, sd = sd_criterion(self.ptl.cm), self.L.is_jsd(), self.L.is_sd()
        return CheckResult('join-semidistributive, and semidistributive iff phi is comparable to everything',
                           bool(jsd) and expected == bool(sd), (bool(jsd), expected, sd.witness))

    def cover_structure(self):
        return from_verdict('cover differences lie in one component with a maximum', cover_differences(self.ptl))

    def spine(self):
        report = spine_and_longest_chains(self.ptl)
        return CheckResult('spine is the product-order filters, longest chains are linear extensions',
                           report.consistent, report)

    def tamari_sublattice(self):
        n = self.ptl.cm.n
        sub = tamari_sublattice(self.ptl)
        catalan = comb(2 * n + 2, n + 1) // (n + 2)
        passed = sub.lattice.n == catalan
        if passed and n <= 5:
            passed = sub.lattice.base.is_isomorphic(pallo_tamari(n).base)
        return CheckResult('corner filters form a Tamari sublattice', passed, (sub.lattice.n, catalan))

    def small_chain_count(self):
        if self.ptl.cm.n > 3:
            return CheckResult('size formula for short chains (not applicable)', True)
        count = count_small_chain(self.ptl.cm.pc)
        return CheckResult('size formula for short chains', count == self.L.n, (count, self.L.n))

    def size_bounds(self):
        within = bounds(self.ptl.cm.pc).check(self.L.n)
        return CheckResult('size lies between the lower bounds and the product bound', all(within.values()), within)

    def omega_equals_gammas(self):
        conditions = component_order_conditions(self.ptl.cm, list(range(self.ptl.cm.size)))
        if not conditions:
            return from_verdict('canonical extension conditions', conditions)
        omega = omega_labelling(self.ptl)
        gammas = gamma_all(ChainContext(self.L, psi_chain(self.ptl)))
        off = {which: g.differences(omega)[:1] for which, g in gammas.items() if g.differences(omega)}
        return CheckResult('omega equals gamma_1..gamma_4 along the canonical chain', not off, off)

    def gamma_criterion(self):
        name = 'gamma_2 equals omega exactly along left modular chains psi'
        cm = self.ptl.cm
        for count, order in enumerate(cm.prod.dual().linear_extensions()):
            if count >= self.settings.verify_limit:
                break
            exact = bool(satisfies_gamma_conditions(self.ptl, order))
            modular = all(self.L.is_left_modular_element(x) for x in psi_chain(self.ptl, order))
            if exact != modular or (component_order_conditions(cm, order) and not exact):
                return CheckResult(name, False, [g + 1 for g in order])
        return CheckResult(name, True)

    def el_labelling(self):
        omega = omega_labelling(self.ptl)
        verdict = is_el_labelling(self.L, omega)
        if not verdict:
            return from_verdict('omega is an EL-labelling', verdict)
        off_chain = [x for x in psi_chain(self.ptl) if not self.L.is_left_modular_element(x)]
        if off_chain:
            return CheckResult('canonical chain is left modular', False, off_chain)
        if self.L.n <= self.settings.verify_limit:
            for x in range(self.L.n):
                for y in range(self.L.n):
                    if not self.L.leq[x, y]:
                        continue
                    mu = self.L.base.mobius(x, y)
                    if mu not in (-1, 0, 1) or mobius_via_chains(self.L, omega, x, y) != mu:
                        return CheckResult('Mobius values from decreasing chains lie in {-1, 0, 1}', False, (x, y, mu))
        return CheckResult('omega is an EL-labelling, Mobius values in {-1, 0, 1}', True)

    def d_relation(self):
        generic, formula = d_graph(self.L), d_relation_formula(self.ptl)
        name = 'closed-form D relation generates the D relation and is acyclic'
        if formula.find_cycle() is not None or generic.find_cycle() is not None:
            return CheckResult(name, False, formula.find_cycle() or generic.find_cycle())
        extra = set(formula.edges) - set(generic.edges)
        if extra:
            return CheckResult(name, False, sorted(extra))
        return CheckResult(name, formula.transitive_closure() == generic.transitive_closure())

    def congruence_uniform(self):
        name = 'join-congruence uniform doubling script'
        if self.L.n > self.settings.certify_bound:
            return CheckResult(name + ' (skipped, lattice too large)', True)
        found = certify_congruence_normal(self.L, bound=self.settings.certify_bound, budget=self.settings.budget)
        return CheckResult(name, found is not None and found.join_uniform)

    def kupisch_congruences(self, trials: int = 5):
        n = self.ptl.cm.n
        for _ in range(trials):
            K, low = [], 0
            for i in range(n):
                low = self.rng.randint(low, i)
                K.append(low)
            kupisch_congruence(self.ptl, K)
        return CheckResult(f'Kupisch relations are congruences ({trials} random sequences)', True)


class ScriptCertifier(Certifier):
    """Doubling criteria along a script, checked against the replayed lattices."""

    def __init__(self, script: DoublingScript):
        super(ScriptCertifier, self).__init__()
        self.script = script
        self.report = check_doubling_criteria(script)

    def checks(self):
        out = []
        for i, step in enumerate(self.report.steps):
            out.append(lambda i=i, step=step: CheckResult(
                f'step {i}: left modular elements of the doubled lattice as predicted',
                step.predicted_left_modular == step.actual_left_modular,
                (step.predicted_left_modular, step.actual_left_modular)))
            out.append(lambda i=i, step=step: from_verdict(
                f'step {i}: maximal chains avoiding C leave the bounds of C', step.chains_avoiding))
        out += [self.hearts, self.spine_hits, self.final_lattice]
        return out

    def hearts(self):
        expected = all(s.heart_on_left_modular_chain for s in self.report.steps)
        return CheckResult('left modular iff every heart meets a left modular chain',
                           expected == self.report.left_modular, (expected, self.report.left_modular))

    def spine_hits(self):
        steps = self.report.steps
        hits = all(s.meets_spine for s in steps)
        if all(s.interval for s in steps):
            return CheckResult('extremal iff every doubled interval meets the spine',
                               hits == self.report.extremal, (hits, self.report.extremal))
        if all(s.lower_pseudo_interval for s in steps):
            return CheckResult('join extremal iff every doubled lower pseudo-interval meets the spine',
                               hits == self.report.join_extremal, (hits, self.report.join_extremal))
        return CheckResult('spine criterion (script has other steps, not applicable)', True)

    def final_lattice(self):
        final = replay(self.script)
        steps = self.report.steps
        if all(s.interval for s in steps):
            if self.report.extremal != self.report.left_modular:
                return CheckResult('congruence uniform: extremal iff left modular', False,
                                   (self.report.extremal, self.report.left_modular))
            if self.report.extremal:
                lm = set(final.left_modular_elements)
                off = [x for x in bitset.members(final.base.spine()) if x not in lm]
                if off:
                    return CheckResult('spine of an extremal congruence uniform lattice is left modular', False, off)
        if all(s.lower_pseudo_interval for s in steps) and self.report.left_modular and not self.report.join_extremal:
            return CheckResult('left modular join-congruence uniform lattices are join extremal', False)
        return CheckResult('extremality and left modularity on the final lattice', True)


def certify_all(lattice: Lattice, ptl: Optional[PTamariLattice] = None, script: Optional[DoublingScript] = None,
                expect: Iterable[str] = (), settings: Settings = DEFAULTS) -> List[CheckResult]:
    certifiers = [LatticeCertifier(lattice, expect, settings)]
    if ptl is not None:
        certifiers.append(PTamariCertifier(ptl, settings))
    if script is not None:
        certifiers.append(ScriptCertifier(script))
    results = []
    for certifier in certifiers:
        results += certifier.run()
    return results
