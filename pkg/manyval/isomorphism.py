import logging
from dataclasses import dataclass
from itertools import product
from typing import Iterator, List, Optional

from .congruence import Congruence, enumerate_congruences, factor_matrix
from .errors import BudgetExhaustedError
from .matrix import Matrix
from .search_budget import SearchBudget
from .value_map import ValueMap, compose

logger = logging.getLogger(__name__)


class _IsomorphismSearch:
    """
    Extends a partial injection one source value at a time (declaration
    order), pairing designated with designated only. After each extension
    every operation is checked on the tuples of the current domain that
    involve the new value or evaluate to it; a conflict with an existing
    image, or an image already taken by another value, cuts the subtree.
    Every tuple is checked once its arguments and output are all mapped.
    """

    def __init__(self, m1: Matrix, m2: Matrix, budget: SearchBudget):
        self.m1, self.m2 = m1, m2
        self.n = m1.size
        self.budget = budget.start()
        self.pairs = [(op, m2.operation(op.name, op.arity)) for op in m1.operations]
        self.image = [-1] * self.n
        self.preimage = [-1] * self.n
        self.domain: List[int] = []

    def _consistent(self, i: int) -> bool:
        m1, m2 = self.m1, self.m2
        image, preimage = self.image, self.preimage
        mask1, mask2 = m1.designated_mask, m2.designated_mask
        for op1, op2 in self.pairs:
            for args in product(self.domain, repeat=op1.arity):
                out1 = m1.lookup(op1, args)
                if out1 != i and i not in args and op1.arity:
                    continue
                out2 = m2.lookup(op2, [image[a] for a in args])
                if image[out1] >= 0:
                    if image[out1] != out2:
                        return False
                elif preimage[out2] >= 0 or mask1[out1] != mask2[out2]:
                    return False
        return True

    def run(self, k: int = 0) -> Iterator[List[int]]:
        self.budget.tick()
        if k == self.n:
            yield list(self.image)
            return
        mask1, mask2 = self.m1.designated_mask, self.m2.designated_mask
        for j in range(self.n):
            if self.preimage[j] >= 0 or mask1[k] != mask2[j]:
                continue
            self.image[k], self.preimage[j] = j, k
            self.domain.append(k)
            if self._consistent(k):
                yield from self.run(k + 1)
            self.domain.pop()
            self.image[k], self.preimage[j] = -1, -1


def _comparable(m1: Matrix, m2: Matrix) -> bool:
    return (m1.size == m2.size
            and len(m1.designated) == len(m2.designated)
            and m1.signature == m2.signature)


def iter_isomorphisms(m1: Matrix, m2: Matrix, budget: Optional[SearchBudget] = None) -> Iterator[ValueMap]:
    """All isomorphisms m1 -> m2 in deterministic search order."""
    if not _comparable(m1, m2):
        return
    search = _IsomorphismSearch(m1, m2, budget or SearchBudget())
    for images in search.run():
        yield ValueMap.from_indices(m1, m2, images, kind="iso")
    logger.debug("Isomorphism search %s -> %s visited %d nodes", m1.name, m2.name, search.budget.nodes)


def find_isomorphism(m1: Matrix, m2: Matrix, budget: Optional[SearchBudget] = None) -> Optional[ValueMap]:
    iso = next(iter_isomorphisms(m1, m2, budget), None)
    if iso is None:
        logger.info("%s and %s are not isomorphic", m1.name, m2.name)
    else:
        logger.info("Found isomorphism %s -> %s", m1.name, m2.name)
    return iso


def automorphisms(m: Matrix, budget: Optional[SearchBudget] = None) -> List[ValueMap]:
    autos = list(iter_isomorphisms(m, m, budget))
    logger.info("%s has %d automorphisms", m.name, len(autos))
    return autos


@dataclass(frozen=True)
class EpimorphismFactorization:
    """An epimorphism m1 -> m2 together with the projection and iso it factors into."""
    congruence: Congruence
    projection: ValueMap
    iso: ValueMap
    epimorphism: ValueMap


def _factorizations_from(m1: Matrix, m2: Matrix, congruences: List[Congruence],
                         find_all: bool, budget: SearchBudget) -> Iterator[EpimorphismFactorization]:
    for c in congruences:
        factor, projection = factor_matrix(m1, c)
        isos = iter_isomorphisms(factor, m2, budget)
        if not find_all:
            first = next(isos, None)
            isos = iter([first] if first is not None else [])
        for iso in isos:
            yield EpimorphismFactorization(c, projection, iso, compose(projection, iso, kind="epi"))
            if not find_all:
                return


def iter_epimorphism_factorizations(m1: Matrix, m2: Matrix, find_all: bool = False,
                                    budget: Optional[SearchBudget] = None,
                                    jobs: int = 1) -> Iterator[EpimorphismFactorization]:
    """
    Epimorphisms m1 -> m2 obtained as projection onto a factor by a congruence
    with |m2| classes followed by an isomorphism of that factor onto m2.
    Complete: every epimorphism factors this way.
    """
    if m1.signature != m2.signature or m2.size > m1.size:
        return
    budget = budget or SearchBudget()
    try:
        congruences = enumerate_congruences(m1, include_identity=True, budget=budget,
                                            blocks=m2.size, jobs=jobs)
    except BudgetExhaustedError as e:
        partial = list(_factorizations_from(m1, m2, e.partial, find_all, SearchBudget.unlimited()))
        raise BudgetExhaustedError(
            e.reason, f"epimorphism search {m1.name} -> {m2.name}: {e}",
            partial=[f.epimorphism for f in partial],
        ) from e
    yield from _factorizations_from(m1, m2, congruences, find_all, budget)


def find_epimorphisms(m1: Matrix, m2: Matrix, find_all: bool = False,
                      budget: Optional[SearchBudget] = None, jobs: int = 1) -> List[ValueMap]:
    """With find_all=False the list holds at most the first epimorphism found."""
    epis = [f.epimorphism for f in iter_epimorphism_factorizations(m1, m2, find_all, budget, jobs)]
    if epis:
        logger.info("Found %d epimorphism(s) %s -> %s", len(epis), m1.name, m2.name)
    else:
        logger.info("%s is not an epimorphic image of %s", m2.name, m1.name)
    return epis
