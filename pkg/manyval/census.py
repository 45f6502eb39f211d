import logging
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from .builtin_matrices import SevenValuedSpec, build_builtin, build_seven_valued, seven_valued_specs
from .formula import Atom, conj, disj, neg
from .isomorphism import find_epimorphisms, find_isomorphism
from .matrix import Matrix
from .search_budget import SearchBudget
from .semantics import EntailmentVerdict, entails

logger = logging.getLogger(__name__)

A, B = Atom("A"), Atom("B")

# entailments separating the 7-valued candidates from NC
DOUBLE_NEGATION_INTRO = ([A], neg(neg(A)))
DISJUNCTIVE_REFUTATION = ([disj(A, B)], B)
ABSORPTION_REFUTATION = ([conj(A, disj(B, neg(A)))], B)


@dataclass(frozen=True)
class CensusRow:
    spec: SevenValuedSpec
    designated: Tuple[str, ...]
    double_negation_intro: EntailmentVerdict
    disjunctive_refutation: EntailmentVerdict
    absorption_refutation: EntailmentVerdict
    epi_to_fde: bool
    epi_to_ac2: bool

    @property
    def name(self) -> str:
        return self.spec.name


def census_row(spec: SevenValuedSpec, budget: Optional[SearchBudget] = None) -> CensusRow:
    m = build_seven_valued(spec)
    return CensusRow(
        spec=spec,
        designated=tuple(m.designated_in_order),
        double_negation_intro=entails(m, *DOUBLE_NEGATION_INTRO),
        disjunctive_refutation=entails(m, *DISJUNCTIVE_REFUTATION),
        absorption_refutation=entails(m, *ABSORPTION_REFUTATION),
        epi_to_fde=bool(find_epimorphisms(m, build_builtin("fde"), budget=budget)),
        epi_to_ac2=bool(find_epimorphisms(m, build_builtin("ac2"), budget=budget)),
    )


def seven_valued_census(budget: Optional[SearchBudget] = None) -> List[CensusRow]:
    """One row per 7-valued candidate, in seven_valued_specs() order."""
    budget = budget or SearchBudget()
    rows = [census_row(spec, budget) for spec in seven_valued_specs()]
    logger.info("Census of %d seven-valued matrices: %d with an epimorphism to FDE or AC2",
                len(rows), sum(1 for r in rows if r.epi_to_fde or r.epi_to_ac2))
    return rows


def pairwise_isomorphic(matrices: Sequence[Matrix],
                        budget: Optional[SearchBudget] = None) -> List[Tuple[int, int]]:
    """Index pairs (i, j), i < j, of isomorphic matrices."""
    budget = budget or SearchBudget()
    pairs = [(i, j) for i, j in combinations(range(len(matrices)), 2)
             if find_isomorphism(matrices[i], matrices[j], budget) is not None]
    logger.info("Checked %d pairs, %d isomorphic",
                len(matrices) * (len(matrices) - 1) // 2, len(pairs))
    return pairs
