import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import AtomCapExceededError, MatrixError, MissingAtomError
from .formula import Atom, Compound, Formula, atoms_of, formula_pool, subformulas
from .matrix import Matrix, TruthValue
from .value_map import ValueMap

logger = logging.getLogger(__name__)

DEFAULT_ATOM_CAP = 8
DEFAULT_MAX_VALUATIONS = 9 ** 8

# valuations evaluated per numpy batch
_CHUNK = 1 << 16

Valuation = Dict[str, TruthValue]


@dataclass(frozen=True)
class EntailmentVerdict:
    holds: bool
    countervaluation: Optional[Valuation] = field(default=None, hash=False)
    valuations_checked: int = 0

    def __bool__(self) -> bool:
        return self.holds


def evaluate(m: Matrix, formula: Formula, val: Valuation) -> TruthValue:
    return m.values[_evaluate_index(m, formula, val, {})]


def _evaluate_index(m: Matrix, f: Formula, val: Valuation, memo: dict) -> int:
    if f in memo:
        return memo[f]
    if isinstance(f, Atom):
        if f.name not in val:
            raise MissingAtomError(f"valuation does not assign atom {f.name}")
        out = m.index(val[f.name])
    else:
        op = m.operation(f.op, f.arity)
        out = m.lookup(op, [_evaluate_index(m, c, val, memo) for c in f.children])
    memo[f] = out
    return out


def _check_size(m: Matrix, atoms: Sequence[str], atom_cap: int, max_valuations: int) -> int:
    if len(atoms) > atom_cap:
        raise AtomCapExceededError(
            f"{len(atoms)} atoms exceed the atom cap of {atom_cap}: {', '.join(atoms)}"
        )
    total = m.size ** len(atoms)
    if total > max_valuations:
        raise AtomCapExceededError(
            f"{m.size}^{len(atoms)} = {total} valuations exceed the cap of {max_valuations}"
        )
    return total


def _evaluate_batch(m: Matrix, formulas: Sequence[Formula], atoms: Sequence[str],
                    start: int, stop: int, tables: Dict[Tuple[str, int], np.ndarray]) -> List[np.ndarray]:
    """Value positions of each formula for valuations start..stop-1 of the odometer."""
    n, k = m.size, len(atoms)
    idx = np.arange(start, stop, dtype=np.int64)
    memo: Dict[Formula, np.ndarray] = {}
    for j, a in enumerate(atoms):
        # first atom is the most significant digit
        memo[Atom(a)] = (idx // n ** (k - 1 - j)) % n

    for f in formulas:
        for g in subformulas(f):
            if g in memo:
                continue
            key = (g.op, g.arity)
            if key not in tables:
                tables[key] = np.asarray(m.operation(g.op, g.arity).table, dtype=np.int64)
            pos = np.zeros(len(idx), dtype=np.int64)
            for c in g.children:
                pos = pos * n + memo[c]
            memo[g] = tables[key][pos]
    return [memo[f] for f in formulas]


def _valuation_at(m: Matrix, atoms: Sequence[str], position: int) -> Valuation:
    n, k = m.size, len(atoms)
    return {a: m.values[(position // n ** (k - 1 - j)) % n] for j, a in enumerate(atoms)}


def entails(m: Matrix, premises: Sequence[Formula], conclusion: Formula,
            atom_cap: int = DEFAULT_ATOM_CAP,
            max_valuations: int = DEFAULT_MAX_VALUATIONS) -> EntailmentVerdict:
    """
    Exhaustive check that every valuation designating all premises designates
    the conclusion. Valuations run in odometer order over the sorted atoms,
    so the countervaluation returned is the lexicographically first.
    """
    premises = list(premises)
    atoms = atoms_of(premises + [conclusion])
    total = _check_size(m, atoms, atom_cap, max_valuations)
    designated = np.asarray(m.designated_mask, dtype=bool)
    tables: Dict[Tuple[str, int], np.ndarray] = {}

    for start in range(0, total, _CHUNK):
        stop = min(total, start + _CHUNK)
        *prem, concl = _evaluate_batch(m, premises + [conclusion], atoms, start, stop, tables)
        bad = ~designated[concl]
        for p in prem:
            bad &= designated[p]
        if bad.any():
            first = start + int(np.argmax(bad))
            counter = _valuation_at(m, atoms, first)
            logger.debug("Countervaluation in %s after %d valuations: %s", m.name, first + 1, counter)
            return EntailmentVerdict(False, counter, first + 1)

    return EntailmentVerdict(True, None, total)


def is_tautology(m: Matrix, formula: Formula, atom_cap: int = DEFAULT_ATOM_CAP,
                 max_valuations: int = DEFAULT_MAX_VALUATIONS) -> EntailmentVerdict:
    return entails(m, [], formula, atom_cap, max_valuations)


def find_tautologies(m: Matrix, atoms: Sequence[str], max_depth: int,
                     limit: Optional[int] = None) -> List[Formula]:
    """Tautologies among all formulas over the atoms up to max_depth, in pool order."""
    signature = [op.key for op in m.operations]
    found = []
    for f in formula_pool(atoms, max_depth, signature):
        if is_tautology(m, f):
            found.append(f)
            if limit is not None and len(found) >= limit:
                break
    logger.info("Found %d tautologies of %s up to depth %d", len(found), m.name, max_depth)
    return found


@dataclass
class Disagreement:
    premises: Tuple[Formula, ...]
    conclusion: Formula
    source_verdict: EntailmentVerdict
    target_verdict: EntailmentVerdict


@dataclass
class AgreementReport:
    checked: int = 0
    disagreements: List[Disagreement] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements


def check_consequence_agreement(m1: Matrix, m2: Matrix, epi: ValueMap,
                                suite: Sequence[Tuple[Sequence[Formula], Formula]],
                                atom_cap: int = DEFAULT_ATOM_CAP) -> AgreementReport:
    """
    Compare entailment in m1 and in its epimorphic image m2 on every
    (premises, conclusion) pair. Any disagreement means epi is not a strong
    epimorphism and is reported, never dropped.
    """
    if epi.kind not in ("epi", "iso"):
        raise MatrixError(f"consequence agreement needs an epimorphism, got a map of kind {epi.kind}")
    if (epi.source, epi.target) != (m1.name, m2.name):
        raise MatrixError(f"map {epi.source} -> {epi.target} does not go from {m1.name} to {m2.name}")

    report = AgreementReport()
    for premises, conclusion in suite:
        v1 = entails(m1, premises, conclusion, atom_cap)
        v2 = entails(m2, premises, conclusion, atom_cap)
        report.checked += 1
        if v1.holds != v2.holds:
            logger.warning("Consequence in %s and %s disagrees on %d premise(s) => %s",
                           m1.name, m2.name, len(premises), conclusion)
            report.disagreements.append(Disagreement(tuple(premises), conclusion, v1, v2))
    logger.info("Checked %d consequences in %s against %s: %d disagreements",
                report.checked, m1.name, m2.name, len(report.disagreements))
    return report
