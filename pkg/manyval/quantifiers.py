import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Optional, Tuple

import numpy as np

from .errors import MatrixError, NotAciError
from .matrix import Matrix, TruthValue

logger = logging.getLogger(__name__)

# 2^16 - 1 subsets at most
MAX_DISTRIBUTION_VALUES = 16

QUANTIFIER_NAMES = {"and": "forall", "or": "exists"}


@dataclass(frozen=True)
class AciVerdict:
    holds: bool
    law: Optional[str] = None  # "idempotence" | "commutativity" | "associativity"
    witness: Tuple[TruthValue, ...] = ()

    def __bool__(self) -> bool:
        return self.holds

    @property
    def message(self) -> str:
        if self.holds:
            return "associative, commutative and idempotent"
        return f"{self.law} fails at ({', '.join(self.witness)})"


def _table(m: Matrix, binop: str) -> np.ndarray:
    op = m.operation(binop, 2)
    return np.asarray(op.table, dtype=np.int64).reshape(m.size, m.size)


def is_aci(m: Matrix, binop: str) -> AciVerdict:
    t = _table(m, binop)
    n = m.size
    r = np.arange(n)
    names = m.values

    bad = np.flatnonzero(t[r, r] != r)
    if bad.size:
        return AciVerdict(False, "idempotence", (names[bad[0]],))

    bad = np.argwhere(t != t.T)
    if bad.size:
        a, b = bad[0]
        return AciVerdict(False, "commutativity", (names[a], names[b]))

    lhs = t[t[:, :, None], r[None, None, :]]
    rhs = t[r[:, None, None], t[None, :, :]]
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        a, b, c = bad[0]
        return AciVerdict(False, "associativity", (names[a], names[b], names[c]))
    return AciVerdict(True)


@dataclass(frozen=True)
class DistributionTable:
    """
    Truth function of the distribution quantifier induced by an ACI operation:
    the value for a non-empty subset S is the fold of S. Subsets are bitmasks
    over declaration order; entry 0 (the empty set) is unused.
    """
    op_name: str
    values: Tuple[TruthValue, ...]
    folds: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.folds) - 1

    @property
    def quantifier(self) -> str:
        return QUANTIFIER_NAMES.get(self.op_name, self.op_name)

    def mask_of(self, subset: Iterable[TruthValue]) -> int:
        mask = 0
        for v in subset:
            try:
                mask |= 1 << self.values.index(v)
            except ValueError:
                raise MatrixError(f"value '{v}' is not one of {', '.join(self.values)}") from None
        return mask

    def value_of(self, subset: Iterable[TruthValue]) -> TruthValue:
        mask = self.mask_of(subset)
        if mask == 0:
            raise MatrixError("distribution quantifiers are defined on non-empty subsets only")
        return self.values[self.folds[mask]]

    def count_not(self, value: TruthValue) -> int:
        """Number of non-empty subsets whose fold differs from value."""
        target = self.values.index(value) if value in self.values else -1
        if target < 0:
            raise MatrixError(f"value '{value}' is not one of {', '.join(self.values)}")
        return sum(1 for f in self.folds[1:] if f != target)

    def entries(self) -> Iterator[Tuple[Tuple[TruthValue, ...], TruthValue]]:
        for mask in range(1, len(self.folds)):
            subset = tuple(v for i, v in enumerate(self.values) if mask >> i & 1)
            yield subset, self.values[self.folds[mask]]


def distribution_table(m: Matrix, binop: str) -> DistributionTable:
    verdict = is_aci(m, binop)
    if not verdict:
        raise NotAciError(f"{binop} of {m.name} does not induce a quantifier: {verdict.message}")
    if m.size > MAX_DISTRIBUTION_VALUES:
        raise MatrixError(
            f"distribution tables are limited to {MAX_DISTRIBUTION_VALUES} values, {m.name} has {m.size}"
        )
    t = _table(m, binop)
    folds = np.full(1 << m.size, -1, dtype=np.int64)
    for i in range(m.size):
        low = 1 << i
        folds[low] = i
        # every mask in (2^i, 2^(i+1)) is a lower mask plus value i
        folds[low + 1:low << 1] = t[folds[1:low], i]
    table = DistributionTable(binop, m.values, tuple(int(x) for x in folds))
    logger.debug("Distribution table of %s/%s: %d subsets", m.name, binop, len(table))
    return table


def distribution_tables(m: Matrix) -> Dict[str, DistributionTable]:
    """Tables for every binary operation of m that is ACI."""
    return {op.name: distribution_table(m, op.name)
            for op in m.operations if op.arity == 2 and is_aci(m, op.name)}
