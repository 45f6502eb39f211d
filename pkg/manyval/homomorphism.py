import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

from .errors import MatrixError, SignatureMismatchError
from .matrix import Matrix, Operation
from .partition import Partition
from .value_map import ValueMap

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Violation:
    """First witness against a homomorphism or congruence claim."""
    kind: str  # "operation" | "designation"
    message: str
    op: Optional[str] = None
    args: Tuple[str, ...] = ()
    other_args: Tuple[str, ...] = ()
    values: Tuple[str, ...] = ()


@dataclass(frozen=True)
class Verdict:
    holds: bool
    violation: Optional[Violation] = field(default=None)

    def __bool__(self) -> bool:
        return self.holds


def direct_product(m1: Matrix, m2: Matrix, name: Optional[str] = None) -> Matrix:
    """
    Pairs ordered m1-major; a pair is named by concatenating component names
    (falling back to "a_b" when concatenation is ambiguous). Operations act
    componentwise; designated = m1.designated x m2.designated.
    """
    if m1.signature != m2.signature:
        only1 = sorted(f"{n}/{a}" for n, a in m1.signature - m2.signature)
        only2 = sorted(f"{n}/{a}" for n, a in m2.signature - m1.signature)
        raise SignatureMismatchError(
            f"signatures differ: only in {m1.name}: {only1}, only in {m2.name}: {only2}"
        )
    pairs = [(a, b) for a in m1.values for b in m2.values]
    names = [a + b for a, b in pairs]
    if len(set(names)) != len(names):
        names = [f"{a}_{b}" for a, b in pairs]
        if len(set(names)) != len(names):
            raise MatrixError(f"cannot name the values of {m1.name} x {m2.name} unambiguously")

    n2 = m2.size
    shape = Matrix("", tuple(names), frozenset(), ())
    operations = []
    for op1 in m1.operations:
        op2 = m2.operation(op1.name, op1.arity)
        table = []
        for args in shape.tuples(op1.arity):
            left = m1.lookup(op1, [a // n2 for a in args])
            right = m2.lookup(op2, [a % n2 for a in args])
            table.append(left * n2 + right)
        operations.append(Operation(op1.name, op1.arity, tuple(table)))

    designated = frozenset(names[i] for i, (a, b) in enumerate(pairs)
                           if a in m1.designated and b in m2.designated)
    product = Matrix(name or f"{m1.name}x{m2.name}", tuple(names), designated, tuple(operations))
    logger.debug("Built product %s with %d values", product.name, product.size)
    return product


def is_strong_homomorphism(m1: Matrix, m2: Matrix, f: ValueMap) -> Verdict:
    """
    f respects every operation and designation in both directions.
    Designation is checked first, then operations in declaration order.
    """
    images = f.images(m1, m2)
    for i, v in enumerate(m1.values):
        if m1.designated_mask[i] != m2.designated_mask[images[i]]:
            w = m2.values[images[i]]
            state = "designated" if m1.designated_mask[i] else "undesignated"
            return Verdict(False, Violation(
                "designation",
                f"{v} is {state} in {m1.name} but maps to {w}, which is not",
                values=(v, w),
            ))
    for op1 in m1.operations:
        op2 = m2.operation(op1.name, op1.arity)
        for args in m1.tuples(op1.arity):
            lhs = images[m1.lookup(op1, args)]
            rhs = m2.lookup(op2, [images[a] for a in args])
            if lhs != rhs:
                names = tuple(m1.values[a] for a in args)
                return Verdict(False, Violation(
                    "operation",
                    f"f({op1.name}{names}) = {m2.values[lhs]} but "
                    f"{op1.name}(f{names}) = {m2.values[rhs]}",
                    op=op1.name, args=names,
                ))
    return Verdict(True)


def induced_partition(m1: Matrix, f: ValueMap) -> Partition:
    """Fibers of f, canonicalized."""
    mapping = f.as_dict()
    return Partition.from_labels(m1, [mapping[v] for v in m1.values])
