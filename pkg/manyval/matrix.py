import logging
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from .errors import ArityMismatchError, ForeignValueError, UnknownOperationError

logger = logging.getLogger(__name__)

MAX_VALUES = 64

# Characters a value name may not contain: the clause terminator, list and
# table punctuation, the comment marker, signed-formula/partition separators.
_FORBIDDEN_IN_NAME = set(",{}().#:|\"")
_OP_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

TruthValue = str


@dataclass(frozen=True)
class Operation:
    """
    A truth function stored densely in row-major declaration order: the entry
    for argument positions (i1, ..., ik) sits at i1*n^(k-1) + ... + ik.
    None marks a missing entry (only candidate structures have those).
    """
    name: str
    arity: int
    table: Tuple[Optional[int], ...]

    @property
    def key(self) -> Tuple[str, int]:
        return self.name, self.arity


@dataclass(frozen=True)
class Matrix:
    name: str = field(compare=False)
    values: Tuple[TruthValue, ...]
    designated: FrozenSet[TruthValue]
    operations: Tuple[Operation, ...]

    @property
    def size(self) -> int:
        return len(self.values)

    @cached_property
    def _index(self) -> Dict[TruthValue, int]:
        return {v: i for i, v in enumerate(self.values)}

    @cached_property
    def designated_mask(self) -> Tuple[bool, ...]:
        return tuple(v in self.designated for v in self.values)

    @cached_property
    def _ops(self) -> Dict[Tuple[str, int], Operation]:
        return {op.key: op for op in self.operations}

    @property
    def signature(self) -> FrozenSet[Tuple[str, int]]:
        return frozenset(self._ops)

    @property
    def designated_in_order(self) -> List[TruthValue]:
        return [v for v in self.values if v in self.designated]

    def index(self, value: TruthValue) -> int:
        try:
            return self._index[value]
        except KeyError:
            raise ForeignValueError(f"value '{value}' is not a value of {self.name}") from None

    def operation(self, name: str, arity: Optional[int] = None) -> Operation:
        if arity is not None and (name, arity) in self._ops:
            return self._ops[(name, arity)]
        arities = sorted(a for (n, a) in self._ops if n == name)
        if not arities:
            raise UnknownOperationError(f"{self.name} has no operation '{name}'")
        if arity is None and len(arities) == 1:
            return self._ops[(name, arities[0])]
        raise ArityMismatchError(
            f"operation '{name}' of {self.name} has arity {'/'.join(map(str, arities))}, got {arity}"
        )

    def lookup(self, op: Operation, args: Sequence[int]) -> int:
        """Table lookup on value positions; no checking, this is the hot path."""
        n = len(self.values)
        pos = 0
        for a in args:
            pos = pos * n + a
        return op.table[pos]

    def tuples(self, arity: int) -> Iterator[Tuple[int, ...]]:
        """All argument tuples of the given arity, row-major."""
        n = len(self.values)
        for pos in range(n ** arity):
            args = []
            for _ in range(arity):
                pos, r = divmod(pos, n)
                args.append(r)
            yield tuple(reversed(args))


@dataclass
class ValidationIssue:
    severity: str  # "error" | "warning"
    message: str
    location: str = ""


@dataclass
class ValidationReport:
    issues: List[ValidationIssue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(i.severity == "error" for i in self.issues)

    @property
    def errors(self) -> List[str]:
        return [i.message for i in self.issues if i.severity == "error"]

    def error(self, message: str, location: str = "") -> None:
        self.issues.append(ValidationIssue("error", message, location))

    def warning(self, message: str, location: str = "") -> None:
        self.issues.append(ValidationIssue("warning", message, location))


def is_valid_value_name(name: str) -> bool:
    return bool(name) and not any(c.isspace() or c in _FORBIDDEN_IN_NAME for c in name) \
        and "->" not in name


def validate_matrix(m: Matrix) -> ValidationReport:
    """Report every violated Matrix invariant; never raises."""
    report = ValidationReport()
    values = list(m.values)
    n = len(values)

    if n == 0:
        report.error("no values declared", "values")
    if n > MAX_VALUES:
        report.error(f"{n} values declared, at most {MAX_VALUES} are supported", "values")

    seen = set()
    for v in values:
        if v in seen:
            report.error(f"duplicate value {v}", "values")
        seen.add(v)
        if not is_valid_value_name(v):
            report.error(f"invalid value name {v!r}", "values")

    for d in sorted(set(m.designated) - seen):
        report.error(f"designated value {d} not declared", "designated")
    if not m.designated:
        report.error("designated set empty", "designated")
    elif seen and seen <= set(m.designated):
        report.error("no undesignated value", "designated")

    keys = set()
    for op in m.operations:
        where = f"op {op.name}/{op.arity}"
        if op.key in keys:
            report.error(f"duplicate operation {op.name}/{op.arity}", where)
        keys.add(op.key)
        if not _OP_NAME_RE.match(op.name):
            report.error(f"invalid operation name {op.name!r}", where)
        if op.arity < 0:
            report.error(f"negative arity {op.arity}", where)
            continue
        expected = n ** op.arity
        if len(op.table) != expected:
            report.error(f"{where}: table has {len(op.table)} entries, expected {expected}", where)
            continue
        for pos, out in enumerate(op.table):
            args = _position_to_names(values, op.arity, pos)
            if out is None:
                report.error(f"{where}: missing entry {args}", where)
            elif not 0 <= out < n:
                report.error(f"{where}: entry {args} has an undeclared output", where)

    if report.ok:
        logger.debug("Matrix %s is well-formed", m.name)
    return report


def _position_to_names(values: Sequence[str], arity: int, pos: int) -> str:
    n = len(values)
    names = []
    for _ in range(arity):
        pos, r = divmod(pos, n)
        names.append(values[r])
    return "(" + ", ".join(reversed(names)) + ")"


def apply_op(m: Matrix, op: str, args: Sequence[TruthValue]) -> TruthValue:
    operation = m.operation(op, len(args))
    return m.values[m.lookup(operation, [m.index(a) for a in args])]


def is_designated(m: Matrix, v: TruthValue) -> bool:
    return m.designated_mask[m.index(v)]


def make_matrix(name: str, values: Sequence[str], designated: Sequence[str],
                functions: Dict[Tuple[str, int], object]) -> Matrix:
    """
    Build a matrix from truth functions given as Python callables on value
    names (or as dicts keyed by argument tuples).
    """
    values = tuple(values)
    index = {v: i for i, v in enumerate(values)}
    shape = Matrix(name, values, frozenset(designated), ())
    operations = []
    for (op_name, arity), fn in functions.items():
        table = []
        for args in shape.tuples(arity):
            names = tuple(values[a] for a in args)
            out = fn[names] if isinstance(fn, dict) else fn(*names)
            table.append(index[out])
        operations.append(Operation(op_name, arity, tuple(table)))
    return Matrix(name, values, frozenset(designated), tuple(operations))
