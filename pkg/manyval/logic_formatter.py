from typing import Dict, List, Mapping

from .formula import Atom, Formula
from .matrix import Matrix, Operation
from .partition import Partition
from .value_map import ValueMap

# operator symbol and binding strength; calls and atoms bind tightest
_INFIX = {("or", 2): ("|", 1), ("and", 2): ("&", 2)}
_PREFIX = {("neg", 1): ("~", 3)}
_ATOMIC = 4


def _strength(f: Formula) -> int:
    if isinstance(f, Atom):
        return _ATOMIC
    key = (f.op, f.arity)
    if key in _INFIX:
        return _INFIX[key][1]
    if key in _PREFIX:
        return _PREFIX[key][1]
    return _ATOMIC


class LogicFormatter:
    """
    Single point of text generation for matrices, formulas, partitions and
    maps. Every output here re-parses with logic_parser.
    """

    @staticmethod
    def format_formula(f: Formula) -> str:
        if isinstance(f, Atom):
            return f.name
        key = (f.op, f.arity)
        if key in _PREFIX:
            symbol, level = _PREFIX[key]
            inner = LogicFormatter.format_formula(f.children[0])
            return symbol + (inner if _strength(f.children[0]) >= level else f"({inner})")
        if key in _INFIX:
            symbol, level = _INFIX[key]
            left, right = f.children
            ls = LogicFormatter.format_formula(left)
            rs = LogicFormatter.format_formula(right)
            if _strength(left) < level:
                ls = f"({ls})"
            # binary operators associate left
            if _strength(right) <= level:
                rs = f"({rs})"
            return f"{ls} {symbol} {rs}"
        return f"{f.op}({', '.join(LogicFormatter.format_formula(c) for c in f.children)})"

    @staticmethod
    def format_partition(p: Partition) -> str:
        return "{" + "|".join(",".join(block) for block in p.blocks) + "}"

    @staticmethod
    def format_value_map(f: ValueMap) -> str:
        return ", ".join(f"{v}->{w}" for v, w in f.pairs)

    @staticmethod
    def format_valuation(val: Mapping[str, str]) -> str:
        return ", ".join(f"{a}={v}" for a, v in sorted(val.items()))

    @staticmethod
    def _entry_args(m: Matrix, args) -> str:
        names = [m.values[a] for a in args]
        if len(names) == 1:
            return names[0]
        return "(" + ", ".join(names) + ")"

    @staticmethod
    def serialize_logic(m: Matrix) -> str:
        """Canonical .mvl text: declaration order throughout, entries row-major."""
        name = m.name.replace('"', "'")
        lines = [
            f'logic "{name}".',
            f"values: {', '.join(m.values)}.",
            f"designated: {', '.join(m.designated_in_order)}.",
        ]
        for op in m.operations:
            lines.append("")
            lines.append(f"op {op.name}/{op.arity} {{")
            for args in m.tuples(op.arity):
                out = m.values[m.lookup(op, args)]
                lines.append(f"  {LogicFormatter._entry_args(m, args)} -> {out}.")
            lines.append("}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def format_table(m: Matrix, op: Operation) -> str:
        """Plain-text truth table; binary operations as a grid, others as a list."""
        width = max(len(v) for v in m.values)
        star = {v: ("*" if v in m.designated else " ") for v in m.values}

        def cell(v: str) -> str:
            return f"{v}{star[v]}".ljust(width + 1)

        if op.arity == 2:
            header = " " * (width + 1) + " | " + " ".join(cell(v) for v in m.values)
            rows = [f"{op.name}", header, "-" * len(header)]
            for a in range(m.size):
                row = [cell(m.values[m.lookup(op, (a, b))]) for b in range(m.size)]
                rows.append(cell(m.values[a]) + " | " + " ".join(row))
            return "\n".join(rows)

        rows = [f"{op.name}/{op.arity}"]
        for args in m.tuples(op.arity):
            rows.append(f"  {LogicFormatter._entry_args(m, args)} -> {m.values[m.lookup(op, args)]}")
        return "\n".join(rows)

    @staticmethod
    def describe_matrix(m: Matrix) -> str:
        lines = [
            f"{m.name}: {m.size} values, {len(m.designated)} designated",
            f"values: {', '.join(m.values)}",
            f"designated: {', '.join(m.designated_in_order)}",
            f"operations: {', '.join(f'{op.name}/{op.arity}' for op in m.operations)}",
        ]
        for op in m.operations:
            lines.append("")
            lines.append(LogicFormatter.format_table(m, op))
        return "\n".join(lines)

    @staticmethod
    def matrix_to_dict(m: Matrix) -> Dict:
        return {
            "name": m.name,
            "values": list(m.values),
            "designated": m.designated_in_order,
            "operations": [
                {"name": op.name, "arity": op.arity,
                 "table": [[[m.values[a] for a in args], m.values[m.lookup(op, args)]]
                           for args in m.tuples(op.arity)]}
                for op in m.operations
            ],
        }


def serialize_logic(m: Matrix) -> str:
    return LogicFormatter.serialize_logic(m)


def format_formula(f: Formula) -> str:
    return LogicFormatter.format_formula(f)


def partition_to_list(p: Partition) -> List[List[str]]:
    return [list(block) for block in p.blocks]
