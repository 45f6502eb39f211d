import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional as Opt, Tuple

from arpeggio import EOF, NoMatch, Optional, ParserPython, PTNodeVisitor, ZeroOrMore, visit_parse_tree
from arpeggio import RegExMatch as _

from .errors import LogicSpecError, SourceError
from .formula import Atom, Compound, Formula
from .matrix import MAX_VALUES, Matrix, Operation, TruthValue, is_valid_value_name
from .partition import Partition

logger = logging.getLogger(__name__)

VALUE_PATTERN = r'(?:[^\s,{}()\.#:|"\-]|-(?!>))+'

# Formula symbols and the operations they stand for
SYMBOL_OPS = {"~": ("neg", 1), "&": ("and", 2), "|": ("or", 2)}


# ---------- spec grammar ----------

def comment():
    return _(r"#[^\n]*")


def value():
    return _(VALUE_PATTERN)


def value_list():
    return value, ZeroOrMore(",", value)


def logic_name():
    return _(r'"[^"\n]*"')


def logic_clause():
    return "logic", logic_name, "."


def values_clause():
    return "values", ":", value_list, "."


def designated_clause():
    return "designated", ":", Optional(value_list), "."


def op_name():
    return _(r"[A-Za-z_][A-Za-z0-9_]*")


def arity():
    return _(r"\d+")


def entry_args():
    return [("(", Optional(value_list), ")"), value]


def entry():
    return entry_args, "->", value, "."


def op_clause():
    return "op", op_name, "/", arity, "{", ZeroOrMore(entry), "}"


def clause():
    return [logic_clause, values_clause, designated_clause, op_clause]


def logic_spec():
    return ZeroOrMore(clause), EOF


# ---------- formula grammar ----------

def atom_name():
    return _(r"[A-Za-z][A-Za-z0-9_]*")


def call_name():
    return _(r"[A-Za-z_][A-Za-z0-9_]*(?=\s*\()")


def neg_op():
    return _(r"~")


def call():
    return call_name, "(", Optional(disjunction, ZeroOrMore(",", disjunction)), ")"


def primary():
    return [call, ("(", disjunction, ")"), atom_name]


def negation():
    return ZeroOrMore(neg_op), primary


def conjunction():
    return negation, ZeroOrMore("&", negation)


def disjunction():
    return conjunction, ZeroOrMore("|", conjunction)


def formula():
    return disjunction, EOF


# ---------- partition literal grammar ----------

def part_block():
    return value, ZeroOrMore(",", value)


def partition():
    return "{", part_block, ZeroOrMore("|", part_block), "}", EOF


@lru_cache(maxsize=None)
def _parser(root: str) -> ParserPython:
    rules = {"logic_spec": logic_spec, "formula": formula, "partition": partition}
    return ParserPython(rules[root], comment if root == "logic_spec" else None)


def _parse_tree(root: str, text: str):
    parser = _parser(root)
    try:
        return parser, parser.parse(text)
    except NoMatch as e:
        expected = sorted({r.rule_name or getattr(r, "to_match", "") or r.name for r in e.rules})
        raise SourceError(e.line, e.col, f"unexpected input, expected {' or '.join(expected)}",
                          expected) from None


# ---------- parse tree items ----------

@dataclass(frozen=True)
class ValueToken:
    name: str
    line: int
    col: int


@dataclass(frozen=True)
class _Values:
    tokens: Tuple[ValueToken, ...]


@dataclass(frozen=True)
class _Entry:
    args: Tuple[ValueToken, ...]
    out: ValueToken
    line: int
    col: int


@dataclass(frozen=True)
class _Clause:
    kind: str  # "logic" | "values" | "designated" | "op"
    line: int
    col: int
    name: str = ""
    arity: int = 0
    tokens: Tuple[ValueToken, ...] = ()
    entries: Tuple[_Entry, ...] = ()


@dataclass(frozen=True)
class _Marker:
    text: str


def _only(children, kind):
    return [c for c in children if isinstance(c, kind)]


class _SpecVisitor(PTNodeVisitor):
    def __init__(self, parser: ParserPython):
        super().__init__()
        self.parser = parser

    def _pos(self, node) -> Tuple[int, int]:
        return self.parser.pos_to_linecol(node.position)

    def visit_value(self, node, children):
        return ValueToken(node.value, *self._pos(node))

    def visit_value_list(self, node, children):
        return _Values(tuple(_only(children, ValueToken)))

    def visit_logic_name(self, node, children):
        return _Marker(node.value[1:-1])

    def visit_op_name(self, node, children):
        return _Marker(node.value)

    def visit_arity(self, node, children):
        return int(node.value)

    def visit_entry_args(self, node, children):
        tokens = _only(children, ValueToken)
        for group in _only(children, _Values):
            tokens.extend(group.tokens)
        return _Values(tuple(tokens))

    def visit_entry(self, node, children):
        args = _only(children, _Values)[0]
        out = _only(children, ValueToken)[-1]
        return _Entry(args.tokens, out, *self._pos(node))

    def visit_logic_clause(self, node, children):
        return _Clause("logic", *self._pos(node), name=_only(children, _Marker)[0].text)

    def visit_values_clause(self, node, children):
        return _Clause("values", *self._pos(node), tokens=_only(children, _Values)[0].tokens)

    def visit_designated_clause(self, node, children):
        groups = _only(children, _Values)
        return _Clause("designated", *self._pos(node), tokens=groups[0].tokens if groups else ())

    def visit_op_clause(self, node, children):
        return _Clause("op", *self._pos(node),
                       name=_only(children, _Marker)[0].text,
                       arity=[c for c in children if type(c) is int][0],
                       entries=tuple(_only(children, _Entry)))

    def visit_clause(self, node, children):
        return _only(children, _Clause)[0]

    def visit_logic_spec(self, node, children):
        return _only(children, _Clause)


# ---------- spec semantics ----------

class _Issues:
    def __init__(self):
        self.items: List[Tuple[int, int, str]] = []

    def add(self, where, message: str) -> None:
        self.items.append((where.line, where.col, message))


def _single(clauses: List[_Clause], kind: str, issues: _Issues) -> Opt[_Clause]:
    found = [c for c in clauses if c.kind == kind]
    for extra in found[1:]:
        issues.add(extra, f"more than one {kind} clause")
    if not found:
        issues.items.append((1, 1, f"missing {kind} clause"))
        return None
    return found[0]


def _build_operation(op: _Clause, values: List[str], index: Dict[str, int], issues: _Issues) -> Opt[Operation]:
    where = f"op {op.name}/{op.arity}"
    n = len(values)
    table: Dict[Tuple[int, ...], Tuple[int, _Entry]] = {}
    ok = True
    for e in op.entries:
        if len(e.args) != op.arity:
            issues.add(e, f"{where}: entry has {len(e.args)} arguments, expected {op.arity}")
            ok = False
            continue
        unknown = [t for t in list(e.args) + [e.out] if t.name not in index]
        for t in unknown:
            issues.add(t, f"{where}: value {t.name} not declared")
        if unknown:
            ok = False
            continue
        key = tuple(index[t.name] for t in e.args)
        out = index[e.out.name]
        names = "(" + ", ".join(t.name for t in e.args) + ")"
        if key in table:
            previous = table[key][0]
            if previous != out:
                issues.add(e, f"{where}: conflicting entries for {names}: "
                              f"{values[previous]} and {e.out.name}")
                ok = False
            else:
                logger.warning("%d:%d: %s: duplicate entry for %s", e.line, e.col, where, names)
            continue
        table[key] = (out, e)

    for key in product(range(n), repeat=op.arity):
        if key not in table:
            issues.add(op, f"{where}: missing entry ({', '.join(values[i] for i in key)})")
            ok = False
    if not ok:
        return None
    return Operation(op.name, op.arity, tuple(table[key][0] for key in product(range(n), repeat=op.arity)))


def _build_matrix(clauses: List[_Clause]) -> Matrix:
    issues = _Issues()
    logic = _single(clauses, "logic", issues)
    values_clause_ = _single(clauses, "values", issues)
    designated_clause_ = _single(clauses, "designated", issues)

    values: List[str] = []
    if values_clause_ is not None:
        for t in values_clause_.tokens:
            if t.name in values:
                issues.add(t, f"duplicate value {t.name}")
            elif not is_valid_value_name(t.name):
                issues.add(t, f"invalid value name {t.name!r}")
            else:
                values.append(t.name)
        if len(values) > MAX_VALUES:
            issues.add(values_clause_, f"{len(values)} values declared, at most {MAX_VALUES} are supported")
    index = {v: i for i, v in enumerate(values)}

    designated = set()
    if designated_clause_ is not None:
        for t in designated_clause_.tokens:
            if t.name not in index:
                issues.add(t, f"designated value {t.name} not declared")
            designated.add(t.name)
        if not designated_clause_.tokens:
            issues.add(designated_clause_, "designated set empty")
        elif values and set(values) <= designated:
            issues.add(designated_clause_, "no undesignated value")

    operations = []
    seen = set()
    for op in (c for c in clauses if c.kind == "op"):
        if (op.name, op.arity) in seen:
            issues.add(op, f"duplicate operation {op.name}/{op.arity}")
            continue
        seen.add((op.name, op.arity))
        built = _build_operation(op, values, index, issues)
        if built is not None:
            operations.append(built)

    if issues.items:
        raise LogicSpecError(issues.items)
    m = Matrix(logic.name, tuple(values), frozenset(designated), tuple(operations))
    logger.debug("Parsed logic %s: %d values, %d operations", m.name, m.size, len(operations))
    return m


def parse_logic(text: str) -> Matrix:
    """Parse .mvl text; syntax errors raise SourceError, semantic ones LogicSpecError."""
    parser, tree = _parse_tree("logic_spec", text)
    clauses = visit_parse_tree(tree, _SpecVisitor(parser))
    return _build_matrix(list(clauses))


def load_logic(path: str) -> Matrix:
    with open(path, "rb") as f:
        data = f.read()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        line = data.count(b"\n", 0, e.start) + 1
        column = e.start - (data.rfind(b"\n", 0, e.start) + 1) + 1
        raise SourceError(line, column, f"{path} is not UTF-8 text (byte 0x{data[e.start]:02x})") from None
    return parse_logic(text)


# ---------- formulas ----------

class _FormulaVisitor(PTNodeVisitor):
    def visit_atom_name(self, node, children):
        return Atom(node.value)

    def visit_call_name(self, node, children):
        return _Marker(node.value)

    def visit_neg_op(self, node, children):
        return _Marker("~")

    def visit_call(self, node, children):
        name = _only(children, _Marker)[0].text
        args = tuple(c for c in children if isinstance(c, (Atom, Compound)))
        return Compound(name, args)

    def visit_primary(self, node, children):
        return [c for c in children if isinstance(c, (Atom, Compound))][0]

    def visit_negation(self, node, children):
        f = [c for c in children if isinstance(c, (Atom, Compound))][0]
        for _m in _only(children, _Marker):
            f = Compound(SYMBOL_OPS["~"][0], (f,))
        return f

    def _fold(self, children, symbol: str):
        parts = [c for c in children if isinstance(c, (Atom, Compound))]
        f = parts[0]
        for g in parts[1:]:
            f = Compound(SYMBOL_OPS[symbol][0], (f, g))
        return f

    def visit_conjunction(self, node, children):
        return self._fold(children, "&")

    def visit_disjunction(self, node, children):
        return self._fold(children, "|")

    def visit_formula(self, node, children):
        return [c for c in children if isinstance(c, (Atom, Compound))][0]


def parse_formula(text: str) -> Formula:
    """~ binds tighter than &, & tighter than |; binary operators associate left."""
    _, tree = _parse_tree("formula", text)
    return visit_parse_tree(tree, _FormulaVisitor())


# ---------- partitions and valuations ----------

class _PartitionVisitor(PTNodeVisitor):
    def visit_value(self, node, children):
        return ValueToken(node.value, 0, 0)

    def visit_part_block(self, node, children):
        return _Values(tuple(_only(children, ValueToken)))

    def visit_partition(self, node, children):
        return [[t.name for t in block.tokens] for block in _only(children, _Values)]


def parse_partition(text: str, m: Matrix) -> Partition:
    """`{a,b|c|d,e}`: blocks separated by |, members by commas."""
    _, tree = _parse_tree("partition", text)
    return Partition.from_blocks(m, visit_parse_tree(tree, _PartitionVisitor()))


def parse_valuation(text: str) -> Dict[str, TruthValue]:
    """`A=tf,B=ff`."""
    valuation = {}
    col = 1
    for item in text.split(","):
        name, sep, val = item.strip().partition("=")
        if not sep or not name or not val:
            raise SourceError(1, col, f"expected atom=value, got {item.strip()!r}", ["atom=value"])
        valuation[name.strip()] = val.strip()
        col += len(item) + 1
    return valuation
