import logging
from typing import Dict, List, Optional

from .errors import ForeignPartitionError
from .matrix import Matrix, Operation
from .partition import Partition
from .tableau_rules import Rule, RuleKey

logger = logging.getLogger(__name__)

PALETTE = ("red", "blue", "teal", "orange", "violet", "olive", "magenta", "brown", "purple")

PREAMBLE = (
    "% requires \\usepackage{xcolor}\n"
    "\\providecommand{\\nc}[2]{\\textcolor{#1}{#2}}\n"
    "\\providecommand{\\dc}[2]{\\colorbox{#1!25}{#2}}\n"
    "\\providecommand{\\dv}[1]{\\textbf{#1}}\n"
)

_SYMBOLS = {("neg", 1): "\\neg", ("and", 2): "\\wedge", ("or", 2): "\\vee"}

_ESCAPES = {
    "\\": "\\textbackslash{}", "&": "\\&", "%": "\\%", "$": "\\$", "#": "\\#",
    "_": "\\_", "{": "\\{", "}": "\\}", "~": "\\textasciitilde{}", "^": "\\textasciicircum{}",
}


def escape_latex(text: str) -> str:
    return "".join(_ESCAPES.get(c, c) for c in text)


def _op_symbol(op_name: str, arity: int) -> str:
    return _SYMBOLS.get((op_name, arity), f"\\textsf{{{escape_latex(op_name)}}}")


class LatexReportGenerator:
    """
    Truth tables and tableau rules as LaTeX fragments. With a partition, all
    values of one class share a color; designated classes are boxed.
    """

    def __init__(self, m: Matrix, classes: Optional[Partition] = None):
        self.m = m
        self.colors: Dict[str, str] = {}
        if classes is not None:
            try:
                classes.check_against(m)
            except ForeignPartitionError as e:
                raise ForeignPartitionError(f"cannot color the tables of {m.name}: {e}") from None
            for b, block in enumerate(classes.blocks):
                for v in block:
                    self.colors[v] = PALETTE[b % len(PALETTE)]

    def _cell(self, v: str) -> str:
        text = escape_latex(v)
        designated = v in self.m.designated
        if v in self.colors:
            return f"\\{'dc' if designated else 'nc'}{{{self.colors[v]}}}{{{text}}}"
        return f"\\dv{{{text}}}" if designated else text

    def _binary_table(self, op: Operation) -> List[str]:
        m = self.m
        lines = [f"\\begin{{tabular}}{{c|{'c' * m.size}}}",
                 f"${_op_symbol(op.name, 2)}$ & " + " & ".join(self._cell(v) for v in m.values) + " \\\\",
                 "\\hline"]
        for a in range(m.size):
            row = [self._cell(m.values[m.lookup(op, (a, b))]) for b in range(m.size)]
            lines.append(self._cell(m.values[a]) + " & " + " & ".join(row) + " \\\\")
        lines.append("\\end{tabular}")
        return lines

    def _list_table(self, op: Operation) -> List[str]:
        m = self.m
        columns = "c" * max(op.arity, 1)
        header = " & ".join(f"$A_{{{i + 1}}}$" for i in range(op.arity)) or "$()$"
        lines = [f"\\begin{{tabular}}{{{columns}|c}}",
                 f"{header} & ${_op_symbol(op.name, op.arity)}$ \\\\",
                 "\\hline"]
        for args in m.tuples(op.arity):
            cells = [self._cell(m.values[a]) for a in args] or ["--"]
            lines.append(" & ".join(cells) + f" & {self._cell(m.values[m.lookup(op, args)])} \\\\")
        lines.append("\\end{tabular}")
        return lines

    def tables(self) -> str:
        parts = [PREAMBLE, f"% truth tables of {escape_latex(self.m.name)}\n"]
        for op in self.m.operations:
            lines = self._binary_table(op) if op.arity == 2 else self._list_table(op)
            parts.append("\n".join(lines) + "\n\n")
        logger.debug("Rendered %d LaTeX tables of %s", len(self.m.operations), self.m.name)
        return "".join(parts)

    def rules(self, rules: Dict[RuleKey, Rule]) -> str:
        parts = [PREAMBLE, f"% tableau rules of {escape_latex(self.m.name)}\n"]
        for rule in rules.values():
            args = ", ".join(f"A_{{{i + 1}}}" for i in range(rule.arity))
            premise = f"{self._cell(rule.sign)} : ${_op_symbol(rule.op, rule.arity)}({args})$"
            if not rule.branches:
                conclusion = "$\\times$"
            else:
                branches = []
                for branch in rule.branches:
                    signed = [f"{self._cell(sign)} : $A_{{{i + 1}}}$" for i, sign in rule.signed_children(branch)]
                    branches.append(", ".join(signed) or "$\\emptyset$")
                conclusion = " $\\mid$ ".join(branches)
            parts.append("\\begin{tabular}{c}\n"
                         f"{premise} \\\\\n"
                         "\\hline\n"
                         f"{conclusion}\n"
                         "\\end{tabular}\n\n")
        logger.debug("Rendered %d LaTeX rules of %s", len(rules), self.m.name)
        return "".join(parts)


def emit_latex_tables(m: Matrix, classes: Optional[Partition] = None) -> str:
    return LatexReportGenerator(m, classes).tables()


def emit_latex_rules(m: Matrix, rules: Dict[RuleKey, Rule]) -> str:
    return LatexReportGenerator(m).rules(rules)
