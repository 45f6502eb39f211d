import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, List, Optional, Sequence, Set, Tuple

from .errors import BudgetExhaustedError, TableauError
from .formula import Atom, Formula, atoms_of
from .logic_formatter import LogicFormatter
from .matrix import Matrix, TruthValue
from .search_budget import SearchBudget
from .semantics import Valuation
from .tableau_rules import Rule, RuleKey

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SignedFormula:
    """sign:formula, satisfied when the formula does not take the sign."""
    sign: TruthValue
    formula: Formula

    def __str__(self) -> str:
        return f"{self.sign}:{LogicFormatter.format_formula(self.formula)}"


@dataclass(eq=False)
class Node:
    id: int
    signed: SignedFormula
    parent: Optional[int]
    children: List[int] = field(default_factory=list)


@dataclass(eq=False)
class Branch:
    leaf: int
    masks: Dict[Formula, int] = field(default_factory=dict)
    pending: Deque[int] = field(default_factory=deque)
    members: Set[int] = field(default_factory=set)
    expanded: Set[Tuple[Formula, TruthValue]] = field(default_factory=set)
    closed: bool = False
    closed_on: Optional[Formula] = None

    def copy(self) -> "Branch":
        return Branch(self.leaf, dict(self.masks), deque(self.pending), set(self.members),
                      set(self.expanded), self.closed, self.closed_on)


@dataclass
class TableauStats:
    nodes: int = 0
    expansions: int = 0
    branches: int = 0
    closed: int = 0


class Tableau:
    """
    Tree of signed formulas. A branch closes as soon as some formula carries
    every value of the matrix as a sign; closed branches are never extended.
    """

    def __init__(self, m: Matrix, rules: Dict[RuleKey, Rule], initial: Sequence[SignedFormula]):
        if not initial:
            raise TableauError("a tableau needs at least one signed formula")
        self.m = m
        self.rules = rules
        self.nodes: List[Node] = []
        self.expansions = 0
        self._full = (1 << m.size) - 1
        branch = Branch(leaf=-1)
        for sf in initial:
            self._append(branch, sf)
        self.branches: List[Branch] = [branch]

    # ---------- building ----------

    def _append(self, branch: Branch, sf: SignedFormula) -> int:
        bit = 1 << self.m.index(sf.sign)
        parent = branch.leaf if branch.leaf >= 0 else None
        node = Node(len(self.nodes), sf, parent)
        self.nodes.append(node)
        if parent is not None:
            self.nodes[parent].children.append(node.id)
        branch.leaf = node.id
        branch.members.add(node.id)

        known = branch.masks.get(sf.formula, 0)
        branch.masks[sf.formula] = known | bit
        if not known & bit and not isinstance(sf.formula, Atom):
            branch.pending.append(node.id)
        if branch.masks[sf.formula] == self._full and not branch.closed:
            branch.closed = True
            branch.closed_on = sf.formula
        return node.id

    def _rule_for(self, sf: SignedFormula) -> Rule:
        f = sf.formula
        try:
            return self.rules[(f.op, f.arity, sf.sign)]
        except KeyError:
            raise TableauError(f"no rule for {sf.sign}:{f.op}/{f.arity}") from None

    def _apply(self, branch: Branch, node_id: int, literal: bool) -> List[Branch]:
        """Branches replacing `branch` after expanding node_id on it."""
        sf = self.nodes[node_id].signed
        branch.expanded.add((sf.formula, sf.sign))
        self.expansions += 1
        rule = self._rule_for(sf)

        if not rule.branches:
            branch.closed = True
            branch.closed_on = sf.formula
            return [branch]

        children = [[SignedFormula(sign, sf.formula.children[i]) for i, sign in rule.signed_children(rb)]
                    for rb in rule.branches]
        if any(not c for c in children):
            return [branch]
        if not literal:
            fresh = [[c for c in cs if not branch.masks.get(c.formula, 0) >> self.m.index(c.sign) & 1]
                     for cs in children]
            if any(not c for c in fresh):
                return [branch]
            children = fresh

        result = []
        for k, signed in enumerate(children):
            b = branch if k == len(children) - 1 else branch.copy()
            for child in signed:
                self._append(b, child)
            result.append(b)
        return result

    def expand(self, node_id: int) -> "Tableau":
        """Apply the node's rule on every open branch through it that has not used it yet."""
        if not 0 <= node_id < len(self.nodes):
            raise TableauError(f"no node {node_id}")
        sf = self.nodes[node_id].signed
        if isinstance(sf.formula, Atom):
            raise TableauError(f"node {node_id} ({sf}) is atomic")
        targets = [b for b in self.branches if node_id in b.members and not b.closed]
        todo = [b for b in targets if (sf.formula, sf.sign) not in b.expanded]
        if targets and not todo:
            raise TableauError(f"node {node_id} ({sf}) is already expanded")

        branches = []
        for b in self.branches:
            if any(b is t for t in todo):
                branches.extend(self._apply(b, node_id, literal=True))
            else:
                branches.append(b)
        self.branches = branches
        return self

    # ---------- inspection ----------

    @property
    def closed(self) -> bool:
        return all(b.closed for b in self.branches)

    def open_branches(self) -> List[Branch]:
        return [b for b in self.branches if not b.closed]

    def stats(self) -> TableauStats:
        return TableauStats(
            nodes=len(self.nodes),
            expansions=self.expansions,
            branches=len(self.branches),
            closed=sum(1 for b in self.branches if b.closed),
        )

    def _closed_leaves(self) -> Set[int]:
        return {b.leaf for b in self.branches if b.closed}

    def render(self) -> str:
        """Indented proof tree, one signed formula per line, closed leaves marked ×."""
        closed = self._closed_leaves()
        lines = []

        def walk(node_id: int, indent: int):
            while True:
                node = self.nodes[node_id]
                mark = " ×" if node_id in closed else ""
                lines.append(f"{'  ' * indent}{node.signed}{mark}")
                if len(node.children) != 1:
                    break
                node_id = node.children[0]
            for child in node.children:
                walk(child, indent + 1)

        walk(0, 0)
        return "\n".join(lines)

    def to_tree(self) -> list:
        """[signed formula, closed, [subtrees]] per node."""
        closed = self._closed_leaves()

        def build(node_id: int) -> list:
            node = self.nodes[node_id]
            return [str(node.signed), node_id in closed, [build(c) for c in node.children]]

        return build(0)


@dataclass
class ProofResult:
    holds: bool
    tableau: Tableau
    open_branch: Optional[Branch] = None
    countervaluation: Optional[Valuation] = None

    def __bool__(self) -> bool:
        return self.holds


def initial_signed_set(m: Matrix, premises: Sequence[Formula], conclusion: Formula) -> List[SignedFormula]:
    """Every undesignated sign on each premise, every designated sign on the conclusion."""
    signed = [SignedFormula(v, p) for p in premises for v in m.values if v not in m.designated]
    signed.extend(SignedFormula(v, conclusion) for v in m.designated_in_order)
    return signed


def prove_entailment(m: Matrix, rules: Dict[RuleKey, Rule], premises: Sequence[Formula],
                     conclusion: Formula, budget: Optional[SearchBudget] = None) -> ProofResult:
    """
    Saturate the tableau for premises => conclusion, one expansion per branch
    turn in FIFO order. A closed tableau proves the entailment; a saturated
    open branch yields a countervaluation.
    """
    budget = (budget or SearchBudget()).start()
    premises = list(premises)
    tableau = Tableau(m, rules, initial_signed_set(m, premises, conclusion))
    queue: Deque[Branch] = deque(tableau.branches)

    try:
        while queue:
            branch = queue.popleft()
            if branch.closed:
                continue
            node_id = None
            while branch.pending:
                candidate = branch.pending.popleft()
                sf = tableau.nodes[candidate].signed
                if (sf.formula, sf.sign) not in branch.expanded:
                    node_id = candidate
                    break
            if node_id is None:
                return _open_result(m, tableau, branch, premises, conclusion)
            budget.tick()
            produced = tableau._apply(branch, node_id, literal=False)
            _replace(tableau, branch, produced)
            queue.extend(b for b in produced if not b.closed)
    except BudgetExhaustedError as e:
        raise BudgetExhaustedError(e.reason, f"tableau proof in {m.name}: {e}") from e

    s = tableau.stats()
    logger.info("Closed tableau in %s: %d nodes, %d branches, %d expansions",
                m.name, s.nodes, s.branches, s.expansions)
    return ProofResult(True, tableau)


def _replace(tableau: Tableau, branch: Branch, produced: List[Branch]) -> None:
    pos = next(i for i, b in enumerate(tableau.branches) if b is branch)
    tableau.branches[pos:pos + 1] = produced


def _open_result(m: Matrix, tableau: Tableau, branch: Branch,
                 premises: Sequence[Formula], conclusion: Formula) -> ProofResult:
    counter = {}
    for a in atoms_of(list(premises) + [conclusion]):
        mask = branch.masks.get(Atom(a), 0)
        counter[a] = next(v for i, v in enumerate(m.values) if not mask >> i & 1)
    logger.info("Open saturated branch in %s, countervaluation %s", m.name, counter)
    return ProofResult(False, tableau, branch, counter)
