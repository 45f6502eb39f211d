import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Sequence, Tuple

from .matrix import Matrix, TruthValue

logger = logging.getLogger(__name__)

RuleKey = Tuple[str, int, TruthValue]
Masks = Tuple[int, ...]


@dataclass(frozen=True)
class Rule:
    """
    Branch expansion rule for sign:op(A1..Ak). Each branch is a tuple of
    per-argument bitmasks over declaration order; bit u at position i stands
    for the constraint u:Ai ("Ai does not take u").
    """
    op: str
    arity: int
    sign: TruthValue
    values: Tuple[TruthValue, ...]
    branches: Tuple[Masks, ...]

    @property
    def key(self) -> RuleKey:
        return self.op, self.arity, self.sign

    def constraints(self) -> List[FrozenSet[Tuple[TruthValue, int]]]:
        """Branches as sets of (sign, argument index) pairs."""
        return [frozenset((self.values[u], i)
                          for i, mask in enumerate(branch)
                          for u in range(len(self.values)) if mask >> u & 1)
                for branch in self.branches]

    def satisfied_by(self, args: Sequence[int]) -> bool:
        """Some branch admits the argument positions."""
        return any(all(not (mask >> a & 1) for mask, a in zip(branch, args))
                   for branch in self.branches)

    def signed_children(self, branch: Masks) -> List[Tuple[int, TruthValue]]:
        """(argument index, sign) pairs a branch adds, argument-major."""
        return [(i, self.values[u])
                for i, mask in enumerate(branch)
                for u in range(len(self.values)) if mask >> u & 1]


def _subsumes(small: Masks, big: Masks) -> bool:
    return all(s & ~b == 0 for s, b in zip(small, big))


def generate_rule(m: Matrix, op_name: str, arity: int, sign: TruthValue, prune: bool = True) -> Rule:
    """
    op(t) != sign is the conjunction, over tuples t with op(t) = sign, of
    "some argument i differs from t_i". The conjunction is multiplied out
    one clause at a time; a branch already meeting a clause is kept as is,
    branches excluding every value of an argument are dropped. With prune,
    branches including another branch are removed as they appear.
    """
    op = m.operation(op_name, arity)
    s = m.index(sign)
    full = (1 << m.size) - 1
    branches: List[Masks] = [(0,) * arity]

    for t in m.tuples(arity):
        if m.lookup(op, t) != s:
            continue
        kept, fresh = [], {}
        for b in branches:
            if any(b[i] >> t[i] & 1 for i in range(arity)):
                kept.append(b)
                continue
            for i in range(arity):
                mask = b[i] | 1 << t[i]
                if mask == full:
                    continue
                fresh.setdefault(b[:i] + (mask,) + b[i + 1:], None)
        fresh_list = list(fresh)
        if prune:
            fresh_list = [b for b in fresh_list
                          if not any(_subsumes(k, b) for k in kept)
                          and not any(c != b and _subsumes(c, b) for c in fresh_list)]
        branches = kept + fresh_list

    branches.sort(key=lambda b: (sum(bin(x).count("1") for x in b), b))
    return Rule(op_name, arity, sign, m.values, tuple(branches))


def generate_rules(m: Matrix, prune: bool = True) -> Dict[RuleKey, Rule]:
    """One rule per operation and sign, in declaration order."""
    rules = {}
    for op in m.operations:
        for sign in m.values:
            rule = generate_rule(m, op.name, op.arity, sign, prune)
            rules[rule.key] = rule
    logger.info("Generated %d tableau rules for %s (%d branches)",
                len(rules), m.name, sum(len(r.branches) for r in rules.values()))
    return rules
