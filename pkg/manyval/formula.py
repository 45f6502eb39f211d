import random
import re
from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple, Union

ATOM_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")

Signature = Sequence[Tuple[str, int]]


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not ATOM_RE.match(self.name):
            raise ValueError(f"invalid atom name {self.name!r}")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Compound:
    op: str
    children: Tuple["Formula", ...]

    @property
    def arity(self) -> int:
        return len(self.children)

    def __str__(self) -> str:
        return f"{self.op}({', '.join(map(str, self.children))})"


Formula = Union[Atom, Compound]


def neg(a: Formula) -> Compound:
    return Compound("neg", (a,))


def conj(a: Formula, b: Formula) -> Compound:
    return Compound("and", (a, b))


def disj(a: Formula, b: Formula) -> Compound:
    return Compound("or", (a, b))


def atoms_of(formulas: Union[Formula, Sequence[Formula]]) -> List[str]:
    """Atom names occurring in the formula(s), sorted."""
    if isinstance(formulas, (Atom, Compound)):
        formulas = [formulas]
    names = set()
    stack = list(formulas)
    while stack:
        f = stack.pop()
        if isinstance(f, Atom):
            names.add(f.name)
        else:
            stack.extend(f.children)
    return sorted(names)


def depth(f: Formula) -> int:
    if isinstance(f, Atom):
        return 0
    return 1 + max((depth(c) for c in f.children), default=0)


def subformulas(f: Formula) -> List[Formula]:
    """Distinct subformulas, children before parents."""
    seen: Dict[Formula, None] = {}

    def visit(g):
        if g in seen:
            return
        if isinstance(g, Compound):
            for c in g.children:
                visit(c)
        seen[g] = None

    visit(f)
    return list(seen)


def formula_pool(atoms: Sequence[str], max_depth: int, signature: Signature) -> List[Formula]:
    """
    Every formula over the atoms and operations of depth at most max_depth,
    shallower formulas first, deterministic order.
    """
    pool: List[Formula] = [Atom(a) for a in atoms]
    for d in range(1, max_depth + 1):
        known = list(pool)
        fresh = []
        for name, arity in signature:
            for children in _tuples(known, arity):
                f = Compound(name, children)
                if depth(f) == d:
                    fresh.append(f)
        pool.extend(fresh)
    return pool


def _tuples(items: List[Formula], arity: int) -> Iterator[Tuple[Formula, ...]]:
    if arity == 0:
        yield ()
        return
    for head in items:
        for rest in _tuples(items, arity - 1):
            yield (head,) + rest


def random_formula(rng: random.Random, atoms: Sequence[str], max_depth: int,
                   signature: Signature, leaf_bias: float = 0.3) -> Formula:
    if max_depth == 0 or not signature or rng.random() < leaf_bias:
        return Atom(rng.choice(list(atoms)))
    name, arity = rng.choice(list(signature))
    return Compound(name, tuple(random_formula(rng, atoms, max_depth - 1, signature, leaf_bias)
                                for _ in range(arity)))
