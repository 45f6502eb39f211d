import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .errors import BudgetExhaustedError, UnverifiedCongruenceError
from .homomorphism import Verdict, Violation
from .matrix import Matrix, Operation
from .partition import Partition
from .search_budget import SearchBudget
from .value_map import ValueMap

logger = logging.getLogger(__name__)

# Prefix fan-out per worker when the census runs in parallel.
_PREFIXES_PER_JOB = 4


@dataclass(frozen=True)
class Congruence:
    partition: Partition
    verified: bool = False

    @property
    def blocks(self) -> Tuple[Tuple[str, ...], ...]:
        return self.partition.blocks

    def __len__(self) -> int:
        return len(self.partition)


def is_congruence(m: Matrix, p: Partition) -> Verdict:
    """
    p respects designation and every operation blockwise. Operation
    compatibility is checked one argument position at a time, replacing a
    value by its block representative; single replacements generate all.
    """
    labels = p.labels(m)
    for block in p.blocks:
        marks = {v: v in m.designated for v in block}
        if len(set(marks.values())) > 1:
            d = next(v for v in block if marks[v])
            u = next(v for v in block if not marks[v])
            return Verdict(False, Violation(
                "designation",
                f"block {{{','.join(block)}}} mixes designated {d} with undesignated {u}",
                values=(d, u),
            ))

    reps = [m.index(block[0]) for block in p.blocks]
    for op in m.operations:
        for args in m.tuples(op.arity):
            out = labels[m.lookup(op, args)]
            for i, a in enumerate(args):
                r = reps[labels[a]]
                if r == a:
                    continue
                other = args[:i] + (r,) + args[i + 1:]
                if labels[m.lookup(op, other)] != out:
                    names = tuple(m.values[x] for x in args)
                    other_names = tuple(m.values[x] for x in other)
                    res = (m.values[m.lookup(op, args)], m.values[m.lookup(op, other)])
                    return Verdict(False, Violation(
                        "operation",
                        f"{op.name}{names} = {res[0]} and {op.name}{other_names} = {res[1]} "
                        f"fall into different blocks",
                        op=op.name, args=names, other_args=other_names, values=res,
                    ))
    return Verdict(True)


def verify_congruence(m: Matrix, p: Partition) -> Congruence:
    verdict = is_congruence(m, p)
    if not verdict:
        raise UnverifiedCongruenceError(f"not a congruence of {m.name}: {verdict.violation.message}")
    return Congruence(p, verified=True)


# ---------- principal congruences ----------

def _translations(m: Matrix) -> List[Tuple[int, ...]]:
    """Unary maps x -> op(c1, ..., x, ..., ck) for every op, position and constants."""
    seen = {}
    n = m.size
    for op in m.operations:
        if op.arity == 0:
            continue
        for rest in m.tuples(op.arity - 1):
            for i in range(op.arity):
                t = tuple(m.lookup(op, rest[:i] + (x,) + rest[i:]) for x in range(n))
                seen.setdefault(t, None)
    return list(seen)


def _closure(n: int, translations: Sequence[Tuple[int, ...]], a: int, b: int) -> List[int]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        rx, ry = find(x), find(y)
        if rx == ry:
            continue
        parent[max(rx, ry)] = min(rx, ry)
        for t in translations:
            if t[x] != t[y]:
                stack.append((t[x], t[y]))
    return [find(x) for x in range(n)]


def principal_congruence(m: Matrix, a: str, b: str) -> Partition:
    """Least operation-compatible equivalence identifying a and b."""
    roots = _closure(m.size, _translations(m), m.index(a), m.index(b))
    return Partition.from_labels(m, roots)


# ---------- census ----------

class _CongruenceSearch:
    """
    Restricted-growth-string backtracking over block labels in declaration
    order. A value joining the block of representative r commits the search
    to the principal congruence of (r, value); the partial labelling must
    stay a refinement-closed superset of every committed one.
    """

    def __init__(self, m: Matrix, blocks: Optional[int] = None):
        self.m = m
        self.n = m.size
        self.blocks = blocks
        translations = _translations(m)
        mask = m.designated_mask
        # chains[(r, i)][x]: previous value in x's block of theta(r, i), or -1;
        # None when theta(r, i) mixes designation
        self.chains: Dict[Tuple[int, int], Optional[Tuple[int, ...]]] = {}
        for i in range(self.n):
            for r in range(i):
                if mask[r] != mask[i]:
                    self.chains[(r, i)] = None
                    continue
                roots = _closure(self.n, translations, r, i)
                if any(mask[x] != mask[roots[x]] for x in range(self.n)):
                    self.chains[(r, i)] = None
                    continue
                last = {}
                chain = []
                for x, root in enumerate(roots):
                    chain.append(last.get(root, -1))
                    last[root] = x
                self.chains[(r, i)] = tuple(chain)
        forbidden = sum(1 for c in self.chains.values() if c is None)
        logger.debug("%s: %d of %d value pairs can never share a block",
                     m.name, forbidden, len(self.chains))

    def run(self, budget: SearchBudget, prefix: Sequence[int] = (),
            stop: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
        """Labellings (or prefixes of length `stop`) in lexicographic order."""
        self._labels = [-1] * self.n
        self._reps: List[int] = []
        self._edges: List[Tuple[int, ...]] = []
        self._prefix = tuple(prefix)
        self._stop = self.n if stop is None else stop
        self._budget = budget.start()
        return self._extend(0)

    def _older_edges_ok(self, i: int) -> bool:
        labels = self._labels
        for chain in self._edges:
            p = chain[i]
            if p >= 0 and labels[p] != labels[i]:
                return False
        return True

    def _extend(self, i: int) -> Iterator[Tuple[int, ...]]:
        self._budget.tick()
        labels, reps = self._labels, self._reps
        if i == self._stop:
            yield tuple(labels[:i])
            return
        nb = len(reps)
        if self.blocks is not None and nb + (self.n - i) < self.blocks:
            return
        if i < len(self._prefix):
            choices = [self._prefix[i]]
        else:
            choices = range(nb + 1)

        for j in choices:
            labels[i] = j
            if j < nb:
                chain = self.chains[(reps[j], i)]
                if chain is None or not self._older_edges_ok(i):
                    continue
                if any(chain[x] >= 0 and labels[x] != labels[chain[x]] for x in range(i + 1)):
                    continue
                self._edges.append(chain)
                yield from self._extend(i + 1)
                self._edges.pop()
            else:
                if self.blocks is not None and nb + 1 > self.blocks:
                    continue
                if not self._older_edges_ok(i):
                    continue
                reps.append(i)
                yield from self._extend(i + 1)
                reps.pop()
        labels[i] = -1


def _collect(search: _CongruenceSearch, budget: SearchBudget, prefix: Sequence[int],
             include_identity: bool, limit: Optional[int]) -> Tuple[List[Tuple[int, ...]], Optional[str]]:
    identity = tuple(range(search.n))
    found = []
    try:
        for labels in search.run(budget, prefix):
            if labels == identity and not include_identity:
                continue
            found.append(labels)
            if limit is not None and len(found) >= limit:
                break
    except BudgetExhaustedError as e:
        return found, e.reason
    return found, None


def _search_worker(m: Matrix, blocks: Optional[int], prefix: Tuple[int, ...],
                   seconds: Optional[float], max_nodes: Optional[int],
                   include_identity: bool, limit: Optional[int]):
    # returns plain data: BudgetExhaustedError does not survive pickling
    search = _CongruenceSearch(m, blocks)
    found, reason = _collect(search, SearchBudget(seconds, max_nodes), prefix, include_identity, limit)
    return found, reason, search._budget.nodes


def _prefixes(search: _CongruenceSearch, jobs: int) -> List[Tuple[int, ...]]:
    prefixes: List[Tuple[int, ...]] = [()]
    for depth in range(1, search.n + 1):
        prefixes = list(search.run(SearchBudget.unlimited(), stop=depth))
        if len(prefixes) >= jobs * _PREFIXES_PER_JOB:
            break
    return prefixes


def enumerate_congruences(m: Matrix, include_identity: bool = False, limit: Optional[int] = None,
                          budget: Optional[SearchBudget] = None, blocks: Optional[int] = None,
                          jobs: int = 1) -> List[Congruence]:
    """
    Every congruence of m, sorted by ascending block count and then by the
    member positions of the blocks. With `limit`, the first `limit` found in
    search order are returned (sorted). `blocks` restricts the census to
    congruences with exactly that many classes.
    """
    budget = budget or SearchBudget()
    search = _CongruenceSearch(m, blocks)
    reason = None

    if jobs <= 1:
        found, reason = _collect(search, budget, (), include_identity, limit)
        logger.debug("%s: congruence search visited %d nodes", m.name, budget.nodes)
    else:
        prefixes = _prefixes(search, jobs)
        logger.debug("%s: splitting congruence search into %d prefixes over %d workers",
                     m.name, len(prefixes), jobs)
        child = budget.child()
        found = []
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_search_worker, m, blocks, p, child.seconds, child.max_nodes,
                                   include_identity, limit) for p in prefixes]
            for future in futures:
                part, part_reason, nodes = future.result()
                found.extend(part)
                budget.nodes += nodes
                reason = reason or part_reason
        if limit is not None:
            found = found[:limit]

    congruences = sorted(
        (Congruence(Partition.from_labels(m, labels), verified=True) for labels in found),
        key=lambda c: c.partition.sort_key(m),
    )
    if reason is not None:
        raise BudgetExhaustedError(
            reason,
            f"congruence search of {m.name} ran out of {reason} budget; "
            f"{len(congruences)} congruences found so far",
            partial=congruences,
        )
    logger.info("Found %d congruences of %s", len(congruences), m.name)
    return congruences


# ---------- factors ----------

def factor_matrix(m: Matrix, c: Congruence) -> Tuple[Matrix, ValueMap]:
    """
    Quotient of m by c: classes named by joining members with "·", operations
    lifted through block representatives. Returns the factor and the
    projection v -> [v].
    """
    if not c.verified:
        raise UnverifiedCongruenceError(
            f"factor_matrix needs a verified congruence of {m.name}; use verify_congruence first"
        )
    p = c.partition
    labels = p.labels(m)
    names = tuple("·".join(block) for block in p.blocks)
    reps = [m.index(block[0]) for block in p.blocks]

    shape = Matrix("", names, frozenset(), ())
    operations = []
    for op in m.operations:
        table = tuple(labels[m.lookup(op, [reps[b] for b in args])] for args in shape.tuples(op.arity))
        operations.append(Operation(op.name, op.arity, table))

    designated = frozenset(names[b] for b, r in enumerate(reps) if m.designated_mask[r])
    factor = Matrix(f"{m.name}/{len(names)}", names, designated, tuple(operations))
    projection = ValueMap.from_indices(m, factor, labels, kind="epi")
    logger.debug("Built factor %s with %d designated classes", factor.name, len(designated))
    return factor, projection
