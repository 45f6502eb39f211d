import logging
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Optional, Tuple

from .errors import StatsDomainError
from .matrix import MAX_VALUES

logger = logging.getLogger(__name__)

Split = Tuple[Tuple[int, int], Tuple[int, int]]


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    """Stirling numbers of the second kind, S(n, k) = k S(n-1, k) + S(n-1, k-1)."""
    if n < 0 or k < 0:
        raise StatsDomainError(f"S({n}, {k}) is undefined for negative arguments")
    if n == k:
        return 1
    if n == 0 or k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def bell_number(n: int) -> int:
    if n < 0:
        raise StatsDomainError(f"B_{n} is undefined")
    return sum(stirling2(n, k) for k in range(n + 1))


def surjections(n: int, m: int) -> int:
    """Number of maps from an n-set onto an m-set: m! S(n, m)."""
    return factorial(m) * stirling2(n, m)


@dataclass(frozen=True)
class SearchStats:
    n: int
    k: int
    bell_designated: int
    bell_undesignated: int
    congruence_candidates: int
    bijection_candidates: int
    surjection_split: Optional[Split] = None
    surjection_candidates: Optional[int] = None


def search_space_stats(n: int, k: int, surjection_split: Optional[Split] = None) -> SearchStats:
    """
    Sizes of the naive search spaces for a matrix with n values of which k are
    designated. surjection_split ((n1, m1), (n2, m2)) counts the
    designation-respecting surjections sending n1 values onto m1 and n2 onto
    m2, with n1 + n2 = n.
    """
    if not 0 < k < n <= MAX_VALUES:
        raise StatsDomainError(f"need 0 < k < n <= {MAX_VALUES}, got n={n}, k={k}")

    surj = None
    if surjection_split is not None:
        (n1, m1), (n2, m2) = surjection_split
        if n1 + n2 != n:
            raise StatsDomainError(f"surjection split {n1}+{n2} does not add up to {n} values")
        for part, onto in ((n1, m1), (n2, m2)):
            if not 0 < onto <= part:
                raise StatsDomainError(f"cannot map {part} values onto {onto}")
        surj = surjections(n1, m1) * surjections(n2, m2)

    stats = SearchStats(
        n=n,
        k=k,
        bell_designated=bell_number(k),
        bell_undesignated=bell_number(n - k),
        congruence_candidates=bell_number(k) * bell_number(n - k),
        bijection_candidates=factorial(k) * factorial(n - k),
        surjection_split=surjection_split,
        surjection_candidates=surj,
    )
    logger.debug("Search space for n=%d, k=%d: %s", n, k, stats)
    return stats
