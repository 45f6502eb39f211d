import logging
import time
from dataclasses import dataclass, field
from typing import Optional

from .errors import BudgetExhaustedError

logger = logging.getLogger(__name__)

DEFAULT_BUDGET_SECS = 600.0

# the clock is consulted once per this many nodes
_CLOCK_STRIDE = 1024


@dataclass
class SearchBudget:
    """
    Wall-clock and node-count limit shared by the backtracking searches.
    Either limit may be None (unbounded). The clock starts on first use.
    """
    seconds: Optional[float] = DEFAULT_BUDGET_SECS
    max_nodes: Optional[int] = None
    nodes: int = field(default=0, init=False)
    _deadline: Optional[float] = field(default=None, init=False, repr=False)

    @classmethod
    def unlimited(cls) -> "SearchBudget":
        return cls(seconds=None, max_nodes=None)

    def start(self) -> "SearchBudget":
        if self._deadline is None and self.seconds is not None:
            self._deadline = time.monotonic() + self.seconds
        return self

    def tick(self, count: int = 1) -> None:
        """Account for visited nodes; raises BudgetExhaustedError past a limit."""
        before = self.nodes
        self.nodes += count
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            logger.debug("Node budget exhausted at %d nodes", self.nodes)
            raise BudgetExhaustedError(
                "nodes", f"node budget of {self.max_nodes} exhausted"
            )
        if self.seconds is not None and before // _CLOCK_STRIDE != self.nodes // _CLOCK_STRIDE:
            self.check_clock()

    def check_clock(self) -> None:
        self.start()
        if self._deadline is not None and time.monotonic() > self._deadline:
            logger.debug("Time budget exhausted at %d nodes", self.nodes)
            raise BudgetExhaustedError(
                "time", f"time budget of {self.seconds:g}s exhausted after {self.nodes} nodes"
            )

    def remaining(self) -> Optional[float]:
        if self.seconds is None:
            return None
        self.start()
        return max(0.0, self._deadline - time.monotonic())

    def child(self) -> "SearchBudget":
        """A fresh budget for a worker process, bounded by what is left here."""
        return SearchBudget(seconds=self.remaining(), max_nodes=self.max_nodes)
