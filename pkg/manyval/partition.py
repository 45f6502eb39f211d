from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from .errors import ForeignPartitionError
from .matrix import Matrix


@dataclass(frozen=True)
class Partition:
    """
    A partition of a matrix's value set in canonical form: members of each
    block in declaration order, blocks ordered by their least member.
    """
    matrix_name: str
    blocks: Tuple[Tuple[str, ...], ...]

    def __len__(self) -> int:
        return len(self.blocks)

    @classmethod
    def from_labels(cls, m: Matrix, labels: Sequence[int]) -> "Partition":
        """Build from a block label per value position (any labelling)."""
        if len(labels) != m.size:
            raise ForeignPartitionError(
                f"{len(labels)} labels given for {m.size} values of {m.name}"
            )
        groups = {}
        for i, label in enumerate(labels):
            groups.setdefault(label, []).append(m.values[i])
        return cls(m.name, tuple(sorted((tuple(g) for g in groups.values()),
                                        key=lambda b: m.index(b[0]))))

    @classmethod
    def from_blocks(cls, m: Matrix, blocks: Iterable[Iterable[str]]) -> "Partition":
        labels = [None] * m.size
        for b, block in enumerate(blocks):
            block = list(block)
            if not block:
                raise ForeignPartitionError("empty block in partition")
            for v in block:
                if v not in m.values:
                    raise ForeignPartitionError(f"value {v} is not a value of {m.name}")
                i = m.index(v)
                if labels[i] is not None:
                    raise ForeignPartitionError(f"value {v} occurs in more than one block")
                labels[i] = b
        missing = [m.values[i] for i, label in enumerate(labels) if label is None]
        if missing:
            raise ForeignPartitionError(f"values not covered by the partition: {', '.join(missing)}")
        return cls.from_labels(m, labels)

    @classmethod
    def identity(cls, m: Matrix) -> "Partition":
        return cls.from_labels(m, range(m.size))

    def labels(self, m: Matrix) -> List[int]:
        """Restricted-growth labelling: label of each value position."""
        self.check_against(m)
        labels = [0] * m.size
        for b, block in enumerate(self.blocks):
            for v in block:
                labels[m.index(v)] = b
        return labels

    def block_of(self, value: str) -> Tuple[str, ...]:
        for block in self.blocks:
            if value in block:
                return block
        raise ForeignPartitionError(f"value {value} is not covered by the partition")

    def check_against(self, m: Matrix) -> None:
        members = [v for block in self.blocks for v in block]
        if sorted(members) != sorted(m.values) or len(set(members)) != len(members):
            raise ForeignPartitionError(f"partition does not partition the values of {m.name}")

    def sort_key(self, m: Matrix) -> tuple:
        return len(self.blocks), tuple(tuple(m.index(v) for v in block) for block in self.blocks)
