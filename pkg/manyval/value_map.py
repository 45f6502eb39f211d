from dataclasses import dataclass
from typing import Dict, Tuple

from .errors import ForeignValueError
from .matrix import Matrix

KINDS = ("raw", "hom", "epi", "iso")


@dataclass(frozen=True)
class ValueMap:
    """A total function between the value sets of two matrices."""
    source: str
    target: str
    pairs: Tuple[Tuple[str, str], ...]
    kind: str = "raw"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown map kind {self.kind!r}")

    @classmethod
    def from_dict(cls, m1: Matrix, m2: Matrix, mapping: Dict[str, str], kind: str = "raw") -> "ValueMap":
        missing = [v for v in m1.values if v not in mapping]
        if missing:
            raise ForeignValueError(f"map is not total on {m1.name}: missing {', '.join(missing)}")
        foreign = [w for w in mapping.values() if w not in m2.values]
        if foreign:
            raise ForeignValueError(f"map leaves {m2.name}: {', '.join(sorted(set(foreign)))}")
        return cls(m1.name, m2.name, tuple((v, mapping[v]) for v in m1.values), kind)

    @classmethod
    def from_indices(cls, m1: Matrix, m2: Matrix, images, kind: str = "raw") -> "ValueMap":
        return cls(m1.name, m2.name, tuple((m1.values[i], m2.values[j]) for i, j in enumerate(images)), kind)

    def as_dict(self) -> Dict[str, str]:
        return dict(self.pairs)

    def __call__(self, value: str) -> str:
        for v, w in self.pairs:
            if v == value:
                return w
        raise ForeignValueError(f"value '{value}' is not in the domain of the map")

    def images(self, m1: Matrix, m2: Matrix) -> Tuple[int, ...]:
        """Image positions indexed by source position; checks totality and range."""
        mapping = self.as_dict()
        images = []
        for v in m1.values:
            if v not in mapping:
                raise ForeignValueError(f"map is not total on {m1.name}: missing {v}")
            images.append(m2.index(mapping[v]))
        return tuple(images)

    def with_kind(self, kind: str) -> "ValueMap":
        return ValueMap(self.source, self.target, self.pairs, kind)


def identity_map(m: Matrix) -> ValueMap:
    return ValueMap(m.name, m.name, tuple((v, v) for v in m.values), "iso")


def compose(f: ValueMap, g: ValueMap, kind: str = "raw") -> ValueMap:
    """g after f."""
    return ValueMap(f.source, g.target, tuple((v, g(w)) for v, w in f.pairs), kind)
