import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List

from .errors import UnknownMatrixError
from .homomorphism import direct_product
from .matrix import Matrix, Operation, make_matrix

logger = logging.getLogger(__name__)

BUILTIN_NAMES = ("kw3", "cl2", "nc", "fde", "ac2", "fc")
BUILTIN_PREFIX = "builtin:"

# ---------- truth tables ----------

_KW = ("f", "u", "t")


def _kw_and(a: str, b: str) -> str:
    if "u" in (a, b):
        return "u"
    return "t" if a == b == "t" else "f"


def _kw_or(a: str, b: str) -> str:
    if "u" in (a, b):
        return "u"
    return "t" if "t" in (a, b) else "f"


_FDE = ("B", "T", "F", "N")
_FDE_NEG = {"B": "B", "T": "F", "F": "T", "N": "N"}
_FDE_AND = {
    "B": dict(B="B", T="B", F="F", N="F"),
    "T": dict(B="B", T="T", F="F", N="N"),
    "F": dict(B="F", T="F", F="F", N="F"),
    "N": dict(B="F", T="N", F="F", N="N"),
}
_FDE_OR = {
    "B": dict(B="B", T="T", F="B", N="T"),
    "T": dict(B="T", T="T", F="T", N="T"),
    "F": dict(B="B", T="T", F="F", N="N"),
    "N": dict(B="T", T="T", F="N", N="N"),
}

_AC2 = ("b", "t", "f", "n")
_AC2_NEG = {"b": "b", "t": "f", "f": "t", "n": "n"}
# and and or coincide in AC2
_AC2_JOIN = {
    "b": dict(b="b", t="b", f="b", n="b"),
    "t": dict(b="b", t="t", f="b", n="t"),
    "f": dict(b="b", t="b", f="f", n="f"),
    "n": dict(b="b", t="t", f="f", n="n"),
}


def _build_kw3() -> Matrix:
    return make_matrix("Kw", _KW, ["t"], {("and", 2): _kw_and, ("or", 2): _kw_or})


def _build_cl2() -> Matrix:
    return make_matrix("CL", ("f", "t"), ["t"], {
        ("neg", 1): lambda a: "t" if a == "f" else "f",
        ("and", 2): lambda a, b: "t" if a == b == "t" else "f",
        ("or", 2): lambda a, b: "t" if "t" in (a, b) else "f",
    })


def _build_nc() -> Matrix:
    # pairs read (truth, falsity): the second coordinate of and joins, of or meets,
    # so ff & ft = ft and tt | ff = tf
    values = [a + b for a in _KW for b in _KW]
    return make_matrix("NC", values, [v for v in values if v[0] == "t"], {
        ("neg", 1): lambda p: p[1] + p[0],
        ("and", 2): lambda p, q: _kw_and(p[0], q[0]) + _kw_or(p[1], q[1]),
        ("or", 2): lambda p, q: _kw_or(p[0], q[0]) + _kw_and(p[1], q[1]),
    })


def _build_fde() -> Matrix:
    return make_matrix("FDE", _FDE, ["B", "T"], {
        ("neg", 1): _FDE_NEG.__getitem__,
        ("and", 2): lambda a, b: _FDE_AND[a][b],
        ("or", 2): lambda a, b: _FDE_OR[a][b],
    })


def _build_ac2() -> Matrix:
    return make_matrix("AC2", _AC2, ["f", "n"], {
        ("neg", 1): _AC2_NEG.__getitem__,
        ("and", 2): lambda a, b: _AC2_JOIN[a][b],
        ("or", 2): lambda a, b: _AC2_JOIN[a][b],
    })


@lru_cache(maxsize=None)
def build_builtin(name: str) -> Matrix:
    """Matrices are immutable, so cached instances are shared freely."""
    builders = {
        "kw3": _build_kw3,
        "cl2": _build_cl2,
        "nc": _build_nc,
        "fde": _build_fde,
        "ac2": _build_ac2,
        "fc": lambda: direct_product(build_builtin("fde"), build_builtin("ac2"), name="FC"),
    }
    if name not in builders:
        raise UnknownMatrixError(
            f"unknown builtin matrix '{name}', expected one of: {', '.join(BUILTIN_NAMES)}"
        )
    return builders[name]()


# ---------- 7-valued candidates ----------

@dataclass(frozen=True)
class SevenValuedSpec:
    V: str  # differentiated FDE value
    v: str  # dominant AC2 value
    starred: bool = False

    def __post_init__(self):
        if self.V not in ("B", "T"):
            raise UnknownMatrixError(f"differentiated value must be B or T, got {self.V!r}")
        if self.v not in _AC2:
            raise UnknownMatrixError(f"dominant value must be one of b, t, f, n, got {self.v!r}")

    @classmethod
    def parse(cls, text: str) -> "SevenValuedSpec":
        """'Bt' or 'Bt*'."""
        starred = text.endswith("*")
        body = text[:-1] if starred else text
        if len(body) != 2:
            raise UnknownMatrixError(f"invalid 7-valued matrix code {text!r}, expected e.g. Bt or Bt*")
        return cls(body[0], body[1], starred)

    @property
    def code(self) -> str:
        return f"{self.V}{self.v}{'*' if self.starred else ''}"

    @property
    def name(self) -> str:
        return f"FC{'*' if self.starred else ''}_{self.V}{self.v}"

    @property
    def other(self) -> str:
        return "T" if self.V == "B" else "B"

    def contains(self, fc_value: str) -> bool:
        return fc_value[0] == self.V or fc_value[1] == self.v


def seven_valued_specs() -> List[SevenValuedSpec]:
    return [SevenValuedSpec(V, v, starred)
            for starred in (False, True) for V in ("B", "T") for v in _AC2]


def h_projection(spec: SevenValuedSpec, fc_value: str) -> str:
    """Force the dominant AC2 value onto pairs whose FDE part is not V."""
    if fc_value[0] == spec.V:
        return fc_value
    return fc_value[0] + spec.v


@lru_cache(maxsize=None)
def build_seven_valued(spec: SevenValuedSpec) -> Matrix:
    fc = build_builtin("fc")
    values = tuple(x for x in fc.values if spec.contains(x))
    index = {x: i for i, x in enumerate(values)}

    operations = []
    shape = Matrix("", values, frozenset(), ())
    for op in fc.operations:
        table = []
        for args in shape.tuples(op.arity):
            out = fc.values[fc.lookup(op, [fc.index(values[a]) for a in args])]
            table.append(index[h_projection(spec, out)])
        operations.append(Operation(op.name, op.arity, tuple(table)))

    designated = {x for x in values if x in fc.designated}
    if spec.starred:
        pivot = spec.other + spec.v
        if spec.v in ("t", "b"):
            designated.add(pivot)
        else:
            designated.discard(pivot)
    m = Matrix(spec.name, values, frozenset(designated), tuple(operations))
    logger.debug("Built %s with designated %s", m.name, m.designated_in_order)
    return m


def resolve_reference(ref: str) -> Matrix:
    """Resolve 'builtin:<name>' or 'builtin:fc7:<V><v>[*]'."""
    if not ref.startswith(BUILTIN_PREFIX):
        raise UnknownMatrixError(f"not a builtin reference: {ref!r}")
    body = ref[len(BUILTIN_PREFIX):]
    if body.startswith("fc7:"):
        return build_seven_valued(SevenValuedSpec.parse(body[len("fc7:"):]))
    return build_builtin(body)
