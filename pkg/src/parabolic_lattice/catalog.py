"""BBF lattices of the known hyperkähler deformation types.

The Gram matrices are shipped as JSON fixtures and validated on load: every
entry must be even with signature ``(3, b2 - 3)``.  The two infinite families
are stored as templates whose parametric entry is a string such as
``"-2*(n-1)"``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .errors import BadParameter, InternalConsistencyError, UnknownName
from .fujiki import FujikiData, fujiki_from_lattice
from .lattice import Lattice, make_lattice, require_nonzero

_FILES = {
    "K3": "k3.json",
    "HilbK3": "hilb_k3_n.json",
    "Kummer": "kummer_n.json",
    "OG6": "og6.json",
    "OG10": "og10.json",
}
_ALIASES = {name.lower(): name for name in _FILES} | {
    "hilb_k3": "HilbK3", "hilbk3n": "HilbK3", "k3n": "HilbK3", "kum": "Kummer", "kummer_n": "Kummer",
}
_TEMPLATE = re.compile(r"^(-?\d+)\*\(n([+-]\d+)\)$")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    lattice: Lattice
    b2: int
    fujiki: FujikiData | None = None

    def to_json(self) -> dict:
        sig = self.lattice.signature
        doc = {
            "name": self.name,
            "rank": self.lattice.rank,
            "b2": self.b2,
            "gram": [list(r) for r in self.lattice.gram],
            "signature": [sig.s_plus, sig.s_minus],
            "discriminant": self.lattice.discriminant,
            "even": self.lattice.is_even,
        }
        if self.fujiki is not None:
            c = self.fujiki.c
            doc["fujiki"] = {"n": self.fujiki.n, "c": f"{c.numerator}/{c.denominator}"}
        return doc


@lru_cache(maxsize=None)
def _load(filename: str) -> dict:
    text = resources.files(__package__).joinpath("fixtures", filename).read_text(encoding="utf-8")
    return json.loads(text)


def _substitute(value, n: int) -> int:
    if isinstance(value, int):
        return value
    m = _TEMPLATE.match(value.replace(" ", ""))
    if m is None:
        raise InternalConsistencyError(f"unreadable template entry {value!r}")
    return int(m.group(1)) * (n + int(m.group(2)))


def catalog(name: str, n: int | None = None) -> CatalogEntry:
    """Look up a catalog lattice; ``n`` is required for ``HilbK3`` and ``Kummer``."""
    key = _ALIASES.get(name.lower().replace("-", "_").replace("(n)", ""))
    if key is None:
        raise UnknownName(f"unknown catalog entry {name!r}; expected one of {sorted(_FILES)}")
    doc = _load(_FILES[key])
    templated = "template" in doc
    if templated:
        if n is None or isinstance(n, bool) or not isinstance(n, int) or n < 2:
            raise BadParameter(f"{key} needs an integer n >= 2, got {n!r}")
        gram = [[_substitute(x, n) for x in row] for row in doc["gram"]]
        label = f"{key}({n})"
        half_dim = n
    else:
        gram = doc["gram"]
        label = key
        half_dim = doc["half_dimension"]
    L = make_lattice(gram)
    sig = L.signature
    if not L.is_even or sig.as_pair() != (3, L.rank - 3):
        raise InternalConsistencyError(f"fixture {label} fails the evenness/signature check: {sig}")
    fujiki = None
    if doc.get("fujiki_constant") is not None:
        fujiki = fujiki_from_lattice(L, half_dim, Fraction(doc["fujiki_constant"]))
    return CatalogEntry(label, L, L.rank, fujiki)


def catalog_names() -> list[str]:
    return list(_FILES)


def is_parabolic(L: Lattice, v) -> bool:
    L._check(v)
    require_nonzero(v)
    return L.q(v) == 0
