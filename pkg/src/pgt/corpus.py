"""Group constructors, JSON group specs, result records and the result cache."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Any

import numpy as np

from .gflinear import (
    FpMatrix,
    MatrixGroup,
    affine_group,
    general_linear_group,
    is_prime,
    permutation_matrix,
    primitive_root,
    special_linear_group,
)
from .permcore import (
    PermGroup,
    Permutation,
    alternating_group,
    cyclic_group,
    dihedral_group,
    symmetric_group,
    trivial_group,
)
from .permcore.perm import _perm

# permutation constructors ------------------------------------------------


def wreath(inner: PermGroup, top: PermGroup) -> PermGroup:
    """Imprimitive wreath product; point ``(i, j)`` of block ``j`` is ``j*m + i``."""
    m, t = inner.degree, top.degree
    n = m * t
    gens = []
    for g in inner.generators:
        gens.append(_perm([g[x] if x < m else x for x in range(n)]))
    for h in top.generators:
        gens.append(_perm([h[x // m] * m + x % m for x in range(n)]))
    G = PermGroup(gens, n)
    G._order = inner.order() ** t * top.order()
    return G


def product_action(inner: PermGroup, top: PermGroup) -> PermGroup:
    """Wreath product acting on ``m**t`` tuples (little-endian base ``m``)."""
    m, t = inner.degree, top.degree
    tuples = [tuple((x // m ** j) % m for j in range(t)) for x in range(m ** t)]

    def code(tup):
        return sum(c * m ** j for j, c in enumerate(tup))

    gens = []
    for g in inner.generators:
        gens.append(_perm([code((g[tp[0]],) + tp[1:]) for tp in tuples]))
    for h in top.generators:
        imgs = []
        for tp in tuples:
            out = [0] * t
            for j in range(t):
                out[h[j]] = tp[j]
            imgs.append(code(out))
        gens.append(_perm(imgs))
    return PermGroup(gens, m ** t)


def diagonal_wreath(m: int, classes, top: PermGroup, inner: PermGroup | None = None) -> PermGroup:
    """Blocks of size ``m`` where ``inner`` acts identically on all blocks of a class.

    ``classes`` is a list of block-index lists or an integer class size
    (consecutive blocks).  ``top`` permutes the blocks and must preserve
    the classes.
    """
    inner = inner if inner is not None else symmetric_group(m)
    k = top.degree
    if isinstance(classes, int):
        if k % classes:
            raise ValueError("class size must divide the number of blocks")
        classes = [list(range(s, s + classes)) for s in range(0, k, classes)]
    classes = [sorted(c) for c in classes]
    if sorted(j for c in classes for j in c) != list(range(k)):
        raise ValueError("classes must partition the blocks")
    cls_of = {j: ci for ci, c in enumerate(classes) for j in c}
    for h in top.generators:
        for c in classes:
            if len({cls_of[h[j]] for j in c}) != 1:
                raise ValueError("top group does not preserve the classes")
    n = m * k
    gens = []
    for c in classes:
        cs = set(c)
        for g in inner.generators:
            gens.append(_perm([g[x % m] + (x // m) * m if x // m in cs else x for x in range(n)]))
    for h in top.generators:
        gens.append(_perm([h[x // m] * m + x % m for x in range(n)]))
    return PermGroup(gens, n)


def affine_line_group(p: int, r: int | None = None) -> PermGroup:
    """``x -> a x + b`` on the field of order ``p`` with ``a`` of order dividing ``r``."""
    r = p - 1 if r is None else r
    if (p - 1) % r:
        raise ValueError("r must divide p - 1")
    a = pow(primitive_root(p), (p - 1) // r, p)
    gens = [_perm([(x + 1) % p for x in range(p)])]
    if r > 1:
        gens.append(_perm([(a * x) % p for x in range(p)]))
    return PermGroup(gens, p)


def projective_line_group(p: int, special: bool = False) -> PermGroup:
    """PGL(2, p) (or PSL(2, p)) on ``p + 1`` points, infinity being ``p``."""
    if not is_prime(p):
        raise ValueError("p must be prime")
    inf = p
    a = primitive_root(p)
    if special:
        a = a * a % p

    def mobius_inv(x):
        if x == inf:
            return 0
        if x == 0:
            return inf
        return (-pow(x, -1, p)) % p

    gens = [
        _perm([(x + 1) % p if x != inf else inf for x in range(p + 1)]),
        _perm([(a * x) % p if x != inf else inf for x in range(p + 1)]),
        _perm([mobius_inv(x) for x in range(p + 1)]),
    ]
    return PermGroup(gens, p + 1)


def subset_action(n: int, k: int, G: PermGroup | None = None) -> PermGroup:
    """Action of ``G`` (default Sym(n)) on ``k``-subsets in lexicographic order."""
    G = G if G is not None else symmetric_group(n)
    subs = list(combinations(range(n), k))
    index = {s: i for i, s in enumerate(subs)}
    gens = [_perm([index[tuple(sorted(g[x] for x in s))] for s in subs]) for g in G.generators]
    return PermGroup(gens, len(subs))


# matrix constructors -----------------------------------------------------


def _coordinate_decomposition(t: int) -> list[list[tuple[int, ...]]]:
    return [[tuple(int(i == j) for i in range(t))] for j in range(t)]


def permutation_module(p: int, top: PermGroup) -> MatrixGroup:
    """Permutation matrices of ``top`` over the field of order ``p``."""
    t = top.degree
    gens = [permutation_matrix(g, p) for g in top.generators] or [np.eye(t, dtype=np.int64)]
    return MatrixGroup(p, t, gens, _coordinate_decomposition(t))


def monomial_group(p: int, t: int, top: PermGroup) -> MatrixGroup:
    """Nonzero scalars on each coordinate, coordinates permuted by ``top``."""
    if top.degree != t:
        raise ValueError("top group must act on t points")
    gens = [permutation_matrix(g, p) for g in top.generators]
    D = np.eye(t, dtype=np.int64)
    D[0, 0] = primitive_root(p)
    if p > 2:
        gens.append(D)
    gens = gens or [np.eye(t, dtype=np.int64)]
    return MatrixGroup(p, t, gens, _coordinate_decomposition(t))


# specs -------------------------------------------------------------------

PERM_CONSTRUCTORS = {
    "sym", "alt", "cyclic", "dihedral", "trivial", "wreath", "product_action",
    "diagonal_wreath", "affine", "agl1", "pgl2", "psl2", "subsets",
}
MATRIX_CONSTRUCTORS = {"gl", "sl", "monomial", "permutation_module"}


@dataclass
class GroupSpec:
    kind: str
    payload: dict

    def to_dict(self) -> dict:
        return {"kind": self.kind, **self.payload}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, doc: dict) -> "GroupSpec":
        if not isinstance(doc, dict):
            raise ValueError("group spec must be a JSON object")
        doc = dict(doc)
        kind = doc.pop("kind", "constructor")
        if kind not in ("perm", "matrix", "constructor"):
            raise ValueError(f"unknown kind {kind!r}")
        return cls(kind, doc)

    @classmethod
    def from_json(cls, text: str) -> "GroupSpec":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed group document: {exc}") from None
        return cls.from_dict(doc)

    def build(self):
        return build_group(self)


def load_spec(source) -> GroupSpec:
    """Spec from a dict, inline JSON text, or a path to a JSON file."""
    if isinstance(source, GroupSpec):
        return source
    if isinstance(source, dict):
        return GroupSpec.from_dict(source)
    text = str(source)
    if not text.lstrip().startswith("{") and Path(text).exists():
        text = Path(text).read_text()
    return GroupSpec.from_json(text)


def parse_group(source) -> PermGroup | MatrixGroup:
    return build_group(load_spec(source))


def _sub(doc) -> Any:
    return build_group(GroupSpec.from_dict(doc))


def _sub_perm(doc) -> PermGroup:
    G = _sub(doc)
    if not isinstance(G, PermGroup):
        raise ValueError("a permutation group is required here")
    return G


def _sub_matrix(doc) -> MatrixGroup:
    G = _sub(doc)
    if not isinstance(G, MatrixGroup):
        raise ValueError("a matrix group is required here")
    return G


def build_group(spec: GroupSpec):
    d = spec.payload
    try:
        if spec.kind == "perm":
            degree = int(d["degree"])
            gens = [Permutation(g) for g in d["generators"]]
            return PermGroup(gens, degree)
        if spec.kind == "matrix":
            p, dim = int(d["p"]), int(d["dim"])
            gens = [FpMatrix(p, g) for g in d["generators"]] or [np.eye(dim, dtype=np.int64)]
            return MatrixGroup(p, dim, gens, d.get("decomposition"))
        return _constructor(d)
    except KeyError as exc:
        raise ValueError(f"missing field {exc} in group spec") from None


def _constructor(d: dict):
    name = d.get("name")
    if name == "sym":
        return symmetric_group(int(d["n"]))
    if name == "alt":
        return alternating_group(int(d["n"]))
    if name == "cyclic":
        return cyclic_group(int(d["n"]))
    if name == "dihedral":
        return dihedral_group(int(d["n"]))
    if name == "trivial":
        return trivial_group(int(d["n"]))
    if name == "wreath":
        return wreath(_sub_perm(d["inner"]), _sub_perm(d["top"]))
    if name == "product_action":
        return product_action(_sub_perm(d["inner"]), _sub_perm(d["top"]))
    if name == "diagonal_wreath":
        inner = _sub_perm(d["inner"]) if "inner" in d else None
        return diagonal_wreath(int(d["m"]), d["classes"], _sub_perm(d["top"]), inner)
    if name == "affine":
        return affine_group(_sub_matrix(d["matrix"]))
    if name == "agl1":
        return affine_line_group(int(d["p"]), d.get("r"))
    if name == "pgl2":
        return projective_line_group(int(d["p"]))
    if name == "psl2":
        return projective_line_group(int(d["p"]), special=True)
    if name == "subsets":
        return subset_action(int(d["n"]), int(d["k"]))
    if name == "gl":
        return general_linear_group(int(d["p"]), int(d["dim"]))
    if name == "sl":
        return special_linear_group(int(d["p"]), int(d["dim"]))
    if name == "monomial":
        return monomial_group(int(d["p"]), int(d["t"]), _sub_perm(d["top"]))
    if name == "permutation_module":
        return permutation_module(int(d["p"]), _sub_perm(d["top"]))
    raise ValueError(f"unknown constructor {name!r}")


def spec_of(G) -> GroupSpec:
    """Explicit generator spec for a built group."""
    if isinstance(G, PermGroup):
        return GroupSpec("perm", {"degree": G.degree,
                                  "generators": [list(g) for g in G.generators]})
    payload = {"p": G.p, "dim": G.dim, "generators": [g.tolist() for g in G.generators]}
    if G.decomposition is not None:
        payload["decomposition"] = [[list(v) for v in b] for b in G.decomposition]
    return GroupSpec("matrix", payload)


def group_id(G) -> str:
    """Content hash: degree (or field and dimension) plus sorted generator images."""
    if isinstance(G, PermGroup):
        key = {"degree": G.degree, "gens": sorted(list(g) for g in G.generators)}
    else:
        key = {"p": G.p, "dim": G.dim, "gens": sorted(g.tolist() for g in G.generators)}
    return hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()[:16]


# records and cache -------------------------------------------------------


@dataclass
class ResultRecord:
    group_id: str
    operation: str
    value: Any
    witness: Any = None
    bound_checked: bool = False
    bound_value: Any = None
    elapsed_ms: float = 0.0
    status: str = "pass"
    label: str = ""
    detail: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, default=_jsonable)

    @classmethod
    def from_json(cls, line: str) -> "ResultRecord":
        return cls(**json.loads(line))


def _jsonable(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (set, tuple)):
        return list(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def verify_witness(record: ResultRecord, G) -> bool:
    """Re-check a stored witness against the group it claims to describe."""
    from .bases import is_base
    from .distinguishing import is_distinguishing

    op, w = record.operation, record.witness
    if op in ("base", "greedy"):
        return len(w) == record.value and is_base(G, w)
    if op in ("dist", "color"):
        colors = w
        return (len(set(colors)) <= _count(record) and is_distinguishing(G, colors))
    if op == "order":
        return G.order() == record.value
    return w is None


def _count(record):
    v = record.value
    return v["colors"] if isinstance(v, dict) else v


def cache_dir() -> Path:
    base = os.environ.get("PGT_CACHE_DIR")
    return Path(base) if base else Path.home() / ".cache" / "pgt"


class ResultCache:
    """JSON files keyed by group id and operation; witnesses re-verified on read."""

    def __init__(self, directory: Path | None = None):
        self.directory = Path(directory) if directory is not None else cache_dir()

    def _path(self, gid: str, operation: str, params: str) -> Path:
        tag = hashlib.sha256(params.encode()).hexdigest()[:8]
        return self.directory / f"{gid}-{operation}-{tag}.json"

    def get(self, G, operation: str, params: str = "") -> ResultRecord | None:
        path = self._path(group_id(G), operation, params)
        if not path.exists():
            return None
        try:
            rec = ResultRecord.from_json(path.read_text())
        except (ValueError, TypeError):
            return None
        return rec if verify_witness(rec, G) else None

    def put(self, G, record: ResultRecord, params: str = "") -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        self._path(group_id(G), record.operation, params).write_text(record.to_json())


# corpora -----------------------------------------------------------------


def _c(name, **kw) -> dict:
    return {"kind": "constructor", "name": name, **kw}


def transitive_corpus(max_degree: int = 10) -> list[tuple[str, dict, bool]]:
    """(label, spec, primitive) for transitive groups up to ``max_degree``."""
    S = lambda n: {"name": "sym", "n": n}
    A = lambda n: {"name": "alt", "n": n}
    C = lambda n: {"name": "cyclic", "n": n}
    klein = {"kind": "perm", "degree": 4, "generators": [[1, 0, 3, 2], [2, 3, 0, 1]]}
    entries = [
        ("Sym(2)", _c("sym", n=2), True),
        ("C3", _c("cyclic", n=3), True),
        ("Sym(3)", _c("sym", n=3), True),
        ("C4", _c("cyclic", n=4), False),
        ("V4", klein, False),
        ("D4", _c("dihedral", n=4), False),
        ("Alt(4)", _c("alt", n=4), True),
        ("Sym(4)", _c("sym", n=4), True),
        ("C5", _c("cyclic", n=5), True),
        ("D5", _c("dihedral", n=5), True),
        ("AGL(1,5)", _c("agl1", p=5), True),
        ("Alt(5)", _c("alt", n=5), True),
        ("Sym(5)", _c("sym", n=5), True),
        ("C6", _c("cyclic", n=6), False),
        ("D6", _c("dihedral", n=6), False),
        ("Sym(2) wr Sym(3)", _c("wreath", inner=S(2), top=S(3)), False),
        ("Sym(3) wr Sym(2)", _c("wreath", inner=S(3), top=S(2)), False),
        ("Sym(3) diag Sym(2)", _c("diagonal_wreath", m=3, classes=2, top=S(2)), False),
        ("PSL(2,5)", _c("psl2", p=5), True),
        ("PGL(2,5)", _c("pgl2", p=5), True),
        ("Alt(6)", _c("alt", n=6), True),
        ("Sym(6)", _c("sym", n=6), True),
        ("C7", _c("cyclic", n=7), True),
        ("D7", _c("dihedral", n=7), True),
        ("F21", _c("agl1", p=7, r=3), True),
        ("AGL(1,7)", _c("agl1", p=7), True),
        ("AGL(3,2)", _c("affine", matrix={"name": "gl", "p": 2, "dim": 3}), True),
        ("Alt(7)", _c("alt", n=7), True),
        ("Sym(7)", _c("sym", n=7), True),
        ("C8", _c("cyclic", n=8), False),
        ("D8", _c("dihedral", n=8), False),
        ("Sym(2) wr Sym(4)", _c("wreath", inner=S(2), top=S(4)), False),
        ("Sym(4) wr Sym(2)", _c("wreath", inner=S(4), top=S(2)), False),
        ("Sym(4) diag Sym(2)", _c("diagonal_wreath", m=4, classes=2, top=S(2)), False),
        ("C2 wr C4", _c("wreath", inner=C(2), top=C(4)), False),
        ("PSL(2,7)", _c("psl2", p=7), True),
        ("PGL(2,7)", _c("pgl2", p=7), True),
        ("C9", _c("cyclic", n=9), False),
        ("D9", _c("dihedral", n=9), False),
        ("Sym(3) wr Sym(3)", _c("wreath", inner=S(3), top=S(3)), False),
        ("Sym(3) wr Sym(2) product", _c("product_action", inner=S(3), top=S(2)), True),
        ("AGL(2,3)", _c("affine", matrix={"name": "gl", "p": 3, "dim": 2}), True),
        ("ASL(2,3)", _c("affine", matrix={"name": "sl", "p": 3, "dim": 2}), True),
        ("C10", _c("cyclic", n=10), False),
        ("D10", _c("dihedral", n=10), False),
        ("Sym(5) on pairs", _c("subsets", n=5, k=2), True),
        ("Sym(2) wr Sym(5)", _c("wreath", inner=S(2), top=S(5)), False),
        ("Sym(5) wr Sym(2)", _c("wreath", inner=S(5), top=S(2)), False),
        ("Sym(5) diag Sym(2)", _c("diagonal_wreath", m=5, classes=2, top=S(2)), False),
        ("Alt(5) wr C2", _c("wreath", inner=A(5), top=C(2)), False),
    ]
    out = []
    for label, spec, prim in entries:
        G = parse_group(spec)
        if G.degree <= max_degree:
            out.append((label, spec, prim))
    return out


def affine_corpus() -> list[tuple[str, dict]]:
    """Matrix groups ``H`` whose affine groups stay within the oracle range."""
    S = lambda n: {"name": "sym", "n": n}
    C = lambda n: {"name": "cyclic", "n": n}
    return [
        ("GL(1,5)", _c("gl", p=5, dim=1)),
        ("GL(1,7)", _c("gl", p=7, dim=1)),
        ("GL(2,2)", _c("gl", p=2, dim=2)),
        ("SL(2,3)", _c("sl", p=3, dim=2)),
        ("GL(2,3)", _c("gl", p=3, dim=2)),
        ("GL(3,2)", _c("gl", p=2, dim=3)),
        ("GL(2,5)", _c("gl", p=5, dim=2)),
        ("Sym(3) perm over F2", _c("permutation_module", p=2, top=S(3))),
        ("Sym(4) perm over F2", _c("permutation_module", p=2, top=S(4))),
        ("F3* wr Sym(2)", _c("monomial", p=3, t=2, top=S(2))),
        ("C3 perm over F3", _c("permutation_module", p=3, top=C(3))),
    ]


def repeat_corpus() -> list[tuple[str, dict]]:
    S = lambda n: {"name": "sym", "n": n}
    return [
        ("GL(2,2)", _c("gl", p=2, dim=2)),
        ("GL(2,3)", _c("gl", p=3, dim=2)),
        ("SL(2,3)", _c("sl", p=3, dim=2)),
        ("F3* wr Sym(2)", _c("monomial", p=3, t=2, top=S(2))),
        ("Sym(3) perm over F2", _c("permutation_module", p=2, top=S(3))),
    ]


def permutation_module_corpus() -> list[tuple[str, dict]]:
    S = lambda n: {"name": "sym", "n": n}
    return [
        ("Sym(3) over F2", _c("permutation_module", p=2, top=S(3))),
        ("Sym(4) over F3", _c("permutation_module", p=3, top=S(4))),
        ("Sym(4) over F2", _c("permutation_module", p=2, top=S(4))),
    ]


def monomial_corpus() -> list[tuple[str, dict]]:
    S = lambda n: {"name": "sym", "n": n}
    C = lambda n: {"name": "cyclic", "n": n}
    return [
        ("F3* wr Sym(2)", _c("monomial", p=3, t=2, top=S(2))),
        ("F5* wr Sym(3)", _c("monomial", p=5, t=3, top=S(3))),
        ("F3* wr C3", _c("monomial", p=3, t=3, top=C(3))),
        ("F3* wr Sym(3)", _c("monomial", p=3, t=3, top=S(3))),
        ("Sym(3) over F2", _c("permutation_module", p=2, top=S(3))),
    ]


def alt_induced_cases() -> list[tuple[int, int, int]]:
    return [(7, 1, 3), (7, 1, 7), (7, 2, 2), (7, 2, 3)]


def letter_group(k: int, t: int) -> PermGroup:
    """Sym(k) wr Sym(t) on ``k*t`` letters, letter ``i*k + j`` in column ``i``."""
    if t == 1:
        return symmetric_group(k)
    return wreath(symmetric_group(k), symmetric_group(t))
