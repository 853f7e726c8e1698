"""Group construction from specs, builtin families and JSON files."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Any, Sequence

from .errors import InputError
from .groups import MAX_ORDER, FiniteGroup, Homomorphism, hom_from_images
from .rings import is_prime

BUILTINS = ("cyclic", "dihedral", "quaternion8", "elementary_abelian", "heisenberg",
            "symmetric", "direct_product", "semidirect_cyclic")


@dataclass(frozen=True)
class GroupSpec:
    kind: str  # "table", "permutation" or "builtin"
    payload: dict[str, Any] = field(default_factory=dict)
    name: str | None = None

    @classmethod
    def builtin(cls, builtin: str, **params) -> GroupSpec:
        return cls("builtin", {"builtin": builtin, "params": params})

    @classmethod
    def from_dict(cls, d: dict) -> GroupSpec:
        if not isinstance(d, dict):
            raise InputError(f"group description must be an object, got {type(d).__name__}")
        kind = d.get("kind")
        if kind not in ("table", "permutation", "builtin"):
            raise InputError(f"field 'kind' must be table, permutation or builtin, got {kind!r}")
        payload = {k: v for k, v in d.items() if k not in ("kind", "name")}
        return cls(kind, payload, d.get("name"))

    def to_dict(self) -> dict:
        d = {"kind": self.kind, **self.payload}
        if self.name:
            d["name"] = self.name
        return d


def _from_table(table, names=None, generators=None, name="G") -> FiniteGroup:
    return FiniteGroup(table, names, generators, name=name)


def _cycle_string(perm: Sequence[int]) -> str:
    seen, parts = set(), []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = perm[j]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def from_permutations(degree: int, generators: Sequence[Sequence[int]], name: str = "G") -> FiniteGroup:
    """Closure of permutation generators (image arrays) on {0..degree-1}."""
    gens = []
    for k, g in enumerate(generators):
        g = tuple(int(x) for x in g)
        if len(g) != degree:
            raise InputError(f"permutation generator {k} has length {len(g)}, degree is {degree}")
        if sorted(g) != list(range(degree)):
            dup = next((x for x in g if g.count(x) > 1 or not 0 <= x < degree), None)
            raise InputError(f"permutation generator {k} is not a bijection (offending image {dup})")
        gens.append(g)
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    i = 0
    while i < len(elems):
        x = elems[i]
        for g in gens:
            y = tuple(g[x[j]] for j in range(degree))  # x then g
            if y not in index:
                if len(elems) >= MAX_ORDER:
                    raise InputError(f"permutation group exceeds the order cap {MAX_ORDER}")
                index[y] = len(elems)
                elems.append(y)
        i += 1
    # product a*b means "apply a, then b"
    table = [[index[tuple(b[a[j]] for j in range(degree))] for b in elems] for a in elems]
    gen_idx = sorted({index[g] for g in gens if g != ident})
    return FiniteGroup(table, [_cycle_string(e) for e in elems], gen_idx, name=name)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise InputError("cyclic(n) needs n >= 1")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    names = ["e", "a"] + [f"a^{k}" for k in range(2, n)]
    return FiniteGroup(table, names[:n], [1] if n > 1 else [], name=f"Z{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; element r^a s^b has index a + n*b."""
    if n < 1:
        raise InputError("dihedral(n) needs n >= 1")

    def mul(x, y):
        a, b = x % n, x // n
        c, d = y % n, y // n
        return (a + (c if b == 0 else -c)) % n + n * ((b + d) % 2)

    N = 2 * n
    table = [[mul(x, y) for y in range(N)] for x in range(N)]
    names = []
    for x in range(N):
        a, b = x % n, x // n
        r = "" if a == 0 else ("r" if a == 1 else f"r^{a}")
        s = "s" if b else ""
        names.append(r + s or "e")
    gens = ([1] if n > 1 else []) + [n]
    return FiniteGroup(table, names, gens, name=f"D{N}")


def quaternion8() -> FiniteGroup:
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    # unit quaternions as (sign, axis) with axis 0=1, 1=i, 2=j, 3=k
    mult = {(1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
            (1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
            (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2)}

    def unit(x):
        return (1 if x % 2 == 0 else -1, x // 2)

    def idx(sign, axis):
        return 2 * axis + (0 if sign == 1 else 1)

    table = []
    for x in range(8):
        sx, ax = unit(x)
        row = []
        for y in range(8):
            sy, ay = unit(y)
            if ax == 0 or ay == 0:
                s, a = 1, ax or ay
            else:
                s, a = mult[(ax, ay)]
            row.append(idx(sx * sy * s, a))
        table.append(row)
    return FiniteGroup(table, names, [2, 4], name="Q8")


def elementary_abelian(p: int, k: int) -> FiniteGroup:
    if not is_prime(p) or k < 0:
        raise InputError("elementary_abelian(p, k) needs p prime and k >= 0")
    vecs = list(product(range(p), repeat=k))
    index = {v: i for i, v in enumerate(vecs)}
    table = [[index[tuple((x + y) % p for x, y in zip(u, v))] for v in vecs] for u in vecs]
    names = ["e" if not any(v) else "(" + ",".join(map(str, v)) + ")" for v in vecs]
    gens = [index[tuple(int(i == j) for i in range(k))] for j in range(k)]
    return FiniteGroup(table, names, gens, name=f"Z{p}^{k}")


def heisenberg(p: int) -> FiniteGroup:
    """Unitriangular 3x3 matrices over Z/p; (a, b, c)(a', b', c') = (a+a', b+b', c+c'+ab')."""
    if not is_prime(p):
        raise InputError("heisenberg(p) needs p prime")
    elems = [(a, b, c) for a in range(p) for b in range(p) for c in range(p)]
    index = {e: i for i, e in enumerate(elems)}
    table = [[index[((a + x) % p, (b + y) % p, (c + z + a * y) % p)] for (x, y, z) in elems]
             for (a, b, c) in elems]
    names = ["e" if e == (0, 0, 0) else "[%d,%d,%d]" % e for e in elems]
    return FiniteGroup(table, names, [index[(1, 0, 0)], index[(0, 1, 0)]], name=f"Heis{p}")


def symmetric(n: int) -> FiniteGroup:
    if not 1 <= n <= 5:
        raise InputError("symmetric(n) is available for 1 <= n <= 5")
    if n == 1:
        return FiniteGroup([[0]], ["()"], [], name="S1")
    gens = [[1, 0] + list(range(2, n)), list(range(1, n)) + [0]]
    if n == 2:
        gens = gens[:1]
    return from_permutations(n, gens, name=f"S{n}")


def direct_product(A: FiniteGroup, B: FiniteGroup) -> FiniteGroup:
    """A x B with (a, b) at index a*|B| + b."""
    m = B.order
    N = A.order * m
    table = [[A.table[x // m][y // m] * m + B.table[x % m][y % m] for y in range(N)] for x in range(N)]
    names = []
    for x in range(N):
        a, b = x // m, x % m
        names.append("e" if x == 0 else f"({A.names[a]},{B.names[b]})")
    gens = [g * m for g in A.generators] + list(B.generators)
    return FiniteGroup(table, names, gens, name=f"{A.name}x{B.name}")


def semidirect_cyclic(n: int, m: int, k: int) -> FiniteGroup:
    """Z_n x| Z_m where the generator of Z_m acts by multiplication by k."""
    if n < 1 or m < 1:
        raise InputError("semidirect_cyclic needs n, m >= 1")
    if pow(k, m, n) != 1 % n:
        raise InputError(f"semidirect_cyclic({n}, {m}, {k}): k^m = {pow(k, m, n)} is not 1 mod {n}")
    N = n * m

    def mul(x, y):
        a, s = x % n, x // n
        b, t = y % n, y // n
        return (a + pow(k, s, n) * b) % n + n * ((s + t) % m)

    table = [[mul(x, y) for y in range(N)] for x in range(N)]
    names = []
    for x in range(N):
        a, s = x % n, x // n
        names.append("e" if x == 0 else f"x^{a}t^{s}")
    gens = ([1] if n > 1 else []) + ([n] if m > 1 else [])
    return FiniteGroup(table, names, gens, name=f"Z{n}:Z{m}[{k}]")


def _param(params: dict, key: str) -> int:
    if key not in params:
        raise InputError(f"builtin parameter {key!r} missing")
    try:
        return int(params[key])
    except (TypeError, ValueError):
        raise InputError(f"builtin parameter {key!r} must be an integer") from None


def build_group(spec: GroupSpec | dict) -> FiniteGroup:
    if isinstance(spec, dict):
        spec = GroupSpec.from_dict(spec)
    pl = spec.payload
    if spec.kind == "table":
        for key in ("table",):
            if key not in pl:
                raise InputError(f"table group needs field {key!r}")
        G = _from_table(pl["table"], pl.get("elements"), pl.get("generators"), spec.name or "G")
    elif spec.kind == "permutation":
        if "degree" not in pl or "generators" not in pl:
            raise InputError("permutation group needs fields 'degree' and 'generators'")
        G = from_permutations(int(pl["degree"]), pl["generators"], spec.name or "G")
    else:
        b = pl.get("builtin")
        params = pl.get("params", {}) or {}
        if b not in BUILTINS:
            raise InputError(f"unknown builtin {b!r}; expected one of {', '.join(BUILTINS)}")
        if b == "cyclic":
            G = cyclic(_param(params, "n"))
        elif b == "dihedral":
            G = dihedral(_param(params, "n"))
        elif b == "quaternion8":
            G = quaternion8()
        elif b == "elementary_abelian":
            G = elementary_abelian(_param(params, "p"), _param(params, "k"))
        elif b == "heisenberg":
            G = heisenberg(_param(params, "p"))
        elif b == "symmetric":
            G = symmetric(_param(params, "n"))
        elif b == "direct_product":
            factors = params.get("factors")
            if not isinstance(factors, list) or len(factors) != 2:
                raise InputError("direct_product needs params.factors = [spec, spec]")
            G = direct_product(build_group(factors[0]), build_group(factors[1]))
        else:
            G = semidirect_cyclic(_param(params, "n"), _param(params, "m"), _param(params, "k"))
    if spec.name:
        G.name = spec.name
    return G


def load_group(path: str | Path) -> FiniteGroup:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None
    try:
        G = build_group(data)
    except InputError as e:
        raise InputError(f"{path}: {e}") from None
    if not data.get("name"):
        G.name = path.stem
    return G


def load_homomorphism(path: str | Path) -> Homomorphism:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None
    for key in ("source", "target", "images"):
        if key not in data:
            raise InputError(f"{path}: missing field {key!r}")
    base = path.parent

    def group(ref):
        if isinstance(ref, dict):
            return build_group(ref)
        return load_group(base / ref)

    A, B = group(data["source"]), group(data["target"])
    images = data["images"]
    by, mp = images.get("by"), images.get("map")
    if by not in ("generators", "elements") or not isinstance(mp, list):
        raise InputError(f"{path}: images must be {{'by': 'generators'|'elements', 'map': [...]}}")
    if by == "elements":
        return Homomorphism(A, B, mp)
    if len(mp) != len(A.generators):
        raise InputError(f"{path}: {len(mp)} generator images for {len(A.generators)} generators")
    return hom_from_images(A, B, dict(zip(A.generators, mp)))
