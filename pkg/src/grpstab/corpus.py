"""Group corpora and the bounded map enumeration used by the sweeps.

Maps between corpus groups are enumerated in three ways: every quotient
projection, every subgroup inclusion, and every homomorphism fixed by
generator images when the source has at most two distinguished generators.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from itertools import product
from pathlib import Path

from . import config
from .builders import build_group, load_group
from .errors import InputError
from .groups import FiniteGroup, Homomorphism, all_normal_subgroups, all_subgroups, quotient, try_hom


def _groups_from_data(data, where: str) -> list[FiniteGroup]:
    if isinstance(data, dict) and "groups" in data:
        data = data["groups"]
    if not isinstance(data, list):
        raise InputError(f"{where}: expected a list of group descriptions or {{'groups': [...]}}")
    out = []
    for i, d in enumerate(data):
        try:
            out.append(build_group(d))
        except InputError as e:
            raise InputError(f"{where}: group #{i}: {e}") from None
    return out


@lru_cache(maxsize=1)
def _default() -> tuple[FiniteGroup, ...]:
    text = resources.files("grpstab.data").joinpath("default_corpus.json").read_text()
    return tuple(_groups_from_data(json.loads(text), "default corpus"))


def default_corpus() -> list[FiniteGroup]:
    """Builtins of order <= 16, plus Z2xZ4, D16 and the order-27 Heisenberg group."""
    return list(_default())


def load_corpus(path: str | Path | None = None) -> list[FiniteGroup]:
    """A directory of group files, a JSON list of descriptions, or the default."""
    if path is None:
        path = config.current().corpus
    if path is None:
        return default_corpus()
    path = Path(path)
    if path.is_dir():
        files = sorted(path.glob("*.json"))
        if not files:
            raise InputError(f"{path}: no .json group files")
        return [load_group(f) for f in files]
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise InputError(f"{path}: no such file") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None
    if isinstance(data, dict) and "kind" in data:
        return [build_group(data)]
    return _groups_from_data(data, str(path))


def is_p_group(G: FiniteGroup, p: int) -> bool:
    n = G.order
    while n % p == 0:
        n //= p
    return n == 1 and G.order > 1


def p_groups(corpus: list[FiniteGroup], p: int, max_order: int) -> list[FiniteGroup]:
    return [G for G in corpus if is_p_group(G, p) and G.order <= max_order]


@dataclass(frozen=True)
class MapRecord:
    hom: Homomorphism
    how: str  # "quotient", "inclusion" or "generators"
    label: str

    @property
    def key(self) -> tuple:
        return (self.hom.source.name, self.hom.target.name, self.how, self.label)


def quotient_maps(G: FiniteGroup) -> list[MapRecord]:
    out = []
    for N in all_normal_subgroups(G):
        label = f"{G.name}/N{N.order}:{min(N.elements[1:], default=0)}"
        _, proj = quotient(G, N, name=label)
        out.append(MapRecord(proj, "quotient", label))
    return out


def inclusion_maps(G: FiniteGroup) -> list[MapRecord]:
    out = []
    for S in all_subgroups(G):
        label = f"{G.name}>S{S.order}:{','.join(map(str, S.elements[1:4]))}"
        _, inc = S.as_group(label)
        out.append(MapRecord(inc, "inclusion", label))
    return out


def generator_maps(A: FiniteGroup, B: FiniteGroup, max_generators: int = 2) -> list[MapRecord]:
    """Every homomorphism A -> B, found by trying images of A's generators."""
    gens = A.generators
    if len(gens) > max_generators:
        return []
    oa, ob = A.element_orders, B.element_orders
    choices = [[y for y in range(B.order) if oa[g] % ob[y] == 0] for g in gens]
    out = []
    for imgs in product(*choices):
        f = try_hom(A, B, imgs)
        if f is not None:
            out.append(MapRecord(f, "generators", f"{A.name}->{B.name}:{list(imgs)}"))
    return out


def enumerate_maps(corpus: list[FiniteGroup], generators: bool = True,
                   max_generators: int = 2) -> list[MapRecord]:
    """Quotients, inclusions and (optionally) generator-image maps, deduplicated."""
    seen = set()
    out: list[MapRecord] = []

    def add(rec: MapRecord):
        k = (rec.hom.source.key, rec.hom.target.key, rec.hom.images)
        if k not in seen:
            seen.add(k)
            out.append(rec)

    for G in corpus:
        for rec in quotient_maps(G):
            add(rec)
        for rec in inclusion_maps(G):
            add(rec)
    if generators:
        for A in corpus:
            for B in corpus:
                for rec in generator_maps(A, B, max_generators):
                    add(rec)
    return ordered(out)


def ordered(records: list) -> list:
    """Sweep order: as enumerated, or shuffled by the configured seed."""
    seed = config.current().seed
    if seed is None:
        return list(records)
    rng = random.Random(seed)
    out = list(records)
    rng.shuffle(out)
    return out
