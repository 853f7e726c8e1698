"""Finite groups as full multiplication tables.

Elements are the integers ``0..order-1`` and 0 is always the identity.
Subgroups are bitsets (Python ints) over element indices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import CapExceeded, InputError

MAX_ORDER = 64


def _bits(elements: Iterable[int]) -> int:
    m = 0
    for x in elements:
        m |= 1 << x
    return m


def _members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


class FiniteGroup:
    """A finite group given by its Cayley table.

    ``table[i][j]`` is the index of the product ``i*j``.  Construction
    validates the table (Latin square, identity at 0, associativity) and
    that ``generators`` generate everything.
    """

    def __init__(self, table: Sequence[Sequence[int]], names: Sequence[str] | None = None,
                 generators: Sequence[int] | None = None, name: str = "G",
                 check: bool = True):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        self.order = len(self.table)
        self.names = tuple(names) if names is not None else tuple(str(i) for i in range(self.order))
        self.name = name
        if check:
            self._validate_table()
        if generators is None:
            generators = self._greedy_generators()
        self.generators = tuple(int(g) for g in generators)
        if check:
            for g in self.generators:
                if not 0 <= g < self.order:
                    raise InputError(f"generator index {g} out of range")
            if self.closure_mask(self.generators) != self.full_mask:
                raise InputError(f"generators {list(self.generators)} do not generate {name}")

    def _validate_table(self) -> None:
        n = self.order
        if n == 0:
            raise InputError("empty multiplication table")
        if n > MAX_ORDER:
            raise CapExceeded(f"group order {n} exceeds the table cap {MAX_ORDER}")
        if len(self.names) != n:
            raise InputError(f"{len(self.names)} names for {n} elements")
        full = set(range(n))
        for i, row in enumerate(self.table):
            if len(row) != n:
                raise InputError(f"row {i} has {len(row)} entries, expected {n}")
            if set(row) != full:
                seen = set()
                for j, x in enumerate(row):
                    if x in seen or x not in full:
                        raise InputError(
                            f"not a Latin square: row {i} repeats entry {x} (column {j})")
                    seen.add(x)
        for j in range(n):
            col = {self.table[i][j] for i in range(n)}
            if col != full:
                raise InputError(f"not a Latin square: column {j} has repeated entries")
        for i in range(n):
            if self.table[0][i] != i or self.table[i][0] != i:
                raise InputError(f"element 0 is not the identity (0*{i} or {i}*0 != {i})")
        t = self.table
        for a in range(n):
            ta = t[a]
            for b in range(n):
                tab = t[ta[b]]
                tb = t[b]
                for c in range(n):
                    if tab[c] != ta[tb[c]]:
                        raise InputError(f"not associative: ({a}*{b})*{c} != {a}*({b}*{c})")

    def _greedy_generators(self) -> list[int]:
        gens, mask = [], 1
        for x in range(1, self.order):
            if not mask >> x & 1:
                gens.append(x)
                mask = self.closure_mask(gens)
        return gens

    # -- arithmetic --------------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        inv = [0] * self.order
        for a, row in enumerate(self.table):
            inv[a] = row.index(0)
        return tuple(inv)

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def commutator(self, a: int, b: int) -> int:
        """a^-1 b^-1 a b."""
        t, inv = self.table, self.inverses
        return t[t[inv[a]][inv[b]]][t[a][b]]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        t = self.table
        return t[t[g][x]][self.inverses[g]]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverses[a], -k
        r = 0
        for _ in range(k):
            r = self.table[r][a]
        return r

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        out = []
        for a in range(self.order):
            k, x = 1, a
            while x:
                x = self.table[x][a]
                k += 1
            out.append(k)
        return tuple(out)

    @cached_property
    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    @property
    def key(self) -> tuple:
        return self.table

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"

    # -- subgroups -------------------------------------------------------------

    def closure_mask(self, seed: Iterable[int]) -> int:
        gens = [g for g in set(seed) if g]
        mask = 1
        queue = [0]
        t = self.table
        while queue:
            x = queue.pop()
            row = t[x]
            for g in gens:
                y = row[g]
                if not mask >> y & 1:
                    mask |= 1 << y
                    queue.append(y)
        return mask

    @cached_property
    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        seen = 0
        classes = []
        for x in range(self.order):
            if seen >> x & 1:
                continue
            cls = sorted({self.conj(g, x) for g in range(self.order)})
            seen |= _bits(cls)
            classes.append(tuple(cls))
        return tuple(classes)

    @cached_property
    def abelianization_invariants(self) -> tuple[int, ...]:
        """Invariant factors of G/[G,G] (trivial factors dropped)."""
        Q, _ = quotient(self, commutator_subgroup(self, self.whole(), self.whole()))
        return abelian_invariants(Q)

    def whole(self) -> Subgroup:
        return Subgroup(self, self.full_mask, self.generators)

    def trivial(self) -> Subgroup:
        return Subgroup(self, 1, ())


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    mask: int
    witnesses: tuple[int, ...] = field(default=())

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    @cached_property
    def elements(self) -> tuple[int, ...]:
        return tuple(_members(self.mask))

    @property
    def order(self) -> int:
        return bin(self.mask).count("1")

    def __len__(self):
        return self.order

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.mask == other.mask and self.parent == other.parent

    def __hash__(self):
        return hash(self.mask)

    def __le__(self, other: Subgroup) -> bool:
        return self.mask & ~other.mask == 0

    def __lt__(self, other: Subgroup) -> bool:
        return self <= other and self.mask != other.mask

    def intersect(self, other: Subgroup) -> Subgroup:
        G = self.parent
        mask = self.mask & other.mask
        return Subgroup(G, mask, tuple(_members(mask)))

    def is_normal(self) -> bool:
        return normality_witness(self) is None

    def is_trivial(self) -> bool:
        return self.mask == 1

    def is_whole(self) -> bool:
        return self.mask == self.parent.full_mask

    @cached_property
    def sort_key(self) -> tuple:
        return (self.order, self.elements)

    def as_group(self, name: str | None = None) -> tuple[FiniteGroup, Homomorphism]:
        """This subgroup as a standalone group, plus its inclusion map."""
        G = self.parent
        elems = self.elements
        index = {x: i for i, x in enumerate(elems)}
        table = [[index[G.table[a][b]] for b in elems] for a in elems]
        gens = sorted({index[w] for w in self.witnesses if w in self and w})
        H = FiniteGroup(table, [G.names[x] for x in elems], gens or None,
                        name=name or f"{G.name}<{len(elems)}>", check=False)
        if H.closure_mask(H.generators) != H.full_mask:
            H.generators = tuple(H._greedy_generators())
        return H, Homomorphism(H, G, elems, check=False)

    def __repr__(self):
        return f"Subgroup(order={self.order}, of {self.parent.name})"


def normality_witness(N: Subgroup) -> tuple[int, int] | None:
    """(g, n) with g n g^-1 outside N, or None when N is normal."""
    G = N.parent
    for n in N.elements:
        for g in G.generators:
            if G.conj(g, n) not in N:
                return g, n
    return None


class Homomorphism:
    """A total element map between finite groups, validated multiplicative."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, images: Sequence[int],
                 check: bool = True):
        self.source = source
        self.target = target
        self.images = tuple(int(x) for x in images)
        if check:
            self._validate()

    def _validate(self) -> None:
        A, B, f = self.source, self.target, self.images
        if len(f) != A.order:
            raise InputError(f"image array has length {len(f)}, source order is {A.order}")
        for x in f:
            if not 0 <= x < B.order:
                raise InputError(f"image index {x} out of range for target of order {B.order}")
        if f[0] != 0:
            raise InputError("identity does not map to identity")
        ta, tb = A.table, B.table
        for x in range(A.order):
            fx = tb[f[x]]
            row = ta[x]
            for y in range(A.order):
                if f[row[y]] != fx[f[y]]:
                    raise InputError(
                        f"not multiplicative: f({A.names[x]}*{A.names[y]}) != "
                        f"f({A.names[x]})*f({A.names[y]})")

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __matmul__(self, other: Homomorphism) -> Homomorphism:
        """self o other."""
        if other.target != self.source:
            raise InputError("homomorphisms are not composable")
        return Homomorphism(other.source, self.target,
                            [self.images[y] for y in other.images], check=False)

    def image_of(self, S: Subgroup) -> Subgroup:
        mask = _bits(self.images[x] for x in S.elements)
        return Subgroup(self.target, mask, tuple(self.images[w] for w in S.witnesses))

    def preimage(self, S: Subgroup) -> Subgroup:
        mask = _bits(x for x, y in enumerate(self.images) if y in S)
        return Subgroup(self.source, mask, tuple(_members(mask)))

    def kernel(self) -> Subgroup:
        return self.preimage(self.target.trivial())

    def is_injective(self) -> bool:
        return len(set(self.images)) == self.source.order

    def is_surjective(self) -> bool:
        return len(set(self.images)) == self.target.order

    @classmethod
    def identity(cls, G: FiniteGroup) -> Homomorphism:
        return cls(G, G, range(G.order), check=False)

    def __eq__(self, other):
        return (isinstance(other, Homomorphism) and self.source == other.source
                and self.target == other.target and self.images == other.images)

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Homomorphism({self.source.name} -> {self.target.name})"


# -- operations ----------------------------------------------------------------

def _check_seed(G: FiniteGroup, seed: Iterable[int]) -> tuple[int, ...]:
    seed = tuple(int(x) for x in seed)
    for x in seed:
        if not 0 <= x < G.order:
            raise InputError(f"element index {x} out of range for order {G.order}")
    return seed


def subgroup_closure(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing ``seed``."""
    seed = _check_seed(G, seed)
    return Subgroup(G, G.closure_mask(seed), seed)


def _normal_closure_mask(G: FiniteGroup, seed: Iterable[int]) -> int:
    conj = {G.conj(g, x) for x in seed for g in range(G.order)}
    return G.closure_mask(conj)


def normal_closure(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    """Smallest normal subgroup containing ``seed``."""
    seed = _check_seed(G, seed)
    return Subgroup(G, _normal_closure_mask(G, seed), seed)


def generate(G: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    """Closure of a large seed set, keeping a short witness list."""
    gens: list[int] = []
    mask = 1
    for x in seed:
        if not mask >> x & 1:
            gens.append(x)
            mask = G.closure_mask(gens)
    return Subgroup(G, mask, tuple(gens))


def commutator_subgroup(G: FiniteGroup, H: Subgroup, K: Subgroup) -> Subgroup:
    """[H, K], generated by h^-1 k^-1 h k over all element pairs."""
    if H.parent != G or K.parent != G:
        raise InputError("commutator_subgroup: subgroup does not belong to the group")
    comms = {G.commutator(h, k) for h in H.elements for k in K.elements}
    return generate(G, sorted(comms))


def power_subgroup(G: FiniteGroup, H: Subgroup, p: int) -> Subgroup:
    """Subgroup generated by p-th powers of all elements of H."""
    return generate(G, sorted({G.power(x, p) for x in H.elements}))


def join(G: FiniteGroup, *subgroups: Subgroup) -> Subgroup:
    seed = [w for S in subgroups for w in (S.witnesses or S.elements)]
    mask = 0
    for S in subgroups:
        mask |= S.mask
    out = generate(G, seed)
    if out.mask & mask != mask:  # witnesses were partial
        out = generate(G, [x for S in subgroups for x in S.elements])
    return out


def quotient(G: FiniteGroup, N: Subgroup, name: str | None = None) -> tuple[FiniteGroup, Homomorphism]:
    """G/N on minimal coset representatives, with the projection."""
    if N.parent != G:
        raise InputError("quotient: subgroup does not belong to the group")
    w = normality_witness(N)
    if w is not None:
        g, n = w
        raise InputError(
            f"subgroup is not normal: {G.names[g]} * {G.names[n]} * {G.names[g]}^-1 "
            f"= {G.names[G.conj(g, n)]} lies outside it")
    t = G.table
    rep = [-1] * G.order
    reps = []
    for x in range(G.order):
        if rep[x] >= 0:
            continue
        coset = [t[x][n] for n in N.elements]
        r = min(coset)
        for y in coset:
            rep[y] = r
        reps.append(r)
    reps.sort()
    index = {r: i for i, r in enumerate(reps)}
    proj = [index[rep[x]] for x in range(G.order)]
    table = [[proj[t[a][b]] for b in reps] for a in reps]
    gens = sorted({proj[g] for g in G.generators if proj[g]})
    names = [G.names[r] if N.order == 1 else f"[{G.names[r]}]" for r in reps]
    Q = FiniteGroup(table, names, gens, name=name or f"{G.name}/N{N.order}", check=False)
    return Q, Homomorphism(G, Q, proj, check=False)


def hom_from_images(G: FiniteGroup, H: FiniteGroup, gen_images: dict[int, int] | Sequence[int]) -> Homomorphism:
    """The multiplicative extension of an assignment on G's generators."""
    if not isinstance(gen_images, dict):
        gen_images = dict(zip(G.generators, gen_images))
    for g in G.generators:
        if g not in gen_images:
            raise InputError(f"generator {G.names[g]} has no image")
    f = _extend(G, H, gen_images)
    if isinstance(f, str):
        raise InputError(f)
    return Homomorphism(G, H, f)


def _extend(G: FiniteGroup, H: FiniteGroup, gen_images: dict[int, int]):
    """Image list, or an error string naming a witness word."""
    gens = list(G.generators)
    imgs = [gen_images[g] for g in gens]
    f = [-1] * G.order
    word = {0: ""}
    f[0] = 0
    queue = deque([0])
    tg, th = G.table, H.table
    while queue:
        x = queue.popleft()
        fx = th[f[x]]
        gx = tg[x]
        for g, hg in zip(gens, imgs):
            y = gx[g]
            fy = fx[hg]
            if f[y] < 0:
                f[y] = fy
                word[y] = f"{word[x]}*{G.names[g]}" if word[x] else G.names[g]
                queue.append(y)
            elif f[y] != fy:
                w = f"{word[x]}*{G.names[g]}" if word[x] else G.names[g]
                return (f"inconsistent extension: the word {w} and the word "
                        f"{word[y] or 'e'} both equal {G.names[y]} but map to "
                        f"{H.names[fy]} and {H.names[f[y]]}")
    return f


def try_hom(G: FiniteGroup, H: FiniteGroup, gen_images: Sequence[int]) -> Homomorphism | None:
    """Like :func:`hom_from_images` but returns None instead of raising."""
    f = _extend(G, H, dict(zip(G.generators, gen_images)))
    if isinstance(f, str):
        return None
    ta, tb = G.table, H.table
    for x in range(G.order):
        fx = tb[f[x]]
        row = ta[x]
        for y in range(G.order):
            if f[row[y]] != fx[f[y]]:
                return None
    return Homomorphism(G, H, f, check=False)


def all_normal_subgroups(G: FiniteGroup, max_order: int = MAX_ORDER) -> list[Subgroup]:
    """Every normal subgroup, sorted by (order, members).

    Breadth-first over joins with single conjugacy classes.
    """
    if G.order > max_order:
        raise CapExceeded(
            f"normal subgroup lattice of a group of order {G.order} exceeds the bound "
            f"{max_order}; use normal closures of single elements instead")
    classes = [(_bits(c), c) for c in G.conjugacy_classes[1:]]
    found = {1: ()}
    frontier = [1]
    while frontier:
        nxt = []
        for mask in frontier:
            for cmask, cls in classes:
                if mask & cmask == cmask:
                    continue
                new = G.closure_mask(_members(mask | cmask))
                if new not in found:
                    found[new] = ()
                    nxt.append(new)
        frontier = nxt
    subs = [Subgroup(G, m, tuple(_members(m))) for m in found]
    return sorted(subs, key=lambda S: S.sort_key)


def all_subgroups(G: FiniteGroup, max_order: int = MAX_ORDER) -> list[Subgroup]:
    """Every subgroup, sorted by (order, members); joins of cyclic subgroups."""
    if G.order > max_order:
        raise CapExceeded(f"subgroup lattice of a group of order {G.order} exceeds {max_order}")
    cyclic = sorted({G.closure_mask([x]) for x in range(1, G.order)})
    found = {1}
    frontier = [1]
    while frontier:
        nxt = []
        for mask in frontier:
            for c in cyclic:
                if mask & c == c:
                    continue
                new = G.closure_mask(_members(mask | c))
                if new not in found:
                    found.add(new)
                    nxt.append(new)
        frontier = nxt
    subs = [Subgroup(G, m, tuple(_members(m))) for m in found]
    return sorted(subs, key=lambda S: S.sort_key)


def abelian_invariants(G: FiniteGroup) -> tuple[int, ...]:
    """Invariant factors of a finite abelian group, by counting p-power torsion.

    For G = (+) Z/p^a_i the number of x with p^k x = 0 is p^(sum min(k, a_i)),
    which pins down each partition a without any linear algebra.
    """
    if not G.is_abelian:
        raise InputError(f"{G.name} is not abelian")
    n = G.order
    primes = [p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, p))]
    orders = G.element_orders
    parts: dict[int, list[int]] = {}
    for p in primes:
        e = 0
        while n % p ** (e + 1) == 0:
            e += 1
        logs = []
        for k in range(e + 1):
            cnt = sum(1 for o in orders if (p ** k) % o == 0)
            lg = 0
            while p ** lg < cnt:
                lg += 1
            logs.append(lg)
        # logs[k] - logs[k-1] = number of a_i >= k
        ge = [logs[k] - logs[k - 1] for k in range(1, e + 1)]
        exps = []
        for k in range(1, e + 1):
            nxt = ge[k] if k < e else 0
            exps.extend([k] * (ge[k - 1] - nxt))
        parts[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in parts.values()), default=0)
    factors = []
    for i in range(width):
        d = 1
        for p, exps in parts.items():
            if i < len(exps):
                d *= p ** exps[i]
        factors.append(d)
    return tuple(sorted(factors))
