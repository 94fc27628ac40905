"""Combinatorial kernels for the categories FI, OI, FI_G and OI_G.

Objects are the nonnegative integers.  A morphism r -> s is an injection
{1..r} -> {1..s} (strictly increasing for the OI kinds), optionally decorated
with a group element per source point.  Composition multiplies decorations
along the way: (f2,g2) o (f1,g1) = (f2 o f1, i |-> g2(f1(i)) * g1(i)).

The degree-1 self-embedding used for the shift functor is fixed as:
  * FI kinds: extend by the new top point (r+1 |-> s+1), new label identity;
  * OI kinds: prepend the new bottom point (1 |-> 1, i+1 |-> f(i)+1).
The matching witness family m_s: s -> s+1 is the standard inclusion for FI
kinds and i |-> i+1 for OI kinds, with identity labels.  Naturality and
functoriality of these choices are enforced by the test suite rather than
assumed.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from math import comb, perm

KINDS = ("fi", "oi", "fi_g", "oi_g")


class FiniteGroup:
    """A finite group given by a multiplication table; identity is element 0."""

    def __init__(self, table, spec: str):
        self.table = tuple(tuple(row) for row in table)
        self.order = len(self.table)
        self.spec = spec
        self._validate()
        self.inverse = tuple(self._find_inverse(a) for a in range(self.order))
        self.generators = self._generating_set()
        self._words = None

    @staticmethod
    def cyclic(m: int) -> "FiniteGroup":
        if m < 1:
            raise ValueError("cyclic group order must be >= 1")
        table = [[(a + b) % m for b in range(m)] for a in range(m)]
        return FiniteGroup(table, f"cyclic:{m}")

    @staticmethod
    def from_table(table) -> "FiniteGroup":
        flat = ",".join(str(x) for row in table for x in row)
        return FiniteGroup(table, f"table:{len(table)}:{flat}")

    def _validate(self):
        n = self.order
        for row in self.table:
            if len(row) != n or any(not (0 <= x < n) for x in row):
                raise ValueError("malformed multiplication table")
        for a in range(n):
            if self.table[a][0] != a or self.table[0][a] != a:
                raise ValueError("element 0 is not an identity")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                        raise ValueError("multiplication table is not associative")
        for a in range(n):
            if all(self.table[a][b] != 0 for b in range(n)):
                raise ValueError(f"element {a} has no inverse")

    def _find_inverse(self, a: int) -> int:
        for b in range(self.order):
            if self.table[a][b] == 0:
                return b
        raise AssertionError

    def _generating_set(self):
        # prefer a single generator; fall back to all non-identity elements
        for a in range(1, self.order):
            if len(self._closure([a])) == self.order:
                return (a,)
        return tuple(range(1, self.order))

    def _closure(self, gens):
        seen = {0}
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.table[x][g]
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return seen

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def word(self, a: int):
        """Indices into ``generators`` whose left-to-right product is ``a``."""
        if self._words is None:
            words = {0: ()}
            frontier = [0]
            while frontier:
                x = frontier.pop(0)
                for gi, g in enumerate(self.generators):
                    y = self.table[x][g]
                    if y not in words:
                        words[y] = words[x] + (gi,)
                        frontier.append(y)
            self._words = words
        return self._words[a]

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and other.table == self.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteGroup({self.spec})"


@dataclass(frozen=True)
class Morphism:
    """A combinatorial arrow src -> dst with 1-based image points."""

    src: int
    dst: int
    images: tuple
    labels: tuple | None = None

    def encode(self) -> str:
        text = f"{self.src}->{self.dst}:[{','.join(str(i) for i in self.images)}]"
        if self.labels is not None:
            text += f"({','.join(str(g) for g in self.labels)})"
        return text

    def __str__(self):
        return self.encode()


_MOR_RE = re.compile(r"^(\d+)->(\d+):\[([0-9,]*)\](?:\(([0-9,]*)\))?$")


def parse_morphism(text: str) -> Morphism:
    m = _MOR_RE.match(text.strip())
    if not m:
        raise ValueError(f"bad morphism encoding {text!r}")
    src, dst = int(m.group(1)), int(m.group(2))
    images = tuple(int(x) for x in m.group(3).split(",") if x != "")
    labels = None
    if m.group(4) is not None:
        labels = tuple(int(x) for x in m.group(4).split(",") if x != "")
    return Morphism(src, dst, images, labels)


class CategoryDescriptor:
    """One of the four category kinds, with its group decoration if any.

    Immutable; hom-set enumeration and generator data are memoized (pure,
    idempotent caches, safe under concurrent use).
    """

    def __init__(self, kind: str, group: FiniteGroup | None = None, provenance: str = ""):
        kind = kind.lower()
        if kind not in KINDS:
            raise ValueError(f"unknown category kind {kind!r}")
        if kind.endswith("_g"):
            if group is None:
                raise ValueError(f"{kind} requires a group")
        elif group is not None:
            raise ValueError(f"{kind} does not carry a group")
        self.kind = kind
        self.group = group
        self.provenance = provenance
        self.ordered = kind.startswith("oi")
        self._hom = {}
        self._index = {}
        self._ends = {}
        self._steps = {}
        self._atoms = {}

    def __eq__(self, other):
        return (
            isinstance(other, CategoryDescriptor)
            and other.kind == self.kind
            and other.group == self.group
        )

    def __hash__(self):
        return hash((self.kind, self.group))

    def __repr__(self):
        g = f", {self.group.spec}" if self.group else ""
        return f"CategoryDescriptor({self.kind}{g})"

    @property
    def name(self) -> str:
        return self.kind + (f"[{self.group.spec}]" if self.group else "")

    # -- morphism structure --------------------------------------------

    def _identity_labels(self, r: int):
        return (0,) * r if self.group else None

    def identity(self, s: int) -> Morphism:
        return Morphism(s, s, tuple(range(1, s + 1)), self._identity_labels(s))

    def normalize(self, m: Morphism) -> Morphism:
        """Canonical labels for empty-source morphisms, where the text
        encoding cannot distinguish decorated from plain."""
        if m.src == 0:
            if self.group and m.labels is None:
                return Morphism(m.src, m.dst, m.images, ())
            if not self.group and m.labels == ():
                return Morphism(m.src, m.dst, m.images, None)
        return m

    def validate(self, m: Morphism) -> None:
        if m.src < 0 or m.dst < 0 or m.src > m.dst:
            raise ValueError(f"invalid endpoints in {m}")
        if len(m.images) != m.src:
            raise ValueError(f"wrong image count in {m}")
        if any(not (1 <= i <= m.dst) for i in m.images):
            raise ValueError(f"image out of range in {m}")
        if self.ordered:
            if any(a >= b for a, b in zip(m.images, m.images[1:])):
                raise ValueError(f"images not strictly increasing in {m}")
        elif len(set(m.images)) != m.src:
            raise ValueError(f"images not injective in {m}")
        if self.group:
            if m.labels is None or len(m.labels) != m.src:
                raise ValueError(f"missing labels in {m}")
            if any(not (0 <= g < self.group.order) for g in m.labels):
                raise ValueError(f"label out of range in {m}")
        elif m.labels is not None:
            raise ValueError(f"unexpected labels in {m}")

    def hom(self, r: int, s: int):
        """All morphisms r -> s in canonical order (lex on images then labels)."""
        key = (r, s)
        cached = self._hom.get(key)
        if cached is not None:
            return cached
        if r > s or r < 0 or s < 0:
            out = ()
        else:
            if self.ordered:
                image_iter = itertools.combinations(range(1, s + 1), r)
            else:
                image_iter = itertools.permutations(range(1, s + 1), r)
            if self.group:
                n = self.group.order
                out = tuple(
                    Morphism(r, s, images, labels)
                    for images in image_iter
                    for labels in itertools.product(range(n), repeat=r)
                )
            else:
                out = tuple(Morphism(r, s, images) for images in image_iter)
        self._hom[key] = out
        self._index[key] = {m: i for i, m in enumerate(out)}
        return out

    def hom_count(self, r: int, s: int) -> int:
        if r > s or r < 0 or s < 0:
            return 0
        base = comb(s, r) if self.ordered else perm(s, r)
        return base * (self.group.order ** r if self.group else 1)

    def hom_index(self, m: Morphism) -> int:
        key = (m.src, m.dst)
        if key not in self._index:
            self.hom(*key)
        return self._index[key][m]

    def compose(self, beta: Morphism, alpha: Morphism) -> Morphism:
        """beta o alpha for alpha: r -> s, beta: s -> t."""
        if alpha.dst != beta.src:
            raise ValueError(f"cannot compose {beta} o {alpha}: endpoint mismatch")
        images = tuple(beta.images[i - 1] for i in alpha.images)
        labels = None
        if self.group:
            labels = tuple(
                self.group.mul(beta.labels[alpha.images[k] - 1], alpha.labels[k])
                for k in range(alpha.src)
            )
        return Morphism(alpha.src, beta.dst, images, labels)

    def embed(self, alpha: Morphism) -> Morphism:
        """The degree-1 self-embedding applied to a morphism."""
        r, s = alpha.src, alpha.dst
        if self.ordered:
            images = (1,) + tuple(i + 1 for i in alpha.images)
            labels = (0,) + alpha.labels if self.group else None
            return Morphism(r + 1, s + 1, images, labels)
        images = alpha.images + (s + 1,)
        labels = alpha.labels + (0,) if self.group else None
        return Morphism(r + 1, s + 1, images, labels)

    def mu_witness(self, s: int) -> Morphism:
        """The natural-transformation witness m_s: s -> s+1."""
        if self.ordered:
            images = tuple(range(2, s + 2))
        else:
            images = tuple(range(1, s + 1))
        return Morphism(s, s + 1, images, self._identity_labels(s))

    # -- factorization and generators ----------------------------------

    def _skip_map(self, t: int, p: int) -> Morphism:
        """The increasing one-step t -> t+1 whose image misses p."""
        images = tuple(j if j < p else j + 1 for j in range(1, t + 1))
        return Morphism(t, t + 1, images, self._identity_labels(t))

    def _factor_once(self, alpha: Morphism):
        """Write alpha: r -> s (s > r) as gamma o beta with gamma a plain one-step."""
        r, s = alpha.src, alpha.dst
        missing = set(range(1, s + 1)) - set(alpha.images)
        p = max(missing)
        beta = Morphism(
            r,
            s - 1,
            tuple(i if i < p else i - 1 for i in alpha.images),
            alpha.labels,
        )
        return beta, self._skip_map(s - 1, p)

    def factor_through_predecessor(self, alpha: Morphism):
        """Factor alpha: r -> s with s >= r+2 through s-1; labels ride on beta."""
        if alpha.dst < alpha.src + 2:
            raise ValueError("factor_through_predecessor needs dst >= src + 2")
        return self._factor_once(alpha)

    def step_generators(self, r: int):
        """Plain one-step morphisms r -> r+1 stored on every module.

        FI kinds store only m_r (ends act transitively on one-steps); OI kinds
        store all r+1 strictly increasing one-steps.
        """
        cached = self._steps.get(r)
        if cached is None:
            if self.ordered:
                cached = tuple(self._skip_map(r, p) for p in range(r + 1, 0, -1))
            else:
                cached = (self.mu_witness(r),)
            self._steps[r] = cached
        return cached

    def step_index(self, gamma: Morphism) -> int:
        return self.step_generators(gamma.src).index(gamma)

    def end_generators(self, s: int):
        """Generators of the end monoid C(s, s) under composition."""
        cached = self._ends.get(s)
        if cached is not None:
            return cached
        gens = []
        ident = tuple(range(1, s + 1))
        if not self.ordered:
            for j in range(1, s):
                images = list(ident)
                images[j - 1], images[j] = images[j], images[j - 1]
                gens.append(Morphism(s, s, tuple(images), self._identity_labels(s)))
        if self.group:
            slots = range(1, s + 1) if self.ordered else ([1] if s >= 1 else [])
            for j in slots:
                for g in self.group.generators:
                    labels = [0] * s
                    labels[j - 1] = g
                    gens.append(Morphism(s, s, ident, tuple(labels)))
        cached = tuple(gens)
        self._ends[s] = cached
        return cached

    # -- decomposition into stored generators --------------------------

    def _perm_atoms(self, images, level: int):
        """Adjacent-transposition atoms (application order) for a permutation."""
        line = list(images)
        out = []
        while True:
            for j in range(len(line) - 1):
                if line[j] > line[j + 1]:
                    line[j], line[j + 1] = line[j + 1], line[j]
                    out.append(("end", level, j))
                    break
            else:
                return out

    def _label_atom_indices(self, s: int):
        """Index of the slot-j / generator-g label morphism in end_generators(s)."""
        ngens = len(self.group.generators)
        if self.ordered:
            return lambda j, gi: (j - 1) * ngens + gi
        nperm = max(s - 1, 0)
        return lambda j, gi: nperm + gi

    def _end_atoms(self, eps: Morphism):
        """Atoms for an end morphism; empty for identities."""
        s = eps.src
        out = []
        if self.group:
            idx = self._label_atom_indices(s)
            for j in range(1, s + 1):
                g = eps.labels[j - 1]
                if g == 0:
                    continue
                word = self.group.word(g)
                if self.ordered:
                    out.extend(("end", s, idx(j, gi)) for gi in reversed(word))
                elif j == 1:
                    out.extend(("end", s, idx(1, gi)) for gi in reversed(word))
                else:
                    # conjugate the slot-1 label by the transposition (1, j)
                    swap = self._perm_atoms(
                        (j,) + tuple(range(2, j)) + (1,) + tuple(range(j + 1, s + 1)), s
                    )
                    out.extend(swap)
                    out.extend(("end", s, idx(1, gi)) for gi in reversed(word))
                    out.extend(swap)
        if not self.ordered and eps.images != tuple(range(1, s + 1)):
            out.extend(self._perm_atoms(eps.images, s))
        return out

    def _step_atoms(self, gamma: Morphism):
        """Atoms realizing a plain one-step t -> t+1."""
        t = gamma.src
        if self.ordered:
            return [("step", t, self.step_index(gamma))]
        p = next(iter(set(range(1, t + 2)) - set(gamma.images)))
        out = [("step", t, 0)]
        out.extend(("end", t + 1, j - 1) for j in range(t, p - 1, -1))
        return out

    def atoms(self, alpha: Morphism):
        """Decompose alpha into stored generator atoms, in application order.

        Each atom is ("step", r, j) or ("end", t, j); a module realizes
        act(alpha) as the ordered product of the corresponding matrices.
        """
        cached = self._atoms.get(alpha)
        if cached is not None:
            return cached
        chain = []
        a = alpha
        while a.dst > a.src:
            a, gamma = self._factor_once(a)
            chain.append(gamma)
        out = list(self._end_atoms(a))
        for gamma in reversed(chain):
            out.extend(self._step_atoms(gamma))
        out = tuple(out)
        self._atoms[alpha] = out
        return out


def make_category(kind: str, group_spec=None, provenance: str = "") -> CategoryDescriptor:
    """Build a descriptor from a kind and a group spec (int order or table)."""
    kind = kind.lower()
    group = None
    if kind.endswith("_g"):
        if group_spec is None:
            raise ValueError(f"{kind} requires a group spec")
        if isinstance(group_spec, FiniteGroup):
            group = group_spec
        elif isinstance(group_spec, int):
            group = FiniteGroup.cyclic(group_spec)
        else:
            group = parse_group_spec(str(group_spec))
    elif group_spec not in (None, "none"):
        raise ValueError(f"{kind} does not take a group")
    return CategoryDescriptor(kind, group, provenance)


def parse_group_spec(spec: str) -> FiniteGroup:
    spec = spec.strip().lower()
    if spec.startswith("cyclic:"):
        return FiniteGroup.cyclic(int(spec.split(":", 1)[1]))
    if spec.startswith("table:"):
        parts = spec.split(":", 2)
        if len(parts) != 3:
            raise ValueError(f"bad group table spec {spec!r}")
        n = int(parts[1])
        flat = [int(x) for x in parts[2].split(",")]
        if len(flat) != n * n:
            raise ValueError(f"group table needs {n * n} entries, got {len(flat)}")
        table = [flat[i * n : (i + 1) * n] for i in range(n)]
        return FiniteGroup.from_table(table)
    raise ValueError(f"unknown group spec {spec!r}")
