"""Truncated modules over a category kind, with exact degreewise actions.

A TruncatedModule stores dimensions for degrees 0..horizon and the action
matrices of a generating family of morphisms: the plain one-step generators
r -> r+1 and the end generators of each C(t, t).  Every other action matrix
is reconstructed by closure (the category decomposes any morphism into those
atoms), which keeps storage linear in the horizon even for FI where hom sets
grow factorially.

Vectors are rows; act(V, alpha) for alpha: r -> s is a dims[r] x dims[s]
matrix applied on the right.  Degreewise truncation is exact below the
horizon because the categories are directed, so operations never fabricate
data above what they were given; operations that consume a degree (shift,
kernels of mu, ...) return modules with a strictly smaller horizon.
"""

from __future__ import annotations

from .category import Morphism
from .matrices import Mat


class TruncatedModule:
    """A C-module known exactly up to its horizon (horizon -1 = no data)."""

    def __init__(self, cat, field, horizon, dims, steps, ends):
        if horizon < -1 or len(dims) != horizon + 1:
            raise ValueError("horizon/dims mismatch")
        self.cat = cat
        self.field = field
        self.horizon = horizon
        self.dims = list(dims)
        self.steps = steps  # steps[r][j]: Mat dims[r] x dims[r+1], r < horizon
        self.ends = ends  # ends[t][j]: Mat dims[t] x dims[t], t <= horizon
        self._act_cache = {}
        self._check_shapes()

    def _check_shapes(self):
        if len(self.steps) != max(self.horizon, 0):
            raise ValueError("wrong number of step levels")
        if len(self.ends) != self.horizon + 1:
            raise ValueError("wrong number of end levels")
        for r, mats in enumerate(self.steps):
            if len(mats) != len(self.cat.step_generators(r)):
                raise ValueError(f"step generator count mismatch at degree {r}")
            for m in mats:
                if m.shape != (self.dims[r], self.dims[r + 1]):
                    raise ValueError(f"step matrix shape mismatch at degree {r}")
        for t, mats in enumerate(self.ends):
            if len(mats) != len(self.cat.end_generators(t)):
                raise ValueError(f"end generator count mismatch at degree {t}")
            for m in mats:
                if m.shape != (self.dims[t], self.dims[t]):
                    raise ValueError(f"end matrix shape mismatch at degree {t}")

    def dim(self, t: int) -> int:
        if t < 0 or t > self.horizon:
            raise ValueError(f"degree {t} outside horizon {self.horizon}")
        return self.dims[t]

    def is_zero(self) -> bool:
        return all(d == 0 for d in self.dims)

    def act(self, alpha: Morphism) -> Mat:
        """Action matrix of alpha (dims[src] x dims[dst]); dst must be inside."""
        if alpha.dst > self.horizon:
            raise ValueError(f"degree {alpha.dst} above horizon {self.horizon}")
        cached = self._act_cache.get(alpha)
        if cached is not None:
            return cached
        out = Mat.identity(self.field, self.dims[alpha.src])
        for kind, level, j in self.cat.atoms(alpha):
            out = out @ (self.steps[level][j] if kind == "step" else self.ends[level][j])
        self._act_cache[alpha] = out
        return out

    def act_vector(self, row, alpha: Morphism):
        """Apply alpha to a single row vector; cheaper than act() for one-offs."""
        if alpha.dst > self.horizon:
            raise ValueError(f"degree {alpha.dst} above horizon {self.horizon}")
        out = Mat.from_rows(self.field, [row], self.dims[alpha.src])
        for kind, level, j in self.cat.atoms(alpha):
            out = out @ (self.steps[level][j] if kind == "step" else self.ends[level][j])
        return out.row(0)

    def __repr__(self):
        return f"TruncatedModule({self.cat.name}, {self.field.name}, h={self.horizon}, dims={self.dims})"


class FreeModule(TruncatedModule):
    """Direct sum of representables M(s); basis at degree t = (summand, morphism)."""

    def __init__(self, cat, field, summands, horizon):
        self.summands = tuple(summands)
        self._basis = {}
        self._offsets = {}
        dims = []
        for t in range(horizon + 1):
            basis = []
            offsets = []
            for k, s in enumerate(self.summands):
                offsets.append(len(basis))
                basis.extend((k, m) for m in cat.hom(s, t))
            self._basis[t] = tuple(basis)
            self._offsets[t] = tuple(offsets)
            dims.append(len(basis))
        steps = [
            [self._gen_matrix(cat, field, r, gamma) for gamma in cat.step_generators(r)]
            for r in range(max(horizon, 0))
        ]
        ends = [
            [self._gen_matrix(cat, field, t, eps) for eps in cat.end_generators(t)]
            for t in range(horizon + 1)
        ]
        super().__init__(cat, field, horizon, dims, steps, ends)

    def _gen_matrix(self, cat, field, r, gamma) -> Mat:
        rows = len(self._basis[r])
        cols = len(self._basis[gamma.dst])
        out = Mat.zeros(field, rows, cols)
        data = out.data
        one = field.one()
        for i, (k, m) in enumerate(self._basis[r]):
            j = self._offsets[gamma.dst][k] + cat.hom_index(cat.compose(gamma, m))
            if field.kind == "fp":
                data[i, j] = one
            else:
                data[i][j] = one
        return out

    def basis(self, t: int):
        return self._basis[t]

    def basis_index(self, t: int, k: int, m: Morphism) -> int:
        return self._offsets[t][k] + self.cat.hom_index(m)


class ModuleMap:
    """A degreewise linear map commuting with all stored category actions."""

    def __init__(self, domain, codomain, mats, check: bool = False):
        self.domain = domain
        self.codomain = codomain
        self.mats = list(mats)
        h = min(domain.horizon, codomain.horizon)
        if len(self.mats) != h + 1:
            raise ValueError("map must cover degrees 0..min(horizons)")
        for t, m in enumerate(self.mats):
            if m.shape != (domain.dims[t], codomain.dims[t]):
                raise ValueError(f"map shape mismatch at degree {t}")
        if check:
            bad = self.commutation_defect()
            if bad is not None:
                raise ValueError(f"map does not commute with the action: {bad}")

    @property
    def horizon(self) -> int:
        return len(self.mats) - 1

    def commutation_defect(self):
        """First (degree, generator) square that fails to commute, else None."""
        h = self.horizon
        for r in range(h):
            for j, gamma in enumerate(self.domain.cat.step_generators(r)):
                left = self.domain.steps[r][j] @ self.mats[r + 1]
                right = self.mats[r] @ self.codomain.steps[r][j]
                if left != right:
                    return (r, gamma)
        for t in range(h + 1):
            for j, eps in enumerate(self.domain.cat.end_generators(t)):
                left = self.domain.ends[t][j] @ self.mats[t]
                right = self.mats[t] @ self.codomain.ends[t][j]
                if left != right:
                    return (t, eps)
        return None

    def then(self, other: "ModuleMap") -> "ModuleMap":
        if other.domain is not self.codomain and other.domain.dims[: other.horizon + 1] != self.codomain.dims[: other.horizon + 1]:
            raise ValueError("composition domain mismatch")
        h = min(self.horizon, other.horizon)
        return ModuleMap(self.domain, other.codomain, [self.mats[t] @ other.mats[t] for t in range(h + 1)])

    def is_injective(self) -> bool:
        return all(m.rank() == m.nrows for m in self.mats)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats)

    def __repr__(self):
        return f"ModuleMap(h={self.horizon}, {self.domain!r} -> {self.codomain!r})"


def truncate(V: TruncatedModule, horizon: int) -> TruncatedModule:
    """Forget data above a smaller horizon (exact by directedness)."""
    if horizon > V.horizon:
        raise ValueError("cannot extend a horizon")
    if horizon == V.horizon:
        return V
    return TruncatedModule(
        V.cat,
        V.field,
        horizon,
        V.dims[: horizon + 1],
        [list(m) for m in V.steps[: max(horizon, 0)]],
        [list(m) for m in V.ends[: horizon + 1]],
    )


def zero_module(cat, field, horizon: int) -> TruncatedModule:
    dims = [0] * (horizon + 1)
    steps = [[Mat.zeros(field, 0, 0) for _ in cat.step_generators(r)] for r in range(max(horizon, 0))]
    ends = [[Mat.zeros(field, 0, 0) for _ in cat.end_generators(t)] for t in range(horizon + 1)]
    return TruncatedModule(cat, field, horizon, dims, steps, ends)


def free_module(cat, field, s: int, horizon: int) -> FreeModule:
    """The representable module M(s) truncated at the horizon."""
    if s < 0 or horizon < -1:
        raise ValueError("bad free module parameters")
    return FreeModule(cat, field, (s,), horizon)


def identity_map(V: TruncatedModule) -> ModuleMap:
    return ModuleMap(V, V, [Mat.identity(V.field, d) for d in V.dims])


def zero_map(V: TruncatedModule, W: TruncatedModule) -> ModuleMap:
    h = min(V.horizon, W.horizon)
    return ModuleMap(V, W, [Mat.zeros(V.field, V.dims[t], W.dims[t]) for t in range(h + 1)])


def end_closure(V: TruncatedModule, t: int, rows: Mat) -> Mat:
    """Smallest C(t,t)-stable row space containing the given rows."""
    current = rows.row_basis()
    gens = V.ends[t]
    if not gens:
        return current
    while True:
        pieces = [current] + [current @ g for g in gens]
        bigger = Mat.vstack(pieces).row_basis()
        if bigger.nrows == current.nrows:
            return bigger
        current = bigger


def submodule_from_rows(V: TruncatedModule, rows_per_degree, horizon=None):
    """Module structure on an action-stable family of row spaces of V.

    rows_per_degree[t] must be a canonical row basis; raises if the family is
    not stable under the stored generators.  Returns (U, inclusion).
    """
    h = V.horizon if horizon is None else horizon
    pairs = [rows_per_degree[t].row_basis_pivots() for t in range(h + 1)]
    bases = [p[0] for p in pairs]
    pivots = [p[1] for p in pairs]
    dims = [b.nrows for b in bases]
    steps = []
    for r in range(max(h, 0)):
        level = []
        for j, _ in enumerate(V.cat.step_generators(r)):
            pushed = bases[r] @ V.steps[r][j]
            level.append(pushed.express_rows(bases[r + 1], pivots=pivots[r + 1]))
        steps.append(level)
    ends = []
    for t in range(h + 1):
        level = []
        for j, _ in enumerate(V.cat.end_generators(t)):
            pushed = bases[t] @ V.ends[t][j]
            level.append(pushed.express_rows(bases[t], pivots=pivots[t]))
        ends.append(level)
    U = TruncatedModule(V.cat, V.field, h, dims, steps, ends)
    incl = ModuleMap(U, truncate(V, h), bases)
    return U, incl


def kernel_of_map(f: ModuleMap):
    """Degreewise kernel with its induced actions; returns (K, inclusion)."""
    h = f.horizon
    rows = [f.mats[t].left_kernel() for t in range(h + 1)]
    return submodule_from_rows(f.domain, rows, horizon=h)


def image_rows(f: ModuleMap):
    """Canonical row bases of the degreewise image of f inside its codomain."""
    return [f.mats[t].row_basis() for t in range(f.horizon + 1)]


def quotient_by(incl: ModuleMap):
    """Quotient of incl.codomain by the submodule incl embeds; returns (Q, proj).

    The inclusion must be degreewise injective and its image action-stable;
    induced actions are checked to be well defined.
    """
    V = incl.codomain
    h = incl.horizon
    field = V.field
    sub_bases = []
    comp = []
    projs = []
    for t in range(h + 1):
        B = incl.mats[t]
        if B.rank() != B.nrows:
            raise ValueError(f"non-injective inclusion at degree {t}")
        C = B.complement_rows()
        full = Mat.vstack([B, C]) if B.nrows else C
        inv = full.inverse()
        P = inv.take_cols(range(B.nrows, V.dims[t]))
        sub_bases.append(B)
        comp.append(C)
        projs.append(P)
    dims = [c.nrows for c in comp]
    steps = []
    for r in range(max(h, 0)):
        level = []
        for j, _ in enumerate(V.cat.step_generators(r)):
            A = V.steps[r][j]
            if not (sub_bases[r] @ A @ projs[r + 1]).is_zero():
                raise ValueError(f"induced step action not well defined at degree {r}")
            level.append(comp[r] @ A @ projs[r + 1])
        steps.append(level)
    ends = []
    for t in range(h + 1):
        level = []
        for j, _ in enumerate(V.cat.end_generators(t)):
            A = V.ends[t][j]
            if not (sub_bases[t] @ A @ projs[t]).is_zero():
                raise ValueError(f"induced end action not well defined at degree {t}")
            level.append(comp[t] @ A @ projs[t])
        ends.append(level)
    Q = TruncatedModule(V.cat, field, h, dims, steps, ends)
    proj = ModuleMap(truncate(V, h), Q, projs)
    return Q, proj


def direct_sum(V: TruncatedModule, W: TruncatedModule):
    """Block-diagonal direct sum truncated at the smaller horizon."""
    if V.cat != W.cat or V.field != W.field:
        raise ValueError("direct sum needs matching category and field")
    h = min(V.horizon, W.horizon)
    Vh, Wh = truncate(V, h), truncate(W, h)
    dims = [Vh.dims[t] + Wh.dims[t] for t in range(h + 1)]
    steps = [
        [_block_diag(Vh.steps[r][j], Wh.steps[r][j]) for j in range(len(Vh.steps[r]))]
        for r in range(max(h, 0))
    ]
    ends = [
        [_block_diag(Vh.ends[t][j], Wh.ends[t][j]) for j in range(len(Vh.ends[t]))]
        for t in range(h + 1)
    ]
    return TruncatedModule(V.cat, V.field, h, dims, steps, ends)


def _block_diag(a: Mat, b: Mat) -> Mat:
    out = Mat.zeros(a.field, a.nrows + b.nrows, a.ncols + b.ncols)
    if a.field.kind == "fp":
        out.data[: a.nrows, : a.ncols] = a.data
        out.data[a.nrows :, a.ncols :] = b.data
        return out
    for i in range(a.nrows):
        out.data[i][: a.ncols] = list(a.data[i])
    for i in range(b.nrows):
        out.data[a.nrows + i][a.ncols :] = list(b.data[i])
    return out


def m_span(V: TruncatedModule):
    """Row bases of (mV)_t: the span of all actions arriving from below."""
    out = []
    for t in range(V.horizon + 1):
        if t == 0:
            out.append(Mat.zeros(V.field, 0, V.dims[0]))
            continue
        pieces = [V.steps[t - 1][j] for j in range(len(V.steps[t - 1]))]
        seed = Mat.vstack(pieces).row_basis() if pieces else Mat.zeros(V.field, 0, V.dims[t])
        out.append(end_closure(V, t, seed))
    return out


def h0_dims(V: TruncatedModule):
    """Dimensions of V/mV per degree (the minimal-generator counts by degree)."""
    spans = m_span(V)
    return [V.dims[t] - spans[t].nrows for t in range(V.horizon + 1)], spans


def generating_degree(V: TruncatedModule) -> int:
    """gd(V) within the horizon: top degree carrying a minimal generator, or -1."""
    dims, _ = h0_dims(V)
    top = -1
    for t, d in enumerate(dims):
        if d > 0:
            top = t
    return top


def module_closure_of_rows(V: TruncatedModule, seed_rows_per_degree):
    """Smallest action-stable row-space family containing the seeds."""
    h = V.horizon
    out = []
    for t in range(h + 1):
        pieces = []
        if t > 0 and out[t - 1].nrows:
            for j in range(len(V.steps[t - 1])):
                pieces.append(out[t - 1] @ V.steps[t - 1][j])
        seed = seed_rows_per_degree.get(t) if isinstance(seed_rows_per_degree, dict) else seed_rows_per_degree[t]
        if seed is not None and seed.nrows:
            pieces.append(seed)
        if pieces:
            out.append(end_closure(V, t, Mat.vstack(pieces)))
        else:
            out.append(Mat.zeros(V.field, 0, V.dims[t]))
    return out
