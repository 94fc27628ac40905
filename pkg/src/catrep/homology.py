"""Homology of truncated modules: H_0, Tor, homological degrees, regularity.

Resolutions are built degreewise: each step covers the current syzygy module
by a direct sum of representables placed exactly at the degrees where H_0 is
nonzero (one summand per greedy end-orbit generator), so gd(P^i) = gd(Z^i)
holds at every step by construction.  Tor is then computed by reducing the
realized differentials modulo the ideal of positive-degree morphisms; this
stays correct for non-minimal (padded) resolutions and over any field, which
the resolution-independence tests exploit.

Directedness makes degreewise truncation exact, so a resolution loses no
horizon: every homology number is valid up to the horizon of its module, and
reg is reported as computed within the built depth.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import factorial

from .matrices import Mat
from .trunc import (
    FreeModule,
    ModuleMap,
    TruncatedModule,
    end_closure,
    free_module,
    generating_degree,
    h0_dims,
    kernel_of_map,
    m_span,
    truncate,
)
from .shift import derive, shift_module


@dataclass
class H0Report:
    """V/mV per degree plus chosen generator lifts (rows in V coordinates)."""

    dims: list
    lifts: list
    gd: int
    valid_to: int


def zeroth_homology(V: TruncatedModule) -> H0Report:
    """H_0(V) = V/mV; lifts are the canonical complement of (mV)_t in V_t."""
    dims, spans = h0_dims(V)
    lifts = [spans[t].complement_rows() for t in range(V.horizon + 1)]
    gd = -1
    for t, d in enumerate(dims):
        if d:
            gd = t
    return H0Report(dims, lifts, gd, V.horizon)


def minimal_generators(V: TruncatedModule, pad: bool = False):
    """Greedy module generators: (degree, row) pairs whose orbits fill V.

    Each pick extends the span by the full end-orbit of one complement
    vector, so the generator count per degree can exceed dim H_0 only when
    the end algebra acts with non-cyclic quotients; gd is matched exactly
    either way.  pad=True appends one redundant generator for the
    resolution-independence oracle.
    """
    spans = m_span(V)
    gens = []
    for t in range(V.horizon + 1):
        W = spans[t]
        d = V.dims[t]
        while W.nrows < d:
            v = W.complement_rows().row(0)
            gens.append((t, v))
            W = end_closure(V, t, Mat.vstack([W, Mat.from_rows(V.field, [v], d)]))
    if pad and gens:
        t0, v0 = gens[0]
        gens.append((t0, v0))
    return gens


def _cover(Z: TruncatedModule, gens):
    """Free module on the given generators and the cover map onto Z."""
    cat, field, h = Z.cat, Z.field, Z.horizon
    P = FreeModule(cat, field, tuple(t for t, _ in gens), h)
    blocks = {}
    for k, (s, v) in enumerate(gens):
        rows = [Z.act_vector(v, e) for e in cat.hom(s, s)]
        blocks[(k, s)] = (
            Mat.from_rows(field, rows, Z.dims[s]) if rows else Mat.zeros(field, 0, Z.dims[s])
        )
        for t in range(s + 1, h + 1):
            homs = cat.hom(s, t)
            prev = blocks[(k, t - 1)]
            by_gamma = {}
            for i, alpha in enumerate(homs):
                beta, gamma = cat._factor_once(alpha)
                by_gamma.setdefault(gamma, []).append((i, cat.hom_index(beta)))
            out = Mat.zeros(field, len(homs), Z.dims[t])
            for gamma, pairs in by_gamma.items():
                A = Z.act(gamma)
                sub = prev.take_rows([bi for _, bi in pairs]) @ A
                if field.kind == "fp":
                    out.data[[i for i, _ in pairs]] = sub.data
                else:
                    for r, (i, _) in enumerate(pairs):
                        out.data[i] = sub.row(r)
            blocks[(k, t)] = out
    mats = []
    for t in range(h + 1):
        pieces = [
            blocks[(k, t)] if s <= t else Mat.zeros(field, 0, Z.dims[t])
            for k, (s, _) in enumerate(gens)
        ]
        mats.append(Mat.vstack(pieces) if pieces else Mat.zeros(field, 0, Z.dims[t]))
    return P, ModuleMap(P, Z, mats)


@dataclass
class ResolutionStep:
    free: FreeModule
    gen_degrees: tuple
    diff: ModuleMap  # P^i -> Z^i (abstract syzygy coordinates)
    syzygy: TruncatedModule  # Z^{i+1}
    syzygy_incl: ModuleMap  # Z^{i+1} -> P^i
    gd_free: int
    gd_syzygy_target: int


@dataclass
class Resolution:
    """An adaptable degreewise free resolution built to the requested depth."""

    target: TruncatedModule
    steps: list
    depth: int

    @property
    def horizon(self) -> int:
        return self.target.horizon


def resolve(V: TruncatedModule, depth: int, pad: bool = False) -> Resolution:
    """Resolve V by free modules placed at minimal generator degrees.

    Every step checks surjectivity of the cover and the adaptability
    equality gd(P^i) = gd(Z^i); pad=True adds a redundant generator to P^0.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    steps = []
    Z = V
    for i in range(depth + 1):
        gens = minimal_generators(Z, pad=(pad and i == 0))
        gd_z = generating_degree(Z)
        P, diff = _cover(Z, gens)
        gd_p = max((t for t, _ in gens), default=-1)
        if gd_p != gd_z:
            raise AssertionError(f"adaptability broken at step {i}: gd(P)={gd_p}, gd(Z)={gd_z}")
        syz, syz_incl = kernel_of_map(diff)
        for t in range(Z.horizon + 1):
            if P.dims[t] - syz.dims[t] != Z.dims[t]:
                raise AssertionError(f"cover not surjective at step {i}, degree {t}")
        steps.append(ResolutionStep(P, tuple(t for t, _ in gens), diff, syz, syz_incl, gd_p, gd_z))
        Z = syz
    return Resolution(V, steps, depth)


def _reduced_indices(P: FreeModule, t: int):
    """Basis positions of P_t surviving reduction mod m (degree-t summands)."""
    return [i for i, (k, _) in enumerate(P.basis(t)) if P.summands[k] == t]


@dataclass
class HomologyReport:
    """Tor dims per index and degree, with hd/gd/reg and validity bounds."""

    dims: list  # dims[i][t] = dim H_i(V)_t for 0 <= i <= depth, 0 <= t <= horizon
    hd: list  # hd[i] within the horizon (-1 when H_i vanishes there)
    gd: int
    reg: int
    depth: int
    valid_to: int
    reg_is_lower_bound: bool = True

    def hd_within(self, i: int, w: int) -> int:
        """Top degree <= w where H_i is nonzero, or -1."""
        best = -1
        for t in range(min(w, self.valid_to) + 1):
            if self.dims[i][t]:
                best = t
        return best

    def reg_within(self, w: int, depth: int | None = None) -> int:
        d = self.depth if depth is None else min(depth, self.depth)
        return max((self.hd_within(i, w) - i for i in range(d + 1)), default=-1)


def tor_groups(V: TruncatedModule, depth: int, pad: bool = False,
               resolution: Resolution | None = None) -> HomologyReport:
    """H_i(V) = Tor_i(C/m, V) for i <= depth from an explicit resolution.

    The reduction mod m of a free module keeps exactly the basis elements
    (summand, end morphism) sitting at the summand's own degree, so reduced
    differentials are plain row/column selections of the realized ones.
    """
    res = resolution if resolution is not None else resolve(V, depth, pad=pad)
    h = V.horizon
    dims = [[0] * (h + 1) for _ in range(depth + 1)]
    sel = [[_reduced_indices(step.free, t) for t in range(h + 1)] for step in res.steps]
    for t in range(h + 1):
        for i in range(depth + 1):
            step = res.steps[i]
            if i == 0:
                kernel_rows = Mat.identity(V.field, len(sel[0][t]))
            else:
                realized = step.diff.mats[t] @ res.steps[i - 1].syzygy_incl.mats[t]
                reduced = realized.take_rows(sel[i][t]).take_cols(sel[i - 1][t])
                kernel_rows = reduced.left_kernel()
            image_rows_red = step.syzygy_incl.mats[t].take_cols(sel[i][t]).row_basis()
            if Mat.vstack([kernel_rows, image_rows_red]).rank() != kernel_rows.nrows:
                raise AssertionError(f"reduced image escapes reduced kernel at i={i}, t={t}")
            dims[i][t] = kernel_rows.nrows - image_rows_red.nrows
    hd = []
    for i in range(depth + 1):
        top = -1
        for t in range(h + 1):
            if dims[i][t]:
                top = t
        hd.append(top)
    reg = max((hd[i] - i for i in range(depth + 1)), default=-1)
    return HomologyReport(dims, hd, hd[0], reg, depth, h)


@dataclass
class HilbertFit:
    """Exact finite-difference fit of the dimension sequence by a polynomial."""

    raw_dims: list
    gd: int
    status: str  # "ok" | "inconclusive"
    onset: int | None
    coeffs: list | None  # rational coefficients, low degree first
    degree: int | None
    valid_to: int

    def evaluate(self, n: int):
        if self.coeffs is None:
            raise ValueError("no fit available")
        acc = Fraction(0)
        for k, c in enumerate(reversed(self.coeffs)):
            acc = acc * n + c
        return acc


def hilbert_fit(V: TruncatedModule) -> HilbertFit:
    """Fit dims by a polynomial of degree <= gd(V) via forward differences.

    The onset is the least degree from which all differences of order
    gd(V)+1 vanish up to the horizon; reports inconclusive when the horizon
    leaves no checkable window.
    """
    h = V.horizon
    dims = list(V.dims)
    g = generating_degree(V)
    if g == -1:
        return HilbertFit(dims, g, "ok", 0, [], -1, h)
    table = [list(map(Fraction, dims))]
    for _ in range(g + 1):
        prev = table[-1]
        table.append([prev[j + 1] - prev[j] for j in range(len(prev) - 1)])
    top = table[g + 1]  # entry j = (g+1)-st difference at degree j
    onset = None
    for o in range(h - g):
        if all(x == 0 for x in top[o:]):
            onset = o
            break
    if onset is None or not top[onset:]:
        return HilbertFit(dims, g, "inconclusive", None, None, None, h)
    coeffs = _newton_coefficients([table[k][onset] for k in range(g + 1)], onset)
    fit = HilbertFit(dims, g, "ok", onset, coeffs, _poly_degree(coeffs), h)
    for n in range(onset, h + 1):
        if fit.evaluate(n) != dims[n]:
            raise AssertionError(f"hilbert fit mismatch at degree {n}")
    if fit.degree is not None and fit.degree > g:
        raise AssertionError("fitted degree exceeds gd")
    return fit


def _newton_coefficients(diffs, onset: int):
    """Coefficients of sum_k diffs[k] * C(x - onset, k), low degree first."""
    out = [Fraction(0)] * (len(diffs) + 1)
    for k, dk in enumerate(diffs):
        if dk == 0:
            continue
        # expand C(x - onset, k) = prod_{j=0}^{k-1} (x - onset - j) / k!
        poly = [Fraction(1)]
        for j in range(k):
            poly = _poly_mul_linear(poly, -(onset + j))
        scale = Fraction(dk, factorial(k))
        for d, p in enumerate(poly):
            out[d] += scale * p
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _poly_mul_linear(poly, c):
    """Multiply a coefficient list by (x + c); poly given low degree first."""
    out = [Fraction(0)] * (len(poly) + 1)
    for d, a in enumerate(poly):
        out[d] += a * c
        out[d + 1] += a
    return out


def _poly_degree(coeffs):
    deg = -1
    for d, c in enumerate(coeffs):
        if c != 0:
            deg = d
    return deg


class VerificationViolation(Exception):
    """An instantiated lemma inequality failed with conclusive values."""


@dataclass
class VerifyItem:
    name: str
    status: str  # "pass" | "violation" | "skipped" | "inconclusive"
    detail: str
    data: dict = dc_field(default_factory=dict)


@dataclass
class VerifyReport:
    items: list
    overall: str

    def by_name(self, name: str) -> VerifyItem:
        for item in self.items:
            if item.name == name:
                return item
        raise KeyError(name)


def verify_theorems(V: TruncatedModule, depth: int, s_bound: int = 3,
                    big_n: int = 0, halt_on_violation: bool = True,
                    check_hypothesis: bool = True) -> VerifyReport:
    """Instantiate the shift/derivative lemma inequalities on V.

    Every quantity is computed within an explicit window; an inequality is
    conclusive only when all its homological degrees sit strictly inside
    their windows, otherwise the item reports inconclusive.  The hypothesis
    reg(S M(s)) <= s + N is checked first for s <= s_bound; regularity items
    are skipped if it fails.  check_hypothesis=False records nothing and
    assumes the caller validated it for this category and field.  A
    conclusive violated inequality either surfaces a bug or a genuine
    counterexample and stops the run.
    """
    items = []
    h = V.horizon

    def emit(name, status, detail, **data):
        items.append(VerifyItem(name, status, detail, data))
        if status == "violation" and halt_on_violation:
            raise VerificationViolation(f"{name}: {detail}")
        return status

    hypothesis_ok = True
    for s in range(s_bound + 1 if check_hypothesis else 0):
        M = free_module(V.cat, V.field, s, h)
        SM = shift_module(M)
        rep = tor_groups(SM, depth)
        bound = s + big_n
        if rep.reg > bound:
            hypothesis_ok = False
            emit(
                f"hypothesis-reg-SM({s})",
                "violation",
                f"reg(SM({s})) = {rep.reg} > {bound} within horizon {rep.valid_to}",
                s=s, reg=rep.reg,
            )
        else:
            emit(
                f"hypothesis-reg-SM({s})",
                "pass",
                f"reg(SM({s})) = {rep.reg} <= {bound} within horizon {rep.valid_to}",
                s=s, reg=rep.reg,
            )

    if V.horizon < 1 or V.is_zero():
        emit("module-checks", "skipped", "module is zero or horizon too small")
        return _finish(items)

    seq = derive(V)
    SV, DV = seq.SV, seq.DV
    w = h - 1  # common window for quantities involving SV/DV
    mu_inj = seq.mu.is_injective()

    # truncating to the window before resolving is exact (directedness) and
    # keeps the free covers desk-sized; every value below is windowed to w
    rep_v = tor_groups(truncate(V, w), depth)
    rep_sv = tor_groups(SV, depth)
    rep_dv = tor_groups(DV, depth)

    gd_v = rep_v.hd_within(0, w)
    gd_sv = rep_sv.hd_within(0, w)
    gd_dv = rep_dv.hd_within(0, w)

    def interior(value, window):
        return value < window

    # Lemma: gd(DV) = gd(V) - 1 for nonzero V
    if interior(gd_v, w) and interior(gd_dv, w):
        ok = gd_dv == gd_v - 1
        emit(
            "gd-derivative-drop",
            "pass" if ok else "violation",
            f"gd(DV) = {gd_dv}, gd(V) = {gd_v}",
            gd_v=gd_v, gd_dv=gd_dv,
        )
    else:
        emit("gd-derivative-drop", "inconclusive", f"window {w} too small for gd values")

    # Lemma: gd(SV) <= gd(V) <= gd(SV) + 1
    gd_v_w = rep_v.hd_within(0, w)
    if interior(gd_v_w, w) and interior(gd_sv, w):
        ok = gd_sv <= gd_v_w <= gd_sv + 1
        emit(
            "gd-shift-window",
            "pass" if ok else "violation",
            f"gd(SV) = {gd_sv}, gd(V) = {gd_v_w}",
            gd_v=gd_v_w, gd_sv=gd_sv,
        )
    else:
        emit("gd-shift-window", "inconclusive", f"window {w} too small for gd values")

    if not hypothesis_ok:
        emit("hd-shift-upper", "skipped", "reg(SM(s)) hypothesis failed")
        emit("hd-unshift-upper", "skipped", "reg(SM(s)) hypothesis failed")
        emit("hd-mu-injective-bound", "skipped", "reg(SM(s)) hypothesis failed")
        emit("reg-derivative-bound", "skipped", "reg(SM(s)) hypothesis failed")
        emit("reg-shift-window", "skipped", "reg(SM(s)) hypothesis failed")
        return _finish(items)

    hd_v = [rep_v.hd_within(i, w) for i in range(depth + 1)]
    hd_sv = [rep_sv.hd_within(i, w) for i in range(depth + 1)]
    all_interior = all(interior(x, w) for x in hd_v + hd_sv)

    # Lemma: hd_i(SV) <= max over j <= i of hd_j(V) + i - j
    if all_interior:
        for i in range(depth + 1):
            bound = max(hd_v[j] + i - j for j in range(i + 1))
            if hd_sv[i] > bound:
                emit(
                    "hd-shift-upper",
                    "violation",
                    f"hd_{i}(SV) = {hd_sv[i]} > {bound} (witness degree {hd_sv[i]}, index {i})",
                    i=i, hd_sv=hd_sv[i], bound=bound,
                )
                break
        else:
            emit("hd-shift-upper", "pass", f"holds for i <= {depth} within window {w}")
    else:
        emit("hd-shift-upper", "inconclusive", f"an hd value reached window {w}")

    # Lemma: hd_i(V) <= max({hd_j(V) + i - j : j < i} U {hd_i(SV) + 1})
    if all_interior:
        for i in range(depth + 1):
            cands = [hd_v[j] + i - j for j in range(i)] + [hd_sv[i] + 1]
            bound = max(cands)
            if hd_v[i] > bound:
                emit(
                    "hd-unshift-upper",
                    "violation",
                    f"hd_{i}(V) = {hd_v[i]} > {bound} (witness index {i})",
                    i=i, hd_v=hd_v[i], bound=bound,
                )
                break
        else:
            emit("hd-unshift-upper", "pass", f"holds for i <= {depth} within window {w}")
    else:
        emit("hd-unshift-upper", "inconclusive", f"an hd value reached window {w}")

    # Lemma (mu injective): hd_i(V) <= reg(DV) + (N+1) i + 1
    if not mu_inj:
        emit(
            "hd-mu-injective-bound",
            "skipped",
            "mu_V is not injective within the window, hypothesis of the bound fails",
        )
        emit(
            "reg-derivative-bound",
            "skipped",
            "mu_V is not injective within the window, hypothesis of the bound fails",
        )
    else:
        hd_dv = [rep_dv.hd_within(i, w) for i in range(depth + 1)]
        reg_dv = rep_dv.reg_within(w)
        if all(interior(x, w) for x in hd_v + hd_dv):
            for i in range(depth + 1):
                bound = reg_dv + (big_n + 1) * i + 1
                if hd_v[i] > bound:
                    emit(
                        "hd-mu-injective-bound",
                        "violation",
                        f"hd_{i}(V) = {hd_v[i]} > reg(DV) + {big_n + 1}*{i} + 1 = {bound}",
                        i=i, hd_v=hd_v[i], reg_dv=reg_dv,
                    )
                    break
            else:
                emit("hd-mu-injective-bound", "pass", f"holds for i <= {depth} within window {w}")
            reg_v = rep_v.reg_within(w)
            if reg_v <= reg_dv + 1:
                emit(
                    "reg-derivative-bound",
                    "pass",
                    f"reg(V) = {reg_v} <= reg(DV) + 1 = {reg_dv + 1} (depth {depth})",
                    reg_v=reg_v, reg_dv=reg_dv,
                )
            else:
                emit(
                    "reg-derivative-bound",
                    "violation",
                    f"reg(V) = {reg_v} > reg(DV) + 1 = {reg_dv + 1}",
                    reg_v=reg_v, reg_dv=reg_dv,
                )
        else:
            emit("hd-mu-injective-bound", "inconclusive", f"an hd value reached window {w}")
            emit("reg-derivative-bound", "inconclusive", f"an hd value reached window {w}")

    # Corollary: reg(SV) <= reg(V) <= reg(SV) + 1
    if all_interior:
        reg_v = rep_v.reg_within(w)
        reg_sv = rep_sv.reg_within(w)
        if reg_sv <= reg_v <= reg_sv + 1:
            emit(
                "reg-shift-window",
                "pass",
                f"reg(SV) = {reg_sv} <= reg(V) = {reg_v} <= reg(SV) + 1 (depth {depth})",
                reg_v=reg_v, reg_sv=reg_sv,
            )
        else:
            emit(
                "reg-shift-window",
                "violation",
                f"reg(SV) = {reg_sv}, reg(V) = {reg_v} breaks the window",
                reg_v=reg_v, reg_sv=reg_sv,
            )
    else:
        emit("reg-shift-window", "inconclusive", f"an hd value reached window {w}")

    # Corollary: V supported in degrees <= N0 implies reg(V) <= N0
    support_top = -1
    for t in range(h + 1):
        if V.dims[t]:
            support_top = t
    if support_top < h:
        reg_v = rep_v.reg_within(w)
        if all(interior(x, w) for x in hd_v):
            ok = reg_v <= support_top
            emit(
                "reg-finite-support",
                "pass" if ok else "violation",
                f"support ends at {support_top}, reg(V) = {reg_v} (depth {depth})",
                support_top=support_top, reg_v=reg_v,
            )
        else:
            emit("reg-finite-support", "inconclusive", f"an hd value reached window {w}")
    else:
        emit(
            "reg-finite-support",
            "inconclusive",
            f"support reaches the horizon {h}; finite support not certifiable",
        )

    return _finish(items)


def _finish(items) -> VerifyReport:
    overall = "pass"
    if any(it.status == "violation" for it in items):
        overall = "violation"
    elif any(it.status == "inconclusive" for it in items):
        overall = "inconclusive"
    return VerifyReport(items, overall)
