"""Shift and derivative functors, the key sequence, and the U^n chain.

For a module V with horizon h, the shift SV has (SV)_t = V_{t+1} with the
action pulled back along the degree-1 self-embedding, so SV lives at horizon
h-1.  The natural map mu_V: V -> SV acts degreewise by the witness morphism
m_t; its kernel KV and cokernel DV complete the exact sequence

    0 -> KV -> V -> SV -> DV -> 0

checked degreewise by dimension count on every derive() call.  Iterating the
kernel construction on successive quotients yields the increasing chain
U^0 = 0 <= U^1 <= ... whose union is the singular part of V; each chain step
consumes one degree of horizon, and all results carry explicit validity
bounds instead of silently truncating.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .matrices import Mat
from .trunc import (
    ModuleMap,
    TruncatedModule,
    generating_degree,
    image_rows,
    kernel_of_map,
    quotient_by,
    submodule_from_rows,
    truncate,
)


class HorizonExhausted(Exception):
    """The chain did not provably stabilize within the truncation horizon."""


def shift_module(V: TruncatedModule) -> TruncatedModule:
    """SV with (SV)_t = V_{t+1}; horizon drops by one."""
    if V.horizon < 0:
        raise ValueError("shift needs horizon >= 0")
    cat = V.cat
    h = V.horizon - 1
    dims = [V.dims[t + 1] for t in range(h + 1)]
    steps = [
        [V.act(cat.embed(g)) for g in cat.step_generators(r)]
        for r in range(max(h, 0))
    ]
    ends = [
        [V.act(cat.embed(e)) for e in cat.end_generators(t)]
        for t in range(h + 1)
    ]
    return TruncatedModule(cat, V.field, h, dims, steps, ends)


def mu_map(V: TruncatedModule, SV: TruncatedModule | None = None) -> ModuleMap:
    """The natural map V -> SV acting by the witness family m_t."""
    if V.horizon < 0:
        raise ValueError("mu needs horizon >= 0")
    if SV is None:
        SV = shift_module(V)
    mats = [V.act(V.cat.mu_witness(t)) for t in range(V.horizon)]
    return ModuleMap(V, SV, mats)


@dataclass
class KeySequence:
    """The exact sequence 0 -> KV -> V -> SV -> DV -> 0 at horizon h-1."""

    V: TruncatedModule
    KV: TruncatedModule
    SV: TruncatedModule
    DV: TruncatedModule
    mu: ModuleMap
    incl: ModuleMap
    proj: ModuleMap

    def euler_defects(self):
        """Per-degree alternating dim sums; all zero iff exact."""
        out = []
        for t in range(self.KV.horizon + 1):
            out.append(
                self.KV.dims[t] - self.V.dims[t] + self.SV.dims[t] - self.DV.dims[t]
            )
        return out


def derive(V: TruncatedModule) -> KeySequence:
    """Compute the key sequence of V; KV and DV live at horizon h-1."""
    SV = shift_module(V)
    mu = mu_map(V, SV)
    KV, incl = kernel_of_map(mu)
    im = image_rows(mu)
    _, im_incl = submodule_from_rows(SV, im)
    DV, proj = quotient_by(im_incl)
    seq = KeySequence(V, KV, SV, DV, mu, incl, proj)
    defects = seq.euler_defects()
    if any(defects):
        raise AssertionError(f"key sequence inexact: defects {defects}")
    return seq


@dataclass
class ChainState:
    """The chain 0 = U^0 <= U^1 <= ... of mu-kernels on successive quotients.

    bases[n][t] is the canonical row basis of (U^n)_t inside V_t, recorded
    for t <= valid_horizons[n] = horizon - n.  stabilized_at is the least n
    with U^n = U^{n+1} on the overlap window, or None if undecidable.
    """

    V: TruncatedModule
    bases: list = dc_field(default_factory=list)
    valid_horizons: list = dc_field(default_factory=list)
    stabilized_at: int | None = None
    status: str = "horizon_exhausted"
    gd: int = -1

    def dims(self, n: int):
        return [self.bases[n][t].nrows for t in range(self.valid_horizons[n] + 1)]


def _preimage_rows(A: Mat, target_rows: Mat) -> Mat:
    """Rows spanning {v : v @ A in rowspace(target_rows)}."""
    C = target_rows.complement_rows()
    if C.nrows == 0:
        return Mat.identity(A.field, A.nrows).row_basis()
    full = Mat.vstack([target_rows, C]) if target_rows.nrows else C
    P = full.inverse().take_cols(range(target_rows.nrows, A.ncols))
    return (A @ P).left_kernel()


def un_chain(V: TruncatedModule, max_steps: int,
             stop_at_stabilization: bool = True) -> ChainState:
    """Build the U^n chain by mu-preimages; honest about horizon loss.

    (U^{n+1})_s = { v in V_s : mu_V(v) in (S U^n)_s }, so step n is valid
    only up to horizon - n.  Stabilization is declared when consecutive
    steps agree on the overlap window and that window still sees degree
    gd(V) + 1; otherwise the state reports horizon_exhausted.  With
    stop_at_stabilization=False the chain keeps building to max_steps
    (or until the window closes), which the oracle comparison uses.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    h = V.horizon
    state = ChainState(V=V, gd=generating_degree(V))
    mu = mu_map(V)
    state.bases.append([Mat.zeros(V.field, 0, V.dims[t]) for t in range(h + 1)])
    state.valid_horizons.append(h)
    for n in range(1, max_steps + 1):
        valid = h - n
        if valid < -1:
            break
        prev = state.bases[n - 1]
        rows = [
            _preimage_rows(mu.mats[t], prev[t + 1]) for t in range(valid + 1)
        ]
        state.bases.append(rows)
        state.valid_horizons.append(valid)
        same = all(rows[t] == prev[t] for t in range(valid + 1))
        if same and valid >= state.gd + 1 and state.stabilized_at is None:
            state.stabilized_at = n - 1
            state.status = "stabilized"
            if stop_at_stabilization:
                break
    return state


@dataclass
class SinRegResult:
    """Singular part, regular part, and the degreewise K(V_reg) = 0 evidence."""

    chain: ChainState
    sin: TruncatedModule
    sin_incl: ModuleMap
    reg: TruncatedModule
    reg_proj: ModuleMap
    k_reg_dims: list
    valid_to: int


def sin_reg(V: TruncatedModule, max_steps: int | None = None) -> SinRegResult:
    """Split V into V_sin = U^n and V_reg = V / V_sin once the chain stabilizes."""
    if max_steps is None:
        max_steps = max(V.horizon, 1)
    chain = un_chain(V, max_steps)
    if chain.status != "stabilized":
        raise HorizonExhausted(
            f"chain did not stabilize within horizon {V.horizon} "
            f"(built {len(chain.bases) - 1} steps)"
        )
    n = chain.stabilized_at
    valid = V.horizon - n
    Vh = truncate(V, valid)
    sin, incl = submodule_from_rows(Vh, chain.bases[n][: valid + 1])
    reg, proj = quotient_by(incl)
    if reg.horizon >= 0:
        kreg, _ = kernel_of_map(mu_map(reg))
        k_dims = list(kreg.dims)
    else:
        k_dims = []
    if any(k_dims):
        raise AssertionError(
            f"K(V_reg) != 0: dims {k_dims} (singular-regular decomposition failed)"
        )
    return SinRegResult(chain, sin, incl, reg, proj, k_dims, valid)


@dataclass
class OracleResult:
    """Degreewise joint-kernel submodule from the closed-form U^n description."""

    n: int
    bases: list
    valid_to: int


def annihilator_oracle(V: TruncatedModule, n: int) -> OracleResult:
    """Closed-form U^n: FI kinds kill all n-step morphisms, OI kinds ann(I^n).

    For FI/FI_G the degree-s part is the joint kernel of every alpha in
    C(s, s+n).  For OI/OI_G it is the joint kernel of the n-th power of the
    ideal generated by the witnesses: all alpha: s -> t (t <= horizon) with
    first image point > n, every label; for s = 0 all maps with t >= n.
    """
    if n < 1:
        raise ValueError("oracle needs n >= 1")
    cat = V.cat
    h = V.horizon
    valid = h - n
    bases = []
    for s in range(valid + 1):
        J = Mat.identity(V.field, V.dims[s]).row_basis()
        for alpha in _oracle_morphisms(cat, s, n, h):
            if J.nrows == 0:
                break
            X = (J @ V.act(alpha)).left_kernel()
            J = (X @ J).row_basis()
        bases.append(J)
    return OracleResult(n, bases, valid)


def _oracle_morphisms(cat, s: int, n: int, h: int):
    if cat.kind in ("fi", "fi_g"):
        yield from cat.hom(s, s + n)
        return
    if s == 0:
        for t in range(n, h + 1):
            yield from cat.hom(0, t)
        return
    for t in range(s + 1, h + 1):
        for alpha in cat.hom(s, t):
            if alpha.images[0] >= n + 1:
                yield alpha


@dataclass
class SDProbe:
    """Degreewise dims of S(DV) and D(SV), and whether they agree."""

    sd_dims: list
    ds_dims: list
    agree: bool
    valid_to: int


def sd_commutation_probe(V: TruncatedModule) -> SDProbe:
    """Compare S(DV) against D(SV); FI kinds commute, OI kinds need not."""
    if V.horizon < 2:
        raise ValueError("probe needs horizon >= 2")
    sd = shift_module(derive(V).DV)
    ds = derive(shift_module(V)).DV
    return SDProbe(list(sd.dims), list(ds.dims), sd.dims == ds.dims, V.horizon - 2)
