"""Adaptive repair scheme 2: iterative merge-based decoding over small fields.

Works over any prime field with p >= n+1.  The share of the failed node is
split into zeta segments of length xi = floor((d-2b)/lam)*lam.  When
xi == d-2b one round of plain per-segment projections suffices.  Otherwise
helpers repeatedly merge the last two active segments of each group through
the overlap-add operator

    merge(m, eps, e, v, u) = [v, 0..0] + e^(m - eps*xi) [0..0, u]

and send one inner product per group; each round the decoder solves one
(d-2b) x (d-2b) system per group, after which entries of the lost share are
labelled known (value recovered), inactive (expressed through one remaining
active entry), or still active.  The iteration schedule comes from
params.schedule_scheme2 and is shared verbatim by helpers and decoder.

Estimates for every size-(d-2b) helper subset feed the same test-group
consistency scan used everywhere else, defeating up to b lying helpers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Mapping, Sequence

from .encoder import NodeShare
from .errors import (
    BadDimensionsError,
    BaerCodeError,
    NoConsistentGroupError,
    PlanMismatchError,
    SingularMatrixError,
    SingularReducedSystemError,
    UnresolvedEntriesError,
)
from .galois import Field, Mat
from .params import ScheduleII
from .reconstruct import MALFORMED

REPAIR2_MAGIC = "BAERR2"

ACTIVE, INACTIVE, KNOWN = 0, 1, 2


def merge(fld: Field, m: int, eps: int, e: int, v: Sequence[int], u: Sequence[int]) -> tuple[int, ...]:
    """Overlap-add of two xi-length segments into an m-length vector.

    Requires xi <= m < 2*xi and eps >= 2 (eps is j-i+1 for merged segment
    indices i < j); the scale e^(m - eps*xi) usually has a negative
    exponent, so e must be nonzero.
    """
    xi = len(v)
    if len(u) != xi:
        raise BadDimensionsError(f"segment lengths differ: {len(v)} vs {len(u)}")
    if not xi <= m < 2 * xi:
        raise BadDimensionsError(f"need xi <= m < 2*xi, got m={m}, xi={xi}")
    if eps < 2:
        raise BadDimensionsError(f"merge distance eps must be >= 2, got {eps}")
    p = fld.p
    scale = fld.pow(e, m - eps * xi)
    out = [0] * m
    out[:xi] = [x % p for x in v]
    off = m - xi
    for t, val in enumerate(u):
        out[off + t] = (out[off + t] + scale * val) % p
    return tuple(out)


def _seg_dot(fld: Field, seg: Sequence[int], f: int, i: int, xi: int) -> int:
    """chi(i) . phi_f(i): inner product with [e_f^((i-1)xi), ..., e_f^(i*xi - 1)]."""
    p = fld.p
    e_f = fld.point(f)
    acc_pow = pow(e_f, (i - 1) * xi, p)
    total = 0
    for val in seg:
        total += val * acc_pow
        acc_pow = acc_pow * e_f % p
    return total % p


def m_merged_symbol(
    fld: Field, plan: ScheduleII, share: NodeShare, f: int, i: int, j_seg: int, m: int
) -> int:
    """Repair symbol covering segments i < j_seg of the helper share:
    e_f^((i-1)xi) * (merge(e_h, chi_h(i), chi_h(j)) . [1, e_f, ..., e_f^(m-1)])."""
    if not 1 <= i < j_seg <= plan.zeta:
        raise PlanMismatchError(f"bad merged segment pair ({i}, {j_seg})")
    p = fld.p
    xi = plan.xi
    e_h = fld.point(share.index)
    e_f = fld.point(f)
    merged = merge(fld, m, j_seg - i + 1, e_h, share.segment(i, xi), share.segment(j_seg, xi))
    total, acc = 0, 1
    for val in merged:
        total += val * acc
        acc = acc * e_f % p
    return total * pow(e_f, (i - 1) * xi, p) % p


def helper_round_symbols(
    share: NodeShare, plan: ScheduleII, j: int, f: int, fld: Field
) -> tuple[int, ...]:
    """One symbol per group for iteration j (1-based), per the shared schedule."""
    if not 1 <= j <= len(plan.iterations):
        raise PlanMismatchError(f"iteration {j} outside plan of {len(plan.iterations)}")
    if share.index == f:
        raise PlanMismatchError("failed node cannot help repair itself")
    it = plan.iterations[j - 1]
    p = fld.p
    xi = plan.xi
    out = []
    for group in it.groups:
        if it.sigma > 0:
            a, bseg = group[-2], group[-1]
            total = m_merged_symbol(fld, plan, share, f, a, bseg, it.m)
            for i in group[:-2]:
                total = (total + _seg_dot(fld, share.segment(i, xi), f, i, xi)) % p
        else:
            total = 0
            for i in group:
                total = (total + _seg_dot(fld, share.segment(i, xi), f, i, xi)) % p
        out.append(total)
    return tuple(out)


def helper_stream(share: NodeShare, plan: ScheduleII, f: int, fld: Field) -> tuple[tuple[int, ...], ...]:
    """All rounds of one helper's transmission; total length is beta(d)."""
    return tuple(
        helper_round_symbols(share, plan, j, f, fld)
        for j in range(1, len(plan.iterations) + 1)
    )


# -- per-group linear systems (index data only, so cacheable) ---------------
#
# Slot layout for a group at iteration j: the unknowns are, in order, the
# active entries of every unmerged segment (ascending segment, ascending
# position) followed by the not-fully-known entries of the merged vector.
# Slot kinds:
#   ("seg", i, t)            entry t of segment i (1-based)
#   ("phi", q, v_t, u_t)     merged-vector position q; v_t/u_t are the
#                            contributing positions in the two merged
#                            segments (None where out of range)

@lru_cache(maxsize=16384)
def _group_slots(plan: ScheduleII, j: int, gi: int) -> tuple[tuple, ...]:
    it = plan.iterations[j - 1]
    group = it.groups[gi]
    xi, tau, sigma = plan.xi, it.tau, it.sigma
    slots: list[tuple] = []
    if sigma > 0:
        for i in group[:-2]:
            for t in range(1, tau + 1):
                slots.append(("seg", i, t))
        for q in range(1, it.m + 1):
            v_t = q if q <= xi else None
            u_t = q - sigma if q - sigma >= 1 else None
            active_v = v_t is not None and v_t <= tau
            active_u = u_t is not None and u_t <= tau
            if active_v or active_u:
                slots.append(("phi", q, v_t, u_t))
    else:
        for i in group:
            for t in range(1, tau + 1):
                slots.append(("seg", i, t))
    span = plan.d - 2 * plan.code.b
    assert len(slots) == span, f"group system is {len(slots)} unknowns, expected {span}"
    return tuple(slots)


def _slot_coeff(fld: Field, plan: ScheduleII, j: int, gi: int, slot: tuple, h: int) -> int:
    """Coefficient of one unknown in helper h's equation."""
    xi = plan.xi
    e_h = fld.point(h)
    if slot[0] == "seg":
        _, i, t = slot
        return pow(e_h, (i - 1) * xi + t - 1, fld.p)
    _, q, _, _ = slot
    a = plan.iterations[j - 1].groups[gi][-2]
    return pow(e_h, (a - 1) * xi + q - 1, fld.p)


@lru_cache(maxsize=16384)
def _group_matrix_inv(plan: ScheduleII, fld: Field, j: int, gi: int, helpers: tuple[int, ...]) -> Mat:
    slots = _group_slots(plan, j, gi)
    mat = Mat(
        fld,
        [[_slot_coeff(fld, plan, j, gi, s, h) for h in helpers] for s in slots],
        cols=len(helpers),
    )
    try:
        return mat.inv()
    except SingularMatrixError as exc:      # unreachable for distinct helpers
        raise SingularReducedSystemError(str(exc)) from exc


class RepairSession:
    """Decoder state for one helper subset: labels, values, pending relations.

    Labels move only active -> known or active -> inactive; an inactive
    entry resolves exactly once at finalize, through its stored relation
    value = combined - scale * partner.
    """

    def __init__(self, plan: ScheduleII, f: int, fld: Field):
        self.plan = plan
        self.f = f
        self.field = fld
        self.labels = [ACTIVE] * plan.code.alpha
        self.values: list[int | None] = [None] * plan.code.alpha
        self.pending: list[tuple[int, int, int, int]] = []   # (pos, combined, scale, partner)
        self.next_j = 1

    def _pos(self, seg: int, t: int) -> int:
        return (seg - 1) * self.plan.xi + t - 1

    def decoder_round(self, j: int, symbols: Mapping[int, Sequence[int]]) -> "RepairSession":
        """Consume one iteration's symbols from a size-(d-2b) helper subset."""
        plan, fld = self.plan, self.field
        if j != self.next_j:
            raise PlanMismatchError(f"expected iteration {self.next_j}, got {j}")
        it = plan.iterations[j - 1]
        span = plan.d - 2 * plan.code.b
        helpers = tuple(sorted(symbols))
        if len(helpers) != span:
            raise PlanMismatchError(f"need {span} helpers per subset, got {len(helpers)}")
        for h in helpers:
            if len(symbols[h]) != it.n_groups:
                raise PlanMismatchError(
                    f"helper {h} sent {len(symbols[h])} symbols for iteration {j}, "
                    f"expected {it.n_groups}"
                )
        p = fld.p
        xi = plan.xi
        e_f = fld.point(self.f)
        for gi, group in enumerate(it.groups):
            slots = _group_slots(plan, j, gi)
            inv = _group_matrix_inv(plan, fld, j, gi, helpers)
            if it.sigma > 0:
                a, bseg = group[-2], group[-1]
                scale = fld.pow(e_f, it.m - (bseg - a + 1) * xi)
            else:
                a = bseg = scale = None
            # Move the known entries of [chi(i_1), ..., phi] onto the left side.
            rhs = []
            for h in helpers:
                r = symbols[h][gi] % p
                e_h = fld.point(h)
                for i in (group[:-2] if it.sigma > 0 else group):
                    for t in range(it.tau + 1, xi + 1):
                        r -= self.values[self._pos(i, t)] * pow(e_h, (i - 1) * xi + t - 1, p)
                if it.sigma > 0:
                    base = (a - 1) * xi
                    for q in range(1, it.m + 1):
                        v_t = q if q <= xi else None
                        u_t = q - it.sigma if q - it.sigma >= 1 else None
                        if (v_t is None or v_t > it.tau) and (u_t is None or u_t > it.tau):
                            val = 0
                            if v_t is not None:
                                val = self.values[self._pos(a, v_t)]
                            if u_t is not None:
                                val = (val + scale * self.values[self._pos(bseg, u_t)]) % p
                            r -= val * pow(e_h, base + q - 1, p)
                rhs.append(r % p)
            solved = inv.left_mul(rhs)
            for slot, val in zip(slots, solved):
                if slot[0] == "seg":
                    _, i, t = slot
                    pos = self._pos(i, t)
                    self.values[pos] = val
                    self.labels[pos] = KNOWN
                else:
                    _, q, v_t, u_t = slot
                    active_v = v_t is not None and v_t <= it.tau
                    active_u = u_t is not None and u_t <= it.tau
                    if active_v and active_u:
                        # One equation, two unknowns: park the left entry.
                        pos_v, pos_u = self._pos(a, v_t), self._pos(bseg, u_t)
                        self.labels[pos_v] = INACTIVE
                        self.pending.append((pos_v, val, scale, pos_u))
                    elif active_v:
                        known_u = self.values[self._pos(bseg, u_t)] if u_t is not None else 0
                        pos = self._pos(a, v_t)
                        self.values[pos] = (val - scale * known_u) % p
                        self.labels[pos] = KNOWN
                    else:
                        known_v = self.values[self._pos(a, v_t)] if v_t is not None else 0
                        pos = self._pos(bseg, u_t)
                        self.values[pos] = (val - known_v) * pow(scale, -1, p) % p
                        self.labels[pos] = KNOWN
        self.next_j += 1
        self._check_invariants()
        return self

    def _check_invariants(self):
        """Active segments all hold the same count of actives, at the lowest
        indices, and never contain an inactive entry."""
        plan = self.plan
        xi = plan.xi
        done = self.next_j > len(plan.iterations)
        next_active: set[int] = set()
        tau_next = 0
        if not done:
            it = plan.iterations[self.next_j - 1]
            next_active = {i for g in it.groups for i in g}
            tau_next = it.tau
        for seg in range(1, plan.zeta + 1):
            base = (seg - 1) * xi
            lbls = self.labels[base : base + xi]
            if seg in next_active:
                assert lbls[:tau_next] == [ACTIVE] * tau_next, f"segment {seg} actives not leftmost"
                assert all(l == KNOWN for l in lbls[tau_next:]), f"segment {seg} holds an inactive entry"
            else:
                assert ACTIVE not in lbls, f"segment {seg} should be settled"

    def finalize(self) -> tuple[int, ...]:
        """Back-substitute pending relations and return the full alpha-vector."""
        if self.next_j <= len(self.plan.iterations):
            raise UnresolvedEntriesError(
                f"{len(self.plan.iterations) - self.next_j + 1} iterations not yet decoded"
            )
        if ACTIVE in self.labels:
            raise UnresolvedEntriesError("active entries remain")
        p = self.field.p
        unresolved = list(self.pending)
        while unresolved:
            progressed = False
            still = []
            for pos, combined, scale, partner in unresolved:
                pv = self.values[partner]
                if pv is None:
                    still.append((pos, combined, scale, partner))
                    continue
                self.values[pos] = (combined - scale * pv) % p
                self.labels[pos] = KNOWN
                progressed = True
            if not progressed:
                raise UnresolvedEntriesError("pending relations form an unresolvable chain")
            unresolved = still
        if any(v is None for v in self.values):
            raise UnresolvedEntriesError("some entries were never estimated")
        return tuple(self.values)


def repair_estimate(
    streams: Mapping[int, Sequence[Sequence[int]]],
    subset: Sequence[int],
    f: int,
    plan: ScheduleII,
    fld: Field,
) -> tuple[int, ...]:
    """Run a full session on one size-(d-2b) helper subset."""
    session = RepairSession(plan, f, fld)
    for j in range(1, len(plan.iterations) + 1):
        session.decoder_round(j, {h: streams[h][j - 1] for h in subset})
    return session.finalize()


def testgroup_repair2(
    streams: Mapping[int, Sequence[Sequence[int]]],
    f: int,
    plan: ScheduleII,
    fld: Field,
) -> tuple[int, ...]:
    """Recover x_f from d helpers' round streams, at most b of them lying."""
    code = plan.code
    helpers = sorted(streams)
    if len(helpers) != plan.d:
        raise BaerCodeError(f"need streams from exactly d={plan.d} helpers")
    for h in helpers:
        if h == f or not 1 <= h <= code.n:
            raise BaerCodeError(f"invalid helper {h} for failed node {f}")
        if len(streams[h]) != len(plan.iterations):
            raise PlanMismatchError(
                f"helper {h} sent {len(streams[h])} rounds, plan has {len(plan.iterations)}"
            )

    cache: dict[tuple[int, ...], object] = {}

    def est(subset: tuple[int, ...]):
        if subset not in cache:
            try:
                cache[subset] = repair_estimate(streams, subset, f, plan, fld)
            except (SingularReducedSystemError, UnresolvedEntriesError, SingularMatrixError):
                cache[subset] = MALFORMED
        return cache[subset]

    span = plan.d - 2 * code.b
    for group in combinations(helpers, plan.d - code.b):
        estimates = [est(sub) for sub in combinations(group, span)]
        first = estimates[0]
        if first is MALFORMED:
            continue
        if all(e == first for e in estimates[1:]):
            return first
    raise NoConsistentGroupError(
        f"no consistent test-group repairing node {f} from {plan.d} helpers"
    )


@dataclass(frozen=True)
class SystemReport:
    """Outcome of the exhaustive per-group solvability sweep for one field.

    Iterations after the first select non-consecutive coefficient exponents,
    and the resulting generalized Vandermonde minors can vanish over very
    small fields even though all evaluation points are distinct.  An empty
    report certifies that every subset of every helper choice decodes for
    every d in D.
    """

    p: int
    checked: int
    singular: tuple[tuple[int, tuple[int, ...], int, int], ...]   # (d, subset, j, group)

    @property
    def ok(self) -> bool:
        return not self.singular

    def summary(self) -> str:
        if self.ok:
            return f"GF({self.p}): all {self.checked} repair systems solvable"
        return f"GF({self.p}): {len(self.singular)} singular repair systems"


def verify_systems_all(code, fld: Field, schedule=None) -> SystemReport:
    """Check every per-group system over all (d in D, helper subset, iteration).

    `schedule` is the plan factory (defaults to params.schedule_scheme2);
    raises DivisibilityViolationError if some d has no valid plan.
    """
    from .params import schedule_scheme2 as _schedule

    mk = schedule or _schedule
    singular = []
    checked = 0
    for d in code.d_set:
        plan = mk(code, d)
        span = d - 2 * code.b
        for subset in combinations(range(1, code.n + 1), span):
            for j, it in enumerate(plan.iterations, 1):
                for gi in range(it.n_groups):
                    checked += 1
                    try:
                        _group_matrix_inv(plan, fld, j, gi, subset)
                    except SingularReducedSystemError:
                        singular.append((d, subset, j, gi))
    return SystemReport(p=fld.p, checked=checked, singular=tuple(singular))


def find_field_scheme2(code, start: int | None = None, max_candidates: int = 2000):
    """First prime p >= n+1 whose per-group systems all solve (see SystemReport)."""
    from .galois import is_prime
    from .params import check_field
    from .errors import FieldTooSmallError

    p = max(start or 0, code.n + 1)
    rejected = []
    for _ in range(max_candidates):
        while not is_prime(p):
            p += 1
        fld = Field(p)
        try:
            check_field(code, fld)
            report = verify_systems_all(code, fld)
        except FieldTooSmallError:
            report = None
        if report is not None and report.ok:
            return fld, report, tuple(rejected)
        rejected.append(p)
        p += 1
    raise BaerCodeError(f"no solvable prime found after {max_candidates} candidates")


# -- repair wire records ----------------------------------------------------
#
# One helper round:  header `BAERR2 d=<d> f=<f> h=<h> j=<iter>` followed by
# one decimal symbol per group, LF separated.  Rounds are self-delimited by
# the shared schedule.

def format_round_record(h: int, f: int, d: int, j: int, symbols: Sequence[int]) -> str:
    header = f"{REPAIR2_MAGIC} d={d} f={f} h={h} j={j}"
    return header + "\n" + "\n".join(str(v) for v in symbols) + "\n"


def parse_round_record(text: str) -> tuple[int, int, int, int, tuple[int, ...]]:
    """Returns (h, f, d, j, symbols)."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith(REPAIR2_MAGIC + " "):
        raise BaerCodeError("not a scheme-2 repair record")
    fields = dict(tok.partition("=")[::2] for tok in lines[0].split()[1:])
    try:
        d, f, h, j = (int(fields[k]) for k in ("d", "f", "h", "j"))
        symbols = tuple(int(v) for v in lines[1:] if v.strip())
    except (KeyError, ValueError) as exc:
        raise BaerCodeError(f"malformed repair record: {exc}") from exc
    return h, f, d, j, symbols


def format_stream_records(h: int, f: int, d: int, stream: Sequence[Sequence[int]]) -> str:
    return "".join(
        format_round_record(h, f, d, j, syms) for j, syms in enumerate(stream, 1)
    )
