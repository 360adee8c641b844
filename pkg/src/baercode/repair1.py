"""Adaptive repair scheme 1: compressed block projections.

Every helper h projects its share onto the failed node's coefficient
structure and compresses the z per-block scalars down to z_d = alpha/(d-2b)
symbols through the first z_d columns of a fixed z x z Vandermonde matrix
Omega:

    r(h, f) = x_h @ Phi_f @ Omega_{z_d}

where Phi_f is block-diagonal with the lam x 1 blocks psi_f(i)^T.  The
decoder concatenates the vectors of d-2b helpers and inverts the alpha x
alpha matrix Theta_H = [Phi_{h_1} @ Omega_{z_d} | ... ], wrapped in
test-group decoding against up to b lying helpers.

Theta_H is provably invertible only over impractically large alphabets, so
a configuration is instead certified empirically: verify_theta_all checks
every (d, H) pair, and find_field searches successive primes p >= n+1 until
certification passes.  Omega is a deterministic function of (params, field),
so every party derives it independently.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Mapping, Sequence

from .encoder import NodeShare, coeff_segment
from .errors import (
    BaerCodeError,
    FieldTooSmallError,
    NoConsistentGroupError,
    OmegaRankDeficientError,
    SingularMatrixError,
)
from .galois import Field, Mat, is_prime
from .params import Derived, check_field
from .reconstruct import MALFORMED

REPAIR1_MAGIC = "BAERR1"


def default_exponents(code: Derived) -> tuple[int, ...]:
    """Exponents i_j = alpha*n*(j-1) + 1, spaced exactly alpha*n apart."""
    step = code.alpha * code.n
    return tuple(step * (j - 1) + 1 for j in range(1, code.z + 1))


@dataclass
class OmegaConfig:
    """Omega matrix plus its per-d truncations and cached Theta inverses."""

    code: Derived
    field: Field
    exponents: tuple[int, ...]
    points: tuple[int, ...]            # g**(i_j mod (p-1))
    omega: Mat                         # z x z
    rank_ok: bool                      # every Omega_{z_d} has full column rank
    _theta_inv: dict = dc_field(default_factory=dict, repr=False)

    def omega_cols(self, d: int) -> Mat:
        z_d = self.code.z_of(d)
        return Mat(self.field, [row[:z_d] for row in self.omega.data], cols=z_d)

    def theta_inv(self, helpers: tuple[int, ...], d: int) -> Mat | None:
        """Inverse of Theta_H for sorted helper indices, or None if singular."""
        key = (d, helpers)
        if key not in self._theta_inv:
            try:
                self._theta_inv[key] = theta(helpers, d, self).inv()
            except SingularMatrixError:
                self._theta_inv[key] = None
        return self._theta_inv[key]


def omega_build(code: Derived, fld: Field, exponents: Sequence[int] | None = None,
                *, check: bool = True) -> OmegaConfig:
    """Build Omega for this configuration.

    Exponents are reduced mod p-1 before exponentiation; with check=True the
    truncation for every d in D must have full column rank (small fields make
    the reduced exponents collide, which this catches).
    """
    check_field(code, fld)
    exps = tuple(exponents) if exponents is not None else default_exponents(code)
    if len(exps) != code.z:
        raise BaerCodeError(f"need z={code.z} exponents, got {len(exps)}")
    # Consecutive gaps of at least alpha*n keep the dominant determinant term
    # unique; the default spacing sits exactly on that bound.
    step = code.alpha * code.n
    if any(exps[i + 1] - exps[i] < step for i in range(len(exps) - 1)):
        raise BaerCodeError(f"exponent gaps must be >= alpha*n = {step}")
    points = tuple(pow(fld.g, e % (fld.p - 1), fld.p) for e in exps)
    p = fld.p
    rows = []
    for x in points:
        row, acc = [], 1
        for _ in range(code.z):
            row.append(acc)
            acc = acc * x % p
        rows.append(row)
    omega = Mat(fld, rows, cols=code.z)
    rank_ok = all(
        omega_rank_ok(omega, code.z_of(d)) for d in code.d_set
    )
    if check and not rank_ok:
        raise OmegaRankDeficientError(
            f"Omega truncation rank-deficient over GF({p}); pick a larger prime"
        )
    return OmegaConfig(code=code, field=fld, exponents=exps, points=points,
                       omega=omega, rank_ok=rank_ok)


def omega_rank_ok(omega: Mat, z_d: int) -> bool:
    cols = Mat(omega.field, [row[:z_d] for row in omega.data], cols=z_d)
    return cols.rank() == z_d


def phi_matrix(code: Derived, fld: Field, node: int) -> Mat:
    """alpha x z block-diagonal matrix with blocks psi_node(i)^T."""
    grid = [[0] * code.z for _ in range(code.alpha)]
    for i in range(1, code.z + 1):
        seg = coeff_segment(fld, node, i, code.lam)
        for r, v in enumerate(seg):
            grid[(i - 1) * code.lam + r][i - 1] = v
    return Mat(fld, grid, cols=code.z)


def helper_repair_symbols(share: NodeShare, f: int, d: int, cfg: OmegaConfig) -> tuple[int, ...]:
    """r(h, f) = x_h @ Phi_f @ Omega_{z_d}: z_d symbols from helper share."""
    code, fld = cfg.code, cfg.field
    p = fld.p
    z_d = code.z_of(d)
    # x_h @ Phi_f is the vector of per-block scalars x_h(i) . psi_f(i).
    scalars = []
    for i in range(1, code.z + 1):
        seg_f = coeff_segment(fld, f, i, code.lam)
        seg_x = share.segment(i, code.lam)
        scalars.append(sum(a * b for a, b in zip(seg_x, seg_f)) % p)
    return tuple(
        sum(scalars[i] * cfg.omega.data[i][j] for i in range(code.z)) % p
        for j in range(z_d)
    )


def theta(helpers: Sequence[int], d: int, cfg: OmegaConfig) -> Mat:
    """alpha x alpha matrix [Phi_{h_1} @ Omega_{z_d} | ... | Phi_{h_{d-2b}} @ Omega_{z_d}]."""
    code, fld = cfg.code, cfg.field
    p = fld.p
    z_d = code.z_of(d)
    alpha = code.alpha
    grid = [[0] * alpha for _ in range(alpha)]
    for t, h in enumerate(helpers):
        for i in range(1, code.z + 1):
            seg = coeff_segment(fld, h, i, code.lam)
            orow = cfg.omega.data[i - 1]
            for r, v in enumerate(seg):
                grow = grid[(i - 1) * code.lam + r]
                for j in range(z_d):
                    grow[t * z_d + j] = v * orow[j] % p
    return Mat(fld, grid, cols=alpha)


def estimate(rho: Sequence[int], theta_mat: Mat) -> tuple[int, ...]:
    """x_hat = rho @ Theta^-1 (exact share recovery when all inputs are honest)."""
    return theta_mat.solve_right(rho)


def testgroup_repair(
    symbols: Mapping[int, Sequence[int]],
    f: int,
    d: int,
    cfg: OmegaConfig,
) -> tuple[int, ...]:
    """Recover x_f from d helpers' repair vectors, at most b of them lying.

    Test-groups of size d-b are scanned lexicographically; each size-(d-2b)
    subset H contributes the estimate rho_H @ Theta_H^-1 and the first
    all-equal group wins.
    """
    code = cfg.code
    helpers = sorted(symbols)
    if len(helpers) != d:
        raise BaerCodeError(f"need symbols from exactly d={d} helpers, got {len(helpers)}")
    z_d = code.z_of(d)
    for h in helpers:
        if h == f or not 1 <= h <= code.n:
            raise BaerCodeError(f"invalid helper {h} for failed node {f}")
        if len(symbols[h]) != z_d:
            raise BaerCodeError(
                f"helper {h} sent {len(symbols[h])} symbols, expected z_d={z_d}"
            )

    cache: dict[tuple[int, ...], object] = {}

    def est(subset: tuple[int, ...]):
        if subset not in cache:
            t_inv = cfg.theta_inv(subset, d)
            if t_inv is None:
                cache[subset] = MALFORMED
            else:
                rho: list[int] = []
                for h in subset:
                    rho.extend(symbols[h])
                cache[subset] = t_inv.left_mul(rho)
        return cache[subset]

    span = d - 2 * code.b
    for group in combinations(helpers, d - code.b):
        estimates = [est(sub) for sub in combinations(group, span)]
        first = estimates[0]
        if first is MALFORMED:
            continue
        if all(e == first for e in estimates[1:]):
            return first
    raise NoConsistentGroupError(
        f"no consistent test-group repairing node {f} from {d} helpers"
    )


@dataclass(frozen=True)
class ThetaReport:
    """Outcome of the exhaustive invertibility sweep for one (params, field)."""

    p: int
    checked: int
    omega_deficient: tuple[int, ...]          # d values whose Omega truncation lost rank
    singular: tuple[tuple[int, tuple[int, ...]], ...]   # (d, helper subset)

    @property
    def ok(self) -> bool:
        return not self.omega_deficient and not self.singular

    def summary(self) -> str:
        if self.ok:
            return f"GF({self.p}): certified ({self.checked} matrices checked)"
        parts = []
        if self.omega_deficient:
            parts.append(f"Omega rank-deficient for d in {list(self.omega_deficient)}")
        if self.singular:
            parts.append(f"{len(self.singular)} singular Theta matrices")
        return f"GF({self.p}): NOT certified ({'; '.join(parts)})"


def verify_theta_all(code: Derived, fld: Field, cfg: OmegaConfig | None = None) -> ThetaReport:
    """Check every Theta_H over all (d in D, H subset of nodes, |H| = d-2b).

    An empty report certifies the configuration for repair with any helper
    choice; rank failures are reported as data rather than raised so callers
    can display them.
    """
    if cfg is None:
        cfg = omega_build(code, fld, check=False)
    omega_bad = tuple(
        d for d in code.d_set if not omega_rank_ok(cfg.omega, code.z_of(d))
    )
    singular: list[tuple[int, tuple[int, ...]]] = []
    checked = 0
    for d in code.d_set:
        span = d - 2 * code.b
        for subset in combinations(range(1, code.n + 1), span):
            checked += 1
            if cfg.theta_inv(subset, d) is None:
                singular.append((d, subset))
    return ThetaReport(
        p=fld.p, checked=checked,
        omega_deficient=omega_bad, singular=tuple(singular),
    )


@dataclass(frozen=True)
class FieldSearch:
    field: Field
    cfg: OmegaConfig
    report: ThetaReport
    rejected: tuple[int, ...]      # primes tried and refused before the hit


def find_field(code: Derived, start: int | None = None, max_candidates: int = 2000) -> FieldSearch:
    """Try successive primes p >= n+1 and return the first certified one."""
    p = max(start or 0, code.n + 1)
    rejected: list[int] = []
    for _ in range(max_candidates):
        while not is_prime(p):
            p += 1
        fld = Field(p)
        try:
            check_field(code, fld)
            cfg = omega_build(code, fld, check=False)
            report = verify_theta_all(code, fld, cfg)
        except FieldTooSmallError:
            report = None
        if report is not None and report.ok:
            return FieldSearch(field=fld, cfg=cfg, report=report, rejected=tuple(rejected))
        rejected.append(p)
        p += 1
    raise BaerCodeError(
        f"no certified prime found after {max_candidates} candidates (last tried {p})"
    )


# -- repair wire records ----------------------------------------------------
#
# One helper's transmission:  header `BAERR1 d=<d> f=<f> h=<h>` followed by
# z_d decimal symbols, LF separated.

def format_repair_record(h: int, f: int, d: int, symbols: Sequence[int]) -> str:
    header = f"{REPAIR1_MAGIC} d={d} f={f} h={h}"
    return header + "\n" + "\n".join(str(v) for v in symbols) + "\n"


def parse_repair_record(text: str) -> tuple[int, int, int, tuple[int, ...]]:
    """Returns (h, f, d, symbols)."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith(REPAIR1_MAGIC + " "):
        raise BaerCodeError("not a scheme-1 repair record")
    fields = dict(tok.partition("=")[::2] for tok in lines[0].split()[1:])
    try:
        d, f, h = int(fields["d"]), int(fields["f"]), int(fields["h"])
        symbols = tuple(int(v) for v in lines[1:] if v.strip())
    except (KeyError, ValueError) as exc:
        raise BaerCodeError(f"malformed repair record: {exc}") from exc
    return h, f, d, symbols
