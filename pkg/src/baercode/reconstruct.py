"""Data reconstruction from k accessed nodes with test-group decoding.

Each of the z component blocks is recovered separately from kappa = k-2b
honest segments.  With adversaries, the collector examines test-groups
(subsets of the k accessed nodes of size k-b) and accepts the first group
whose estimates, one per size-(k-2b) subset, all agree: with at most b
corrupted nodes, agreement certifies the genuine message.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .encoder import DataMatrix, NodeShare, extract_message
from .errors import NoConsistentGroupError, StructureViolationError
from .galois import Field, Mat
from .params import Derived


class _Malformed:
    """Sentinel for estimates from corrupted inputs; unequal to everything."""

    def __eq__(self, other):
        return False

    def __ne__(self, other):
        return True

    def __hash__(self):
        return id(self)

    def __repr__(self):
        return "MALFORMED"


MALFORMED = _Malformed()


def pm_reconstruct_component(
    segments: Sequence[tuple[int, Sequence[int]]],
    field: Field,
    lam: int,
    kappa: int,
) -> Mat:
    """Recover one lam x lam block from kappa pairs (e, y) with y = [1,e,..,e^(lam-1)] @ M_i.

    Split each coefficient row into its first kappa and last lam-kappa
    coordinates, Psi = [Phi | Delta].  Then Y = [Phi@N + Delta@L^T | Phi@L],
    so L = Phi^-1 @ Y_right and N = Phi^-1 @ (Y_left - Delta@L^T).  Phi is a
    kappa x kappa Vandermonde on distinct nonzero points, hence invertible.
    """
    if len(segments) != kappa:
        raise StructureViolationError(f"need {kappa} segments, got {len(segments)}")
    points = [e for e, _ in segments]
    psi = Mat.vandermonde(field, points, lam)
    y = Mat(field, [list(seg) for _, seg in segments], cols=lam)
    phi = Mat(field, [row[:kappa] for row in psi.data], cols=kappa)
    delta = Mat(field, [row[kappa:] for row in psi.data], cols=lam - kappa)
    y_left = Mat(field, [row[:kappa] for row in y.data], cols=kappa)
    y_right = Mat(field, [row[kappa:] for row in y.data], cols=lam - kappa)
    phi_inv = phi.inv()
    ell = phi_inv @ y_right                          # kappa x (lam-kappa)
    n_hat = phi_inv @ Mat(
        field,
        [
            [(a - c) % field.p for a, c in zip(lrow, rrow)]
            for lrow, rrow in zip(y_left.data, (delta @ ell.transpose()).data)
        ],
        cols=kappa,
    )
    # Assemble [[N, L], [L^T, 0]]; N is embedded exactly as solved, so a
    # corrupted, asymmetric solution stays visible to the structure check.
    grid = [[0] * lam for _ in range(lam)]
    for r in range(kappa):
        grid[r][:kappa] = n_hat.data[r]
        grid[r][kappa:] = ell.data[r]
    for r in range(kappa, lam):
        for c in range(kappa):
            grid[r][c] = ell.data[c][r - kappa]
    return Mat(field, grid, cols=lam)


def _estimate_blocks(
    shares: Sequence[NodeShare], code: Derived, field: Field
) -> tuple[Mat, ...]:
    """Per-component reconstruction from kappa shares (no structure check)."""
    p = field.p
    blocks = []
    for i in range(1, code.z + 1):
        segs = []
        for sh in shares:
            # x(i) = e^((i-1)*lam) * [1,e,..,e^(lam-1)] @ M_i; strip the prefix power.
            scale = pow(field.point(sh.index), -(i - 1) * code.lam, p)
            segs.append(
                (field.point(sh.index), [v * scale % p for v in sh.segment(i, code.lam)])
            )
        blocks.append(pm_reconstruct_component(segs, field, code.lam, code.kappa))
    return tuple(blocks)


def reconstruct_estimate(
    shares: Sequence[NodeShare], code: Derived, field: Field
) -> tuple[int, ...]:
    """Message estimate from exactly k-2b shares; corrupted inputs may raise
    StructureViolationError (treated by the test-group layer as non-matching)."""
    if len(shares) != code.kappa:
        raise StructureViolationError(
            f"estimate needs k-2b={code.kappa} shares, got {len(shares)}"
        )
    blocks = _estimate_blocks(shares, code, field)
    return extract_message(DataMatrix(blocks=blocks, lam=code.lam, kappa=code.kappa))


def testgroup_reconstruct(
    access: Sequence[NodeShare], code: Derived, field: Field
) -> tuple[int, ...]:
    """Decode the message from k accessed nodes, at most b of them corrupted.

    Test-groups are scanned in lexicographic node-index order; within a
    group, every size-(k-2b) subset yields an estimate of the full message
    matrix and estimates are compared entry-exact.
    """
    shares = sorted(access, key=lambda s: s.index)
    if len(shares) != code.k:
        raise StructureViolationError(f"access set must have k={code.k} nodes")
    if len({s.index for s in shares}) != code.k:
        raise StructureViolationError("access set has duplicate node indices")
    by_index = {s.index for s in shares}
    if not all(1 <= i <= code.n for i in by_index):
        raise StructureViolationError("access set references unknown nodes")

    cache: dict[tuple[int, ...], object] = {}

    def estimate(subset: tuple[NodeShare, ...]):
        key = tuple(s.index for s in subset)
        if key not in cache:
            try:
                blocks = _estimate_blocks(subset, code, field)
                extract_message(DataMatrix(blocks=blocks, lam=code.lam, kappa=code.kappa))
            except StructureViolationError:
                cache[key] = MALFORMED
            else:
                cache[key] = blocks
        return cache[key]

    for group in combinations(shares, code.k - code.b):
        estimates = [estimate(sub) for sub in combinations(group, code.kappa)]
        first = estimates[0]
        if first is MALFORMED:
            continue
        if all(est == first for est in estimates[1:]):
            return extract_message(
                DataMatrix(blocks=first, lam=code.lam, kappa=code.kappa)
            )
    raise NoConsistentGroupError(
        f"no consistent test-group among {code.k} accessed nodes; "
        f"more than b={code.b} nodes must be corrupted"
    )
