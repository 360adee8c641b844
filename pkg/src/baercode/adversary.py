"""Limited-power omniscient adversary: controls up to b chosen nodes.

A policy fixes the controlled node set and a strategy:

  honest          no corruption (identity everywhere);
  random          stored symbols and emitted repair symbols replaced with
                  seeded uniform field elements;
  consistent_liar all controlled nodes jointly encode one seeded fake
                  message and answer every query honestly *for the fake
                  data* -- protocol-conformant collusion, the hardest case
                  for consistency checks.

|controlled| <= b is the honest configuration; deliberately larger sets are
permitted so negative tests can step outside the model.  Strategies are
deterministic given the seed.
"""

from __future__ import annotations

import random
from typing import Callable, Mapping, Sequence

from .encoder import NodeShare, build_data_matrix, encode_node
from .errors import BaerCodeError
from .galois import Field
from .params import Derived

HONEST = "honest"
RANDOM = "random"
LIAR = "consistent_liar"
_STRATEGIES = (HONEST, RANDOM, LIAR)


class AdversaryPolicy:
    """Corruption policy over a fixed controlled node set."""

    def __init__(self, controlled: Sequence[int] = (), strategy: str = HONEST, seed: int = 0):
        if strategy not in _STRATEGIES:
            raise BaerCodeError(f"unknown strategy {strategy!r}; pick one of {_STRATEGIES}")
        self.controlled = frozenset(controlled)
        self.strategy = strategy
        self.seed = seed
        self._fake_shares: dict[tuple, dict[int, NodeShare]] = {}

    def __repr__(self):
        return f"AdversaryPolicy({sorted(self.controlled)}, {self.strategy!r}, seed={self.seed})"

    def controls(self, node: int) -> bool:
        return self.strategy != HONEST and node in self.controlled

    def _node_rng(self, node: int, salt: int = 0) -> random.Random:
        # String seeds hash deterministically across processes (sha512 path).
        return random.Random(f"{self.seed}:{node}:{salt}")

    def fake_shares(self, code: Derived, fld: Field) -> dict[int, NodeShare]:
        """The colluding nodes' alternative world: one fake message, encoded."""
        key = (fld.p, code.params)
        if key not in self._fake_shares:
            rng = random.Random(f"{self.seed}:fake-message")
            fake_msg = [rng.randrange(fld.p) for _ in range(code.f_mbr)]
            dm = build_data_matrix(fake_msg, code, fld)
            self._fake_shares[key] = {
                node: encode_node(dm, node, code, fld) for node in sorted(self.controlled)
            }
        return self._fake_shares[key]

    def effective_share(self, share: NodeShare, code: Derived, fld: Field) -> NodeShare:
        """What this node actually stores / hands out when its content is read."""
        if not self.controls(share.index):
            return share
        if self.strategy == RANDOM:
            rng = self._node_rng(share.index)
            garbage = tuple(rng.randrange(fld.p) for _ in share.x)
            return NodeShare(index=share.index, e=share.e, x=garbage)
        return self.fake_shares(code, fld)[share.index]


def corrupt_storage(
    policy: AdversaryPolicy,
    shares: Mapping[int, NodeShare],
    code: Derived,
    fld: Field,
) -> dict[int, NodeShare]:
    """Stored-content view of the whole cluster under the policy."""
    return {
        node: policy.effective_share(sh, code, fld) for node, sh in shares.items()
    }


def corrupt_access(
    policy: AdversaryPolicy, node: int, share: NodeShare, code: Derived, fld: Field
) -> NodeShare:
    """Share as served to a data collector reading this node."""
    if share.index != node:
        raise BaerCodeError(f"share index {share.index} != accessed node {node}")
    return policy.effective_share(share, code, fld)


def corrupt_repair_symbols(
    policy: AdversaryPolicy,
    node: int,
    symbols: Sequence[int],
    fld: Field,
    recompute: Callable[[NodeShare], Sequence[int]] | None = None,
    code: Derived | None = None,
):
    """Repair symbols as emitted by this helper.

    For `random` the vector is replaced with uniforms of the same length;
    a consistent liar re-runs the honest encoding on its fake share, which
    requires the caller-provided `recompute` hook (share -> symbols).
    """
    if not policy.controls(node):
        return symbols
    if policy.strategy == RANDOM:
        rng = policy._node_rng(node, salt=1)
        return _replace_uniform(symbols, rng, fld)
    if recompute is None or code is None:
        raise BaerCodeError("consistent_liar needs recompute(share) and code context")
    return recompute(policy.fake_shares(code, fld)[node])


def _replace_uniform(symbols, rng: random.Random, fld: Field):
    """Uniform garbage with the same nesting shape (vector or per-round lists)."""
    if symbols and isinstance(symbols[0], (list, tuple)):
        return tuple(tuple(rng.randrange(fld.p) for _ in row) for row in symbols)
    return tuple(rng.randrange(fld.p) for _ in symbols)
