"""Deterministic storage-cluster simulation with bandwidth metering.

A Cluster holds the ground-truth message, the live shares, the scheme in
force (1, 2 or concat) and the current adversary policy.  Scenario scripts
are ordered events:

    fail 3
    repair 3 d=4 helpers=lowest
    corrupt random nodes=2 seed=42
    reconstruct 1,2,5

Every repair is metered and compared against the minimum total bandwidth
gamma_mbr(d) = alpha*d/(d-2b); every post-repair share is compared to the
encoder's ground truth, so error propagation is impossible to miss.
Wall-clock time is reported per event but never asserted.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from . import adversary as adv
from . import concat, repair1, repair2
from .encoder import NodeShare, build_data_matrix, encode_all, encode_node
from .errors import (
    BaerCodeError,
    NodeAlreadyFailedError,
    NotEnoughHelpersError,
    RepairOfLiveNodeError,
)
from .galois import Field
from .params import Derived, check_field, schedule_scheme2
from .reconstruct import testgroup_reconstruct

SCHEMES = ("1", "2", "concat")


@dataclass(frozen=True)
class Event:
    kind: str                      # fail | repair | reconstruct | corrupt
    node: int | None = None
    d: int | None = None
    helper_policy: str = "lowest"  # lowest | random | exclude:<list>
    nodes: tuple[int, ...] = ()
    strategy: str = adv.HONEST
    seed: int = 0

    def detail(self) -> str:
        if self.kind == "fail":
            return f"node={self.node}"
        if self.kind == "repair":
            return f"node={self.node} d={self.d} helpers={self.helper_policy}"
        if self.kind == "reconstruct":
            return "nodes=" + ",".join(str(x) for x in self.nodes)
        return f"{self.strategy} nodes={','.join(str(x) for x in self.nodes)} seed={self.seed}"


@dataclass
class ReportRow:
    index: int
    kind: str
    detail: str
    symbols: int
    gamma_expect: int | None
    success: bool
    wall_ms: float


@dataclass
class Report:
    scheme: str
    p: int
    code: Derived
    rows: list[ReportRow] = dc_field(default_factory=list)

    @property
    def total_symbols(self) -> int:
        return sum(r.symbols for r in self.rows)

    @property
    def all_ok(self) -> bool:
        return all(r.success for r in self.rows)

    def render(self) -> str:
        code = self.code
        head = (
            f"# cluster: scheme={self.scheme} n={code.n} k={code.k} "
            f"D={','.join(str(d) for d in code.d_set)} b={code.b} "
            f"alpha={code.alpha} p={self.p}"
        )
        lines = [head]
        lines.append(f"{'#':>4}  {'event':<12} {'detail':<40} {'symbols':>7}  {'gamma':>5}  {'ok':<4} {'wall_ms':>8}")
        for r in self.rows:
            gamma = str(r.gamma_expect) if r.gamma_expect is not None else "-"
            lines.append(
                f"{r.index:>4}  {r.kind:<12} {r.detail:<40} {r.symbols:>7}  "
                f"{gamma:>5}  {'ok' if r.success else 'FAIL':<4} {r.wall_ms:>8.2f}"
            )
        repairs = sum(1 for r in self.rows if r.kind == "repair")
        recons = sum(1 for r in self.rows if r.kind == "reconstruct")
        fails = sum(1 for r in self.rows if not r.success)
        lines.append(
            f"totals: events={len(self.rows)} symbols={self.total_symbols} "
            f"repairs={repairs} reconstructs={recons} failures={fails}"
        )
        return "\n".join(lines) + "\n"


class Cluster:
    """Live cluster state; mutate only through run_event."""

    def __init__(self, code: Derived, message: Sequence[int], scheme: str, fld: Field):
        if scheme not in SCHEMES:
            raise BaerCodeError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
        if scheme == "concat" and code.b != 0:
            raise BaerCodeError("concat scheme requires b = 0 parameters")
        check_field(code, fld)
        self.code = code
        self.field = fld
        self.scheme = scheme
        self.message = tuple(v % fld.p for v in message)
        dm = build_data_matrix(self.message, code, fld)
        self._dm = dm
        self.shares: dict[int, NodeShare | None] = {
            s.index: s for s in encode_all(dm, code, fld)
        }
        self.policy = adv.AdversaryPolicy()
        self.omega_cfg = repair1.omega_build(code, fld) if scheme == "1" else None
        if scheme == "2":
            for d in code.d_set:
                schedule_scheme2(code, d)   # raises DivisibilityViolation up front
        self.log: list[ReportRow] = []

    # -- helpers -----------------------------------------------------

    def live_nodes(self) -> list[int]:
        return sorted(n for n, s in self.shares.items() if s is not None)

    def ground_truth(self, node: int) -> NodeShare:
        return encode_node(self._dm, node, self.code, self.field)

    def _choose_helpers(self, f: int, d: int, policy: str, rng: random.Random) -> list[int]:
        candidates = [n for n in self.live_nodes() if n != f]
        if policy.startswith("exclude:"):
            banned = {int(x) for x in policy.split(":", 1)[1].split(",") if x}
            candidates = [n for n in candidates if n not in banned]
        if len(candidates) < d:
            raise NotEnoughHelpersError(
                f"{len(candidates)} candidate helpers for d={d} repair of node {f}"
            )
        if policy == "random":
            return sorted(rng.sample(candidates, d))
        return candidates[:d]   # lowest-index (and exclude:) policy

    def _repair(self, f: int, d: int, helpers: list[int]) -> tuple[NodeShare, int]:
        """Run the scheme-appropriate repair; returns (share, symbols moved)."""
        code, fld, policy = self.code, self.field, self.policy
        stored = {
            h: policy.effective_share(self.shares[h], code, fld) for h in helpers
        }
        moved = 0
        if self.scheme == "1":
            cfg = self.omega_cfg
            syms = {}
            for h in helpers:
                vec = repair1.helper_repair_symbols(stored[h], f, d, cfg)
                vec = adv.corrupt_repair_symbols(
                    policy, h, vec, fld,
                    recompute=lambda sh: repair1.helper_repair_symbols(sh, f, d, cfg),
                    code=code,
                )
                syms[h] = vec
                moved += len(vec)
            x = repair1.testgroup_repair(syms, f, d, cfg)
        elif self.scheme == "2":
            plan = schedule_scheme2(code, d)
            streams = {}
            for h in helpers:
                st = repair2.helper_stream(stored[h], plan, f, fld)
                st = adv.corrupt_repair_symbols(
                    policy, h, st, fld,
                    recompute=lambda sh: repair2.helper_stream(sh, plan, f, fld),
                    code=code,
                )
                streams[h] = st
                moved += sum(len(r) for r in st)
            x = repair2.testgroup_repair2(streams, f, plan, fld)
        else:
            # concat: per-component scalars; the assignment fixes who sends what.
            x_share = concat.repair_b0(stored, f, helpers, code, fld)
            moved = code.alpha
            x = x_share.x
        return NodeShare(index=f, e=fld.point(f), x=tuple(x)), moved

    # -- event engine -------------------------------------------------

    def run_event(self, event: Event, rng: random.Random | None = None) -> ReportRow:
        rng = rng or random.Random(0)
        t0 = time.perf_counter()
        symbols = 0
        gamma_expect = None
        success = True
        code = self.code

        if event.kind == "fail":
            if event.node not in self.shares:
                raise BaerCodeError(f"unknown node {event.node}")
            if self.shares[event.node] is None:
                raise NodeAlreadyFailedError(f"node {event.node} already failed")
            self.shares[event.node] = None

        elif event.kind == "repair":
            f, d = event.node, event.d
            if f not in self.shares:
                raise BaerCodeError(f"unknown node {f}")
            if self.shares[f] is not None:
                raise RepairOfLiveNodeError(f"node {f} is live; fail it first")
            if d not in code.d_set:
                raise BaerCodeError(f"repair d={d} not in D={code.d_set}")
            helpers = self._choose_helpers(f, d, event.helper_policy, rng)
            repaired, symbols = self._repair(f, d, helpers)
            gamma_expect = code.gamma_of(d)
            success = repaired.x == self.ground_truth(f).x and symbols == gamma_expect
            self.shares[f] = repaired
            event = Event(kind="repair", node=f, d=d,
                          helper_policy=",".join(str(h) for h in helpers))

        elif event.kind == "reconstruct":
            nodes = event.nodes
            if len(nodes) != code.k:
                raise BaerCodeError(f"reconstruct needs exactly k={code.k} nodes")
            shares = []
            for n in nodes:
                sh = self.shares.get(n)
                if sh is None:
                    raise BaerCodeError(f"node {n} is failed or unknown")
                shares.append(adv.corrupt_access(self.policy, n, sh, code, self.field))
            got = testgroup_reconstruct(shares, code, self.field)
            symbols = code.k * code.alpha
            success = got == self.message

        elif event.kind == "corrupt":
            self.policy = adv.AdversaryPolicy(
                controlled=event.nodes, strategy=event.strategy, seed=event.seed
            )

        else:
            raise BaerCodeError(f"unknown event kind {event.kind!r}")

        row = ReportRow(
            index=len(self.log) + 1, kind=event.kind, detail=event.detail(),
            symbols=symbols, gamma_expect=gamma_expect, success=success,
            wall_ms=(time.perf_counter() - t0) * 1e3,
        )
        self.log.append(row)
        return row


def init_cluster(code: Derived, message: Sequence[int], scheme: str, fld: Field) -> Cluster:
    return Cluster(code, message, scheme, fld)


def run_scenario(cluster: Cluster, script: Sequence[Event], seed: int = 0) -> Report:
    rng = random.Random(f"scenario:{seed}")
    report = Report(scheme=cluster.scheme, p=cluster.field.p, code=cluster.code)
    for event in script:
        report.rows.append(cluster.run_event(event, rng))
    return report


# -- scenario files ---------------------------------------------------------

def parse_scenario(text: str) -> list[Event]:
    """One event per line; blank lines and #-comments ignored."""
    events: list[Event] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        kind = toks[0].lower()
        try:
            if kind == "fail":
                events.append(Event(kind="fail", node=int(toks[1])))
            elif kind == "repair":
                opts = _opts(toks[2:])
                events.append(Event(
                    kind="repair", node=int(toks[1]), d=int(opts["d"]),
                    helper_policy=opts.get("helpers", "lowest"),
                ))
            elif kind == "reconstruct":
                events.append(Event(
                    kind="reconstruct",
                    nodes=tuple(int(x) for x in toks[1].split(",")),
                ))
            elif kind == "corrupt":
                strategy = {"random": adv.RANDOM, "liar": adv.LIAR,
                            "consistent_liar": adv.LIAR, "honest": adv.HONEST}[toks[1]]
                opts = _opts(toks[2:])
                nodes = tuple(
                    int(x) for x in opts.get("nodes", "").split(",") if x
                )
                events.append(Event(
                    kind="corrupt", strategy=strategy, nodes=nodes,
                    seed=int(opts.get("seed", 0)),
                ))
            else:
                raise KeyError(kind)
        except (KeyError, ValueError, IndexError) as exc:
            raise BaerCodeError(f"scenario line {lineno}: cannot parse {raw!r} ({exc})") from exc
    return events


def _opts(tokens: Sequence[str]) -> dict[str, str]:
    out = {}
    for tok in tokens:
        key, _, val = tok.partition("=")
        out[key.lower()] = val
    return out
