"""k-party distribution of interpolation queries, and adversary structures.

No-cloning is modelled as a rule: each share is a single-use token, an
intercepted share is consumed and never reaches the reconstructing party,
and any interception aborts reconstruction.  The classical view an
adversary gets from a share is the linear constraint (x_i, y_i, y_i f(x_i)).
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

import numpy as np

from .finite_field import FieldElement, FieldParams
from .interpolation import (InfeasibleError, ProtocolParams, ProtocolResult, TransversalTable,
                            run_protocol)
from .polynomial import MonomialBasis, Polynomial, evaluate, z_map

DEFAULT_MAX_ENUMERATION = 2**22
MAX_PLAYERS = 20
MAX_DUAL_PLAYERS = 12

KINDS = ("query", "share", "result", "destroyed")


class ShareConsumedError(RuntimeError):
    pass


class NotDownwardClosedError(ValueError):
    pass


# -- sessions ---------------------------------------------------------------

@dataclass
class Share:
    index: int
    point: tuple[FieldElement, ...]
    coeff: FieldElement
    consumed: bool = False

    def payload(self) -> dict:
        return {"index": self.index, "x": [e.to_list() for e in self.point],
                "y": self.coeff.to_list()}


def digest(payload) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:16]


@dataclass
class Transcript:
    records: list[dict] = field(default_factory=list)

    def log(self, sender: str, receiver: str, kind: str, payload) -> dict:
        if kind not in KINDS:
            raise ValueError(f"unknown record kind {kind!r}")
        rec = {"step": len(self.records) + 1, "from": sender, "to": receiver,
               "kind": kind, "digest": digest(payload)}
        self.records.append(rec)
        return rec

    def of_kind(self, kind: str) -> list[dict]:
        return [r for r in self.records if r["kind"] == kind]

    def write_jsonl(self, out: TextIO):
        for rec in self.records:
            out.write(json.dumps(rec, sort_keys=True) + "\n")


class SharingSession:
    """Routes one share per player and enforces single use."""

    def __init__(self, shares: Sequence[Share]):
        self.shares = list(shares)
        self.transcript = Transcript()
        self.interceptor_view: list[tuple[tuple[FieldElement, ...], FieldElement]] = []

    def _take(self, share: Share) -> Share:
        if share.consumed:
            raise ShareConsumedError(f"share {share.index} was already used")
        share.consumed = True
        return share

    def deliver(self, share: Share):
        if share.consumed:
            raise ShareConsumedError(f"share {share.index} was already used")
        self.transcript.log("bob", f"player{share.index}", "share", share.payload())

    def intercept(self, share: Share):
        self._take(share)
        self.interceptor_view.append((share.point, share.coeff))
        self.transcript.log("bob", f"player{share.index}", "destroyed", share.payload())

    def present(self, share: Share):
        """A player forwards its share to Eve, consuming it."""
        self._take(share)
        self.transcript.log(f"player{share.index}", "eve", "share", share.payload())


@dataclass
class SessionOutcome:
    transcript: Transcript
    result: ProtocolResult | None
    interceptor_view: list
    shares: list[Share]

    @property
    def destroyed(self) -> bool:
        return self.result is None


def deal_and_reconstruct(f: Polynomial, params: ProtocolParams, table: TransversalTable,
                         rng: np.random.Generator,
                         interception: Iterable[int] = ()) -> SessionOutcome:
    """One sharing session: Eve encodes, Bob routes k shares, Eve decodes.

    Share labels are the classical description of one query tuple drawn from
    the transversal; the reconstruction itself is the interpolation protocol.
    Interception indices are 1-based.
    """
    intercepted = sorted(set(interception))
    if any(not 1 <= i <= params.k for i in intercepted):
        raise ValueError(f"interception indices must lie in 1..{params.k}, got {intercepted}")
    xs, ys = table.query(int(table.image[rng.integers(table.size)]))
    shares = [Share(i + 1, xs[i], ys[i]) for i in range(params.k)]
    session = SharingSession(shares)
    session.transcript.log("eve", "bob", "query", {"encoded": "psi1", "k": params.k})
    for s in shares:
        if s.index in intercepted:
            session.intercept(s)
        else:
            session.deliver(s)
    if intercepted:
        session.transcript.log("bob", "eve", "result", {"status": "aborted",
                                                        "missing": intercepted})
        return SessionOutcome(session.transcript, None, session.interceptor_view, shares)
    for s in shares:
        session.present(s)
    result = run_protocol(f, params, table, rng)
    session.transcript.log("eve", "bob", "result", {"status": "decoded",
                                                    "success": result.success})
    return SessionOutcome(session.transcript, result, [], shares)


# -- sub-threshold ambiguity ------------------------------------------------

def share_constraints(points: Sequence[Sequence[FieldElement]], coeffs: Sequence[FieldElement],
                      f: Polynomial) -> list[tuple[tuple[FieldElement, ...], FieldElement]]:
    """(row, value) pairs: row = Z((x_i,), (y_i,)), value = y_i f(x_i)."""
    return [(z_map([x], [y], f.basis, f.params), y * evaluate(f, x))
            for x, y in zip(points, coeffs)]


def ambiguity_count(known: Sequence[tuple[Sequence[FieldElement], FieldElement]],
                    basis: MonomialBasis, params: FieldParams,
                    max_enumeration: int = DEFAULT_MAX_ENUMERATION) -> int:
    """Brute-force count of coefficient vectors consistent with the known constraints."""
    q, D = params.q, basis.D
    if q**D > max_enumeration:
        raise InfeasibleError(f"q^D = {q**D} exceeds bound {max_enumeration}")
    codes = np.arange(q**D)
    cand = np.stack([(codes // q**j) % q for j in range(D)], axis=1)
    ok = np.ones(len(codes), dtype=bool)
    for row, value in known:
        acc = np.zeros(len(codes), dtype=np.int64)
        for j, rj in enumerate(row):
            acc = params.add_table[acc, params.mul_table[cand[:, j], rj.code]]
        ok &= acc == value.code
    return int(ok.sum())


def constraint_rank(rows: Sequence[Sequence[FieldElement]], params: FieldParams) -> int:
    """Rank over GF(q) by Gaussian elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    rank, cols = 0, len(m[0])
    for col in range(cols):
        pivot = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = m[rank][col].inverse()
        m[rank] = [v * inv for v in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                factor = m[i][col]
                m[i] = [a - factor * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def ambiguity_count_by_rank(known: Sequence[tuple[Sequence[FieldElement], FieldElement]],
                            basis: MonomialBasis, params: FieldParams) -> int:
    """q^(D - rank) for a consistent system of known constraints."""
    return params.q ** (basis.D - constraint_rank([row for row, _ in known], params))


# -- adversary structures ---------------------------------------------------

@dataclass(frozen=True)
class AdversaryStructure:
    players: frozenset[int]
    sets: frozenset[frozenset[int]]

    def __post_init__(self):
        if len(self.players) > MAX_PLAYERS:
            raise ValueError(f"at most {MAX_PLAYERS} players supported")
        for s in self.sets:
            if not s <= self.players:
                raise ValueError(f"{sorted(s)} is not a subset of the player set")

    @classmethod
    def build(cls, players: Iterable[int] | int, sets: Iterable[Iterable[int]]) -> AdversaryStructure:
        if isinstance(players, int):
            players = range(1, players + 1)
        return cls(frozenset(players), frozenset(frozenset(s) for s in sets))

    def __contains__(self, subset) -> bool:
        return frozenset(subset) in self.sets

    def __len__(self):
        return len(self.sets)

    def complement(self, subset: frozenset[int]) -> frozenset[int]:
        return self.players - subset

    def to_list(self) -> list[list[int]]:
        return sorted((sorted(s) for s in self.sets), key=lambda s: (len(s), s))

    def to_json(self) -> str:
        return json.dumps(self.to_list())

    @classmethod
    def from_json(cls, players: Iterable[int] | int, text: str) -> AdversaryStructure:
        data = json.loads(text)
        if not isinstance(data, list) or not all(isinstance(s, list) for s in data):
            raise ValueError("structure must be a JSON array of subsets")
        return cls.build(players, data)


def _subsets(players: frozenset[int]) -> Iterable[frozenset[int]]:
    items = sorted(players)
    for size in range(len(items) + 1):
        for combo in itertools.combinations(items, size):
            yield frozenset(combo)


def is_downward_closed(A: AdversaryStructure) -> bool:
    # checking the immediate subsets of each member suffices
    return all(s - {x} in A.sets for s in A.sets for x in s)


def _require_downward_closed(A: AdversaryStructure):
    if not is_downward_closed(A):
        raise NotDownwardClosedError("adversary structure is not downward-closed")


def is_q2(A: AdversaryStructure) -> bool:
    """No member's complement is also a member."""
    _require_downward_closed(A)
    return not any(A.complement(s) in A.sets for s in A.sets)


def dual(A: AdversaryStructure) -> AdversaryStructure:
    """{B : complement of B not in A}."""
    _require_downward_closed(A)
    if len(A.players) > MAX_DUAL_PLAYERS:
        raise InfeasibleError(f"dual enumeration limited to {MAX_DUAL_PLAYERS} players")
    return AdversaryStructure(A.players, frozenset(
        B for B in _subsets(A.players) if A.complement(B) not in A.sets))


def is_q2_star(A: AdversaryStructure) -> bool:
    return is_q2(dual(A))


def is_self_dual(A: AdversaryStructure) -> bool:
    return is_q2(A) and is_q2_star(A)


def threshold_structure(players: int, t: int) -> AdversaryStructure:
    """All coalitions of at most t players out of 1..players."""
    if not 0 <= t < players:
        raise ValueError(f"need 0 <= t < players, got t={t}, players={players}")
    P = frozenset(range(1, players + 1))
    return AdversaryStructure(P, frozenset(s for s in _subsets(P) if len(s) <= t))


def structure_report(A: AdversaryStructure) -> dict:
    closed = is_downward_closed(A)
    if not closed:
        return {"downward_closed": False, "q2": None, "q2_star": None, "self_dual": None,
                "dual": None}
    D = dual(A)
    q2, q2s = is_q2(A), is_q2(D)
    return {"downward_closed": True, "q2": q2, "q2_star": q2s, "self_dual": q2 and q2s,
            "dual": D.to_list()}
