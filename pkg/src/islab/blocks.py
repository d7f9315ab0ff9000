"""Block-counting languages and the intersection characterization.

A word is split into consecutive blocks over pairwise disjoint
sub-alphabets; a specification constrains some pairs of blocks to have
equal length.  Two such specifications over the same block structure have
a context-free intersection exactly when their combined constraint arcs
are well nested and share no endpoints; the characterization is
constructive in both directions, producing a single joint machine in the
positive case and a family of pumping witnesses in the negative one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arcs import SegmentDecomposition
from .pda import FINAL_STATE_BOTTOM_ONLY, Pda, StackAction, Transition

BLOCKS_FORMAT = "blocks-v1"

CROSSING = "crossing"
SHARED_ENDPOINT = "shared-endpoint"


class NoCrossing(ValueError):
    """Raised when an operation needs a crossing violation but was handed
    a shared-endpoint one (or none at all)."""


def _arcs_cross(first: tuple, second: tuple) -> bool:
    l1, r1 = first
    l2, r2 = second
    return l1 < l2 < r1 < r2 or l2 < l1 < r2 < r1


@dataclass(frozen=True)
class BlockSpec:
    """One machine's view: block alphabets plus equal-length constraints.

    Constraints are pairs (l, r) of 1-based block indices with l < r; they
    must be well nested and no block may appear in two constraints, which
    is what makes the language recognizable by a single counting machine.
    """

    alphabets: tuple
    constraints: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "alphabets", tuple(frozenset(a) for a in self.alphabets)
        )
        object.__setattr__(
            self, "constraints", tuple(sorted(set(tuple(c) for c in self.constraints)))
        )
        if not self.alphabets:
            raise ValueError("at least one block is required")
        seen: set = set()
        for idx, alpha in enumerate(self.alphabets, start=1):
            if not alpha:
                raise ValueError(f"block {idx} has an empty alphabet")
            for ch in alpha:
                if not (isinstance(ch, str) and len(ch) == 1):
                    raise ValueError(f"block symbols must be single characters, got {ch!r}")
                if ch in seen:
                    raise ValueError(f"symbol {ch!r} appears in two block alphabets")
                seen.add(ch)
        endpoints: set = set()
        for l, r in self.constraints:
            if not (1 <= l < r <= self.k):
                raise ValueError(f"constraint {(l, r)} out of range for k={self.k}")
            for e in (l, r):
                if e in endpoints:
                    raise ValueError(f"block {e} appears in two constraints")
                endpoints.add(e)
        for a in self.constraints:
            for b in self.constraints:
                if a < b and _arcs_cross(a, b):
                    raise ValueError(f"constraints {a} and {b} cross")

    @property
    def k(self) -> int:
        return len(self.alphabets)

    def block_of(self, ch: str):
        for idx, alpha in enumerate(self.alphabets, start=1):
            if ch in alpha:
                return idx
        return None

    def block_counts(self, word: str):
        """Per-block symbol counts, or None when the word does not scan as
        consecutive blocks in order."""
        counts = [0] * self.k
        current = 1
        for ch in word:
            idx = self.block_of(ch)
            if idx is None or idx < current:
                return None
            current = idx
            counts[idx - 1] += 1
        return counts

    def contains(self, word: str) -> bool:
        counts = self.block_counts(word)
        if counts is None:
            return False
        return all(counts[l - 1] == counts[r - 1] for l, r in self.constraints)


@dataclass(frozen=True)
class Violation:
    kind: str
    first: tuple
    second: tuple

    def blocks(self) -> frozenset:
        return frozenset(self.first) | frozenset(self.second)


@dataclass(frozen=True)
class Verdict:
    is_cfl: bool
    reason: str
    violation: Violation | None = None

    @property
    def outcome(self) -> str:
        return "CFL" if self.is_cfl else "NotCFL"


@dataclass(frozen=True)
class JointSpec:
    """Two constraint sets over one shared block structure."""

    alphabets: tuple
    c1: tuple
    c2: tuple

    def __post_init__(self):
        first = BlockSpec(self.alphabets, self.c1)
        second = BlockSpec(self.alphabets, self.c2)
        object.__setattr__(self, "alphabets", first.alphabets)
        object.__setattr__(self, "c1", first.constraints)
        object.__setattr__(self, "c2", second.constraints)

    @property
    def k(self) -> int:
        return len(self.alphabets)

    def side(self, which: int) -> BlockSpec:
        if which == 1:
            return BlockSpec(self.alphabets, self.c1)
        if which == 2:
            return BlockSpec(self.alphabets, self.c2)
        raise ValueError("side must be 1 or 2")

    def in_intersection(self, word: str) -> bool:
        return self.side(1).contains(word) and self.side(2).contains(word)


def is_jointly_well_nested(j: JointSpec):
    """Returns (True, None) or (False, first violation in constraint order).

    Identical arcs present on both sides impose the same condition twice
    and are not a violation.
    """
    for e1 in j.c1:
        for e2 in j.c2:
            if e1 == e2:
                continue
            if set(e1) & set(e2):
                return False, Violation(SHARED_ENDPOINT, e1, e2)
            if _arcs_cross(e1, e2):
                return False, Violation(CROSSING, e1, e2)
    return True, None


def characterize(j: JointSpec) -> Verdict:
    ok, violation = is_jointly_well_nested(j)
    if ok:
        return Verdict(
            is_cfl=True,
            reason="combined constraint arcs are well nested with distinct "
            "endpoints; a single joint machine recognizes the intersection",
        )
    detail = (
        f"constraints {violation.first} and {violation.second} "
        + ("share a block" if violation.kind == SHARED_ENDPOINT else "cross")
    )
    return Verdict(
        is_cfl=False,
        reason=f"{detail}; the intersection admits no context-free recognizer",
        violation=violation,
    )


def _counting_machine(alphabets: tuple, arcs) -> Pda:
    marker = {arc: f"X{arc[0]}_{arc[1]}" for arc in arcs}
    pushes = {l: marker[(l, r)] for l, r in arcs}
    pops = {r: marker[(l, r)] for l, r in arcs}
    k = len(alphabets)

    def action_for(block: int) -> StackAction:
        if block in pushes:
            return StackAction.push(pushes[block])
        if block in pops:
            return StackAction.pop(pops[block])
        return StackAction.none()

    states = [f"b{i}" for i in range(k + 1)]
    transitions = []
    for i in range(k + 1):
        for m in range(max(i, 1), k + 1):
            for ch in sorted(alphabets[m - 1]):
                transitions.append(Transition(states[i], ch, action_for(m), states[m]))
    return Pda(
        states=states,
        input_alphabet=set().union(*alphabets),
        stack_alphabet={"$"} | set(marker.values()),
        transitions=transitions,
        start=states[0],
        bottom="$",
        accept=states,
        acceptance_mode=FINAL_STATE_BOTTOM_ONLY,
    )


def build_block_pda(spec: BlockSpec) -> Pda:
    """Normal-form machine for one side: control tracks the current block,
    each constrained left block pushes a marker private to its arc and the
    matching right block pops it, so empty-stack acceptance enforces every
    equality at once."""
    return _counting_machine(spec.alphabets, sorted(spec.constraints))


def build_joint_pda(j: JointSpec) -> Pda:
    """One normal-form machine for the intersection of both sides; requires
    joint well-nestedness so the combined markers obey stack discipline."""
    ok, violation = is_jointly_well_nested(j)
    if not ok:
        raise ValueError(
            f"not jointly well nested: {violation.kind} between "
            f"{violation.first} and {violation.second}"
        )
    return _counting_machine(j.alphabets, sorted(set(j.c1) | set(j.c2)))


def witness_blocks(j: JointSpec, violation: Violation) -> frozenset:
    """Blocks connected to the violating arcs through the constraint graph.

    These are the blocks that must grow together in the witness family;
    every other block can stay empty while both sides remain satisfied.
    """
    edges = set(j.c1) | set(j.c2)
    reached = set(violation.blocks())
    changed = True
    while changed:
        changed = False
        for l, r in edges:
            if (l in reached) != (r in reached):
                reached |= {l, r}
                changed = True
    return frozenset(reached)


def witness_string(j: JointSpec, violation: Violation, n: int) -> str:
    """Member of the intersection with every violation-connected block of
    length n and all remaining blocks empty."""
    if n < 0:
        raise ValueError("witness size must be nonnegative")
    large = witness_blocks(j, violation)
    parts = []
    for idx in range(1, j.k + 1):
        ch = min(j.alphabets[idx - 1])
        parts.append(ch * (n if idx in large else 0))
    return "".join(parts)


def witness_decomposition(j: JointSpec, violation: Violation, n: int):
    """Witness word plus the four-segment split induced by a crossing.

    For crossing arcs (l1, r1) and (l2, r2) with l1 < l2 < r1 < r2 the
    cuts sit at the ends of blocks l1, l2 and r1, so segment two spans
    blocks l1+1..l2 and segment three spans l2+1..r1.
    """
    if violation.kind != CROSSING:
        raise NoCrossing("segment decomposition is defined for crossings only")
    first, second = violation.first, violation.second
    if not first[0] < second[0] < first[1] < second[1]:
        first, second = second, first
    l1, r1 = first
    l2, _ = second
    word = witness_string(j, violation, n)
    large = witness_blocks(j, violation)
    ends = [0]
    for idx in range(1, j.k + 1):
        ends.append(ends[-1] + (n if idx in large else 0))
    return word, SegmentDecomposition(
        word_len=len(word), i=ends[l1], i_prime=ends[l2], j=ends[r1]
    )


@dataclass(frozen=True)
class LinkagePackage:
    """A pumping work order: witness word, its four-segment split, and the
    segment pairs whose linkage the crossing is claimed to force."""

    word: str
    decomposition: SegmentDecomposition
    claims: tuple


def segments_and_linkages(j: JointSpec, violation: Violation, n: int) -> LinkagePackage:
    """Bundle the crossing witness at size n with the two linkage claims
    ((1, 3) and (2, 4)) ready for verification against a membership oracle."""
    word, decomposition = witness_decomposition(j, violation, n)
    return LinkagePackage(word=word, decomposition=decomposition, claims=((1, 3), (2, 4)))


def joint_to_json(j: JointSpec) -> dict:
    return {
        "format": BLOCKS_FORMAT,
        "k": j.k,
        "alphabets": [sorted(a) for a in j.alphabets],
        "c1": [list(c) for c in j.c1],
        "c2": [list(c) for c in j.c2],
    }


def joint_from_json(data: dict) -> JointSpec:
    if data.get("format") != BLOCKS_FORMAT:
        raise ValueError(
            f"expected format {BLOCKS_FORMAT!r}, got {data.get('format')!r}"
        )
    alphabets = tuple(frozenset(a) for a in data["alphabets"])
    if data.get("k") is not None and int(data["k"]) != len(alphabets):
        raise ValueError("declared k disagrees with the alphabet list")
    return JointSpec(
        alphabets=alphabets,
        c1=tuple(tuple(c) for c in data["c1"]),
        c2=tuple(tuple(c) for c in data["c2"]),
    )
