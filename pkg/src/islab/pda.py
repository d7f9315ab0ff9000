"""Normal-form pushdown machines: model, validation, simulation, enumeration.

The normal form expected of hand-built and grammar-derived machines: every
non-auxiliary transition reads exactly one input symbol and performs at most
one stack operation (a single push or a single pop), and epsilon-transitions
exist only as auxiliary second-push steps chained directly after a pushing
read.  Each input position therefore contributes at most two pushes or one
pop per machine, and stack depth never exceeds 2*|w|+1.

Product machines reuse the same simulation engine through a small duck-typed
protocol (transitions_from / initial_config / is_accepting / stack_depth_cap)
without being normal-form themselves.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable

EPSILON = None  # the `read` field of a transition that consumes no input

PDA_FORMAT = "pda-v1"

FINAL_STATE = "FinalState"
FINAL_STATE_BOTTOM_ONLY = "FinalStateAndBottomOnly"
ACCEPTANCE_MODES = (FINAL_STATE, FINAL_STATE_BOTTOM_ONLY)

PUSH = "push"
POP = "pop"
NONE = "none"

_KIND_RANK = {PUSH: 0, POP: 1, NONE: 2}


class LimitExceeded(Exception):
    """A search hit its configuration cap before exhausting the graph.

    Signals an inconclusive search, never a wrong answer: whenever a result
    is returned it is exact.
    """


@dataclass(frozen=True)
class StackAction:
    """A single stack operation: push one symbol, pop one symbol, or nothing."""

    kind: str
    symbol: str | None = None

    @classmethod
    def push(cls, symbol: str) -> "StackAction":
        return cls(PUSH, symbol)

    @classmethod
    def pop(cls, symbol: str) -> "StackAction":
        return cls(POP, symbol)

    @classmethod
    def none(cls) -> "StackAction":
        return cls(NONE, None)

    def describe(self) -> str:
        if self.kind == NONE:
            return "none"
        return f"{self.kind} {self.symbol}"


@dataclass(frozen=True)
class Transition:
    source: Hashable
    read: str | None
    action: StackAction
    target: Hashable
    auxiliary: bool = False

    def describe(self) -> str:
        read = self.read if self.read is not None else "eps"
        aux = " aux" if self.auxiliary else ""
        return f"{self.source} --{read}/{self.action.describe()}--> {self.target}{aux}"

    def sort_key(self) -> tuple:
        return (
            str(self.source),
            self.read if self.read is not None else "",
            _KIND_RANK.get(self.action.kind, 3),
            self.action.symbol or "",
            str(self.target),
            self.auxiliary,
        )


@dataclass(frozen=True)
class Configuration:
    """A point in the run graph: control state, input consumed, full stack."""

    state: Hashable
    input_pos: int
    stack: tuple


@dataclass(frozen=True)
class RunStep:
    transition: Transition
    input_pos: int  # 1-based input position this step is associated with
    stack_depth_after: int


@dataclass(frozen=True)
class AcceptingRun:
    steps: tuple[RunStep, ...]
    final: Configuration

    def transition_sequence(self) -> tuple[Transition, ...]:
        return tuple(s.transition for s in self.steps)


@dataclass(frozen=True)
class SearchLimits:
    max_configs: int = 500_000


DEFAULT_LIMITS = SearchLimits()


@dataclass(frozen=True)
class Pda:
    """An explicit pushdown machine over single-character input symbols.

    Transitions are canonically sorted at construction (by source, read,
    action ranked push < pop < none, symbol, target) so that every search
    below is deterministic and the "first run" is well defined.
    """

    states: frozenset
    input_alphabet: frozenset
    stack_alphabet: frozenset
    transitions: tuple
    start: str
    bottom: str
    accept: frozenset
    acceptance_mode: str = FINAL_STATE_BOTTOM_ONLY

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "input_alphabet", frozenset(self.input_alphabet))
        object.__setattr__(self, "stack_alphabet", frozenset(self.stack_alphabet))
        object.__setattr__(self, "accept", frozenset(self.accept))
        object.__setattr__(
            self, "transitions", tuple(sorted(self.transitions, key=Transition.sort_key))
        )
        self._check()

    def _check(self) -> None:
        if self.acceptance_mode not in ACCEPTANCE_MODES:
            raise ValueError(f"unknown acceptance mode {self.acceptance_mode!r}")
        if self.start not in self.states:
            raise ValueError(f"start state {self.start!r} not declared")
        if not self.accept <= self.states:
            raise ValueError("accept states not all declared")
        if self.bottom not in self.stack_alphabet:
            raise ValueError(f"bottom marker {self.bottom!r} not in stack alphabet")
        for sym in self.input_alphabet:
            if not (isinstance(sym, str) and len(sym) == 1):
                raise ValueError(f"input symbols must be single characters, got {sym!r}")
        for t in self.transitions:
            if t.source not in self.states or t.target not in self.states:
                raise ValueError(f"transition references undeclared state: {t.describe()}")
            if t.read is not None and t.read not in self.input_alphabet:
                raise ValueError(f"transition reads undeclared symbol: {t.describe()}")
            if t.action.kind in (PUSH, POP) and t.action.symbol not in self.stack_alphabet:
                raise ValueError(f"transition uses undeclared stack symbol: {t.describe()}")

    @cached_property
    def _by_source(self) -> dict:
        index: dict = {}
        for t in self.transitions:
            index.setdefault(t.source, []).append(t)
        return {state: tuple(ts) for state, ts in index.items()}

    def transitions_from(self, state) -> tuple:
        return self._by_source.get(state, ())

    def initial_config(self) -> Configuration:
        return Configuration(self.start, 0, (self.bottom,))

    def is_accepting(self, config: Configuration, input_len: int) -> bool:
        if config.input_pos != input_len or config.state not in self.accept:
            return False
        if self.acceptance_mode == FINAL_STATE_BOTTOM_ONLY:
            return config.stack == (self.bottom,)
        return True

    def stack_depth_cap(self, input_len: int) -> int:
        return 2 * input_len + 1


def validate_normal_form(pda: Pda) -> list[str]:
    """Check the normal-form contract; return one diagnostic per violation.

    Empty result iff: every non-auxiliary transition reads exactly one input
    symbol and performs at most one stack operation, and every auxiliary
    epsilon-transition is a single push whose source state is entered only by
    non-auxiliary pushing reads (so second pushes chain directly after a
    pushing read and epsilon-chains have length one).
    """
    diags = []
    incoming: dict = {}
    for t in pda.transitions:
        incoming.setdefault(t.target, []).append(t)
    for t in pda.transitions:
        where = f"transition ({t.describe()})"
        kind = t.action.kind
        if kind not in (PUSH, POP, NONE):
            diags.append(f"{where}: action {kind!r} is not a single stack operation")
            continue
        if kind in (PUSH, POP) and t.action.symbol is None:
            diags.append(f"{where}: {kind} without a stack symbol")
        if kind == NONE and t.action.symbol is not None:
            diags.append(f"{where}: no-op action carries a stack symbol")
        if not t.auxiliary:
            if t.read is None:
                diags.append(f"{where}: non-auxiliary transition reads no input symbol")
            continue
        # auxiliary second-push steps
        if t.read is not None:
            diags.append(f"{where}: auxiliary transition must not read input")
        if kind != PUSH:
            diags.append(f"{where}: auxiliary transition must push exactly one symbol")
        if t.source == pda.start:
            diags.append(f"{where}: auxiliary transition leaves the start state unchained")
        entries = incoming.get(t.source, [])
        if not entries:
            diags.append(f"{where}: auxiliary transition has no triggering push into {t.source!r}")
        for u in entries:
            if u.auxiliary or u.action.kind != PUSH:
                diags.append(
                    f"{where}: chained after non-pushing transition ({u.describe()})"
                )
    return diags


def _apply(action: StackAction, stack: tuple):
    """Apply one stack operation; return the new stack or None if blocked."""
    kind = action.kind
    if kind == NONE:
        return stack
    if kind == PUSH:
        return stack + (action.symbol,)
    if kind == POP:
        if stack and stack[-1] == action.symbol:
            return stack[:-1]
        return None
    raise ValueError(f"cannot simulate stack action {kind!r}")


def _successors(machine, config: Configuration, w: str, depth_cap: int):
    """Yield (transition, next_config) pairs in deterministic order."""
    pos = config.input_pos
    symbol = w[pos] if pos < len(w) else None
    for t in machine.transitions_from(config.state):
        if t.read is None:
            new_pos = pos
        elif symbol is not None and t.read == symbol:
            new_pos = pos + 1
        else:
            continue
        stack = _apply(t.action, config.stack)
        if stack is None or len(stack) > depth_cap:
            continue
        yield t, Configuration(t.target, new_pos, stack)


def step(machine, config: Configuration, w: str) -> tuple:
    """One-step successor configurations of `config` on input `w`."""
    cap = machine.stack_depth_cap(len(w))
    return tuple(c for _, c in _successors(machine, config, w, cap))


def accepts(
    machine, w: str, limits: SearchLimits = DEFAULT_LIMITS
) -> tuple[bool, AcceptingRun | None]:
    """Decide acceptance of `w`; on success also return one witness run.

    Breadth-first over the configuration graph with a visited set keyed on
    (state, input position, full stack).  Raises LimitExceeded if the cap is
    hit before the graph is exhausted and no accepting configuration was
    found.
    """
    cap = machine.stack_depth_cap(len(w))
    n = len(w)
    init = machine.initial_config()
    parents: dict = {init: None}
    queue = [init]
    head = 0
    while head < len(queue):
        config = queue[head]
        head += 1
        if machine.is_accepting(config, n):
            steps = []
            cur = config
            while parents[cur] is not None:
                prev, t = parents[cur]
                steps.append(RunStep(t, cur.input_pos, len(cur.stack)))
                cur = prev
            steps.reverse()
            return True, AcceptingRun(tuple(steps), config)
        for t, nxt in _successors(machine, config, w, cap):
            if nxt not in parents:
                if len(parents) >= limits.max_configs:
                    raise LimitExceeded(
                        f"visited {len(parents)} configurations on input of length {n}"
                    )
                parents[nxt] = (config, t)
                queue.append(nxt)
    return False, None


def enumerate_runs(
    machine, w: str, cap: int = 20, limits: SearchLimits = DEFAULT_LIMITS
) -> list[AcceptingRun]:
    """Up to `cap` accepting runs on `w`, lexicographic by transition order.

    Depth-first without cross-path pruning, so distinct runs through shared
    configurations are all reported.  Rejected words give an empty list.
    """
    n = len(w)
    depth_cap = machine.stack_depth_cap(n)
    runs: list[AcceptingRun] = []
    expansions = 0

    def visit(config: Configuration, steps: tuple) -> bool:
        nonlocal expansions
        if machine.is_accepting(config, n):
            runs.append(AcceptingRun(steps, config))
            if len(runs) >= cap:
                return True
        expansions += 1
        if expansions > limits.max_configs:
            raise LimitExceeded(f"expanded {expansions} configurations enumerating runs")
        for t, nxt in _successors(machine, config, w, depth_cap):
            child = steps + (RunStep(t, nxt.input_pos, len(nxt.stack)),)
            if visit(nxt, child):
                return True
        return False

    visit(machine.initial_config(), ())
    return runs


def _closure(machine, configs: Iterable[Configuration], depth_cap: int, budget: list) -> dict:
    """Epsilon-closure as an insertion-ordered dict (values unused)."""
    out: dict = {}
    stack = list(configs)
    for c in stack:
        out[c] = True
    while stack:
        config = stack.pop()
        for t in machine.transitions_from(config.state):
            if t.read is not None:
                continue
            new_stack = _apply(t.action, config.stack)
            if new_stack is None or len(new_stack) > depth_cap:
                continue
            nxt = Configuration(t.target, config.input_pos, new_stack)
            if nxt not in out:
                budget[0] += 1
                if budget[0] > budget[1]:
                    raise LimitExceeded("configuration budget exhausted during closure")
                out[nxt] = True
                stack.append(nxt)
    return out


def enumerate_language(
    machine, max_len: int, limits: SearchLimits = DEFAULT_LIMITS
) -> set[str]:
    """All accepted words of length <= max_len.

    Breadth-first over prefixes, carrying the live configuration set of each
    prefix; prefixes with no live configurations are pruned, so cost tracks
    the size of the reachable prefix tree rather than |alphabet|^max_len.
    Agrees with per-word `accepts` on every word it reports or omits.
    """
    depth_cap = machine.stack_depth_cap(max_len)
    budget = [0, limits.max_configs]
    alphabet = sorted(machine.input_alphabet)
    accepted: set[str] = set()
    frontier: list[tuple[str, dict]] = [("", _closure(machine, [machine.initial_config()], depth_cap, budget))]
    while frontier:
        next_frontier = []
        for word, configs in frontier:
            if any(machine.is_accepting(c, len(word)) for c in configs):
                accepted.add(word)
            if len(word) == max_len:
                continue
            for sym in alphabet:
                advanced = []
                for config in configs:
                    for t in machine.transitions_from(config.state):
                        if t.read != sym:
                            continue
                        new_stack = _apply(t.action, config.stack)
                        if new_stack is None or len(new_stack) > depth_cap:
                            continue
                        budget[0] += 1
                        if budget[0] > budget[1]:
                            raise LimitExceeded(
                                f"configuration budget exhausted at prefix {word + sym!r}"
                            )
                        advanced.append(Configuration(t.target, config.input_pos + 1, new_stack))
                if advanced:
                    closed = _closure(machine, dict.fromkeys(advanced), depth_cap, budget)
                    next_frontier.append((word + sym, closed))
        frontier = next_frontier
    return accepted


def pda_to_json(pda: Pda) -> dict:
    """Serialize to the pda-v1 interchange dict (deterministic field order)."""
    transitions = []
    for t in pda.transitions:
        action: dict = {"kind": t.action.kind}
        if t.action.symbol is not None:
            action["symbol"] = t.action.symbol
        transitions.append(
            {
                "from": t.source,
                "read": t.read,
                "action": action,
                "to": t.target,
                "auxiliary": t.auxiliary,
            }
        )
    return {
        "format": PDA_FORMAT,
        "states": sorted(pda.states),
        "input_alphabet": sorted(pda.input_alphabet),
        "stack_alphabet": sorted(pda.stack_alphabet),
        "transitions": transitions,
        "start": pda.start,
        "bottom": pda.bottom,
        "accept": sorted(pda.accept),
        "acceptance_mode": pda.acceptance_mode,
    }


def pda_from_json(data: dict) -> Pda:
    if data.get("format") != PDA_FORMAT:
        raise ValueError(f"expected format {PDA_FORMAT!r}, got {data.get('format')!r}")
    transitions = []
    for item in data["transitions"]:
        action = item["action"]
        transitions.append(
            Transition(
                source=item["from"],
                read=item["read"],
                action=StackAction(action["kind"], action.get("symbol")),
                target=item["to"],
                auxiliary=bool(item.get("auxiliary", False)),
            )
        )
    return Pda(
        states=frozenset(data["states"]),
        input_alphabet=frozenset(data["input_alphabet"]),
        stack_alphabet=frozenset(data["stack_alphabet"]),
        transitions=tuple(transitions),
        start=data["start"],
        bottom=data["bottom"],
        accept=frozenset(data["accept"]),
        acceptance_mode=data["acceptance_mode"],
    )
