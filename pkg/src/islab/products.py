"""Lazily expanded product machines over one shared, ownership-tagged stack.

Both constructions synchronize two normal-form machines on the input and
interleave their stack operations on one stack whose entries are
(owner, symbol) pairs.  They differ in how a machine reaches its own
symbols past the other machine's material:

* the displacement product may lift up to 2k foreign entries off the top
  into a small holding area, pop its target, and put them back unchanged,
  which suffices when crossings have bounded gap;
* the buffered product instead guesses at push time whether an arc is
  short or long; short pushes live in a bounded side buffer under a
  countdown of 2d positions and never touch the stack, which suffices
  when crossings have bounded inner distance however large the gap.

Each position is simulated as one reading step followed by epsilon
micro-steps that drain the queued stack operations (plus, for the
buffered product, one closing step that advances the countdowns), so the
standard engine in pda explores these machines unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pda import (
    Configuration,
    DEFAULT_LIMITS,
    FINAL_STATE_BOTTOM_ONLY,
    LimitExceeded,
    NONE,
    PDA_FORMAT,
    POP,
    PUSH,
    Pda,
    SearchLimits,
    StackAction,
    Transition,
)

DISPLACEMENT = "displacement"
BUFFERED = "buffered"

_BOTTOM = (0, "$")


def _describe_entry(entry) -> str:
    return f"{entry[0]}:{entry[1]}"


@dataclass(frozen=True)
class DisplacedState:
    """Composite control: both machine states, the queue of stack
    operations still owed for the current position, and the foreign
    entries currently lifted aside mid-pop."""

    q1: object
    q2: object
    queue: tuple = ()
    displaced: tuple = ()

    @property
    def is_sync(self) -> bool:
        return not self.queue and not self.displaced

    def describe(self) -> str:
        ops = " ".join(f"{k}:{o}:{s}" for k, o, s in self.queue)
        held = " ".join(_describe_entry(e) for e in self.displaced)
        return f"[{self.q1}|{self.q2}|ops {ops}|held {held}]"


@dataclass(frozen=True)
class BufferedState:
    """Composite control for the buffered product; closing marks the
    pending end-of-position countdown step."""

    q1: object
    q2: object
    queue: tuple = ()
    buffer: tuple = ()
    closing: bool = False

    @property
    def is_sync(self) -> bool:
        return not self.queue and not self.closing

    def describe(self) -> str:
        ops = " ".join(f"{k}:{o}:{s}" for k, o, s in self.queue)
        buf = " ".join(f"{o}:{s}@{t}" for o, s, t in self.buffer)
        phase = "closing" if self.closing else "open"
        return f"[{self.q1}|{self.q2}|ops {ops}|buf {buf}|{phase}]"


def _moves(machine: Pda, state, symbol: str):
    """All one-position moves of a machine: a reading transition, optionally
    extended by a chained auxiliary push."""
    out = []
    for t in machine.transitions_from(state):
        if t.read != symbol:
            continue
        base = () if t.action.kind == NONE else (t.action,)
        out.append((base, t.target))
        for aux in machine.transitions_from(t.target):
            if aux.read is None and aux.auxiliary:
                out.append((base + (aux.action,), aux.target))
    return out


def _tag(ops, owner: int) -> tuple:
    return tuple((op.kind, owner, op.symbol) for op in ops)


class _ProductBase:
    kind = "abstract"

    def __init__(self, first: Pda, second: Pda):
        self.first = first
        self.second = second
        self.input_alphabet = frozenset(first.input_alphabet) & frozenset(
            second.input_alphabet
        )
        self._symbols = {
            1: tuple(sorted(first.stack_alphabet - {first.bottom})),
            2: tuple(sorted(second.stack_alphabet - {second.bottom})),
        }

    def component(self, owner: int) -> Pda:
        return self.first if owner == 1 else self.second

    def initial_config(self) -> Configuration:
        return Configuration(self._initial_state(), 0, (_BOTTOM,))

    def stack_depth_cap(self, input_len: int) -> int:
        return 4 * input_len + 3

    def is_accepting(self, config: Configuration, input_len: int) -> bool:
        state = config.state
        if config.input_pos != input_len or not state.is_sync:
            return False
        if state.q1 not in self.first.accept or state.q2 not in self.second.accept:
            return False
        for owner in (1, 2):
            if self.component(owner).acceptance_mode == FINAL_STATE_BOTTOM_ONLY:
                if self._owner_residue(config, owner):
                    return False
        return True

    def _owner_residue(self, config: Configuration, owner: int) -> bool:
        return any(entry[0] == owner for entry in config.stack[1:])

    def _read_targets(self, state, symbol: str):
        """Composite successors of one reading step, covering both
        machines' move choices and both per-position operation orders."""
        out = []
        for ops1, t1 in _moves(self.first, state.q1, symbol):
            for ops2, t2 in _moves(self.second, state.q2, symbol):
                a, b = _tag(ops1, 1), _tag(ops2, 2)
                queues = [a + b]
                if b + a != a + b:
                    queues.append(b + a)
                for queue in queues:
                    out.append(self._after_read(state, t1, t2, queue))
        return out


class DisplacementProduct(_ProductBase):
    """Sound for any pair; complete whenever every crossing between the two
    matchings has gap at most k."""

    kind = DISPLACEMENT

    def __init__(self, first: Pda, second: Pda, k: int):
        if k < 0:
            raise ValueError("gap parameter must be nonnegative")
        super().__init__(first, second)
        self.k = k

    def _initial_state(self) -> DisplacedState:
        return DisplacedState(self.first.start, self.second.start)

    def _after_read(self, state, t1, t2, queue) -> DisplacedState:
        return DisplacedState(t1, t2, queue, ())

    def projection(self, state: DisplacedState):
        """Counting view: control pair plus the held foreign symbols."""
        return (state.q1, state.q2, tuple(e for e in state.displaced))

    def state_bound(self) -> int:
        return state_bound(
            self.kind,
            len(self.first.states),
            len(self.second.states),
            len(self._symbols[1]),
            len(self._symbols[2]),
            self.k,
        )

    def transitions_from(self, state: DisplacedState):
        out = []
        if state.queue:
            (op, owner, sym), rest = state.queue[0], state.queue[1:]
            if op == PUSH:
                nxt = DisplacedState(state.q1, state.q2, rest, state.displaced)
                out.append(
                    Transition(
                        state, None, StackAction.push((owner, sym)), nxt, auxiliary=True
                    )
                )
            else:
                restore = tuple(
                    (PUSH, o, s) for o, s in reversed(state.displaced)
                )
                done = DisplacedState(state.q1, state.q2, restore + rest, ())
                out.append(
                    Transition(
                        state, None, StackAction.pop((owner, sym)), done, auxiliary=True
                    )
                )
                if len(state.displaced) < 2 * self.k:
                    other = 2 if owner == 1 else 1
                    for foreign in self._symbols[other]:
                        lifted = DisplacedState(
                            state.q1,
                            state.q2,
                            state.queue,
                            state.displaced + ((other, foreign),),
                        )
                        out.append(
                            Transition(
                                state,
                                None,
                                StackAction.pop((other, foreign)),
                                lifted,
                                auxiliary=True,
                            )
                        )
        else:
            for symbol in sorted(self.input_alphabet):
                for nxt in self._read_targets(state, symbol):
                    out.append(Transition(state, symbol, StackAction.none(), nxt))
        return tuple(out)


class BufferedProduct(_ProductBase):
    """Sound for any pair; complete whenever every crossing between the two
    matchings has inner distance at most d, with no bound on the gap."""

    kind = BUFFERED

    def __init__(self, first: Pda, second: Pda, d: int):
        if d < 0:
            raise ValueError("inner parameter must be nonnegative")
        super().__init__(first, second)
        self.d = d

    def _initial_state(self) -> BufferedState:
        return BufferedState(self.first.start, self.second.start)

    def _after_read(self, state, t1, t2, queue) -> BufferedState:
        return BufferedState(t1, t2, queue, state.buffer, closing=True)

    def _owner_residue(self, config: Configuration, owner: int) -> bool:
        if super()._owner_residue(config, owner):
            return True
        return any(entry[0] == owner for entry in config.state.buffer)

    def projection(self, state: BufferedState):
        """Counting view: sync states only, as control pair plus buffer."""
        if not state.is_sync:
            return None
        return (state.q1, state.q2, state.buffer)

    def state_bound(self) -> int:
        return state_bound(
            self.kind,
            len(self.first.states),
            len(self.second.states),
            len(self._symbols[1]),
            len(self._symbols[2]),
            self.d,
        )

    def transitions_from(self, state: BufferedState):
        out = []
        if state.queue:
            (op, owner, sym), rest = state.queue[0], state.queue[1:]
            if op == PUSH:
                long_next = BufferedState(
                    state.q1, state.q2, rest, state.buffer, state.closing
                )
                out.append(
                    Transition(
                        state,
                        None,
                        StackAction.push((owner, sym)),
                        long_next,
                        auxiliary=True,
                    )
                )
                if len(state.buffer) < 8 * self.d:
                    short_next = BufferedState(
                        state.q1,
                        state.q2,
                        rest,
                        state.buffer + ((owner, sym, 2 * self.d),),
                        state.closing,
                    )
                    out.append(
                        Transition(
                            state, None, StackAction.none(), short_next, auxiliary=True
                        )
                    )
            else:
                idx = self._newest_match(state.buffer, owner, sym)
                if idx is not None:
                    taken = BufferedState(
                        state.q1,
                        state.q2,
                        rest,
                        state.buffer[:idx] + state.buffer[idx + 1 :],
                        state.closing,
                    )
                    out.append(
                        Transition(
                            state, None, StackAction.none(), taken, auxiliary=True
                        )
                    )
                else:
                    popped = BufferedState(
                        state.q1, state.q2, rest, state.buffer, state.closing
                    )
                    out.append(
                        Transition(
                            state,
                            None,
                            StackAction.pop((owner, sym)),
                            popped,
                            auxiliary=True,
                        )
                    )
        elif state.closing:
            if all(t > 0 for _, _, t in state.buffer):
                aged = tuple((o, s, t - 1) for o, s, t in state.buffer)
                done = BufferedState(state.q1, state.q2, (), aged, False)
                out.append(
                    Transition(state, None, StackAction.none(), done, auxiliary=True)
                )
        else:
            for symbol in sorted(self.input_alphabet):
                for nxt in self._read_targets(state, symbol):
                    out.append(Transition(state, symbol, StackAction.none(), nxt))
        return tuple(out)

    @staticmethod
    def _newest_match(buffer: tuple, owner: int, sym: str):
        for idx in range(len(buffer) - 1, -1, -1):
            if buffer[idx][0] == owner and buffer[idx][1] == sym:
                return idx
        return None


def state_bound(kind: str, q1: int, q2: int, g1: int, g2: int, parameter: int) -> int:
    """Closed-form composite-state count the constructions stay within.

    Displacement with gap bound k: q1*q2*(g1+g2+1)^(2k), one factor per
    holding slot.  Buffered with inner bound d: q1*q2*(1+(g1+g2)*2d)^(8d),
    one factor per buffer slot, each empty or a symbol with a countdown.
    """
    for name, value in (("q1", q1), ("q2", q2)):
        if value < 1:
            raise ValueError(f"{name} must be at least 1")
    for name, value in (("g1", g1), ("g2", g2), ("parameter", parameter)):
        if value < 0:
            raise ValueError(f"{name} must be nonnegative")
    if kind == DISPLACEMENT:
        base, exponent = g1 + g2 + 1, 2 * parameter
    elif kind == BUFFERED:
        base, exponent = 1 + (g1 + g2) * 2 * parameter, 8 * parameter
    else:
        raise ValueError(f"unknown product kind {kind!r}")
    if exponent > 10_000:
        raise ValueError("parameter too large for an exact bound")
    return q1 * q2 * base**exponent


def reachable_composite_states(
    product, max_len: int, limits: SearchLimits = DEFAULT_LIMITS
) -> set:
    """Distinct counting-view projections reachable on any input of length
    at most max_len."""
    cap = product.stack_depth_cap(max_len)
    init = product.initial_config()
    best: dict = {(init.state, init.stack): 0}
    seen_projections: set = set()
    frontier = [init]
    expanded = 0
    while frontier:
        config = frontier.pop()
        expanded += 1
        if expanded > limits.max_configs:
            raise LimitExceeded("composite exploration budget exhausted")
        proj = product.projection(config.state)
        if proj is not None:
            seen_projections.add(proj)
        for t in product.transitions_from(config.state):
            if t.read is not None and config.input_pos >= max_len:
                continue
            stack = _apply_action(t.action, config.stack, cap)
            if stack is None:
                continue
            consumed = config.input_pos + (0 if t.read is None else 1)
            key = (t.target, stack)
            if key in best and best[key] <= consumed:
                continue
            best[key] = consumed
            frontier.append(Configuration(t.target, consumed, stack))
    return seen_projections


def _apply_action(action: StackAction, stack: tuple, cap: int):
    if action.kind == NONE:
        return stack
    if action.kind == PUSH:
        if len(stack) + 1 > cap:
            return None
        return stack + (action.symbol,)
    if len(stack) <= 1 or stack[-1] != action.symbol:
        return None
    return stack[:-1]


@dataclass(frozen=True)
class ArcRecord:
    owner: int
    symbol: str
    push_pos: int
    pop_pos: int
    mode: str  # "long" or "short"


def max_displacement(run) -> int:
    """Largest number of foreign entries held aside by any single pop."""
    high = 0
    for step_ in run.steps:
        target = step_.transition.target
        if isinstance(target, DisplacedState):
            high = max(high, len(target.displaced))
    return high


def buffer_high_water(run) -> int:
    high = 0
    for step_ in run.steps:
        target = step_.transition.target
        if isinstance(target, BufferedState):
            high = max(high, len(target.buffer))
    return high


def buffered_arcs(run) -> list[ArcRecord]:
    """Reconstruct each machine's arcs from a buffered-product run,
    labelled short or long by how the push was realized."""
    arcs: list[ArcRecord] = []
    shadow: list[tuple] = []  # open long pushes as (owner, symbol, pos)
    open_shorts: list[tuple] = []  # mirrors buffer order as (owner, symbol, pos)
    for step_ in run.steps:
        t = step_.transition
        source, target = t.source, t.target
        if not isinstance(target, BufferedState):
            continue
        pos = step_.input_pos
        if t.action.kind == PUSH:
            owner, sym = t.action.symbol
            shadow.append((owner, sym, pos))
        elif t.action.kind == POP:
            owner, sym = t.action.symbol
            o, s, opened = shadow.pop()
            arcs.append(ArcRecord(o, s, opened, pos, "long"))
        elif isinstance(source, BufferedState):
            if len(target.buffer) == len(source.buffer) + 1:
                owner, sym, _ = target.buffer[-1]
                open_shorts.append((owner, sym, pos))
            elif len(target.buffer) == len(source.buffer) - 1 and source.queue:
                _, owner, sym = source.queue[0]
                idx = BufferedProduct._newest_match(source.buffer, owner, sym)
                o, s, opened = open_shorts.pop(idx)
                arcs.append(ArcRecord(o, s, opened, pos, "short"))
    return sorted(arcs, key=lambda a: (a.owner, a.push_pos, a.pop_pos))


def fragment_to_json(
    product, max_len: int, limits: SearchLimits = DEFAULT_LIMITS
) -> dict:
    """Exhaustively expanded fragment of the product, as an interchange
    machine with opaque state labels plus a side table describing each
    composite state."""
    cap = product.stack_depth_cap(max_len)
    init = product.initial_config()
    labels: dict = {}
    order: list = []

    def label_of(state) -> str:
        if state not in labels:
            labels[state] = f"c{len(labels)}"
            order.append(state)
        return labels[state]

    label_of(init.state)
    edges = set()
    stack_symbols = {_BOTTOM}
    best = {(init.state, init.stack): 0}
    frontier = [init]
    expanded = 0
    while frontier:
        config = frontier.pop()
        expanded += 1
        if expanded > limits.max_configs:
            raise LimitExceeded("fragment exploration budget exhausted")
        for t in product.transitions_from(config.state):
            if t.read is not None and config.input_pos >= max_len:
                continue
            stack = _apply_action(t.action, config.stack, cap)
            if stack is None:
                continue
            if t.action.symbol is not None:
                stack_symbols.add(t.action.symbol)
            edges.add((config.state, t.read, t.action, t.target, t.auxiliary))
            consumed = config.input_pos + (0 if t.read is None else 1)
            key = (t.target, stack)
            if key not in best or best[key] > consumed:
                best[key] = consumed
                frontier.append(Configuration(t.target, consumed, stack))
    for state, _, _, target, _ in sorted(
        edges, key=lambda e: (str(e[0]), str(e[1]), str(e[3]))
    ):
        label_of(state)
        label_of(target)
    accept = [
        labels[s]
        for s in order
        if s.is_sync
        and s.q1 in product.first.accept
        and s.q2 in product.second.accept
    ]
    both_bottom_only = all(
        product.component(owner).acceptance_mode == FINAL_STATE_BOTTOM_ONLY
        for owner in (1, 2)
    )
    transitions = []
    for source, read, action, target, auxiliary in sorted(
        edges, key=lambda e: (labels[e[0]], str(e[1]), str(e[2]), labels[e[3]])
    ):
        entry = {
            "from": labels[source],
            "read": read,
            "action": {"kind": action.kind},
            "to": labels[target],
            "auxiliary": auxiliary,
        }
        if action.symbol is not None:
            entry["action"]["symbol"] = _describe_entry(action.symbol)
        transitions.append(entry)
    return {
        "format": PDA_FORMAT,
        "states": [labels[s] for s in order],
        "input_alphabet": sorted(product.input_alphabet),
        "stack_alphabet": sorted(_describe_entry(e) for e in stack_symbols),
        "transitions": transitions,
        "start": labels[init.state],
        "bottom": _describe_entry(_BOTTOM),
        "accept": sorted(accept),
        "acceptance_mode": FINAL_STATE_BOTTOM_ONLY
        if both_bottom_only
        else "FinalState",
        "composite_state_labels": {labels[s]: s.describe() for s in order},
        "product": {
            "kind": product.kind,
            "parameter": product.k
            if product.kind == DISPLACEMENT
            else product.d,
            "explored_input_length": max_len,
        },
    }
