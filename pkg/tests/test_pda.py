import itertools
import json
import re

import pytest

from islab import corpus
from islab.pda import (
    FINAL_STATE,
    FINAL_STATE_BOTTOM_ONLY,
    POP,
    PUSH,
    AcceptingRun,
    Configuration,
    LimitExceeded,
    Pda,
    SearchLimits,
    StackAction,
    Transition,
    accepts,
    enumerate_language,
    enumerate_runs,
    pda_from_json,
    pda_to_json,
    step,
    validate_normal_form,
)


def counter() -> Pda:
    return corpus.get("counter").machine("counter")


def doubler() -> Pda:
    return corpus.get("double-push").machine("doubler")


def odd_track() -> Pda:
    return corpus.get("interleaved-palindrome").machine("odd-track")


def even_track() -> Pda:
    return corpus.get("interleaved-palindrome").machine("even-track")


def ambiguous_two_path() -> Pda:
    """Accepts "ab" along two distinct runs (stack path and no-op path)."""
    return Pda(
        states={"p", "q1", "q2", "r"},
        input_alphabet={"a", "b"},
        stack_alphabet={"$", "A"},
        transitions=[
            Transition("p", "a", StackAction.push("A"), "q1"),
            Transition("p", "a", StackAction.none(), "q2"),
            Transition("q1", "b", StackAction.pop("A"), "r"),
            Transition("q2", "b", StackAction.none(), "r"),
        ],
        start="p",
        bottom="$",
        accept={"r"},
        acceptance_mode=FINAL_STATE_BOTTOM_ONLY,
    )


class TestConstruction:
    def test_undeclared_state_rejected(self):
        with pytest.raises(ValueError, match="undeclared state"):
            Pda(
                states={"p"},
                input_alphabet={"a"},
                stack_alphabet={"$"},
                transitions=[Transition("p", "a", StackAction.none(), "ghost")],
                start="p",
                bottom="$",
                accept={"p"},
            )

    def test_multichar_input_symbol_rejected(self):
        with pytest.raises(ValueError, match="single characters"):
            Pda(
                states={"p"},
                input_alphabet={"ab"},
                stack_alphabet={"$"},
                transitions=[],
                start="p",
                bottom="$",
                accept={"p"},
            )

    def test_bottom_must_be_declared(self):
        with pytest.raises(ValueError, match="bottom"):
            Pda(
                states={"p"},
                input_alphabet={"a"},
                stack_alphabet={"Z"},
                transitions=[],
                start="p",
                bottom="$",
                accept={"p"},
            )

    def test_transitions_canonically_sorted(self):
        """push ranks before pop before none from the same source/read."""
        machine = Pda(
            states={"p", "q"},
            input_alphabet={"a"},
            stack_alphabet={"$", "A"},
            transitions=[
                Transition("p", "a", StackAction.none(), "q"),
                Transition("p", "a", StackAction.pop("A"), "q"),
                Transition("p", "a", StackAction.push("A"), "q"),
            ],
            start="p",
            bottom="$",
            accept={"q"},
        )
        kinds = [t.action.kind for t in machine.transitions]
        assert kinds == [PUSH, POP, "none"]


class TestNormalForm:
    def test_corpus_machines_are_normal_form(self):
        for bundle_name, machine_name, machine in corpus.machine_items():
            assert validate_normal_form(machine) == [], (bundle_name, machine_name)

    def test_non_auxiliary_epsilon_flagged(self):
        machine = Pda(
            states={"p", "q"},
            input_alphabet={"a"},
            stack_alphabet={"$"},
            transitions=[Transition("p", None, StackAction.none(), "q")],
            start="p",
            bottom="$",
            accept={"q"},
        )
        diags = validate_normal_form(machine)
        assert len(diags) == 1
        assert "reads no input symbol" in diags[0]

    def test_auxiliary_must_push(self):
        machine = Pda(
            states={"p", "q", "r"},
            input_alphabet={"a"},
            stack_alphabet={"$", "A"},
            transitions=[
                Transition("p", "a", StackAction.push("A"), "q"),
                Transition("q", None, StackAction.pop("A"), "r", auxiliary=True),
            ],
            start="p",
            bottom="$",
            accept={"r"},
        )
        assert any("must push" in d for d in validate_normal_form(machine))

    def test_auxiliary_chained_after_non_push_flagged(self):
        machine = Pda(
            states={"p", "q", "r"},
            input_alphabet={"a"},
            stack_alphabet={"$", "A"},
            transitions=[
                Transition("p", "a", StackAction.none(), "q"),
                Transition("q", None, StackAction.push("A"), "r", auxiliary=True),
            ],
            start="p",
            bottom="$",
            accept={"r"},
        )
        assert any("chained after non-pushing" in d for d in validate_normal_form(machine))

    def test_auxiliary_reading_input_flagged(self):
        machine = Pda(
            states={"p", "q", "r"},
            input_alphabet={"a"},
            stack_alphabet={"$", "A"},
            transitions=[
                Transition("p", "a", StackAction.push("A"), "q"),
                Transition("q", "a", StackAction.push("A"), "r", auxiliary=True),
            ],
            start="p",
            bottom="$",
            accept={"r"},
        )
        assert any("must not read" in d for d in validate_normal_form(machine))


class TestStep:
    def test_stuck_accepting_config_has_no_successors(self):
        machine = counter()
        config = Configuration("q", 4, ("$",))
        assert step(machine, config, "aabb") == ()

    def test_start_successors_on_counter(self):
        machine = counter()
        succ = step(machine, machine.initial_config(), "ab")
        assert succ == (Configuration("p", 1, ("$", "A")),)

    def test_pop_with_mismatched_top_excluded(self):
        machine = counter()
        config = Configuration("p", 0, ("$",))
        succ = step(machine, config, "b")
        assert succ == ()


class TestAccepts:
    def test_palindrome_pair_accepts_00(self):
        for machine in (odd_track(), even_track()):
            ok, run = accepts(machine, "00")
            assert ok and isinstance(run, AcceptingRun)

    def test_empty_word_accepted(self):
        for machine in (odd_track(), even_track(), counter(), doubler()):
            ok, run = accepts(machine, "")
            assert ok
            assert run.steps == ()

    def test_refutation_short_arc_examples(self):
        machine = corpus.get("gap-refutation").machine("short-arc")
        assert accepts(machine, "abafgh")[0]
        assert not accepts(machine, "abafg")[0]

    def test_run_replays_to_acceptance(self):
        machine = doubler()
        ok, run = accepts(machine, "aabbbb")
        assert ok
        stack = ["$"]
        for s in run.steps:
            action = s.transition.action
            if action.kind == PUSH:
                stack.append(action.symbol)
            elif action.kind == POP:
                assert stack[-1] == action.symbol
                stack.pop()
            assert s.stack_depth_after == len(stack)
        assert stack == ["$"]

    def test_limit_exceeded_raised(self):
        machine = odd_track()
        with pytest.raises(LimitExceeded):
            accepts(machine, "0" * 8, SearchLimits(max_configs=5))

    def test_boolean_result_stable(self):
        machine = even_track()
        results = {accepts(machine, "0110")[0] for _ in range(3)}
        assert len(results) == 1


class TestEnumerateRuns:
    def test_deterministic_machine_single_run(self):
        runs = enumerate_runs(counter(), "aabb")
        assert len(runs) == 1

    def test_rejected_word_gives_no_runs(self):
        assert enumerate_runs(counter(), "aab") == []

    def test_two_path_machine_has_two_runs_push_first(self):
        runs = enumerate_runs(ambiguous_two_path(), "ab")
        assert len(runs) == 2
        assert runs[0].steps[0].transition.action.kind == PUSH
        assert runs[1].steps[0].transition.action.kind == "none"

    def test_odd_track_0000_hand_count(self):
        # only push@1, skip@2, pop@3, skip@4 survives bottom-only acceptance
        runs = enumerate_runs(odd_track(), "0000")
        assert len(runs) == 1
        kinds = [s.transition.action.kind for s in runs[0].steps]
        assert kinds == [PUSH, "none", POP, "none"]

    def test_cap_respected(self):
        machine = ambiguous_two_path()
        assert len(enumerate_runs(machine, "ab", cap=1)) == 1

    def test_runs_deterministic_across_calls(self):
        machine = odd_track()
        first = enumerate_runs(machine, "000000")
        second = enumerate_runs(machine, "000000")
        assert [
            [s.transition.describe() for s in r.steps] for r in first
        ] == [[s.transition.describe() for s in r.steps] for r in second]


def brute_force_language(machine: Pda, max_len: int) -> set:
    alphabet = sorted(machine.input_alphabet)
    out = set()
    for length in range(max_len + 1):
        for combo in itertools.product(alphabet, repeat=length):
            word = "".join(combo)
            if accepts(machine, word)[0]:
                out.add(word)
    return out


class TestEnumerateLanguage:
    def test_counter_language(self):
        assert enumerate_language(counter(), 6) == {"", "ab", "aabb", "aaabbb"}

    def test_doubler_language(self):
        assert enumerate_language(doubler(), 9) == {"", "abb", "aabbbb", "aaabbbbbb"}

    def test_max_len_zero(self):
        assert enumerate_language(counter(), 0) == {""}

    def test_agrees_with_per_word_accepts(self):
        machine = corpus.get("gap-refutation").machine("short-arc")
        assert enumerate_language(machine, 5) == brute_force_language(machine, 5)

    def test_short_arc_language_matches_shape(self):
        machine = corpus.get("gap-refutation").machine("short-arc")
        pattern = re.compile(r"aba[de]*f(g*)(h*)")
        for word in enumerate_language(machine, 8):
            m = pattern.fullmatch(word)
            assert m and len(m.group(1)) == len(m.group(2)), word

    def test_long_arc_language_matches_shape(self):
        machine = corpus.get("gap-refutation").machine("long-arc")
        pattern = re.compile(r"aba(d*)(e*)f[gh]*")
        for word in enumerate_language(machine, 8):
            m = pattern.fullmatch(word)
            assert m and len(m.group(1)) == len(m.group(2)), word


class TestRunInvariants:
    def sample_runs(self):
        for _, _, machine in corpus.machine_items():
            for word in sorted(enumerate_language(machine, 6)):
                for run in enumerate_runs(machine, word, cap=10):
                    yield machine, word, run

    def test_push_pop_balance_and_depth(self):
        checked = 0
        for machine, word, run in self.sample_runs():
            pushed: list = []
            per_pos_push: dict = {}
            per_pos_pop: dict = {}
            for s in run.steps:
                action = s.transition.action
                assert s.stack_depth_after <= 2 * len(word) + 1
                if action.kind == PUSH:
                    pushed.append(action.symbol)
                    per_pos_push[s.input_pos] = per_pos_push.get(s.input_pos, 0) + 1
                elif action.kind == POP:
                    assert pushed.pop() == action.symbol
                    per_pos_pop[s.input_pos] = per_pos_pop.get(s.input_pos, 0) + 1
            assert tuple(["$"] + pushed) == run.final.stack
            assert all(v <= 2 for v in per_pos_push.values())
            assert all(v <= 1 for v in per_pos_pop.values())
            checked += 1
        assert checked > 50


class TestJson:
    def test_round_trip_all_corpus_machines(self):
        for _, _, machine in corpus.machine_items():
            assert pda_from_json(pda_to_json(machine)) == machine

    def test_format_field_required(self):
        data = pda_to_json(counter())
        data["format"] = "pda-v2"
        with pytest.raises(ValueError, match="format"):
            pda_from_json(data)

    def test_document_is_plain_json(self):
        text = json.dumps(pda_to_json(doubler()), sort_keys=True)
        assert json.loads(text)["format"] == "pda-v1"

    def test_final_state_mode_round_trip(self):
        machine = Pda(
            states={"p"},
            input_alphabet={"a"},
            stack_alphabet={"$"},
            transitions=[Transition("p", "a", StackAction.none(), "p")],
            start="p",
            bottom="$",
            accept={"p"},
            acceptance_mode=FINAL_STATE,
        )
        again = pda_from_json(pda_to_json(machine))
        assert again.acceptance_mode == FINAL_STATE
        assert accepts(again, "aaa")[0]
