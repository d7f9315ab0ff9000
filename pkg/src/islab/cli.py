"""Command line front end.

Subcommands map one to one onto library operations: simulate and runs
drive the machine engine, crossings and classify the arc geometry,
characterize and construct the block characterization and the product
builders, verify runs differential oracle checks, linkage runs the
pumping checker, corpus browses the built-in examples, and report renders
a classification table for a family across sizes.

Exit codes: 0 for any computed answer, 1 when simulate rejects or verify
finds mismatches, 2 for bad flags, bad files, or exceeded limits.  The
environment variable ISL_ORACLE_MAX_LEN caps every enumeration bound;
requests above the cap are rejected, never clamped.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import corpus
from .arcs import (
    InconclusiveRegime,
    SegmentDecomposition,
    analyze_pair,
    classify_family,
)
from .blocks import (
    CROSSING,
    JointSpec,
    build_joint_pda,
    characterize,
    joint_from_json,
    joint_to_json,
    segments_and_linkages,
    witness_string,
)
from .diagrams import render_pair_analysis
from .grammar import cfg_from_json, cfg_to_json, cyk_membership, gnf_to_pda, to_cnf, to_gnf
from .pda import (
    LimitExceeded,
    SearchLimits,
    accepts,
    enumerate_language,
    enumerate_runs,
    pda_from_json,
    pda_to_json,
)
from .products import (
    BufferedProduct,
    DisplacementProduct,
    fragment_to_json,
    state_bound,
)
from .pumping import (
    FOUR_LARGE,
    INNER_GROWING,
    INNER_PAIR,
    OUTER_PAIR,
    check_crossing_hypotheses,
    check_linkage,
)

ORACLE_ENV = "ISL_ORACLE_MAX_LEN"


class CliError(Exception):
    """Diagnosed failure; message goes to stderr, exit code is 2."""


def _emit(payload: dict, args, text_lines) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _checked_max_len(value: int) -> int:
    cap_raw = os.environ.get(ORACLE_ENV)
    if cap_raw is not None:
        try:
            cap = int(cap_raw)
        except ValueError:
            raise CliError(f"{ORACLE_ENV} must be an integer, got {cap_raw!r}")
        if value > cap:
            raise CliError(
                f"--max-len {value} exceeds the {ORACLE_ENV} cap of {cap}"
            )
    if value < 0:
        raise CliError("--max-len must be nonnegative")
    return value


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc}")


def _load_machine(args):
    if getattr(args, "pda", None):
        return pda_from_json(_read_json(args.pda))
    if getattr(args, "corpus", None):
        bundle = _bundle(args.corpus)
        if args.machine:
            return bundle.machine(args.machine)
        if len(bundle.machines) == 1:
            return next(iter(bundle.machines.values()))
        raise CliError(
            f"bundle {bundle.name!r} has machines {sorted(bundle.machines)}; "
            "pick one with --machine"
        )
    raise CliError("select a machine with --pda FILE or --corpus NAME")


def _bundle(name: str):
    try:
        return corpus.get(name)
    except KeyError as exc:
        raise CliError(str(exc.args[0]))


def _load_pair(args):
    if not getattr(args, "pair", None):
        raise CliError("select a machine pair with --pair NAME (corpus bundle)")
    if "," in args.pair:
        first_path, second_path = args.pair.split(",", 1)
        return (
            pda_from_json(_read_json(first_path)),
            pda_from_json(_read_json(second_path)),
            None,
        )
    bundle = _bundle(args.pair)
    try:
        first, second = bundle.pair()
    except ValueError as exc:
        raise CliError(str(exc))
    return first, second, bundle


def _load_blocks(value: str) -> JointSpec:
    if value.endswith(".json") or os.path.exists(value):
        return joint_from_json(_read_json(value))
    bundle = _bundle(value)
    if bundle.joint is None:
        raise CliError(f"bundle {bundle.name!r} carries no block specification")
    return bundle.joint


def _load_grammar(value: str):
    if value.endswith(".json") or os.path.exists(value):
        return cfg_from_json(_read_json(value))
    bundle = _bundle(value)
    if bundle.grammar is None:
        raise CliError(f"bundle {bundle.name!r} carries no grammar")
    return bundle.grammar


def _family_word(args, bundle) -> str:
    if args.word is not None:
        return args.word
    if args.n is None:
        raise CliError("provide --word or --n")
    if bundle is None or bundle.family is None:
        raise CliError("--n needs a corpus bundle with a word family")
    return bundle.family(args.n)


def _limits(args) -> SearchLimits:
    cap = getattr(args, "max_expand", None)
    return SearchLimits(max_configs=cap) if cap else SearchLimits()


def _parse_sizes(raw: str) -> list:
    try:
        sizes = [int(part) for part in raw.split(",") if part.strip() != ""]
    except ValueError:
        raise CliError(f"--sizes must be comma-separated integers, got {raw!r}")
    if len(sizes) < 2:
        raise CliError("--sizes needs at least two values")
    return sizes


def _write_svg(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}")
    print(f"wrote SVG: {path}", file=sys.stderr)


def _run_payload(run) -> list:
    return [
        {
            "step": idx,
            "transition": step.transition.describe(),
            "input_pos": step.input_pos,
            "stack_depth": step.stack_depth_after,
        }
        for idx, step in enumerate(run.steps, start=1)
    ]


def _cmd_simulate(args) -> int:
    machine = _load_machine(args)
    word = args.word if args.word is not None else ""
    ok, run = accepts(machine, word, _limits(args))
    payload = {
        "command": "simulate",
        "word": word,
        "accepted": ok,
        "run": _run_payload(run) if run else None,
    }
    lines = [f"word {word!r}: {'accepted' if ok else 'rejected'}"]
    if run:
        for entry in payload["run"]:
            lines.append(f"  {entry['step']:>3}. {entry['transition']}")
    _emit(payload, args, lines)
    return 0 if ok else 1


def _cmd_runs(args) -> int:
    machine = _load_machine(args)
    word = args.word if args.word is not None else ""
    runs = enumerate_runs(machine, word, cap=args.runs_cap, limits=_limits(args))
    payload = {
        "command": "runs",
        "word": word,
        "count": len(runs),
        "cap": args.runs_cap,
        "runs": [_run_payload(r) for r in runs],
    }
    lines = [f"{len(runs)} accepting run(s) for {word!r} (cap {args.runs_cap})"]
    for idx, run in enumerate(runs, start=1):
        steps = "; ".join(s.transition.describe() for s in run.steps)
        lines.append(f"  run {idx}: {steps if steps else '(no steps)'}")
    _emit(payload, args, lines)
    return 0


def _crossing_rows(analysis) -> list:
    rows = []
    for crossing in analysis.crossings:
        pair = crossing.pair
        rows.append(
            {
                "i": pair.i,
                "i_prime": pair.i_prime,
                "j": pair.j,
                "j_prime": pair.j_prime,
                "gap": crossing.measures.gap,
                "inner": crossing.measures.inner,
                "segment_lengths": list(crossing.decomposition.lengths()),
            }
        )
    return rows


def _cmd_crossings(args) -> int:
    first, second, bundle = _load_pair(args)
    word = _family_word(args, bundle)
    analyses = analyze_pair(
        first, second, word, all_runs=args.all_runs, runs_cap=args.runs_cap
    )
    rejected = []
    if not analyses:
        for tag, machine in ((1, first), (2, second)):
            ok, _ = accepts(machine, word)
            if not ok:
                rejected.append(tag)
    payload = {
        "command": "crossings",
        "word": word,
        "rejected_by": rejected,
        "analyses": [
            {
                "run_1": a.run_index_1,
                "run_2": a.run_index_2,
                "crossings": _crossing_rows(a),
            }
            for a in analyses
        ],
    }
    lines = [f"word {word!r}"]
    if rejected:
        lines.append(f"no analysis: rejected by machine(s) {rejected}")
    for a in analyses:
        lines.append(f"runs ({a.run_index_1}, {a.run_index_2}):")
        if not a.crossings:
            lines.append("  no crossing pairs")
        for row in _crossing_rows(a):
            lines.append(
                f"  arcs ({row['i']},{row['j']}) x ({row['i_prime']},{row['j_prime']})"
                f": gap={row['gap']} inner={row['inner']}"
                f" segments={tuple(row['segment_lengths'])}"
            )
    _emit(payload, args, lines)
    if args.svg:
        if not analyses:
            raise CliError("no analysis to draw; both machines must accept the word")
        _write_svg(args.svg, render_pair_analysis(analyses[0], title=f"word {word}"))
    return 0


def _pair_samples(first, second, bundle, sizes):
    samples = []
    for n in sizes:
        word = bundle.family(n)
        analyses = analyze_pair(first, second, word)
        measures = [c.measures for c in analyses[0].crossings] if analyses else []
        samples.append((word, measures))
    return samples


def _evidence_payload(evidence) -> list:
    return [
        {
            "word_len": row.word_len,
            "crossing_pairs": row.pair_count,
            "max_gap": row.max_gap,
            "max_inner": row.max_inner,
        }
        for row in evidence
    ]


def _evidence_lines(evidence) -> list:
    lines = ["  |w|  pairs  max-gap  max-inner"]
    for row in evidence:
        gap = "-" if row.max_gap is None else row.max_gap
        inner = "-" if row.max_inner is None else row.max_inner
        lines.append(
            f"  {row.word_len:>3}  {row.pair_count:>5}  {gap!s:>7}  {inner!s:>9}"
        )
    return lines


def _cmd_classify(args) -> int:
    first, second, bundle = _load_pair(args)
    if bundle is None or bundle.family is None:
        raise CliError("classify needs a corpus bundle with a word family")
    sizes = _parse_sizes(args.sizes)
    samples = _pair_samples(first, second, bundle, sizes)
    try:
        report = classify_family(samples)
    except InconclusiveRegime as exc:
        payload = {
            "command": "classify",
            "bundle": bundle.name,
            "sizes": sizes,
            "regime": "inconclusive",
            "detail": str(exc),
            "evidence": _evidence_payload(exc.evidence),
        }
        _emit(
            payload,
            args,
            [f"inconclusive: {exc}"] + _evidence_lines(exc.evidence),
        )
        return 0
    payload = {
        "command": "classify",
        "bundle": bundle.name,
        "sizes": sizes,
        "regime": report.regime,
        "evidence": _evidence_payload(report.evidence),
    }
    _emit(payload, args, [f"regime: {report.regime}"] + _evidence_lines(report.evidence))
    return 0


def _verdict_text(verdict) -> str:
    if verdict.is_cfl:
        return "CFL (jointly well nested)"
    violation = verdict.violation
    if violation.kind == CROSSING:
        return f"NotCFL (crossing arcs {violation.first}x{violation.second})"
    return f"NotCFL (shared endpoint between {violation.first} and {violation.second})"


def _cmd_characterize(args) -> int:
    spec = _load_blocks(args.blocks)
    verdict = characterize(spec)
    payload = {
        "command": "characterize",
        "spec": joint_to_json(spec),
        "outcome": verdict.outcome,
        "reason": verdict.reason,
        "violation": None
        if verdict.violation is None
        else {
            "kind": verdict.violation.kind,
            "first": list(verdict.violation.first),
            "second": list(verdict.violation.second),
        },
    }
    lines = [_verdict_text(verdict), f"  {verdict.reason}"]
    if verdict.violation is not None:
        sample = witness_string(spec, verdict.violation, 3)
        payload["witness_n3"] = sample
        lines.append(f"  witness family member (n=3): {sample!r}")
    _emit(payload, args, lines)
    return 0


def _product_from_args(args, first, second):
    if args.construct == "displacement":
        if args.k is None:
            raise CliError("displacement products need --k")
        return DisplacementProduct(first, second, args.k)
    if args.d is None:
        raise CliError("buffered products need --d")
    return BufferedProduct(first, second, args.d)


def _cmd_construct(args) -> int:
    if args.construct == "joint":
        if not args.blocks:
            raise CliError("construct joint needs --blocks")
        spec = _load_blocks(args.blocks)
        verdict = characterize(spec)
        if not verdict.is_cfl:
            raise CliError(f"cannot build a joint machine: {_verdict_text(verdict)}")
        document = pda_to_json(build_joint_pda(spec))
    elif args.construct == "grammar":
        if not args.grammar:
            raise CliError("construct grammar needs --grammar")
        grammar = _load_grammar(args.grammar)
        document = pda_to_json(gnf_to_pda(to_gnf(to_cnf(grammar))))
    else:
        first, second, _ = _load_pair(args)
        product = _product_from_args(args, first, second)
        max_len = _checked_max_len(args.max_len)
        document = fragment_to_json(product, max_len, _limits(args))
    text = json.dumps(document, indent=2, sort_keys=True)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            raise CliError(f"cannot write {args.out}: {exc}")
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        print(text)
    return 0


def _block_candidates(spec: JointSpec, max_len: int):
    """Every word of block shape up to max_len; the support of block
    membership, so comparing against it is a complete differential."""
    def expand(prefix: str, block: int, remaining: int):
        if block > spec.k:
            yield prefix
            return
        alphabet = sorted(spec.alphabets[block - 1])
        def block_words(length: int):
            if length == 0:
                yield ""
                return
            for shorter in block_words(length - 1):
                for ch in alphabet:
                    yield shorter + ch
        for length in range(remaining + 1):
            for body in block_words(length):
                yield from expand(prefix + body, block + 1, remaining - length)
    yield from expand("", 1, max_len)


def _verify_joint(args) -> tuple:
    if not args.blocks:
        raise CliError("verify --construct joint needs --blocks")
    spec = _load_blocks(args.blocks)
    verdict = characterize(spec)
    if not verdict.is_cfl:
        raise CliError(f"cannot verify a joint machine: {_verdict_text(verdict)}")
    max_len = _checked_max_len(args.max_len)
    machine_language = enumerate_language(build_joint_pda(spec), max_len, _limits(args))
    oracle_language = {
        w for w in _block_candidates(spec, max_len) if spec.in_intersection(w)
    }
    return machine_language, oracle_language, f"joint machine vs block membership <= {max_len}"


def _verify_product(args) -> tuple:
    first, second, _ = _load_pair(args)
    product = _product_from_args(args, first, second)
    max_len = _checked_max_len(args.max_len)
    limits = _limits(args)
    lhs = enumerate_language(product, max_len, limits)
    rhs = enumerate_language(first, max_len, limits) & enumerate_language(
        second, max_len, limits
    )
    return lhs, rhs, f"{args.construct} product vs component intersection <= {max_len}"


def _verify_grammar(args) -> tuple:
    if not args.grammar:
        raise CliError("verify --construct grammar needs --grammar")
    grammar = _load_grammar(args.grammar)
    cnf = to_cnf(grammar)
    machine = gnf_to_pda(to_gnf(cnf))
    max_len = _checked_max_len(args.max_len)
    lhs = enumerate_language(machine, max_len, _limits(args))
    rhs = set()
    alphabet = sorted(cnf.terminals)
    frontier = [""]
    while frontier:
        word = frontier.pop()
        if cyk_membership(cnf, word):
            rhs.add(word)
        if len(word) < max_len:
            frontier.extend(word + ch for ch in alphabet)
    return lhs, rhs, f"grammar pipeline machine vs CYK <= {max_len}"


def _cmd_verify(args) -> int:
    if args.construct == "joint":
        lhs, rhs, label = _verify_joint(args)
    elif args.construct == "grammar":
        lhs, rhs, label = _verify_grammar(args)
    else:
        lhs, rhs, label = _verify_product(args)
    only_machine = sorted(lhs - rhs)
    only_oracle = sorted(rhs - lhs)
    mismatches = len(only_machine) + len(only_oracle)
    payload = {
        "command": "verify",
        "check": label,
        "machine_words": len(lhs),
        "oracle_words": len(rhs),
        "mismatches": mismatches,
        "only_machine": only_machine[:10],
        "only_oracle": only_oracle[:10],
    }
    if mismatches == 0:
        lines = [f"{label}: language equality confirmed, 0 mismatches ({len(lhs)} words)"]
    else:
        lines = [f"{label}: {mismatches} mismatches"]
        for word in only_machine[:10]:
            lines.append(f"  machine only: {word!r}")
        for word in only_oracle[:10]:
            lines.append(f"  oracle only: {word!r}")
    _emit(payload, args, lines)
    return 0 if mismatches == 0 else 1


def _parse_cuts(raw: str, word: str) -> SegmentDecomposition:
    try:
        i, i_prime, j = (int(part) for part in raw.split(","))
    except ValueError:
        raise CliError(f"--cuts must be three comma-separated integers, got {raw!r}")
    if not 0 <= i <= i_prime <= j <= len(word):
        raise CliError(f"cuts {raw!r} out of order for a word of length {len(word)}")
    return SegmentDecomposition(word_len=len(word), i=i, i_prime=i_prime, j=j)


def _linkage_payload(report) -> dict:
    out = {
        "pair": list(report.pair),
        "holds": report.holds,
        "vacuous": report.vacuous,
        "examined": report.examined,
        "relevant": report.relevant,
        "oracle_calls": report.oracle_calls,
        "counterexample": None,
    }
    if report.counterexample is not None:
        ce = report.counterexample
        out["counterexample"] = {
            "cuts": list(ce.factorization.cuts),
            "parts": list(ce.parts),
            "pumped": ce.pumped,
        }
    return out


def _linkage_lines(report) -> list:
    pair = f"({report.pair[0]},{report.pair[1]})"
    if report.vacuous:
        return [f"linkage {pair}: holds vacuously (an empty segment)"]
    if report.holds:
        return [
            f"linkage {pair}: holds"
            f" ({report.examined} factorizations, {report.relevant} relevant)"
        ]
    ce = report.counterexample
    u, v, x, y, z = ce.parts
    return [
        f"linkage {pair}: FAILS",
        f"  cuts {tuple(ce.factorization.cuts)}:"
        f" u={u!r} v={v!r} x={x!r} y={y!r} z={z!r}",
        f"  pumped word stays in the language: {ce.pumped!r}",
    ]


def _cmd_linkage(args) -> int:
    if not args.blocks:
        raise CliError("linkage needs --blocks as the membership oracle")
    oracle_spec = _load_blocks(args.blocks)
    if args.side == "both":
        oracle = oracle_spec.in_intersection
        oracle_name = "intersection"
    else:
        oracle = oracle_spec.side(int(args.side)).contains
        oracle_name = f"side {args.side}"
    if args.word is not None:
        if not args.cuts:
            raise CliError("--word needs --cuts i,i',j")
        word = args.word
        decomposition = _parse_cuts(args.cuts, word)
    else:
        if args.n is None:
            raise CliError("provide --word with --cuts, or --n")
        source_spec = _load_blocks(args.witness) if args.witness else oracle_spec
        verdict = characterize(source_spec)
        if verdict.violation is None or verdict.violation.kind != CROSSING:
            raise CliError(
                "the witness spec has no crossing violation to derive segments from"
            )
        package = segments_and_linkages(source_spec, verdict.violation, args.n)
        word, decomposition = package.word, package.decomposition
    if not oracle(word):
        raise CliError(f"word {word!r} is not in the {oracle_name} oracle language")
    payload = {
        "command": "linkage",
        "word": word,
        "cuts": list(decomposition.cuts()),
        "segments": list(decomposition.parts(word)),
        "oracle": oracle_name,
    }
    lines = [
        f"word {word!r}, segments {decomposition.parts(word)}, oracle {oracle_name}"
    ]
    if args.hypotheses:
        report = check_crossing_hypotheses(
            oracle, word, decomposition, args.hypotheses, args.n or 1
        )
        payload["hypotheses"] = {
            "mode": report.mode,
            "n": report.n,
            "segment_lengths": list(report.segment_lengths),
            "sizes_ok": report.sizes_ok,
            "outer": _linkage_payload(report.outer_linkage),
            "inner": _linkage_payload(report.inner_linkage),
            "holds": report.holds,
            "note": report.note,
        }
        lines.append(
            f"size condition ({report.mode}, n={report.n}): "
            f"{'ok' if report.sizes_ok else 'FAILS'}"
            f" segment lengths {report.segment_lengths}"
        )
        lines.extend(_linkage_lines(report.outer_linkage))
        lines.extend(_linkage_lines(report.inner_linkage))
        if report.holds:
            lines.append(
                f"hypotheses of the non-CFL theorem verified at n={report.n}"
                f" ({report.note})"
            )
        else:
            lines.append("hypotheses NOT satisfied")
    else:
        pairs = {"1,3": [OUTER_PAIR], "2,4": [INNER_PAIR]}.get(
            args.segments, [OUTER_PAIR, INNER_PAIR]
        )
        payload["linkages"] = []
        for pair in pairs:
            report = check_linkage(oracle, word, decomposition, pair)
            payload["linkages"].append(_linkage_payload(report))
            lines.extend(_linkage_lines(report))
    _emit(payload, args, lines)
    return 0


def _cmd_corpus(args) -> int:
    if args.name:
        bundle = _bundle(args.name)
        payload = {
            "command": "corpus",
            "name": bundle.name,
            "kind": bundle.kind,
            "description": bundle.description,
            "machines": sorted(bundle.machines),
            "has_family": bundle.family is not None,
            "expected": {k: str(v) for k, v in sorted(bundle.expected.items())},
        }
        if bundle.joint is not None:
            payload["blocks"] = joint_to_json(bundle.joint)
        if bundle.grammar is not None:
            payload["grammar"] = cfg_to_json(bundle.grammar)
        lines = [
            f"{bundle.name} ({bundle.kind})",
            f"  {bundle.description}",
        ]
        if bundle.machines:
            lines.append(f"  machines: {', '.join(sorted(bundle.machines))}")
        for key, value in sorted(bundle.expected.items()):
            lines.append(f"  expected {key}: {value}")
        _emit(payload, args, lines)
    else:
        names = corpus.list_bundles()
        payload = {
            "command": "corpus",
            "bundles": [
                {
                    "name": name,
                    "kind": corpus.get(name).kind,
                    "description": corpus.get(name).description,
                }
                for name in names
            ],
            "aliases": dict(sorted(corpus.ALIASES.items())),
        }
        lines = []
        for name in names:
            bundle = corpus.get(name)
            lines.append(f"{name:<26} {bundle.kind:<12} {bundle.description}")
        _emit(payload, args, lines)
    if args.export:
        _export_corpus(args)
    return 0


def _export_corpus(args) -> None:
    os.makedirs(args.export, exist_ok=True)
    names = [corpus.ALIASES.get(args.name, args.name)] if args.name else corpus.list_bundles()
    written = []
    for name in names:
        bundle = corpus.get(name)
        for machine_name, machine in sorted(bundle.machines.items()):
            path = os.path.join(args.export, f"{name}--{machine_name}.pda.json")
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(pda_to_json(machine), fh, indent=2, sort_keys=True)
                fh.write("\n")
            written.append(path)
        if bundle.joint is not None:
            path = os.path.join(args.export, f"{name}.blocks.json")
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(joint_to_json(bundle.joint), fh, indent=2, sort_keys=True)
                fh.write("\n")
            written.append(path)
        if bundle.grammar is not None:
            path = os.path.join(args.export, f"{name}.cfg.json")
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(cfg_to_json(bundle.grammar), fh, indent=2, sort_keys=True)
                fh.write("\n")
            written.append(path)
    print(f"exported {len(written)} file(s) to {args.export}", file=sys.stderr)


def _cmd_report(args) -> int:
    first, second, bundle = _load_pair(args)
    if bundle is None or bundle.family is None:
        raise CliError("report needs a corpus bundle with a word family")
    sizes = _parse_sizes(args.sizes)
    samples = _pair_samples(first, second, bundle, sizes)
    rows = []
    for n, (word, measures) in zip(sizes, samples):
        rows.append(
            {
                "n": n,
                "word_len": len(word),
                "crossing_pairs": len(measures),
                "max_gap": max((m.gap for m in measures), default=None),
                "max_inner": max((m.inner for m in measures), default=None),
            }
        )
    try:
        regime = classify_family(samples).regime
        detail = None
    except InconclusiveRegime as exc:
        regime = "inconclusive"
        detail = str(exc)
    payload = {
        "command": "report",
        "bundle": bundle.name,
        "description": bundle.description,
        "sizes": sizes,
        "rows": rows,
        "regime": regime,
        "detail": detail,
        "expected": {k: str(v) for k, v in sorted(bundle.expected.items())},
    }
    lines = [
        f"family report: {bundle.name}",
        f"  {bundle.description}",
        "  n  |w|  crossings  max-gap  max-inner",
    ]
    for row in rows:
        gap = "-" if row["max_gap"] is None else row["max_gap"]
        inner = "-" if row["max_inner"] is None else row["max_inner"]
        lines.append(
            f"  {row['n']:>2} {row['word_len']:>4} {row['crossing_pairs']:>10}"
            f" {gap!s:>8} {inner!s:>10}"
        )
    lines.append(f"  inner-segment regime: {regime}" + (f" ({detail})" if detail else ""))
    if "regime" in bundle.expected:
        lines.append(f"  expected regime: {bundle.expected['regime']}")
    _emit(payload, args, lines)
    if args.svg:
        word = bundle.family(sizes[-1])
        analyses = analyze_pair(first, second, word)
        if not analyses:
            raise CliError("no analysis to draw at the largest size")
        _write_svg(
            args.svg,
            render_pair_analysis(analyses[0], title=f"{bundle.name} n={sizes[-1]}"),
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="islab",
        description="Workbench for crossing-arc geometry, block-counting "
        "intersections, product machines, and pump-sensitive linkage checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_machine_flags(p):
        p.add_argument("--pda", help="machine file (pda-v1 JSON)")
        p.add_argument("--corpus", help="corpus bundle name")
        p.add_argument("--machine", help="machine name within the bundle")

    def add_common(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument(
            "--max-expand",
            type=int,
            help="cap on explored configurations (memory guard)",
        )

    p = sub.add_parser("simulate", help="run one machine on one word")
    add_machine_flags(p)
    p.add_argument("--word", help="input word (may be empty)")
    add_common(p)
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("runs", help="enumerate accepting runs")
    add_machine_flags(p)
    p.add_argument("--word", help="input word")
    p.add_argument("--runs-cap", type=int, default=20)
    add_common(p)
    p.set_defaults(handler=_cmd_runs)

    p = sub.add_parser("crossings", help="cross-machine crossing analysis")
    p.add_argument("--pair", help="corpus bundle name, or FILE1,FILE2")
    p.add_argument("--word")
    p.add_argument("--n", type=int, help="family size (uses the bundle's words)")
    p.add_argument("--all-runs", action="store_true")
    p.add_argument("--runs-cap", type=int, default=20)
    p.add_argument("--svg", help="write an arc diagram here")
    add_common(p)
    p.set_defaults(handler=_cmd_crossings)

    p = sub.add_parser("classify", help="growth regime across family sizes")
    p.add_argument("--pair", help="corpus bundle name")
    p.add_argument("--sizes", default="1,2,3,4,5", help="comma-separated sizes")
    add_common(p)
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("characterize", help="block-spec intersection verdict")
    p.add_argument("--blocks", required=True, help="blocks-v1 file or corpus name")
    add_common(p)
    p.set_defaults(handler=_cmd_characterize)

    p = sub.add_parser("construct", help="emit a constructed machine as JSON")
    p.add_argument(
        "construct",
        choices=["joint", "displacement", "buffered", "grammar"],
        help="what to build",
    )
    p.add_argument("--blocks", help="blocks-v1 file or corpus name (joint)")
    p.add_argument("--grammar", help="cfg-v1 file or corpus name (grammar)")
    p.add_argument("--pair", help="corpus bundle or FILE1,FILE2 (products)")
    p.add_argument("--k", type=int, help="gap bound (displacement)")
    p.add_argument("--d", type=int, help="inner bound (buffered)")
    p.add_argument(
        "--max-len", type=int, default=8, help="exploration depth for fragments"
    )
    p.add_argument("--out", help="output file (default stdout)")
    add_common(p)
    p.set_defaults(handler=_cmd_construct)

    p = sub.add_parser("verify", help="differential check against an oracle")
    p.add_argument(
        "--construct",
        required=True,
        choices=["joint", "displacement", "buffered", "grammar"],
    )
    p.add_argument("--blocks")
    p.add_argument("--grammar")
    p.add_argument("--pair")
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--max-len", type=int, default=8)
    add_common(p)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("linkage", help="pump-sensitive linkage checks")
    p.add_argument(
        "--blocks", required=True, help="oracle spec: blocks-v1 file or corpus name"
    )
    p.add_argument(
        "--side",
        choices=["1", "2", "both"],
        default="both",
        help="use one side's language or the intersection (default)",
    )
    p.add_argument("--word", help="word to factor (needs --cuts)")
    p.add_argument("--cuts", help="segment cuts i,i',j (0-based offsets)")
    p.add_argument("--n", type=int, help="witness size (derives word and cuts)")
    p.add_argument(
        "--witness",
        help="spec whose crossing supplies word and cuts (default: --blocks)",
    )
    p.add_argument(
        "--segments",
        choices=["1,3", "2,4", "both"],
        default="both",
        help="which segment pair(s) to check",
    )
    p.add_argument(
        "--hypotheses",
        choices=[FOUR_LARGE, INNER_GROWING],
        help="run the full hypothesis report in this mode instead",
    )
    add_common(p)
    p.set_defaults(handler=_cmd_linkage)

    p = sub.add_parser("corpus", help="list or export built-in examples")
    p.add_argument("--name", help="show one bundle in detail")
    p.add_argument("--export", metavar="DIR", help="write artifacts as JSON files")
    add_common(p)
    p.set_defaults(handler=_cmd_corpus)

    p = sub.add_parser("report", help="classification table for a family")
    p.add_argument("--pair", required=True, help="corpus bundle name")
    p.add_argument("--sizes", default="1,2,3,4,5")
    p.add_argument("--svg", help="arc diagram of the largest size")
    add_common(p)
    p.set_defaults(handler=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LimitExceeded as exc:
        print(f"error: search limit exceeded: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
