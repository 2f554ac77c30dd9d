"""``mvthresh <validate|analyze|map|verify> FILE [flags]``.

Exit codes: 0 success, 1 validation or verification failure, 2 usage or
parse error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .boundary import enumerate_mlvs, enumerate_muvs
from .errors import DefinitionFileError, InvalidDistribution, MapTooLarge, MvThreshError, StateSpaceTooLarge
from .expr import METHODS, Perspective, build_pre, minimal_sop, shellable_disjoint_cover, weight_order
from .model import SystemSpec, ensure_within_cap, validate_spec
from .oracle import assert_equivalent, build_table
from .probability import ComponentDistribution, level_probabilities_failure, level_probabilities_success
from .render import render_level_map, render_structure_map
from .verify import run_verification, selector_for

log = logging.getLogger("mvthresh")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def load_definition(path: str | Path) -> tuple[SystemSpec, ComponentDistribution | None]:
    """Read a JSON system definition.

    Schema: ``{"components": [{"max_state", "weight", "probs"?}, ...],
    "thresholds": [T_0, ..., T_M], "sentinel"?, "labels"?}``. Numbers may be
    ints, decimals or ratio strings such as ``"1/3"``.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DefinitionFileError(f"{path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        line = text.splitlines()[exc.lineno - 1] if exc.lineno - 1 < len(text.splitlines()) else ""
        raise DefinitionFileError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {line.strip()}") from exc
    if not isinstance(doc, dict):
        raise DefinitionFileError(f"{path}: top level must be an object")
    for key in ("components", "thresholds"):
        if key not in doc:
            raise DefinitionFileError(f"{path}: missing required key {key!r}")
    comps = doc["components"]
    if not isinstance(comps, list) or not comps:
        raise DefinitionFileError(f"{path}: 'components' must be a non-empty list")
    try:
        max_states = [int(c["max_state"]) for c in comps]
        weights = [Fraction(str(c.get("weight", 1))) for c in comps]
        thresholds = [Fraction(str(t)) for t in doc["thresholds"]]
        spec = SystemSpec(tuple(max_states), tuple(weights), tuple(thresholds), doc.get("labels") or {})
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise DefinitionFileError(f"{path}: bad component or threshold entry: {exc}") from exc

    if "sentinel" in doc and Fraction(str(doc["sentinel"])) <= thresholds[-1]:
        log.warning("sentinel %s does not exceed T_M; ignored", doc["sentinel"])

    dist = None
    if all("probs" in c for c in comps):
        rows = []
        for k, (c, m) in enumerate(zip(comps, max_states)):
            if len(c["probs"]) != m + 1:
                raise DefinitionFileError(f"{path}: component {k + 1} needs {m + 1} probabilities")
            rows.append(tuple(p if isinstance(p, float) else Fraction(str(p)) for p in c["probs"]))
        try:
            dist = ComponentDistribution(tuple(rows))
        except InvalidDistribution as exc:
            raise DefinitionFileError(f"{path}: {exc}") from exc
    elif any("probs" in c for c in comps):
        raise DefinitionFileError(f"{path}: give 'probs' for every component or for none")
    return spec, dist


def _fmt(p) -> str:
    return str(p) if isinstance(p, Fraction) else f"{p:.12g}"


def _vec(v) -> str:
    return "(" + ",".join(map(str, v)) + ")"


def _require_valid(spec: SystemSpec) -> None:
    result = validate_spec(spec)
    if not result.ok:
        for v in result.violations:
            print(f"invalid: {type(v).__name__}: {v}")
        raise SystemExit(EXIT_FAIL)


def cmd_validate(args) -> int:
    spec, _ = load_definition(args.file)
    result = validate_spec(spec)
    if result.ok:
        print(f"ok: {spec.n} components, levels 0..{spec.top_level}, {spec.state_count} states")
        return EXIT_OK
    for v in result.violations:
        print(f"invalid: {type(v).__name__}: {v}")
    return EXIT_FAIL


def _distribution(args, spec, file_dist):
    if args.dist is None:
        return None
    if args.dist == "uniform":
        return ComponentDistribution.uniform(spec.max_states)
    if file_dist is None:
        raise DefinitionFileError(f"{args.file}: --dist file given but no 'probs' in the definition")
    return file_dist


def _report_level(spec, j, perspective, method, cap, ascii_) -> None:
    sop = minimal_sop(spec, j, perspective, cap)
    if perspective is Perspective.SUCCESS:
        vset = enumerate_muvs(spec, j, cap)
    else:
        vset = enumerate_mlvs(spec, j - 1, cap)
    print(f"== {perspective.value} at level {j}: {sop.lhs()} ==")
    orbits = ", ".join(f"{_vec(rep)} x{n}" for rep, n in vset.orbit_summary)
    print(f"{vset.kind}s ({len(vset)}): {orbits}")
    for v in vset.vectors:
        print(f"  {_vec(v)}")
    print(f"minimal SOP ({len(sop)} terms): {sop.render(ascii=ascii_)}")
    if method == "shelling":
        shell = shellable_disjoint_cover(sop, cap, weight_order(spec))
        pre, flag = shell.expression, str(shell.shellable).lower()
    else:
        pre, flag = build_pre(spec, j, perspective, method, cap), "n/a"
    print(f"PRE [{method}] ({len(pre)} terms, shellable={flag}): {pre.render(ascii=ascii_)}")
    verdict = assert_equivalent(pre, spec, selector_for(j, perspective), build_table(spec, cap))
    print(f"oracle: {'PASS' if verdict.equal else 'FAIL'}")


def cmd_analyze(args) -> int:
    spec, file_dist = load_definition(args.file)
    _require_valid(spec)
    cap = args.state_cap
    ensure_within_cap(spec.max_states, cap)
    M = spec.top_level
    levels = args.level or list(range(1, M + 1))
    perspectives = (
        [Perspective.SUCCESS, Perspective.FAILURE] if args.perspective == "both" else [Perspective(args.perspective)]
    )
    for perspective in perspectives:
        for j in levels:
            if not 1 <= j <= M:
                print(f"error: level {j} outside 1..{M}", file=sys.stderr)
                return EXIT_USAGE
            _report_level(spec, j, perspective, args.method, cap, args.ascii)
            print()

    dist = _distribution(args, spec, file_dist)
    if dist is not None:
        succ = level_probabilities_success(spec, dist, args.method, cap=cap)
        fail = level_probabilities_failure(spec, dist, args.method, cap=cap)
        print(f"== level probabilities [{args.method}] ==")
        for j in range(M + 1):
            print(
                f"P(S={j}) = {_fmt(succ.exactly[j])}   P(S>={j}) = {_fmt(succ.at_least[j])}"
                f"   P(S<={j}) = {_fmt(fail.at_most[j])}"
            )
        agree = succ.exactly == fail.exactly if dist.exact else None
        print(f"success/failure agree: {str(agree).lower() if agree is not None else 'within 1e-12'}")
        print(f"oracle: {'PASS' if succ.oracle_agrees and fail.oracle_agrees else 'FAIL'}")
    return EXIT_OK


def cmd_map(args) -> int:
    spec, _ = load_definition(args.file)
    _require_valid(spec)
    cap = args.state_cap
    overlays = tuple(args.overlay or ())
    if args.level is None:
        print(render_structure_map(spec, values=args.values, fmt=args.format, cap=cap), end="")
        return EXIT_OK
    perspective = args.perspective
    if perspective is None:
        perspective = "failure" if "mlv" in overlays and "muv" not in overlays else "success"
    lm = render_level_map(spec, args.level, Perspective(perspective), overlays=overlays, fmt=args.format, cap=cap)
    print(lm.text, end="")
    return EXIT_OK


def cmd_verify(args) -> int:
    spec, file_dist = load_definition(args.file)
    _require_valid(spec)
    results = run_verification(spec, file_dist, args.state_cap)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="JSON system definition")
    common.add_argument(
        "--state-cap", type=int, default=None, help="largest state space to enumerate (default 10^7 or $MVTHRESH_STATE_CAP)"
    )

    parser = argparse.ArgumentParser(prog="mvthresh", description="Analyze multi-state threshold systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check the threshold-system invariants")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", parents=[common], help="boundary vectors, SOPs, PREs and probabilities")
    p.add_argument("--level", type=int, action="append", help="level to analyze (repeatable; default all)")
    p.add_argument("--perspective", choices=["success", "failure", "both"], default="success")
    p.add_argument("--method", choices=METHODS, default="shelling")
    p.add_argument("--dist", choices=["uniform", "file"], default=None, help="add a probability report")
    p.add_argument("--ascii", action="store_true", help="join terms with ' + ' instead of ' ∨ '")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("map", parents=[common], help="render a multi-valued Karnaugh map")
    p.add_argument("--level", type=int, default=None, help="binary map of one level instead of the structure map")
    p.add_argument("--perspective", choices=["success", "failure", "instance"], default=None)
    p.add_argument("--overlay", choices=["muv", "mlv", "cover"], action="append")
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.add_argument("--values", choices=["level", "sum"], default="level")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("verify", parents=[common], help="run every oracle cross-check")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DefinitionFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StateSpaceTooLarge as exc:
        print(f"error: StateSpaceTooLarge: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (MapTooLarge, MvThreshError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
