"""Command-line interface.

Exit codes: 0 success (at least one solution for solve/gsm/oracle-solve, an
empty diff for check), 1 no solution or a non-empty diff, 2 on any error.

Machine output (``--format machine``) is one JSON object per line:

* ``dualize``: ``{"rule": str, "tag": "source"|"folding"|"coherency"|"query"}``
* ``wfs``: ``{"literal": str, "value": "t"|"f"|"u"|"both"}`` per objective literal
* ``solve``/``oracle-solve``: ``{"context": [str, ...]}``
* ``gsm``: ``{"context": [str, ...], "model": [str, ...]}``
* ``check``: ``{"entry": str, "query": str|null, "problem": str}`` per discrepancy
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import TextIO

from .corpus import bundled_corpus, query_literals
from .crosscheck import compare_all
from .dual import dual_fold, dual_unfold
from .engine import format_context, run
from .errors import AbdualError, BugAssertionError
from .gsm import MODES, PARTIAL, gsm_solve
from .model import AbductiveFramework, Interpretation, scenario_rules
from .oracle import MAX_ABDUCIBLES, brute_force_solutions, minimal_sets, wfs
from .parser import parse_framework, parse_query

COMMANDS = ("dualize", "wfs", "solve", "gsm", "oracle-solve", "check")
NEEDS_QUERY = ("solve", "oracle-solve")


@dataclass
class RunConfig:
    command: str
    input: str | None
    query: str | None = None
    minimal: bool = False
    mode: str = PARTIAL
    debug_forest: bool = False
    format: str = "text"
    seed: int | None = None
    max_abducibles: int = MAX_ABDUCIBLES
    step_budget: int | None = None
    unfold: bool = False


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="abdual", description="Abductive queries over extended logic programs.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("input", nargs="?" if name == "check" else None, help="program file, or - for stdin")
        sp.add_argument("--query", "-q")
        sp.add_argument("--minimal", action="store_true", help="print only subset-minimal contexts")
        sp.add_argument("--mode", choices=MODES, default=PARTIAL)
        sp.add_argument("--debug-forest", action="store_true", help="dump the final forest to stderr")
        sp.add_argument("--format", choices=("text", "machine"), default="text")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--max-abducibles", type=int, default=MAX_ABDUCIBLES)
        sp.add_argument("--step-budget", type=int)
        sp.add_argument("--unfold", action="store_true", help="use the unfolded dual")
    return ap


def _config(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(**{k.replace("-", "_"): v for k, v in vars(ns).items()})
    if cfg.command in NEEDS_QUERY and cfg.query is None:
        raise AbdualError(f"{cfg.command} requires --query")
    return cfg


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(cfg: RunConfig) -> AbductiveFramework:
    text = _read(cfg.input)
    try:
        return parse_framework(text)
    except AbdualError as e:
        raise AbdualError(f"{cfg.input}:{e}") from e


def _emit(out: TextIO, cfg: RunConfig, text: str, record: dict) -> None:
    out.write((json.dumps(record, sort_keys=True) if cfg.format == "machine" else text) + "\n")


def _strs(xs) -> list[str]:
    return [str(x) for x in sorted(xs)]


def cmd_dualize(cfg: RunConfig, out: TextIO) -> int:
    fw = _load(cfg)
    dp = (dual_unfold if cfg.unfold else dual_fold)(fw.rules, fw.abducibles)
    for r, tag in zip(dp.rules, dp.provenance):
        _emit(out, cfg, str(r), {"rule": str(r), "tag": tag})
    return 0


def _wfs_lines(m: Interpretation, universe) -> list[tuple[str, str]]:
    return [(str(o), m.value(o)) for o in sorted(universe)]


def cmd_wfs(cfg: RunConfig, out: TextIO) -> int:
    fw = _load(cfg)
    p = scenario_rules(fw, ())
    m = wfs(p)
    universe = {o for o in p.objective_literals() if not o.reserved}
    rows = _wfs_lines(m, universe)
    if cfg.format == "machine":
        for lit, v in rows:
            _emit(out, cfg, "", {"literal": lit, "value": v})
        return 0
    groups = {"t": [], "f": [], "u": [], "both": []}
    for lit, v in rows:
        groups[v].append(lit)
    out.write("true: " + ", ".join(groups["t"]) + "\n")
    out.write("false: " + ", ".join(f"not {x}" for x in groups["f"]) + "\n")
    out.write("undefined: " + ", ".join(groups["u"]) + "\n")
    out.write("paraconsistent: " + (", ".join(groups["both"]) if groups["both"] else "no") + "\n")
    return 0


def _contexts(cfg: RunConfig, out: TextIO, contexts) -> int:
    for c in contexts:
        _emit(out, cfg, format_context(c), {"context": _strs(c)})
    return 0 if contexts else 1


def cmd_solve(cfg: RunConfig, out: TextIO) -> int:
    fw = _load(cfg)
    q = parse_query(cfg.query)
    result = run(fw, q, seed=cfg.seed, step_budget=cfg.step_budget, unfold=cfg.unfold)
    if cfg.debug_forest:
        forest = result.forest
        sys.stderr.write(forest.jsonl_dump() if cfg.format == "machine" else forest.text_dump())
    return _contexts(cfg, out, result.minimal() if cfg.minimal else result.answers)


def cmd_oracle_solve(cfg: RunConfig, out: TextIO) -> int:
    fw = _load(cfg)
    q = parse_query(cfg.query)
    sols = brute_force_solutions(fw, q, cfg.max_abducibles)
    sets = [s.abduced for s in sols if s.minimal or not cfg.minimal]
    return _contexts(cfg, out, sorted(sets, key=lambda c: (len(c), sorted(c))))


def cmd_gsm(cfg: RunConfig, out: TextIO) -> int:
    fw = _load(cfg)
    q = parse_query(cfg.query) if cfg.query is not None else None
    sols = gsm_solve(fw, q, cfg.mode, seed=cfg.seed, step_budget=cfg.step_budget)
    if cfg.minimal:
        keep = set(minimal_sets(s.context for s in sols))
        sols = [s for s in sols if s.context in keep]
    for s in sols:
        _emit(out, cfg, s.format(), {"context": _strs(s.context), "model": _strs(s.model.literals())})
    return 0 if sols else 1


def _check_one(name: str, fw: AbductiveFramework, queries, cfg: RunConfig, out: TextIO) -> int:
    if len(fw.abducibles) > cfg.max_abducibles:
        raise AbdualError(f"{name}: {len(fw.abducibles)} abducibles exceed --max-abducibles {cfg.max_abducibles}")
    bad = 0
    for d in compare_all(fw, queries, seed=cfg.seed):
        for line in d.lines():
            bad += 1
            _emit(out, cfg, f"{name}: {line}", {"entry": name, "query": None if d.query is None else str(d.query), "problem": line})
    return bad


def cmd_check(cfg: RunConfig, out: TextIO) -> int:
    """Compare engine and oracle on every literal query; without input, on the bundled corpus."""
    if cfg.input is None:
        entries = [(e.name, e.framework()) for e in bundled_corpus()]
    else:
        entries = [(cfg.input, _load(cfg))]
    bad = 0
    for name, fw in entries:
        queries = [parse_query(cfg.query)] if cfg.query else query_literals(fw)
        bad += _check_one(name, fw, queries, cfg, out)
    if cfg.format == "text":
        out.write(f"checked {len(entries)} framework(s): {'ok' if not bad else f'{bad} discrepancies'}\n")
    return 0 if not bad else 1


HANDLERS = {
    "dualize": cmd_dualize,
    "wfs": cmd_wfs,
    "solve": cmd_solve,
    "gsm": cmd_gsm,
    "oracle-solve": cmd_oracle_solve,
    "check": cmd_check,
}


def main(argv=None, out: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    try:
        cfg = _config(argv)
        return HANDLERS[cfg.command](cfg, out)
    except SystemExit as e:  # argparse usage errors
        return 2 if e.code else 0
    except (AbdualError, OSError, BugAssertionError, ValueError) as e:
        sys.stderr.write(f"abdual: error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
