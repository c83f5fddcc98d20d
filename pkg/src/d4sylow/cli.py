"""Command-line entry point: `d4sylow <command> [options]`."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Sequence

from . import families as fam
from .chars import ClassFunction, midafi
from .checks import CHECK_NAMES, run_checks
from .classes import DEFAULT_STATE_LIMIT, cached_classes, check_size
from .gf import FieldSpec, factor_prime_power, field_make
from .rootsys import root_table
from .ugroup import GroupElement, as_ctx, conj, element, inv, mul

log = logging.getLogger("d4sylow")


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    p: int
    n: int = 1
    modulus: tuple[int, ...] | None = None
    format: str = "json"
    out: str | None = None
    allow_large: bool = False
    threads: int = 1
    options: dict = field(default_factory=dict)

    @property
    def q(self) -> int:
        return self.p**self.n

    def field(self) -> FieldSpec:
        try:
            return field_make(self.p, self.n, self.modulus)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def check_guards(self, killed=()):
        try:
            check_size(self.field(), as_ctx(killed), self.allow_large)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


# -- argument parsing ------------------------------------------------------------


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def _common(sp: argparse.ArgumentParser):
    sp.add_argument("--p", type=int, help="characteristic")
    sp.add_argument("--n", type=int, default=None, help="field degree (q = p^n)")
    sp.add_argument("--q", type=int, help="field size; factored into p^n")
    sp.add_argument("--modulus", type=_int_list, help="irreducible polynomial, constant term first")
    sp.add_argument("--format", choices=("json", "tsv"), default="json")
    sp.add_argument("--out", help="write output to this path instead of stdout")
    sp.add_argument("--allow-large", action="store_true", help="lift the default size guards")
    sp.add_argument("--threads", type=int, default=1, help="thread-count hint")
    sp.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="d4sylow", description="Sylow p-subgroups of D4(q): classes and characters")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("roots", help="positive roots with hooks, arms and legs")
    _common(sp)

    for name, help_ in (("mul", "product a*b in normal form"), ("conj", "conjugate b^-1 a b")):
        sp = sub.add_parser(name, help=help_)
        _common(sp)
        sp.add_argument("a", help="12 comma-separated field codes, or a JSON element {\"d\": ...}")
        sp.add_argument("b", help="second element, same format")
        if name == "conj":
            sp.add_argument("--left", action="store_true", help="use b a b^-1 instead")

    sp = sub.add_parser("classes", help="conjugacy classes of U or of U/N")
    _common(sp)
    sp.add_argument("--quotient", type=_int_list, default=[], help="killed roots N, comma-separated")

    sp = sub.add_parser("midafi", help="the midafi mu_{alpha,s}")
    _common(sp)
    sp.add_argument("--alpha", type=int, required=True)
    sp.add_argument("--s", type=int, default=1, help="field code of s (nonzero)")

    sp = sub.add_parser("family", help="one family of irreducible characters")
    _common(sp)
    sp.add_argument("--name", required=True, help=", ".join(fam.family_names()))

    sp = sub.add_parser("chartable", help="all irreducible characters")
    _common(sp)

    sp = sub.add_parser("verify", help="run the verification suite")
    _common(sp)
    sp.add_argument("--checks", type=lambda s: s.split(","), default=None,
                    help="subset of: " + ",".join(CHECK_NAMES))
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.q is not None:
        try:
            p, n = factor_prime_power(args.q)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if args.p is not None and args.p != p:
            raise ConfigError(f"--p {args.p} contradicts --q {args.q}")
        if args.n is not None and args.n != n:
            raise ConfigError(f"--n {args.n} contradicts --q {args.q}")
    else:
        p = 2 if args.p is None else args.p
        n = 1 if args.n is None else args.n
    if args.threads < 1:
        raise ConfigError("--threads must be positive")
    skip = {"command", "p", "n", "q", "modulus", "format", "out", "allow_large", "threads", "verbose"}
    return RunConfig(
        command=args.command,
        p=p,
        n=n,
        modulus=tuple(args.modulus) if args.modulus else None,
        format=args.format,
        out=args.out,
        allow_large=args.allow_large,
        threads=args.threads,
        options={k: v for k, v in vars(args).items() if k not in skip},
    )


# -- output helpers --------------------------------------------------------------


def _tsv(rows: list[list]) -> str:
    return "".join("\t".join(str(c) for c in row) + "\n" for row in rows)


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


def _parse_element(F: FieldSpec, text: str) -> GroupElement:
    text = text.strip()
    if text.startswith("{"):
        return GroupElement.from_json(F, json.loads(text))
    try:
        return element(F, [F.element(c) for c in _int_list(text)])
    except ValueError as exc:
        raise ConfigError(f"bad element {text!r}: {exc}") from exc


def _characters_json(q: int, chars: Sequence[ClassFunction]) -> dict:
    return {"q": q, "characters": [c.to_json() for c in chars]}


def _characters_tsv(chars: Sequence[ClassFunction]) -> str:
    counts: dict[tuple[str, int], int] = {}
    for c in chars:
        key = (c.family or "", c.degree)
        counts[key] = counts.get(key, 0) + 1
    rows = [["family", "degree", "count"]] + [[f, d, n] for (f, d), n in counts.items()]
    return _tsv(rows)


# -- commands --------------------------------------------------------------------


def cmd_roots(cfg: RunConfig) -> tuple[str, int]:
    rows = root_table()
    if cfg.format == "tsv":
        body = [["index", "coeffs", "height", "hook", "arm", "leg"]]
        for r in rows:
            body.append([r["index"], ",".join(map(str, r["coeffs"])), r["height"],
                         ",".join(map(str, r["hook"])), ",".join(map(str, r["arm"])), ",".join(map(str, r["leg"]))])
        return _tsv(body), 0
    return _dump({"roots": rows}), 0


def cmd_mul(cfg: RunConfig) -> tuple[str, int]:
    F = cfg.field()
    a = _parse_element(F, cfg.options["a"])
    b = _parse_element(F, cfg.options["b"])
    if cfg.command == "mul":
        g = mul(a, b)
    elif cfg.options.get("left"):
        g = conj(a, inv(b))
    else:
        g = conj(a, b)
    if cfg.format == "tsv":
        return _tsv([list(g.coords)]), 0
    return _dump({"field": F.to_json(), "result": g.to_json(), "word": repr(g)}), 0


def cmd_classes(cfg: RunConfig) -> tuple[str, int]:
    F = cfg.field()
    killed = cfg.options.get("quotient") or []
    try:
        ctx = as_ctx(killed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    cfg.check_guards(ctx.killed)
    cd = cached_classes(F, ctx, allow_large=cfg.allow_large)
    if cfg.format == "tsv":
        rows = [["class", "rep", "size"]]
        for i, (row, s) in enumerate(zip(cd.rep_coords, cd.sizes)):
            rows.append([i, ",".join(str(int(c)) for c in row), int(s)])
        return _tsv(rows), 0
    return _dump(cd.to_json()), 0


def cmd_midafi(cfg: RunConfig) -> tuple[str, int]:
    F = cfg.field()
    cfg.check_guards()
    alpha, s = cfg.options["alpha"], cfg.options["s"]
    if not 1 <= alpha <= 12:
        raise ConfigError("--alpha must be in 1..12")
    if not 0 < s < F.q:
        raise ConfigError(f"--s must be a nonzero field code below {F.q}")
    chi = midafi(alpha, F.element(s), cached_classes(F, allow_large=cfg.allow_large))
    if cfg.format == "tsv":
        return _characters_tsv([chi]), 0
    return _dump(_characters_json(F.q, [chi])), 0


def _table_guard(cfg: RunConfig):
    cfg.check_guards()
    if cfg.q > 3 and not cfg.allow_large:
        raise ConfigError(f"character constructions at q = {cfg.q} need --allow-large")


def cmd_family(cfg: RunConfig) -> tuple[str, int]:
    F = cfg.field()
    _table_guard(cfg)
    try:
        desc = fam.descriptor(cfg.options["name"])
    except KeyError as exc:
        raise ConfigError(str(exc)) from exc
    if not desc.applies(F.q):
        raise ConfigError(f"{desc.name} does not exist for q = {F.q}")
    rep = fam.build_family(desc, F, allow_large=cfg.allow_large)
    if cfg.format == "tsv":
        return _characters_tsv(rep.characters), 0 if rep.ok else 1
    out = _characters_json(F.q, rep.characters)
    out["report"] = {k: v for k, v in rep.summary().items() if k != "seconds"}
    return _dump(out), 0 if rep.ok else 1


def cmd_chartable(cfg: RunConfig) -> tuple[str, int]:
    F = cfg.field()
    _table_guard(cfg)
    rep = fam.build_all(F, allow_large=cfg.allow_large, strict=False)
    if cfg.format == "tsv":
        return _characters_tsv(rep.characters), 0 if rep.ok else 1
    out = _characters_json(F.q, rep.characters)
    out["checks"] = rep.checks
    return _dump(out), 0 if rep.ok else 1


def cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    F = cfg.field()
    if cfg.q > 3 and not cfg.allow_large:
        raise ConfigError(f"verification at q = {cfg.q} needs --allow-large")
    try:
        results = run_checks(F, cfg.options.get("checks"), allow_large=cfg.allow_large)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    passed = all(r.passed for r in results)
    if cfg.format == "tsv":
        rows = [["check", "pass", "expected", "computed", "provenance", "seconds"]]
        for r in results:
            rows.append([r.name, "PASS" if r.passed else "FAIL", json.dumps(r.to_json()["expected"]),
                         json.dumps(r.to_json()["computed"]), r.provenance, f"{r.seconds:.2f}"])
        return _tsv(rows), 0 if passed else 1
    report = {
        "q": cfg.q,
        "field": F.to_json(),
        "passed": passed,
        "checks": [r.to_json() for r in results],
    }
    return _dump(report), 0 if passed else 1


COMMANDS = {
    "roots": cmd_roots,
    "mul": cmd_mul,
    "conj": cmd_mul,
    "classes": cmd_classes,
    "midafi": cmd_midafi,
    "family": cmd_family,
    "chartable": cmd_chartable,
    "verify": cmd_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(message)s", stream=sys.stderr)
    try:
        cfg = config_from_args(args)
        log.info("running %s at q=%d (threads hint %d)", cfg.command, cfg.q, cfg.threads)
        t0 = time.perf_counter()
        text, status = COMMANDS[cfg.command](cfg)
        log.info("%s finished in %.2fs", cfg.command, time.perf_counter() - t0)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
