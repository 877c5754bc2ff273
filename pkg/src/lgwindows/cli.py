"""Command-line front end.

Exit status: 0 success, 1 mathematical failure, 2 inconclusive (raise the
bound), 3 input/output or parse error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .brane import Brane, BraneError, check_brane
from .certificates import CertificateError
from .fixtures import FixtureError, fixture_names, load_fixture_labelled
from .homspace import BoundError, ConcentrationError
from .model import GaugedModel, ModelError, Space, validate
from .poly import PolyError
from .spherical import (SplittingError, Verdict, build_spherical, classify_spherical, split_W,
                        splitting_from_strings, twist_compare)
from .windows import (Window, WindowError, default_bound, ext, monodromy, transport, window_project)

OK, FAILED, INCONCLUSIVE, IO_ERROR = 0, 1, 2, 3


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    model: str | None = None
    fixture: str | None = None
    branes: list[str] = field(default_factory=list)
    window: int = 0
    side: str = "plus"
    bound: int | None = None
    format: str = "json"
    seed: int = 0
    split: str = "greedy"
    out: str | None = None

    def __post_init__(self):
        if self.bound is not None and self.bound < 0:
            raise InputError("bound must be nonnegative")
        Space.parse(self.side)


# ------------------------------------------------------------------ loading
def _load_model(cfg: RunConfig) -> tuple[GaugedModel, dict[str, Brane]]:
    if cfg.fixture:
        model, labelled = load_fixture_labelled(cfg.fixture)
        return model, dict(labelled)
    if not cfg.model:
        raise InputError("give --model or --fixture")
    return GaugedModel.load(cfg.model), {}


def _load_brane(ref: str, model: GaugedModel, known: dict[str, Brane]) -> Brane:
    if ref in known:
        return known[ref]
    path = Path(ref)
    if not path.exists():
        hint = f" (fixture branes: {', '.join(known)})" if known else ""
        raise InputError(f"no brane file or fixture label {ref!r}{hint}")
    return Brane.from_dict(json.loads(path.read_text()), model)


def _branes(cfg: RunConfig, model, known, count: int) -> list[Brane]:
    refs = cfg.branes or list(known)[:count]
    if len(refs) < count:
        raise InputError(f"{cfg.command} needs {count} brane(s)")
    return [_load_brane(r, model, known) for r in refs[:count]]


def _splitting(cfg: RunConfig, model):
    if cfg.split in ("greedy", "lowest"):
        return split_W(model)
    if cfg.split == "highest":
        return split_W(model, "highest")
    path = Path(cfg.split)
    if not path.exists():
        raise InputError(f"splitting must be greedy, highest or a JSON file, got {cfg.split!r}")
    return splitting_from_strings(model, json.loads(path.read_text()))


# ----------------------------------------------------------------- commands
def _validate(cfg, model, known):
    rep = validate(model)
    return (OK if rep.valid else FAILED), {"model": model.to_dict(), **rep.to_dict()}


def _check(cfg, model, known):
    refs = cfg.branes or list(known)
    out = []
    status = OK
    for r in refs:
        b = _load_brane(r, model, known)
        rep = check_brane(b)
        status = status if rep.valid else FAILED
        out.append({"brane": r, **rep.to_dict(), "report": "d² = W·Id" if rep.valid else "curvature check failed"})
    return status, {"branes": out}


def _ext(cfg, model, known):
    E, F = _branes(cfg, model, known, 2)
    side = Space.parse(cfg.side)
    E, F = E.with_space(side), F.with_space(side)
    table = ext(E, F, _bound(cfg, model))
    return (OK if table.stabilized else INCONCLUSIVE), {"ext": table.to_dict()}


def _project(cfg, model, known):
    (E,) = _branes(cfg, model, known, 1)
    res = window_project(E, Window.of(model, cfg.window), cfg.side, _bound(cfg, model))
    return OK, res.to_dict()


def _transport(cfg, model, known):
    (E,) = _branes(cfg, model, known, 1)
    return OK, {"brane": transport(E, Window.of(model, cfg.window), cfg.side).to_dict()}


def _monodromy(cfg, model, known):
    (E,) = _branes(cfg, model, known, 1)
    return OK, monodromy(E.with_space(Space.PLUS), cfg.window, _bound(cfg, model)).to_dict()


def _spherical(cfg, model, known):
    split = _splitting(cfg, model)
    S = build_spherical(split, cfg.window)
    rep = check_brane(S)
    return (OK if rep.valid else FAILED), {"splitting": split.to_dict(), "brane": S.to_dict(), **rep.to_dict()}


def _classify(cfg, model, known):
    res = classify_spherical(_splitting(cfg, model), cfg.window, _bound(cfg, model))
    return (INCONCLUSIVE if res.verdict is Verdict.INCONCLUSIVE else OK), res.to_dict()


def _twist_compare(cfg, model, known):
    (E,) = _branes(cfg, model, known, 1)
    res = twist_compare(E.with_space(Space.PLUS), cfg.window, _bound(cfg, model), seed=cfg.seed)
    return (OK if res.verify() else FAILED), res.to_dict()


def _fixtures(cfg, model, known):
    return OK, {"fixtures": fixture_names()}


COMMANDS = {
    "validate": _validate,
    "check": _check,
    "verify": _check,
    "ext": _ext,
    "project": _project,
    "transport": _transport,
    "monodromy": _monodromy,
    "spherical": _spherical,
    "classify": _classify,
    "twist-compare": _twist_compare,
    "fixtures": _fixtures,
}


def _bound(cfg, model):
    return cfg.bound if cfg.bound is not None else default_bound(model)


def run(cfg: RunConfig) -> tuple[int, dict]:
    report = {"command": cfg.command}
    try:
        if cfg.command == "fixtures":
            model, known = None, {}
        else:
            model, known = _load_model(cfg)
    except (OSError, json.JSONDecodeError, PolyError, ModelError, BraneError, FixtureError, InputError) as exc:
        return IO_ERROR, {**report, "status": "error", "error": str(exc)}
    try:
        status, body = COMMANDS[cfg.command](cfg, model, known)
    except (OSError, json.JSONDecodeError, InputError, PolyError) as exc:
        return IO_ERROR, {**report, "status": "error", "error": str(exc)}
    except BoundError as exc:
        return INCONCLUSIVE, {**report, "status": "inconclusive", "error": str(exc)}
    except (BraneError, CertificateError, WindowError, ConcentrationError, SplittingError, ModelError) as exc:
        return FAILED, {**report, "status": "failed", "error": str(exc)}
    names = {OK: "ok", FAILED: "failed", INCONCLUSIVE: "inconclusive"}
    return status, {**report, "status": names[status], **body}


# ------------------------------------------------------------------ output
def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            return pad + "[" + ", ".join(_scalar(v) for v in obj) + "]"
        return "\n".join(f"{pad}-\n" + render_text(v, indent + 1) for v in obj)
    return pad + _scalar(obj)


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--model", help="model JSON file")
    src.add_argument("--fixture", help="bundled fixture name")
    common.add_argument("--brane", action="append", default=[], dest="branes",
                        help="brane JSON file or fixture label (repeatable)")
    common.add_argument("--window", "--t", type=int, default=0, dest="window", help="window start t")
    common.add_argument("--side", default="plus", choices=["plus", "minus", "stack"])
    common.add_argument("--bound", type=int, default=None,
                        help="truncation bound (default from LGWINDOWS_BOUND or 2d + deg W)")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--format", choices=["json", "text"], default="json")
    fmt.add_argument("--json", action="store_const", const="json", dest="format")
    fmt.add_argument("--text", action="store_const", const="text", dest="format")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--split", default="greedy", help="greedy, highest, or a JSON file of components")
    common.add_argument("--out", help="also write the JSON report here")

    parser = argparse.ArgumentParser(prog="lgwindows", description="B-branes and windows on C*-quotients")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(**{k: v for k, v in vars(args).items()})
    except (InputError, ModelError) as exc:
        print(json.dumps({"command": args.command, "status": "error", "error": str(exc)}))
        return IO_ERROR
    status, report = run(cfg)
    text = json.dumps(report, indent=2, sort_keys=False, ensure_ascii=False)
    if cfg.out:
        try:
            Path(cfg.out).write_text(text + "\n")
        except OSError as exc:
            print(f"cannot write {cfg.out}: {exc}", file=sys.stderr)
            return IO_ERROR
    print(text if cfg.format == "json" else render_text(report))
    return status


if __name__ == "__main__":
    sys.exit(main())
